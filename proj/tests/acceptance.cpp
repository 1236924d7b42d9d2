// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "realbloch/classify.hpp"
#include "realbloch/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace realbloch;

namespace {

constexpr double kRoundoffFloor = 1e-12;

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

bool halves(double coarse, double fine) {
  return fine <= 0.5 * coarse || (coarse <= kRoundoffFloor && fine <= kRoundoffFloor);
}

double max_spacing(const InvolutiveLattice& lat) {
  double h = 0.0;
  for (const auto& l : lat.links()) h = std::max(h, l.spacing);
  return h;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<LoopPath> three_loops(const InvolutiveLattice& lat) {
  auto loops = representative_loops(lat);
  const LoopPath first = loops.front();
  if (loops.size() < 3) loops.push_back(reverse(first));
  if (loops.size() < 3) loops.push_back(concatenate(first, first));
  loops.resize(3);
  return loops;
}

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail << " [exception: " << e.what() << "]";
  }
  if (!c.ok) ++failures;
  std::printf("%s %2d %s (%.2f s)%s\n", c.ok ? "PASS" : "FAIL", id, name.c_str(), seconds_since(t0),
              c.detail.str().c_str());
  std::fflush(stdout);
}

ParametrizedCurve unit_circle() {
  return {[](double t) { return Point{2.0 * kPi * t}; }, [](double) { return Point{2.0 * kPi}; }};
}

cplx circle_holonomy(const ProductConnectionSpec& spec, const InvolutiveLattice& lat) {
  const auto u = link_field_from_connection(spec, lat);
  return wilson_loop(u, coordinate_loop(lat, 0, 0), lat).hol(0, 0);
}

BundleAnalysis analyze(const ModelPair& m, const InvolutiveLattice& lat, const BandSelection& b = {0}) {
  return analyze_hamiltonian(m.h, m.j, lat, b);
}

}  // namespace

int main() {
  criterion(1, "Mobius holonomy on circle-trivial(64)", [](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lat = build_circle(64, InvolutionKind::Trivial);
    const cplx lattice_hol = circle_holonomy(model_mobius_circle(), lat);
    const cplx continuum = continuum_holonomy(model_mobius_circle(), unit_circle(), 64).hol(0, 0);
    const auto cls = classify_real_bundle(model_mobius_circle(), lat);
    const double t = seconds_since(t0);
    c.detail << " |hol+1| = " << std::abs(lattice_hol + 1.0) << ", continuum |hol+1| = "
             << std::abs(continuum + 1.0) << ", sign " << cls.torsion_invariants.front();
    c.require(std::abs(lattice_hol + 1.0) <= 1e-9, "lattice holonomy");
    c.require(std::abs(continuum + 1.0) <= 1e-3, "continuum holonomy");
    c.require(cls.torsion_invariants == std::vector<int>{-1}, "sign");
    c.require(t < 1.0, "runtime");
  });

  criterion(2, "trivial Real circle bundle", [](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto lat = build_circle(64, InvolutionKind::Trivial);
    const cplx hol = circle_holonomy(model_trivial_circle(), lat);
    const auto cls = classify_real_bundle(model_trivial_circle(), lat);
    c.detail << " |hol-1| = " << std::abs(hol - 1.0);
    c.require(std::abs(hol - 1.0) <= 1e-9, "holonomy");
    c.require(cls.torsion_invariants == std::vector<int>{1}, "sign");
    c.require(seconds_since(t0) < 1.0, "runtime");
  });

  criterion(3, "degree-k sphere Chern numbers on sphere2(24,32)", [](Check& c) {
    const auto lat = build_sphere2(24, 32);
    for (int k : {-2, -1, 1, 2}) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto a = analyze(model_degree_k_sphere(k, lat), lat);
      const auto chern = chern_number(plaquette_curvature(a.links, lat), lat);
      const long oracle = degree_oracle(k, lat);
      const double t = seconds_since(t0);
      c.detail << " k=" << k << ": " << chern.value << " (oracle " << oracle << ", " << t << " s)";
      c.require(std::abs(chern.value - static_cast<double>(oracle)) <= 1e-9, "oracle match");
      c.require(oracle == k, "oracle equals k");
      c.require(t < 10.0, "runtime");
    }
  });

  criterion(4, "oscillator connection and curvature vs closed forms", [](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const OscillatorParams p;
    const auto coarse = oscillator_oracle(p, build_torus2(16, 16, InvolutionKind::EtaFirst));
    const auto fine = oscillator_oracle(p, build_torus2(32, 32, InvolutionKind::EtaFirst));
    c.detail << " connection " << coarse.connection_max_error << " -> " << fine.connection_max_error
             << ", curvature " << coarse.curvature_max_error << " -> " << fine.curvature_max_error;
    c.require(coarse.connection_max_error <= 5e-3, "connection at 16x16");
    c.require(coarse.curvature_max_error <= 5e-3, "curvature at 16x16");
    c.require(halves(coarse.connection_max_error, fine.connection_max_error), "connection halving");
    c.require(halves(coarse.curvature_max_error, fine.curvature_max_error), "curvature halving");
    c.require(seconds_since(t0) < 60.0, "runtime");
  });

  criterion(5, "oscillator fixed-loop signs", [](Check& c) {
    const auto lat = build_torus2(16, 16, InvolutionKind::EtaFirst);
    const auto r = classify_real_bundle(model_oscillator(OscillatorParams{}, lat).h,
                                        model_oscillator(OscillatorParams{}, lat).j, lat, {0});
    c.detail << " signs";
    for (int s : r.torsion_invariants) c.detail << ' ' << s;
    c.detail << ", reality residual " << r.diagnostics.at("max_reality_residual");
    c.require(r.torsion_invariants == std::vector<int>{1, 1}, "signs");
    c.require(r.diagnostics.at("max_reality_residual") <= 1e-2, "reality residual");
  });

  criterion(6, "Mobius pullback on torus2-eta", [](Check& c) {
    std::string previous;
    for (int n : {8, 16, 32}) {
      const auto lat = build_torus2(n, n, InvolutionKind::Eta);
      const auto r = classify_real_bundle(model_mobius_pullback_torus(), lat);
      c.detail << ' ' << n << "x" << n << ": " << r.verdict << " (c " << r.chern->value << ")";
      c.require(std::abs(r.chern->value) <= 1e-9, "Chern value");
      c.require(r.torsion_invariants == std::vector<int>{-1, -1}, "signs");
      c.require(r.verdict == "(Z2 ⊕ Z; 0; (-1,-1))", "verdict");
      c.require(previous.empty() || previous == r.verdict, "stability");
      previous = r.verdict;
    }
  });

  criterion(7, "equivariance of models with constant J", [](Check& c) {
    struct Case {
      std::string name;
      std::function<BundleAnalysis(int scale)> analyze;
      std::function<InvolutiveLattice(int scale)> lattice;
    };
    const OscillatorParams osc;
    std::vector<Case> cases = {
        {"trivial_circle", [](int s) { return analyze_product(model_trivial_circle(), build_circle(32 * s, InvolutionKind::Trivial)); },
         [](int s) { return build_circle(32 * s, InvolutionKind::Trivial); }},
        {"flat_circle", [](int s) { return analyze_product(model_flat_circle(0.3), build_circle(32 * s, InvolutionKind::Reflection)); },
         [](int s) { return build_circle(32 * s, InvolutionKind::Reflection); }},
        {"degree_1_sphere", [](int s) { const auto l = build_sphere2(12 * s, 16 * s); return analyze(model_degree_k_sphere(1, l), l); },
         [](int s) { return build_sphere2(12 * s, 16 * s); }},
        {"degree_2_sphere", [](int s) { const auto l = build_sphere2(12 * s, 16 * s); return analyze(model_degree_k_sphere(2, l), l); },
         [](int s) { return build_sphere2(12 * s, 16 * s); }},
        {"oscillator", [osc](int s) { const auto l = build_torus2(8 * s, 8 * s, InvolutionKind::EtaFirst); return analyze(model_oscillator(osc, l), l); },
         [](int s) { return build_torus2(8 * s, 8 * s, InvolutionKind::EtaFirst); }},
        {"qwz_eta", [](int s) { const auto l = build_torus2(8 * s, 8 * s, InvolutionKind::Eta); return analyze(model_qwz(1.0, l), l); },
         [](int s) { return build_torus2(8 * s, 8 * s, InvolutionKind::Eta); }},
        {"qwz_xi", [](int s) { const auto l = build_torus2(8 * s, 8 * s, InvolutionKind::Xi); return analyze(model_qwz(1.0, l), l); },
         [](int s) { return build_torus2(8 * s, 8 * s, InvolutionKind::Xi); }},
    };
    for (const auto& cs : cases) {
      double residual[2] = {0.0, 0.0};
      double worst_loop = 0.0;
      for (int s : {1, 2}) {
        const auto lat = cs.lattice(s);
        const auto a = cs.analyze(s);
        c.require(a.symmetry.is_constant(), cs.name + " J constant");
        const double h = max_spacing(lat);
        const double obstruction = a.projection ? a.diagnostics.at("gb_equivariance_obstruction") : 0.0;
        c.require(obstruction == 0.0, cs.name + " GB obstruction");
        residual[s - 1] = a.diagnostics.at("equivariance_residual");
        c.require(residual[s - 1] <= 1e-2 * h, cs.name + " residual bound");
        for (const auto& loop : three_loops(lat)) {
          const double r = holonomy_equivariance_check(a.links, a.sewing, loop, lat);
          worst_loop = std::max(worst_loop, r);
          c.require(r <= 1e-2 * h, cs.name + " loop residual");
        }
      }
      c.require(halves(residual[0], residual[1]), cs.name + " halving");
      c.detail << ' ' << cs.name << ": " << residual[0] << " -> " << residual[1] << ", loops " << worst_loop << ';';
    }
  });

  criterion(8, "curvature parity", [](Check& c) {
    const OscillatorParams osc;
    double sphere[2], oscillator[2];
    for (int s : {1, 2}) {
      const auto ls = build_sphere2(12 * s, 16 * s);
      const auto as = analyze(model_degree_k_sphere(1, ls), ls);
      sphere[s - 1] = curvature_parity_check(plaquette_curvature(as.links, ls), ls);
      c.require(sphere[s - 1] <= 1e-2 * max_spacing(ls), "sphere bound");
      const auto lo = build_torus2(16 * s, 16 * s, InvolutionKind::EtaFirst);
      const auto ao = analyze(model_oscillator(osc, lo), lo);
      oscillator[s - 1] = curvature_parity_check(plaquette_curvature(ao.links, lo), lo);
      c.require(oscillator[s - 1] <= 1e-2 * max_spacing(lo), "oscillator bound");
    }
    c.detail << " sphere " << sphere[0] << " -> " << sphere[1] << ", oscillator " << oscillator[0] << " -> "
             << oscillator[1];
    c.require(halves(sphere[0], sphere[1]), "sphere halving");
    c.require(halves(oscillator[0], oscillator[1]), "oscillator halving");
  });

  criterion(9, "gauge invariance under 100 random gauges", [](Check& c) {
    const auto lat = build_sphere2(24, 32);
    const auto a = analyze(model_degree_k_sphere(1, lat), lat);
    const double c0 = chern_number(plaquette_curvature(a.links, lat), lat).value;
    const auto loops = three_loops(lat);
    std::vector<cplx> traces;
    for (const auto& l : loops) traces.push_back(wilson_loop(a.links, l, lat).hol.trace());
    std::mt19937_64 rng(20261019);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    double worst_chern = 0.0, worst_trace = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<CMatrix> g;
      for (int x = 0; x < lat.site_count(); ++x) g.push_back(CMatrix::Constant(1, 1, std::exp(kI * angle(rng))));
      const auto u = gauge_transform(a.links, g, lat);
      worst_chern = std::max(worst_chern, std::abs(chern_number(plaquette_curvature(u, lat), lat).value - c0));
      for (std::size_t i = 0; i < loops.size(); ++i) {
        worst_trace = std::max(worst_trace, std::abs(wilson_loop(u, loops[i], lat).hol.trace() - traces[i]));
      }
    }
    c.detail << " max |dc| = " << worst_chern << ", max |d tr hol| = " << worst_trace;
    c.require(worst_chern <= 1e-12, "Chern number");
    c.require(worst_trace <= 1e-12, "Wilson traces");
  });

  criterion(10, "flat moduli", [](Check& c) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0, shift = 0.0, closest = 1e9;
    std::vector<double> as;
    for (int i = 0; i < 10; ++i) as.push_back(u(rng));
    for (double a : as) {
      worst = std::max(worst, std::abs(flat_moduli_holonomy(a) - std::exp(-2.0 * kPi * kI * a)));
      shift = std::max(shift, std::abs(flat_moduli_holonomy(a) - flat_moduli_holonomy(a + 1.0)));
    }
    for (std::size_t i = 0; i < as.size(); ++i)
      for (std::size_t j = i + 1; j < as.size(); ++j)
        closest = std::min(closest, std::abs(flat_moduli_holonomy(as[i]) - flat_moduli_holonomy(as[j])));
    // The lattice holonomy of the flat connection agrees as well.
    const auto lat = build_circle(32, InvolutionKind::Reflection);
    const double lattice = std::abs(circle_holonomy(model_flat_circle(as[0]), lat) - flat_moduli_holonomy(as[0]));
    c.detail << " max error " << worst << ", a vs a+1 " << shift << ", closest distinct pair " << closest
             << ", lattice " << lattice;
    c.require(worst <= 1e-12, "closed form");
    c.require(shift <= 1e-12, "periodicity");
    c.require(closest > 1e-9, "injectivity");
    c.require(lattice <= 1e-12, "lattice holonomy");
  });

  criterion(11, "averaging yields Real connections", [](Check& c) {
    const auto lat = build_circle(32, InvolutionKind::Trivial);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 0.3);
    ProductConnectionSpec zero = model_trivial_circle();
    double worst_fixed = 0.0, worst_unique = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const bool twisted = trial % 2 == 1;
      const double c0 = g(rng), c1 = g(rng), s1 = g(rng), c2 = g(rng);
      ProductConnectionSpec spec = twisted ? model_mobius_circle() : model_trivial_circle();
      spec.form = [=](const Point& x, const Point& v) {
        const double t = x[0];
        return CMatrix::Constant(1, 1, kI * (c0 + c1 * std::cos(t) + s1 * std::sin(t) + c2 * std::cos(2 * t)) * v[0]);
      };
      zero.j = spec.j;
      zero.form = [](const Point&, const Point&) { return CMatrix::Zero(1, 1).eval(); };
      const auto j = SymmetryData::sample(spec.j, lat, +1);
      const auto a = local_connection_from_links(link_field_from_connection(spec, lat), lat);
      const auto avg = average_connection(a, j, lat);
      const auto again = average_connection(avg, j, lat);
      const auto twisted_avg = bar_j_map(avg, j, lat);
      const auto base = average_connection(local_connection_from_links(link_field_from_connection(zero, lat), lat), j, lat);
      for (std::size_t l = 0; l < avg.a.size(); ++l) {
        worst_fixed = std::max({worst_fixed, (again.a[l] - avg.a[l]).norm(), (twisted_avg.a[l] - avg.a[l]).norm()});
        worst_unique = std::max(worst_unique, (avg.a[l] - base.a[l]).norm());
      }
    }
    c.detail << " fixed-point residual " << worst_fixed << ", deviation from the J-term " << worst_unique;
    c.require(worst_fixed <= 1e-10, "fixed point");
    c.require(worst_unique <= 1e-10, "uniqueness");
  });

  criterion(12, "Whitney additivity", [](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto circle = build_circle(64, InvolutionKind::Trivial);
    const auto mob = classify_real_bundle(model_mobius_circle(), circle);
    const auto tri = classify_real_bundle(model_trivial_circle(), circle);
    const auto sum = classify_real_bundle(direct_sum(model_mobius_circle(), model_trivial_circle()), circle);
    const auto twice = classify_real_bundle(direct_sum(model_mobius_circle(), model_mobius_circle()), circle);
    c.require(sum.torsion_invariants.front() == mob.torsion_invariants.front() * tri.torsion_invariants.front(),
              "mobius + trivial");
    c.require(twice.torsion_invariants.front() == 1, "mobius + mobius");
    const auto lat = build_sphere2(24, 32);
    const auto a = model_degree_k_sphere(1, lat), b = model_degree_k_sphere(2, lat);
    const auto ca = classify_real_bundle(a.h, a.j, lat, {0});
    const auto cb = classify_real_bundle(b.h, b.j, lat, {0});
    const auto cs = classify_real_bundle(direct_sum(a.h, b.h), direct_sum(a.j, b.j), lat, {0, 1});
    c.detail << " signs " << sum.torsion_invariants.front() << ", " << twice.torsion_invariants.front()
             << "; chern " << ca.free_invariants.front() << " + " << cb.free_invariants.front() << " = "
             << cs.free_invariants.front() << " (value " << cs.chern->value << ")";
    c.require(cs.free_invariants.front() == ca.free_invariants.front() + cb.free_invariants.front(), "sphere sum");
    c.require(cs.chern->quantized(), "quantized");
    c.require(seconds_since(t0) < 10.0, "runtime");
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
