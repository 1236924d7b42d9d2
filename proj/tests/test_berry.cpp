#include "realbloch/berry.hpp"
#include "realbloch/linalg.hpp"
#include "realbloch/models.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace realbloch;

namespace {

Frame phase_frame(const InvolutiveLattice& lat, int winding) {
  Frame f;
  for (const auto& x : lat.sites()) {
    CMatrix c = CMatrix::Zero(2, 1);
    c(0, 0) = std::exp(kI * static_cast<double>(winding) * x[0]);
    f.columns.push_back(c);
  }
  return f;
}

std::vector<CMatrix> random_gauge(std::mt19937_64& rng, int sites, int m) {
  std::vector<CMatrix> g;
  for (int i = 0; i < sites; ++i) g.push_back(rbtest::random_unitary(rng, m));
  return g;
}

double max_diff(const LocalConnectionForm& a, const LocalConnectionForm& b) {
  double d = 0.0;
  for (std::size_t l = 0; l < a.a.size(); ++l) d = std::max(d, (a.a[l] - b.a[l]).norm());
  return d;
}

}  // namespace

TEST_SUITE("berry") {

TEST_CASE("constant frame has identity links and zero connection") {
  const auto lat = build_torus2(6, 6, InvolutionKind::Eta);
  const auto u = link_field(Frame::standard(lat.site_count(), 2), lat);
  for (const auto& m : u.u) CHECK((m - CMatrix::Identity(2, 2)).norm() == 0.0);
  const auto a = local_connection_from_links(u, lat);
  for (const auto& m : a.a) CHECK(m.norm() == 0.0);
}

TEST_CASE("phase frame e^{i theta} has connection i d theta") {
  const auto lat = build_circle(16, InvolutionKind::Trivial);
  const auto u = link_field(phase_frame(lat, 1), lat);
  const double h = 2.0 * kPi / 16.0;
  for (const auto& m : u.u) CHECK(std::abs(m(0, 0) - std::exp(kI * h)) < 1e-14);
  const auto a = local_connection_from_links(u, lat);
  for (const auto& m : a.a) CHECK(std::abs(m(0, 0) - kI) < 1e-12);
  CHECK(max_diff(local_connection_from_links(links_from_connection_form(a, lat), lat), a) < 1e-12);
}

TEST_CASE("gauge transformation law of links") {
  std::mt19937_64 rng(11);
  const auto lat = build_sphere2(6, 8);
  const auto m = model_degree_k_sphere(1, lat);
  const auto f = frame_from_projection(select_projection(eigensolve_family(m.h, lat), {0}));
  const auto u = link_field(f, lat);
  const auto g = random_gauge(rng, lat.site_count(), 1);
  Frame fg = f;
  for (std::size_t x = 0; x < fg.columns.size(); ++x) fg.columns[x] = fg.columns[x] * g[x];
  const auto direct = link_field(fg, lat);
  const auto transformed = gauge_transform(u, g, lat);
  for (int l = 0; l < lat.link_count(); ++l) {
    const auto& lk = lat.link(l);
    const CMatrix expected = g[static_cast<std::size_t>(lk.from)].adjoint() *
                             u.u[static_cast<std::size_t>(l)] * g[static_cast<std::size_t>(lk.to)];
    CHECK((direct.u[static_cast<std::size_t>(l)] - expected).norm() < 1e-12);
    CHECK((transformed.u[static_cast<std::size_t>(l)] - expected).norm() < 1e-12);
  }
  std::vector<CMatrix> bad(static_cast<std::size_t>(lat.site_count()), rbtest::scalar(2.0));
  CHECK(rbtest::error_kind([&] { gauge_transform(u, bad, lat); }) == ErrorKind::Domain);
}

TEST_CASE("logarithm of links") {
  const auto lat = build_circle(4, InvolutionKind::Trivial);
  LinkField u;
  u.rank = 1;
  u.u.assign(4, rbtest::scalar(std::exp(kI * 0.2)));
  const auto a = local_connection_from_links(u, lat);
  CHECK(std::abs(a.a[0](0, 0) - kI * 0.2 / (kPi / 2.0)) < 1e-14);
  u.u[2] = rbtest::scalar(-1.0);
  CHECK(rbtest::error_kind([&] { local_connection_from_links(u, lat); }) == ErrorKind::BranchCut);
}

TEST_CASE("singular overlaps are reported") {
  const auto lat = build_circle(4, InvolutionKind::Trivial);
  CMatrix e2 = CMatrix::Zero(2, 1);
  e2(1, 0) = 1.0;
  Frame g = phase_frame(lat, 0);
  g.columns[2] = e2;
  CHECK(rbtest::error_kind([&] { link_field(g, lat); }) == ErrorKind::SingularOverlap);
}

TEST_CASE("product connections are equivariant") {
  for (const auto& [spec, lat] :
       {std::pair{model_mobius_circle(), build_circle(32, InvolutionKind::Trivial)},
        std::pair{model_trivial_circle(), build_circle(32, InvolutionKind::Trivial)},
        std::pair{model_flat_circle(0.3), build_circle(32, InvolutionKind::Reflection)},
        std::pair{model_mobius_pullback_torus(), build_torus2(8, 8, InvolutionKind::Eta)}}) {
    const auto j = SymmetryData::sample(spec.j, lat, spec.parity);
    const auto w = sewing_matrix(Frame::standard(lat.site_count(), spec.rank), j, lat);
    const auto u = link_field_from_connection(spec, lat);
    CHECK(u.product_chart);
    CHECK(equivariance_residual(u, w, lat, spec.parity) < 1e-12);
  }
}

TEST_CASE("Hamiltonian frames are equivariant") {
  const auto lat = build_torus2(8, 8, InvolutionKind::Eta);
  const auto m = model_qwz(1.0, lat);
  const auto f = frame_from_projection(select_projection(eigensolve_family(m.h, lat), {0}));
  const auto u = link_field(f, lat);
  const auto w = sewing_matrix(f, m.j, lat);
  CHECK(equivariance_residual(u, w, lat, +1) < 1e-10);
}

TEST_CASE("a non-Real connection is not equivariant") {
  const auto lat = build_circle(16, InvolutionKind::Reflection);
  ProductConnectionSpec spec = model_flat_circle(0.3);
  // i a d theta + cos(theta) i d theta is not invariant under theta -> -theta.
  spec.form = [](const Point& x, const Point& v) {
    return rbtest::scalar(kI * (0.3 + std::sin(x[0])) * v[0]);
  };
  const auto j = SymmetryData::sample(spec.j, lat, +1);
  const auto w = sewing_matrix(Frame::standard(lat.site_count(), 1), j, lat);
  CHECK(equivariance_residual(link_field_from_connection(spec, lat), w, lat, +1) > 0.01);
}

TEST_CASE("averaging the connection") {
  const auto lat = build_circle(16, InvolutionKind::Trivial);
  // A = 0 with J = e^{i theta} averages to -(i/2) d theta.
  ProductConnectionSpec zero = model_mobius_circle();
  zero.form = [](const Point&, const Point&) { return rbtest::scalar(0.0); };
  const auto j = SymmetryData::sample(zero.j, lat, +1);
  const auto a0 = local_connection_from_links(link_field_from_connection(zero, lat), lat);
  const auto avg = average_connection(a0, j, lat);
  for (const auto& m : avg.a) CHECK(std::abs(m(0, 0) + 0.5 * kI) < 1e-12);
  // Idempotent.
  CHECK(max_diff(average_connection(avg, j, lat), avg) < 1e-12);
  // The involution-twisted map is involutive.
  CHECK(max_diff(bar_j_map(bar_j_map(a0, j, lat), j, lat), a0) < 1e-12);
  // Real connections are fixed points.
  for (const auto& [spec, l2] :
       {std::pair{model_mobius_circle(), build_circle(16, InvolutionKind::Trivial)},
        std::pair{model_flat_circle(0.37), build_circle(16, InvolutionKind::Reflection)},
        std::pair{model_mobius_pullback_torus(), build_torus2(6, 8, InvolutionKind::Eta)}}) {
    const auto js = SymmetryData::sample(spec.j, l2, spec.parity);
    const auto a = local_connection_from_links(link_field_from_connection(spec, l2), l2);
    CHECK(max_diff(average_connection(a, js, l2), a) < 1e-12);
  }
  // Only product charts can be averaged.
  LocalConnectionForm frame_form = a0;
  frame_form.product_chart = false;
  CHECK(rbtest::error_kind([&] { average_connection(frame_form, j, lat); }) == ErrorKind::Unsupported);
}

TEST_CASE("averaging an arbitrary connection makes it Real") {
  std::mt19937_64 rng(12);
  const auto lat = build_torus2(6, 6, InvolutionKind::Eta);
  const auto spec = model_mobius_pullback_torus();
  const auto j = SymmetryData::sample(spec.j, lat, +1);
  LocalConnectionForm a;
  a.rank = 1;
  a.product_chart = true;
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  for (int l = 0; l < lat.link_count(); ++l) a.a.push_back(rbtest::scalar(kI * d(rng)));
  const auto avg = average_connection(a, j, lat);
  CHECK(max_diff(bar_j_map(avg, j, lat), avg) < 1e-12);
  const auto w = sewing_matrix(Frame::standard(lat.site_count(), 1), j, lat);
  CHECK(equivariance_residual(links_from_connection_form(avg, lat), w, lat, +1) < 1e-12);
  CHECK(equivariance_residual(links_from_connection_form(a, lat), w, lat, +1) > 1e-3);
}

TEST_CASE("gauge alignment onto a reference frame") {
  std::mt19937_64 rng(13);
  const auto lat = build_circle(8, InvolutionKind::Trivial);
  const Frame f = phase_frame(lat, 1);
  Frame rotated = f;
  for (auto& c : rotated.columns) c = c * rbtest::random_unitary(rng, 1);
  const Frame aligned = align_gauge(rotated, f.columns);
  for (std::size_t x = 0; x < f.columns.size(); ++x) CHECK((aligned.columns[x] - f.columns[x]).norm() < 1e-12);
}

TEST_CASE("connection CSV") {
  const auto lat = build_circle(4, InvolutionKind::Trivial);
  const auto a = local_connection_from_links(link_field_from_connection(model_mobius_circle(), lat), lat);
  std::ostringstream os;
  write_connection_csv(os, a, lat);
  const std::string s = os.str();
  int lines = 0;
  for (char c : s) lines += c == '\n';
  CHECK(lines == 1 + lat.link_count());
  CHECK(s.find("-0.5") != std::string::npos);
}

}
