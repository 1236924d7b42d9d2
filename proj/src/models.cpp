#include "realbloch/models.hpp"
#include "realbloch/linalg.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

namespace realbloch {

Profile Profile::constant(double c) {
  std::ostringstream os;
  os << "constant(" << c << ")";
  return {[c](double) { return c; }, [](double) { return 0.0; }, os.str()};
}

Profile Profile::sine(double amplitude) {
  std::ostringstream os;
  os << "sin(" << amplitude << ")";
  return {[amplitude](double t) { return amplitude * std::sin(t); },
          [amplitude](double t) { return amplitude * std::cos(t); }, os.str()};
}

Profile Profile::cosine(double amplitude) {
  std::ostringstream os;
  os << "cos(" << amplitude << ")";
  return {[amplitude](double t) { return amplitude * std::cos(t); },
          [amplitude](double t) { return -amplitude * std::sin(t); }, os.str()};
}

double OscillatorParams::nu(const Point& x) const {
  const double fv = f.value(x[1]);
  return delta + fv * fv;
}

double OscillatorParams::phi(const Point& x) const { return std::sin(x[0]) * g.value(x[1]); }

Point OscillatorParams::grad_nu(const Point& x) const {
  return {0.0, 2.0 * f.value(x[1]) * f.derivative(x[1])};
}

Point OscillatorParams::grad_phi(const Point& x) const {
  return {std::cos(x[0]) * g.value(x[1]), std::sin(x[0]) * g.derivative(x[1])};
}

namespace {

// Normalized Hermite functions h_0..h_n at y. The recurrence runs on a
// rescaled value so that exp(-y^2/2) is applied only at the end.
std::vector<double> hermite_functions(int n, double y) {
  std::vector<double> h(static_cast<std::size_t>(n) + 1);
  double log_scale = -0.5 * y * y;
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25);
  std::vector<double> logs(h.size());
  h[0] = cur;
  logs[0] = log_scale;
  for (int k = 0; k < n; ++k) {
    const double next =
        std::sqrt(2.0 / (k + 1)) * y * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e100) {
      cur *= 1e-100;
      prev *= 1e-100;
      log_scale += 100.0 * std::log(10.0);
    }
    h[static_cast<std::size_t>(k) + 1] = cur;
    logs[static_cast<std::size_t>(k) + 1] = log_scale;
  }
  for (std::size_t k = 0; k < h.size(); ++k) {
    h[k] = h[k] == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(h[k])) + logs[k]), h[k]);
  }
  return h;
}

void require_oscillator_base(const InvolutiveLattice& lat) {
  if (lat.topology() != Topology::Torus2 || lat.involution_kind() != InvolutionKind::EtaFirst) {
    throw Error(ErrorKind::Domain,
                "the oscillator model needs a torus2 lattice with involution eta1");
  }
}

CMatrix pauli(int which) {
  CMatrix s = CMatrix::Zero(2, 2);
  switch (which) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

HamiltonianFamily two_band(std::string name, std::function<std::array<double, 3>(const Point&)> d) {
  HamiltonianFamily h;
  h.dimension = 2;
  h.name = std::move(name);
  const CMatrix sx = pauli(0), sy = pauli(1), sz = pauli(2);
  h.evaluate = [d = std::move(d), sx, sy, sz](const Point& x) {
    const auto v = d(x);
    return CMatrix(v[0] * sx + v[1] * sy + v[2] * sz);
  };
  return h;
}

std::array<double, 3> degree_k_vector(int k, const Point& x) {
  const double s = std::sin(x[0]);
  const cplx z = std::polar(std::pow(s, std::abs(k)), static_cast<double>(k) * x[1]);
  return {z.real(), z.imag(), std::cos(x[0])};
}

double solid_angle(const std::array<double, 3>& a, const std::array<double, 3>& b,
                   const std::array<double, 3>& c) {
  auto dot = [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  };
  const std::array<double, 3> bc{b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2],
                                 b[0] * c[1] - b[1] * c[0]};
  return 2.0 * std::atan2(dot(a, bc), 1.0 + dot(a, b) + dot(b, c) + dot(c, a));
}

std::array<double, 3> normalized(std::array<double, 3> v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (n == 0.0) throw Error(ErrorKind::Domain, "zero vector in degree computation");
  for (auto& c : v) c /= n;
  return v;
}

}  // namespace

cplx hermite_eigenfunction(int n, double r, double nu, double phi) {
  if (n < 0) throw Error(ErrorKind::Domain, "Hermite level must be nonnegative");
  if (!(nu > 0.0)) throw Error(ErrorKind::Domain, "oscillator frequency must be positive");
  const double h = hermite_functions(n, r * std::sqrt(nu)).back();
  return std::pow(nu, 0.25) * h * std::exp(-0.5 * kI * phi * r * r);
}

ModelPair model_oscillator(const OscillatorParams& p, const InvolutiveLattice& lat) {
  require_oscillator_base(lat);
  if (p.n < 0) throw Error(ErrorKind::Domain, "oscillator level must be nonnegative");
  if (!(p.delta > 0.0)) throw Error(ErrorKind::Domain, "delta must be positive");
  if (p.n_basis < p.n + 20) {
    std::ostringstream os;
    os << "truncation " << p.n_basis << " is too small for level " << p.n << "; use at least "
       << p.n + 20;
    throw Error(ErrorKind::Truncation, os.str());
  }
  const int nb = p.n_basis;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nb, nb);
  for (int k = 1; k < nb; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a2d = a2.transpose();
  Eigen::MatrixXd number_term = Eigen::MatrixXd::Zero(nb, nb);
  for (int k = 0; k < nb; ++k) number_term(k, k) = 2.0 * k + 1.0;
  const CMatrix q2 = (0.5 * (a2 + a2d + number_term)).cast<cplx>();
  const CMatrix p2 = (0.5 * (-a2 - a2d + number_term)).cast<cplx>();
  const CMatrix pq = kI * (a2d - a2).cast<cplx>();

  ModelPair out;
  out.h.dimension = nb;
  out.h.name = "oscillator";
  out.h.evaluate = [p, q2, p2, pq](const Point& x) {
    const double nu = p.nu(x);
    const double phi = p.phi(x);
    return CMatrix(0.5 * (p2 + phi * pq + (nu * nu + phi * phi) * q2));
  };
  out.j = SymmetryData::sample([nb](const Point&) { return CMatrix::Identity(nb, nb); }, lat, +1);

  std::mutex mu;
  double worst = 0.0;
  int worst_site = -1;
  const auto& h = out.h;
  linalg::parallel_for(static_cast<std::size_t>(lat.site_count()), [&](std::size_t s) {
    const Point& x = lat.site(static_cast<int>(s));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.evaluate(x), Eigen::EigenvaluesOnly);
    const double err = std::abs(es.eigenvalues()(p.n) - p.nu(x) * (p.n + 0.5));
    std::lock_guard<std::mutex> lock(mu);
    if (err > worst || (err == worst && static_cast<int>(s) < worst_site)) {
      worst = err;
      worst_site = static_cast<int>(s);
    }
  });
  if (worst > 1e-6) {
    std::ostringstream os;
    os << "level " << p.n << " eigenvalue is off by " << worst << " at site " << worst_site
       << "; increase n_basis";
    throw Error(ErrorKind::Truncation, os.str());
  }
  return out;
}

std::vector<CMatrix> oscillator_reference_frame(const OscillatorParams& p,
                                                const InvolutiveLattice& lat) {
  require_oscillator_base(lat);
  // Trapezoid rule on a wide window; the integrands are smooth and decay like
  // Gaussians, so the rule converges geometrically.
  const int nb = p.n_basis;
  const double half_width = std::sqrt(2.0 * nb + 1.0) + 12.0;
  const double dr = 0.01;
  const int points = static_cast<int>(std::ceil(2.0 * half_width / dr)) + 1;
  std::vector<double> r(static_cast<std::size_t>(points));
  Eigen::MatrixXd basis(nb, points);
  for (int i = 0; i < points; ++i) {
    r[static_cast<std::size_t>(i)] = -half_width + dr * i;
    const auto hk = hermite_functions(nb - 1, r[static_cast<std::size_t>(i)]);
    for (int k = 0; k < nb; ++k) basis(k, i) = hk[static_cast<std::size_t>(k)];
  }
  std::vector<CMatrix> out(static_cast<std::size_t>(lat.site_count()));
  linalg::parallel_for(out.size(), [&](std::size_t s) {
    const Point& x = lat.site(static_cast<int>(s));
    const double nu = p.nu(x), phi = p.phi(x);
    CVector psi(points);
    for (int i = 0; i < points; ++i) {
      psi(i) = hermite_eigenfunction(p.n, r[static_cast<std::size_t>(i)], nu, phi) * dr;
    }
    CMatrix c = basis.cast<cplx>() * psi;
    c /= c.norm();
    out[s] = std::move(c);
  });
  return out;
}

std::array<cplx, 2> oscillator_analytic_connection(const OscillatorParams& p, const Point& x) {
  const double nu = p.nu(x);
  if (!(nu > 0.0)) throw Error(ErrorKind::Domain, "oscillator frequency must be positive");
  const cplx c = -kI * (2.0 * p.n + 1.0) / (4.0 * nu);
  const Point dphi = p.grad_phi(x);
  return {c * dphi[0], c * dphi[1]};
}

cplx oscillator_analytic_curvature(const OscillatorParams& p, const Point& x) {
  const double nu = p.nu(x);
  if (!(nu > 0.0)) throw Error(ErrorKind::Domain, "oscillator frequency must be positive");
  return kI * (2.0 * p.n + 1.0) / (4.0 * nu * nu);
}

cplx oscillator_curvature_component(const OscillatorParams& p, const Point& x) {
  const Point dn = p.grad_nu(x), dp = p.grad_phi(x);
  return oscillator_analytic_curvature(p, x) * (dn[0] * dp[1] - dn[1] * dp[0]);
}

ProductConnectionSpec model_mobius_circle() {
  ProductConnectionSpec s;
  s.name = "mobius";
  s.form = [](const Point&, const Point& v) { return CMatrix::Constant(1, 1, -0.5 * kI * v[0]); };
  s.j = [](const Point& x) { return CMatrix::Constant(1, 1, std::exp(kI * x[0])); };
  return s;
}

ProductConnectionSpec model_trivial_circle() {
  ProductConnectionSpec s;
  s.name = "trivial";
  s.form = [](const Point&, const Point&) { return CMatrix::Zero(1, 1); };
  s.j = [](const Point&) { return CMatrix::Identity(1, 1); };
  return s;
}

ProductConnectionSpec model_flat_circle(double a) {
  ProductConnectionSpec s;
  s.name = "flat";
  s.form = [a](const Point&, const Point& v) { return CMatrix::Constant(1, 1, kI * a * v[0]); };
  s.j = [](const Point&) { return CMatrix::Identity(1, 1); };
  return s;
}

ProductConnectionSpec model_mobius_pullback_torus() {
  ProductConnectionSpec s = model_mobius_circle();
  s.name = "mobius_pullback_torus";
  return s;
}

ModelPair model_degree_k_sphere(int k, const InvolutiveLattice& lat) {
  if (k == 0) throw Error(ErrorKind::Domain, "degree must be nonzero");
  if (lat.topology() != Topology::Sphere2) {
    throw Error(ErrorKind::Domain, "the degree-k model needs a sphere2 lattice");
  }
  ModelPair out;
  out.h = two_band("degree_k_sphere", [k](const Point& x) { return degree_k_vector(k, x); });
  out.j = SymmetryData::sample([](const Point&) { return CMatrix::Identity(2, 2); }, lat, +1);
  return out;
}

ModelPair model_qwz(double m, const InvolutiveLattice& lat) {
  if (lat.topology() != Topology::Torus2) throw Error(ErrorKind::Domain, "qwz needs a torus2 lattice");
  const bool xi = lat.involution_kind() == InvolutionKind::Xi;
  if (lat.involution_kind() == InvolutionKind::EtaFirst) {
    throw Error(ErrorKind::Unsupported, "qwz is Real for eta, xi and trivial involutions only");
  }
  ModelPair out;
  out.h = two_band(xi ? "qwz_xi" : "qwz", [m, xi](const Point& x) {
    const double a = x[0];
    const double b = xi ? 2.0 * x[1] - x[0] : x[1];
    return std::array<double, 3>{std::sin(a), std::sin(b), m + std::cos(a) + std::cos(b)};
  });
  out.j = SymmetryData::sample([](const Point&) { return CMatrix::Identity(2, 2); }, lat, +1);
  return out;
}

double degree_oracle_value(const std::function<std::array<double, 3>(int site)>& map,
                           const InvolutiveLattice& lat) {
  double total = 0.0;
  for (const auto& pl : lat.plaquettes()) {
    std::vector<int> corners;
    for (const auto& s : pl.steps) corners.push_back(lat.step_from(s));
    const auto a = normalized(map(corners[0]));
    for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
      total += solid_angle(a, normalized(map(corners[i])), normalized(map(corners[i + 1])));
    }
  }
  return total / (4.0 * kPi);
}

long degree_oracle(int k, const InvolutiveLattice& lat) {
  if (lat.topology() != Topology::Sphere2) throw Error(ErrorKind::Domain, "degree oracle needs a sphere");
  const double domain = degree_oracle_value(
      [&](int s) {
        const auto c = lat.cartesian(s);
        return std::array<double, 3>{c[1], c[2], c[0]};
      },
      lat);
  const double image = degree_oracle_value([&](int s) { return degree_k_vector(k, lat.site(s)); }, lat);
  if (std::abs(std::abs(domain) - 1.0) > 1e-9 || std::abs(image - std::round(image)) > 1e-9) {
    std::ostringstream os;
    os << "solid angles do not sum to a multiple of 4 pi (domain " << domain << ", image " << image
       << "); refine the lattice";
    throw Error(ErrorKind::Domain, os.str());
  }
  return std::lround(image) * (domain > 0 ? 1 : -1);
}

HamiltonianFamily direct_sum(const HamiltonianFamily& a, const HamiltonianFamily& b) {
  HamiltonianFamily out;
  out.dimension = a.dimension + b.dimension;
  out.name = a.name + "+" + b.name;
  out.evaluate = [a, b](const Point& x) {
    return linalg::block_diagonal(a.evaluate(x), b.evaluate(x));
  };
  return out;
}

SymmetryData direct_sum(const SymmetryData& a, const SymmetryData& b) {
  if (a.parity != b.parity || a.j.size() != b.j.size()) {
    throw Error(ErrorKind::Domain, "direct sum needs matching parity and lattice");
  }
  SymmetryData out;
  out.parity = a.parity;
  for (std::size_t i = 0; i < a.j.size(); ++i) out.j.push_back(linalg::block_diagonal(a.j[i], b.j[i]));
  return out;
}

ProductConnectionSpec direct_sum(const ProductConnectionSpec& a, const ProductConnectionSpec& b) {
  if (a.parity != b.parity) throw Error(ErrorKind::Domain, "direct sum needs matching parity");
  ProductConnectionSpec out;
  out.name = a.name + "+" + b.name;
  out.rank = a.rank + b.rank;
  out.parity = a.parity;
  out.form = [a, b](const Point& x, const Point& v) {
    return linalg::block_diagonal(a.form(x, v), b.form(x, v));
  };
  out.j = [a, b](const Point& x) { return linalg::block_diagonal(a.j(x), b.j(x)); };
  return out;
}

ModelPair rotate_basis(const ModelPair& m, const Eigen::MatrixXd& o) {
  if (o.rows() != m.h.dimension || o.cols() != m.h.dimension ||
      (o * o.transpose() - Eigen::MatrixXd::Identity(o.rows(), o.cols())).norm() > 1e-12) {
    throw Error(ErrorKind::Domain, "basis rotation must be real orthogonal of matching size");
  }
  const CMatrix oc = o.cast<cplx>();
  ModelPair out;
  out.h.dimension = m.h.dimension;
  out.h.name = m.h.name;
  out.h.evaluate = [h = m.h, oc](const Point& x) {
    return CMatrix(oc * h.evaluate(x) * oc.transpose());
  };
  out.j.parity = m.j.parity;
  for (const auto& j : m.j.j) out.j.j.push_back(oc * j * oc.transpose());
  return out;
}

}  // namespace realbloch
