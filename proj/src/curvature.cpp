#include "realbloch/curvature.hpp"
#include "realbloch/linalg.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace realbloch {

CurvatureField plaquette_curvature(const LinkField& u, const InvolutiveLattice& lat) {
  CurvatureField out;
  out.rank = u.rank;
  out.f.resize(static_cast<std::size_t>(lat.plaquette_count()));
  linalg::parallel_for(out.f.size(), [&](std::size_t p) {
    CMatrix prod = CMatrix::Identity(u.rank, u.rank);
    for (const auto& s : lat.plaquette(static_cast<int>(p)).steps) prod = prod * step_overlap(u, s);
    try {
      out.f[p] = linalg::log_unitary(prod);
    } catch (const Error&) {
      std::ostringstream os;
      os << "plaquette " << p << " holonomy has an eigenvalue at -1; refine the lattice";
      throw Error(ErrorKind::BranchCut, os.str());
    }
  });
  return out;
}

double chern_weil_polynomial(const CMatrix& f, int k) {
  const auto m = static_cast<int>(f.rows());
  if (k < 1 || k > m) throw Error(ErrorKind::Domain, "Chern-Weil degree must satisfy 1 <= k <= m");
  const CMatrix x = f / (kTwoPi * kI);
  const auto e = linalg::elementary_symmetric(x);
  const cplx c = (k % 2 == 0 ? 1.0 : -1.0) * e[static_cast<std::size_t>(k - 1)];
  return c.real();
}

std::vector<double> chern_weil_density(const CurvatureField& curv, int k) {
  if (k < 1 || k > curv.rank) throw Error(ErrorKind::Domain, "Chern-Weil degree must satisfy 1 <= k <= m");
  std::vector<double> out;
  out.reserve(curv.f.size());
  for (const auto& f : curv.f) {
    // k = 1 directly from the trace: exact and cheaper than the eigenvalues.
    out.push_back(k == 1 ? (kI * f.trace() / kTwoPi).real() : chern_weil_polynomial(f, k));
  }
  return out;
}

ChernNumber chern_number(const CurvatureField& curv, const InvolutiveLattice& lat) {
  if (lat.dimension() != 2) throw Error(ErrorKind::Domain, "Chern numbers need a 2-dimensional base");
  const auto density = chern_weil_density(curv, 1);
  // Neumaier summation in plaquette order.
  double sum = 0.0, comp = 0.0;
  for (double v : density) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  ChernNumber c;
  c.value = sum + comp;
  c.integer = std::lround(c.value);
  c.quantization_residual = std::abs(c.value - static_cast<double>(c.integer));
  return c;
}

double curvature_parity_check(const CurvatureField& curv, const InvolutiveLattice& lat) {
  double res = 0.0;
  for (int p = 0; p < lat.plaquette_count(); ++p) {
    const auto img = lat.plaquette_image(p);
    const cplx image_trace = (img.reversed ? -1.0 : 1.0) *
                             curv.f.at(static_cast<std::size_t>(img.plaquette)).trace();
    res = std::max(res, std::abs(image_trace - std::conj(curv.f.at(static_cast<std::size_t>(p)).trace())));
  }
  return res;
}

CurvatureField gb_curvature_direct(const ProjectionFamily& p, const Frame& frame,
                                   const InvolutiveLattice& lat) {
  CurvatureField out;
  out.rank = p.rank;
  out.f.resize(static_cast<std::size_t>(lat.plaquette_count()));
  linalg::parallel_for(out.f.size(), [&](std::size_t q) {
    const LoopPath& loop = lat.plaquette(static_cast<int>(q));
    std::vector<int> corners;
    for (const auto& s : loop.steps) corners.push_back(lat.step_from(s));
    const CMatrix& p0 = p.projector.at(static_cast<std::size_t>(corners[0]));
    const CMatrix& psi = frame.columns.at(static_cast<std::size_t>(corners[0]));
    CMatrix acc = CMatrix::Zero(p0.rows(), p0.cols());
    for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
      const CMatrix d1 = p.projector.at(static_cast<std::size_t>(corners[i])) - p0;
      const CMatrix d2 = p.projector.at(static_cast<std::size_t>(corners[i + 1])) - p0;
      acc += 0.5 * (d1 * d2 - d2 * d1);
    }
    out.f[q] = psi.adjoint() * acc * psi;
  });
  return out;
}

CurvatureField gb_curvature_direct(const ProjectionFamily& p, const InvolutiveLattice& lat) {
  return gb_curvature_direct(p, frame_from_projection(p), lat);
}

void write_curvature_csv(std::ostream& os, const CurvatureField& curv, const InvolutiveLattice& lat) {
  const auto density = chern_weil_density(curv, 1);
  os << "x,y,berry_curvature\n" << std::setprecision(17);
  for (int p = 0; p < lat.plaquette_count(); ++p) {
    const Point c = lat.plaquette_center(p);
    os << c[0] << ',' << c[1] << ',' << density[static_cast<std::size_t>(p)] << '\n';
  }
}

}  // namespace realbloch
