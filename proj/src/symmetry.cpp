#include "realbloch/symmetry.hpp"
#include "realbloch/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace realbloch {

SymmetryData SymmetryData::sample(const std::function<CMatrix(const Point&)>& j_of,
                                  const InvolutiveLattice& lat, int parity) {
  if (parity != 1 && parity != -1) throw Error(ErrorKind::Domain, "parity must be +1 or -1");
  SymmetryData s;
  s.parity = parity;
  s.j.reserve(static_cast<std::size_t>(lat.site_count()));
  for (const auto& x : lat.sites()) s.j.push_back(j_of(x));
  return s;
}

bool SymmetryData::is_constant(double tol) const {
  for (const auto& m : j) {
    if ((m - j.front()).norm() > tol) return false;
  }
  return true;
}

SymmetryResidual symmetry_data_residual(const SymmetryData& j, const InvolutiveLattice& lat) {
  SymmetryResidual r;
  for (int x = 0; x < lat.site_count(); ++x) {
    const CMatrix& jx = j.j.at(static_cast<std::size_t>(x));
    const CMatrix& jt = j.j.at(static_cast<std::size_t>(lat.involution(x)));
    const auto n = jx.rows();
    r.j_unitarity = std::max(r.j_unitarity, linalg::unitarity_residual(jx));
    r.j_parity = std::max(
        r.j_parity, (jt * jx.conjugate() - double(j.parity) * CMatrix::Identity(n, n)).norm());
  }
  return r;
}

SymmetryResidual verify_hamiltonian_symmetry(const HamiltonianFamily& h, const SymmetryData& j,
                                             const InvolutiveLattice& lat) {
  SymmetryResidual r = symmetry_data_residual(j, lat);
  for (int x = 0; x < lat.site_count(); ++x) {
    const CMatrix& jx = j.j.at(static_cast<std::size_t>(x));
    if (jx.rows() != h.dimension) throw Error(ErrorKind::Domain, "J and H dimensions differ");
    const CMatrix hx = h.evaluate(lat.site(x));
    const CMatrix ht = h.evaluate(lat.site(lat.involution(x)));
    r.hamiltonian = std::max(r.hamiltonian, (jx.adjoint() * ht * jx - hx.conjugate()).norm());
  }
  return r;
}

double verify_projection_symmetry(const ProjectionFamily& p, const SymmetryData& j,
                                  const InvolutiveLattice& lat) {
  double res = 0.0;
  for (int x = 0; x < lat.site_count(); ++x) {
    const CMatrix& jx = j.j.at(static_cast<std::size_t>(x));
    const CMatrix& px = p.projector.at(static_cast<std::size_t>(x));
    const CMatrix& pt = p.projector.at(static_cast<std::size_t>(lat.involution(x)));
    if (jx.rows() != px.rows()) throw Error(ErrorKind::Domain, "J and P dimensions differ");
    res = std::max(res, (pt * jx - jx * px.conjugate()).norm());
  }
  return res;
}

SewingField sewing_matrix(const Frame& f, const SymmetryData& j, const InvolutiveLattice& lat) {
  SewingField s;
  const auto n = static_cast<std::size_t>(lat.site_count());
  s.w.resize(n);
  for (int x = 0; x < lat.site_count(); ++x) {
    const CMatrix& psi = f.columns.at(static_cast<std::size_t>(x));
    const CMatrix& psi_t = f.columns.at(static_cast<std::size_t>(lat.involution(x)));
    s.w[static_cast<std::size_t>(x)] = psi_t.adjoint() * j.j.at(static_cast<std::size_t>(x)) * psi.conjugate();
  }
  const int m = f.rank();
  for (int x = 0; x < lat.site_count(); ++x) {
    const CMatrix& w = s.w[static_cast<std::size_t>(x)];
    const CMatrix& wt = s.w[static_cast<std::size_t>(lat.involution(x))];
    s.unitarity_residual = std::max(s.unitarity_residual, linalg::unitarity_residual(w));
    s.parity_residual = std::max(
        s.parity_residual, (wt * w.conjugate() - double(j.parity) * CMatrix::Identity(m, m)).norm());
  }
  if (s.unitarity_residual > kSewingTolerance || s.parity_residual > kSewingTolerance) {
    std::ostringstream os;
    os << "sewing matrix is inconsistent with the symmetry (unitarity residual "
       << s.unitarity_residual << ", parity residual " << s.parity_residual << ")";
    if (j.parity == -1 && m % 2 == 1) os << "; odd time reversal needs an even-rank band group";
    throw Error(ErrorKind::SymmetryInconsistency, os.str());
  }
  return s;
}

double gb_equivariance_obstruction(const ProjectionFamily& p, const SymmetryData& j,
                                   const InvolutiveLattice& lat) {
  double res = 0.0;
  for (const auto& lk : lat.links()) {
    const CMatrix& px = p.projector.at(static_cast<std::size_t>(lk.from));
    const CMatrix diff = (j.j.at(static_cast<std::size_t>(lk.to)).adjoint() -
                          j.j.at(static_cast<std::size_t>(lk.from)).adjoint())
                             .conjugate();
    res = std::max(res, (px * diff).norm() / lk.spacing);
  }
  return res;
}

CMatrix quaternionic_q(int n) {
  if (n <= 0 || n % 2 != 0) throw Error(ErrorKind::Domain, "Q needs an even positive size");
  CMatrix q = CMatrix::Zero(n, n);
  for (int k = 0; k < n; k += 2) {
    q(k, k + 1) = -1.0;
    q(k + 1, k) = 1.0;
  }
  return q;
}

}  // namespace realbloch
