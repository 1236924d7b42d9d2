#pragma once

#include "realbloch/common.hpp"
#include "realbloch/lattice.hpp"
#include "realbloch/spectral.hpp"

#include <functional>
#include <vector>

namespace realbloch {

/// Time-reversal data: J(x) per site and the parity of J(tau x) conj(J(x)).
/// Complex conjugation is entrywise conjugation in the computational basis.
struct SymmetryData {
  std::vector<CMatrix> j;
  int parity = +1;

  /// Samples J at every site. Does not check the constraints; see
  /// symmetry_data_residual.
  static SymmetryData sample(const std::function<CMatrix(const Point&)>& j_of,
                             const InvolutiveLattice& lat, int parity);
  bool is_constant(double tol = 0.0) const;
};

struct SymmetryResidual {
  double hamiltonian = 0.0;  // max |J^dag H(tau x) J - conj H(x)|
  double j_parity = 0.0;     // max |J(tau x) conj J(x) - eps|
  double j_unitarity = 0.0;  // max |J^dag J - 1|
  bool symmetric(double tol = 1e-10) const {
    return hamiltonian <= tol && j_parity <= tol && j_unitarity <= tol;
  }
};

/// m x m sewing matrices W(x) = Psi(tau x)^dag J(x) conj(Psi(x)).
struct SewingField {
  std::vector<CMatrix> w;
  double unitarity_residual = 0.0;
  double parity_residual = 0.0;  // max |W(tau x) conj W(x) - eps|
};

SymmetryResidual verify_hamiltonian_symmetry(const HamiltonianFamily& h, const SymmetryData& j,
                                             const InvolutiveLattice& lat);

/// Residuals of the J constraints alone (unitarity and parity).
SymmetryResidual symmetry_data_residual(const SymmetryData& j, const InvolutiveLattice& lat);

/// Max site residual of P(tau x) J(x) - J(x) conj(P(x)).
double verify_projection_symmetry(const ProjectionFamily& p, const SymmetryData& j,
                                  const InvolutiveLattice& lat);

/// Throws SymmetryInconsistency when W fails unitarity or the parity relation
/// by more than 1e-6.
SewingField sewing_matrix(const Frame& f, const SymmetryData& j, const InvolutiveLattice& lat);

/// Max over links of |P(x) conj(J(y)^dag - J(x)^dag)| / spacing. Zero certifies
/// that the Grassmann-Berry connection is equivariant.
double gb_equivariance_obstruction(const ProjectionFamily& p, const SymmetryData& j,
                                   const InvolutiveLattice& lat);

/// Block-diagonal Q = diag([[0,-1],[1,0]], ...) of size n (n even).
CMatrix quaternionic_q(int n);

inline constexpr double kSewingTolerance = 1e-6;

}  // namespace realbloch
