#pragma once

#include "realbloch/berry.hpp"
#include "realbloch/common.hpp"
#include "realbloch/lattice.hpp"
#include "realbloch/spectral.hpp"

#include <iosfwd>
#include <vector>

namespace realbloch {

/// Total curvature flux through each plaquette, an anti-Hermitian m x m matrix.
struct CurvatureField {
  std::vector<CMatrix> f;
  int rank = 0;
};

struct ChernNumber {
  double value = 0.0;
  long integer = 0;
  double quantization_residual = 0.0;  // |value - integer|
  bool quantized() const { return quantization_residual <= 1e-6; }
};

/// F_p = log of the ordered product of link overlaps around p.
/// Throws BranchCut naming the plaquette when the product has an eigenvalue at -1.
CurvatureField plaquette_curvature(const LinkField& u, const InvolutiveLattice& lat);

/// C_k(F): coefficient of t^{m-k} in det(t - F / (2 pi i)). C_1 = (i / 2 pi) tr F.
/// Throws Domain when k > m or k < 1.
std::vector<double> chern_weil_density(const CurvatureField& curv, int k);
double chern_weil_polynomial(const CMatrix& f, int k);

/// Sum of C_1 over plaquettes (fixed order, compensated summation).
ChernNumber chern_number(const CurvatureField& curv, const InvolutiveLattice& lat);

/// Max over p of |tr F at tau(p) (image orientation) - conj(tr F_p)|.
double curvature_parity_check(const CurvatureField& curv, const InvolutiveLattice& lat);

/// Curvature from finite differences of P around each plaquette, fan
/// triangulated from the base corner and compressed with the frame there:
/// sum over triangles of Psi^dag [dP_1, dP_2] Psi / 2.
CurvatureField gb_curvature_direct(const ProjectionFamily& p, const Frame& frame,
                                   const InvolutiveLattice& lat);
CurvatureField gb_curvature_direct(const ProjectionFamily& p, const InvolutiveLattice& lat);

/// Plaquette center coordinates and C_1 per plaquette.
void write_curvature_csv(std::ostream& os, const CurvatureField& curv, const InvolutiveLattice& lat);

}  // namespace realbloch
