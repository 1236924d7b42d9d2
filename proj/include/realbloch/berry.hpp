#pragma once

#include "realbloch/common.hpp"
#include "realbloch/lattice.hpp"
#include "realbloch/spectral.hpp"
#include "realbloch/symmetry.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace realbloch {

/// Discrete connection: one m x m unitary per stored link, the unitarized
/// overlap Psi(from)^dag Psi(to). The reverse direction is its adjoint.
struct LinkField {
  std::vector<CMatrix> u;
  int rank = 0;
  /// Frames are the standard basis of a product bundle.
  bool product_chart = false;
};

/// A_l = log(U_l) / spacing_l per stored link (anti-Hermitian).
struct LocalConnectionForm {
  std::vector<CMatrix> a;
  int rank = 0;
  bool product_chart = false;
};

/// Closed-form connection on a product bundle X x U(m): the local 1-form
/// evaluated on a tangent vector, plus the J map of the Real structure.
struct ProductConnectionSpec {
  std::string name;
  int rank = 1;
  std::function<CMatrix(const Point& x, const Point& velocity)> form;
  std::function<CMatrix(const Point& x)> j;
  int parity = +1;
};

/// Overlap carried by a step: U for forward traversal, U^dag otherwise.
CMatrix step_overlap(const LinkField& u, const Step& s);

/// Throws SingularOverlap naming the link when the overlap is near singular.
LinkField link_field(const Frame& f, const InvolutiveLattice& lat);

/// Links of a product connection: the adjoint of the path-ordered transport
/// exp(-int A) along each link, integrated with `substeps` midpoint steps.
LinkField link_field_from_connection(const ProductConnectionSpec& spec,
                                     const InvolutiveLattice& lat, int substeps = 8);

/// Throws BranchCut when a link has an eigenvalue at -1.
LocalConnectionForm local_connection_from_links(const LinkField& u, const InvolutiveLattice& lat);

/// Inverse of local_connection_from_links: U_l = exp(spacing_l A_l).
LinkField links_from_connection_form(const LocalConnectionForm& a, const InvolutiveLattice& lat);

/// Max over links of |W(x)^dag U_{tau(link)} W(y) - conj(U_link)|.
double equivariance_residual(const LinkField& u, const SewingField& w,
                             const InvolutiveLattice& lat, int parity);

/// The involution-twisted form A^J on each link x -> y:
///   conj( J(x)^dag A(tau x -> tau y) J(x) + log(J(x)^dag J(y)) / h ).
LocalConnectionForm bar_j_map(const LocalConnectionForm& a, const SymmetryData& j,
                              const InvolutiveLattice& lat);

/// (A + A^J) / 2. Only defined on a product chart; throws Unsupported otherwise.
LocalConnectionForm average_connection(const LocalConnectionForm& a, const SymmetryData& j,
                                       const InvolutiveLattice& lat);

/// U_l -> g(from)^dag U_l g(to). Throws Domain if some g is not unitary.
LinkField gauge_transform(const LinkField& u, const std::vector<CMatrix>& g,
                          const InvolutiveLattice& lat);

/// Rotates each frame onto a reference frame: Psi -> Psi polar(Psi^dag Ref).
Frame align_gauge(const Frame& f, const std::vector<CMatrix>& reference);

/// site coords, link direction, then (re, im) of every entry of A row-major.
void write_connection_csv(std::ostream& os, const LocalConnectionForm& a,
                          const InvolutiveLattice& lat);

inline constexpr double kMinOverlapSigma = 1e-6;

}  // namespace realbloch
