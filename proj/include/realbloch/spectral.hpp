#pragma once

#include "realbloch/common.hpp"
#include "realbloch/lattice.hpp"

#include <functional>
#include <string>
#include <vector>

namespace realbloch {

/// Site-dependent N x N Hermitian matrix H(x).
struct HamiltonianFamily {
  int dimension = 0;
  std::function<CMatrix(const Point&)> evaluate;
  std::string name;
};

/// Per-site ascending eigenvalues and matching eigenvector columns.
struct SpectralData {
  std::vector<RVector> eigenvalues;
  std::vector<CMatrix> eigenvectors;
};

struct ProjectionFamily {
  std::vector<CMatrix> projector;
  int rank = 0;
};

/// Orthonormal columns spanning range P(x) at every site.
struct Frame {
  std::vector<CMatrix> columns;
  int rank() const { return columns.empty() ? 0 : static_cast<int>(columns.front().cols()); }

  /// Product-bundle frame: the first m standard basis vectors at every site.
  static Frame standard(int site_count, int m);
};

using BandSelection = std::vector<int>;

/// Throws Model when H deviates from H^dagger by more than 1e-12 (relative
/// Frobenius norm) at any site.
SpectralData eigensolve_family(const HamiltonianFamily& h, const InvolutiveLattice& lat);

/// Minimum over sites of the distance between the selected eigenvalues and
/// the rest of the spectrum. Negative when the groups interlace.
double gap_margin(const SpectralData& s, const BandSelection& bands);

/// Throws GapClosure (naming the site) when the boundary gap is below 1e-8.
ProjectionFamily select_projection(const SpectralData& s, const BandSelection& bands);

/// Deterministic gauge: Psi^dag E is positive Hermitian for a fixed N x m
/// matrix E whose leading block is positive definite. Where E projects poorly
/// (relative singular value below kReferenceGaugeFloor) the columns are
/// eigenvectors of P ordered by the index of their largest entry, with that
/// entry real positive.
Frame frame_from_projection(const ProjectionFamily& p);

inline constexpr double kDegeneracyTolerance = 1e-8;
inline constexpr double kReferenceGaugeFloor = 1e-3;

}  // namespace realbloch
