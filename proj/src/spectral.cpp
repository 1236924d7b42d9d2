#include "realbloch/spectral.hpp"
#include "realbloch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace realbloch {

Frame Frame::standard(int site_count, int m) {
  Frame f;
  f.columns.assign(static_cast<std::size_t>(site_count), CMatrix::Identity(m, m));
  return f;
}

SpectralData eigensolve_family(const HamiltonianFamily& h, const InvolutiveLattice& lat) {
  if (h.dimension < 1 || !h.evaluate) throw Error(ErrorKind::Model, "Hamiltonian family is empty");
  const auto n = static_cast<std::size_t>(lat.site_count());
  SpectralData out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n);
  linalg::parallel_for(n, [&](std::size_t i) {
    const CMatrix m = h.evaluate(lat.site(static_cast<int>(i)));
    if (m.rows() != h.dimension || m.cols() != h.dimension) {
      throw Error(ErrorKind::Model, "Hamiltonian evaluator returned a matrix of the wrong size");
    }
    const double scale = std::max(m.norm(), 1.0);
    if ((m - m.adjoint()).norm() > 1e-12 * scale) {
      std::ostringstream os;
      os << "Hamiltonian '" << h.name << "' is not Hermitian at site " << i;
      throw Error(ErrorKind::Model, os.str());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    out.eigenvalues[i] = es.eigenvalues();
    out.eigenvectors[i] = es.eigenvectors();
  });
  return out;
}

namespace {

void check_bands(const SpectralData& s, const BandSelection& bands) {
  if (s.eigenvalues.empty()) throw Error(ErrorKind::Domain, "empty spectral data");
  const auto n = s.eigenvalues.front().size();
  std::set<int> seen;
  for (int b : bands) {
    if (b < 0 || b >= n) throw Error(ErrorKind::Domain, "band index out of range");
    if (!seen.insert(b).second) throw Error(ErrorKind::Domain, "duplicate band index");
  }
}

double site_gap(const RVector& ev, const std::vector<char>& selected) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < ev.size(); ++a) {
    if (!selected[static_cast<std::size_t>(a)]) continue;
    for (Eigen::Index b = 0; b < ev.size(); ++b) {
      if (selected[static_cast<std::size_t>(b)]) continue;
      gap = std::min(gap, std::abs(ev(a) - ev(b)));
    }
  }
  // Interlacing groups are reported as negative overlap.
  double lo_sel = std::numeric_limits<double>::infinity(), hi_sel = -lo_sel;
  for (Eigen::Index a = 0; a < ev.size(); ++a) {
    if (!selected[static_cast<std::size_t>(a)]) continue;
    lo_sel = std::min(lo_sel, ev(a));
    hi_sel = std::max(hi_sel, ev(a));
  }
  for (Eigen::Index b = 0; b < ev.size(); ++b) {
    if (selected[static_cast<std::size_t>(b)]) continue;
    if (ev(b) > lo_sel && ev(b) < hi_sel) {
      gap = -std::min(ev(b) - lo_sel, hi_sel - ev(b));
    }
  }
  return gap;
}

std::vector<char> selection_mask(Eigen::Index n, const BandSelection& bands) {
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  for (int b : bands) mask[static_cast<std::size_t>(b)] = 1;
  return mask;
}

}  // namespace

double gap_margin(const SpectralData& s, const BandSelection& bands) {
  check_bands(s, bands);
  const auto mask = selection_mask(s.eigenvalues.front().size(), bands);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& ev : s.eigenvalues) gap = std::min(gap, site_gap(ev, mask));
  return gap;
}

ProjectionFamily select_projection(const SpectralData& s, const BandSelection& bands) {
  check_bands(s, bands);
  const auto n = s.eigenvalues.front().size();
  const auto mask = selection_mask(n, bands);
  ProjectionFamily p;
  p.rank = static_cast<int>(bands.size());
  p.projector.resize(s.eigenvalues.size());
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const double g = site_gap(s.eigenvalues[i], mask);
    if (g < kDegeneracyTolerance) {
      std::ostringstream os;
      os << "selected bands are not isolated at site " << i << " (gap " << g << ")";
      throw Error(ErrorKind::GapClosure, os.str());
    }
    CMatrix proj = CMatrix::Zero(n, n);
    for (int b : bands) {
      const auto v = s.eigenvectors[i].col(b);
      proj.noalias() += v * v.adjoint();
    }
    p.projector[i] = std::move(proj);
  }
  return p;
}

namespace {

// First m columns of a fixed Hermitian, diagonally dominant matrix. Its
// leading m x m block is positive definite, so coordinate projections keep the
// standard basis as their frame, and P E vanishes only at isolated points
// rather than along the curves where the pivot gauge jumps.
CMatrix reference_columns(Eigen::Index dim, int rank) {
  CMatrix e(dim, rank);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (int c = 0; c < rank; ++c) {
      const double d = static_cast<double>(r - c);
      e(r, c) = r == c ? cplx(2.0) : 0.3 * std::pow(0.5, std::abs(d)) * std::exp(0.9 * kI * d);
    }
  }
  return e;
}

}  // namespace

Frame frame_from_projection(const ProjectionFamily& p) {
  Frame f;
  const CMatrix reference =
      p.projector.empty() ? CMatrix() : reference_columns(p.projector.front().rows(), p.rank);
  const auto n = p.projector.size();
  f.columns.resize(n);
  linalg::parallel_for(n, [&](std::size_t i) {
    const CMatrix& proj = p.projector[i];
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (proj + proj.adjoint()));
    const RVector& ev = es.eigenvalues();
    const auto dim = proj.rows();
    int numerical_rank = 0;
    for (Eigen::Index k = 0; k < dim; ++k) numerical_rank += ev(k) > 0.5 ? 1 : 0;
    if (numerical_rank != p.rank) {
      std::ostringstream os;
      os << "projection at site " << i << " has numerical rank " << numerical_rank
         << ", expected " << p.rank;
      throw Error(ErrorKind::Rank, os.str());
    }
    struct Col {
      Eigen::Index pivot;
      CVector v;
    };
    std::vector<Col> cols;
    for (Eigen::Index k = dim - p.rank; k < dim; ++k) {
      CVector v = es.eigenvectors().col(k);
      Eigen::Index pivot = 0;
      v.cwiseAbs().maxCoeff(&pivot);
      v *= std::conj(v(pivot)) / std::abs(v(pivot));
      cols.push_back({pivot, std::move(v)});
    }
    std::stable_sort(cols.begin(), cols.end(),
                     [](const Col& a, const Col& b) { return a.pivot < b.pivot; });
    CMatrix psi(dim, p.rank);
    for (int c = 0; c < p.rank; ++c) psi.col(c) = cols[static_cast<std::size_t>(c)].v;
    const CMatrix overlap = psi.adjoint() * reference;
    Eigen::JacobiSVD<CMatrix> svd(overlap);
    const double smallest = svd.singularValues().minCoeff() / std::sqrt(static_cast<double>(dim));
    if (smallest > kReferenceGaugeFloor) psi = psi * linalg::polar_unitary(overlap, 0.0);
    f.columns[i] = std::move(psi);
  });
  return f;
}

}  // namespace realbloch
