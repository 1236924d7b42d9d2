#pragma once

#include "realbloch/berry.hpp"
#include "realbloch/common.hpp"
#include "realbloch/curvature.hpp"
#include "realbloch/holonomy.hpp"
#include "realbloch/lattice.hpp"
#include "realbloch/spectral.hpp"
#include "realbloch/symmetry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace realbloch {

/// Everything the invariants are read from: the discrete connection, the
/// sewing field and the residuals gathered on the way.
struct BundleAnalysis {
  LinkField links;
  SewingField sewing;
  SymmetryData symmetry;
  std::optional<ProjectionFamily> projection;
  std::optional<Frame> frame;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
};

struct AnalysisOptions {
  double symmetry_tolerance = 1e-10;
  /// Links of a product connection are integrated with this many substeps.
  int substeps = 8;
};

/// Spectral projection, frame, overlaps and sewing matrices for a Hamiltonian
/// family. Throws SymmetryInconsistency when the Hamiltonian is not Real
/// within tolerance, GapClosure when the band group touches the rest.
BundleAnalysis analyze_hamiltonian(const HamiltonianFamily& h, const SymmetryData& j,
                                   const InvolutiveLattice& lat, const BandSelection& bands,
                                   const AnalysisOptions& opt = {});

/// Same for a product bundle with a closed-form connection.
BundleAnalysis analyze_product(const ProductConnectionSpec& spec, const InvolutiveLattice& lat,
                               const AnalysisOptions& opt = {});

struct ClassificationResult {
  std::string base;
  std::string group;
  std::vector<long> free_invariants;
  std::vector<int> torsion_invariants;
  std::string verdict;
  std::optional<ChernNumber> chern;
  std::vector<FixedLoopHolonomy> fixed_loops;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
};

/// Reads the invariants prescribed for the base: fixed-loop signs for the
/// torsion part, the Chern number for the free part.
///   circle-trivial                        Z2
///   circle-reflection, circle-antipodal   0
///   sphere2, torus2-xi                    Z
///   torus2-eta (either axis)              Z2 + Z
///   torus2-trivial                        Z2 + Z2
/// Throws Unsupported for parity -1.
ClassificationResult classify(const BundleAnalysis& a, const InvolutiveLattice& lat);

ClassificationResult classify_real_bundle(const HamiltonianFamily& h, const SymmetryData& j,
                                          const InvolutiveLattice& lat, const BandSelection& bands,
                                          const AnalysisOptions& opt = {});
ClassificationResult classify_real_bundle(const ProductConnectionSpec& spec,
                                          const InvolutiveLattice& lat,
                                          const AnalysisOptions& opt = {});

/// Plain-text summary. For bases with both a free and a torsion part the pair
/// is reported as is, with a note that no canonical splitting is implied.
std::string mixed_case_report(const ClassificationResult& r);

}  // namespace realbloch
