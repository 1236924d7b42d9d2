#include "realbloch/classify.hpp"
#include "realbloch/linalg.hpp"

#include <cmath>
#include <sstream>

namespace realbloch {

namespace {

void require_real(int parity) {
  if (parity != 1) {
    throw Error(ErrorKind::Unsupported,
                "Quaternionic structures (parity -1) are not classified; use parity +1");
  }
}

void check_symmetry(const SymmetryResidual& r, double tol, const std::string& what) {
  if (!r.symmetric(tol)) {
    std::ostringstream os;
    os << what << " violates the Real symmetry (H residual " << r.hamiltonian << ", J parity "
       << r.j_parity << ", J unitarity " << r.j_unitarity << ", tolerance " << tol
       << "); check J and the involution";
    throw Error(ErrorKind::SymmetryInconsistency, os.str());
  }
}

std::string sign_list(const std::vector<int>& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << (s[i] > 0 ? "+1" : "-1");
  os << ')';
  return os.str();
}

}  // namespace

BundleAnalysis analyze_hamiltonian(const HamiltonianFamily& h, const SymmetryData& j,
                                   const InvolutiveLattice& lat, const BandSelection& bands,
                                   const AnalysisOptions& opt) {
  require_real(j.parity);
  const SymmetryResidual sym = verify_hamiltonian_symmetry(h, j, lat);
  check_symmetry(sym, opt.symmetry_tolerance, "model '" + h.name + "'");

  BundleAnalysis a;
  a.symmetry = j;
  a.diagnostics["hamiltonian_symmetry_residual"] = sym.hamiltonian;
  a.diagnostics["j_parity_residual"] = sym.j_parity;
  a.diagnostics["j_unitarity_residual"] = sym.j_unitarity;

  const SpectralData spec = eigensolve_family(h, lat);
  a.diagnostics["gap_margin"] = gap_margin(spec, bands);
  a.projection = select_projection(spec, bands);
  a.frame = frame_from_projection(*a.projection);
  a.diagnostics["projection_symmetry_residual"] = verify_projection_symmetry(*a.projection, j, lat);
  a.diagnostics["gb_equivariance_obstruction"] = gb_equivariance_obstruction(*a.projection, j, lat);
  a.sewing = sewing_matrix(*a.frame, j, lat);
  a.diagnostics["sewing_unitarity_residual"] = a.sewing.unitarity_residual;
  a.diagnostics["sewing_parity_residual"] = a.sewing.parity_residual;
  a.links = link_field(*a.frame, lat);
  a.diagnostics["equivariance_residual"] = equivariance_residual(a.links, a.sewing, lat, j.parity);
  return a;
}

BundleAnalysis analyze_product(const ProductConnectionSpec& spec, const InvolutiveLattice& lat,
                               const AnalysisOptions& opt) {
  require_real(spec.parity);
  BundleAnalysis a;
  a.symmetry = SymmetryData::sample(spec.j, lat, spec.parity);
  const SymmetryResidual sym = symmetry_data_residual(a.symmetry, lat);
  check_symmetry(sym, opt.symmetry_tolerance, "connection '" + spec.name + "'");
  a.diagnostics["j_parity_residual"] = sym.j_parity;
  a.diagnostics["j_unitarity_residual"] = sym.j_unitarity;
  a.frame = Frame::standard(lat.site_count(), spec.rank);
  a.sewing = sewing_matrix(*a.frame, a.symmetry, lat);
  a.diagnostics["sewing_unitarity_residual"] = a.sewing.unitarity_residual;
  a.diagnostics["sewing_parity_residual"] = a.sewing.parity_residual;
  a.links = link_field_from_connection(spec, lat, opt.substeps);
  a.diagnostics["equivariance_residual"] =
      equivariance_residual(a.links, a.sewing, lat, spec.parity);
  return a;
}

ClassificationResult classify(const BundleAnalysis& a, const InvolutiveLattice& lat) {
  require_real(a.symmetry.parity);
  ClassificationResult r;
  r.base = lat.base_tag();
  r.diagnostics = a.diagnostics;
  r.warnings = a.warnings;

  bool want_chern = false;
  bool want_signs = false;
  if (r.base == "circle-trivial") {
    r.group = "Z2";
    want_signs = true;
  } else if (r.base == "circle-reflection" || r.base == "circle-antipodal") {
    r.group = "0";
  } else if (r.base == "sphere2" || r.base == "torus2-xi") {
    r.group = "Z";
    want_chern = true;
  } else if (r.base == "torus2-eta") {
    r.group = "Z2 ⊕ Z";
    want_chern = true;
    want_signs = true;
  } else if (r.base == "torus2-trivial") {
    r.group = "Z2 ⊕ Z2";
    want_signs = true;
  } else {
    throw Error(ErrorKind::Unsupported, "no classification table for base " + r.base);
  }

  if (want_chern) {
    const CurvatureField curv = plaquette_curvature(a.links, lat);
    r.chern = chern_number(curv, lat);
    r.free_invariants.push_back(r.chern->integer);
    r.diagnostics["chern_value"] = r.chern->value;
    r.diagnostics["quantization_residual"] = r.chern->quantization_residual;
    r.diagnostics["curvature_parity_residual"] = curvature_parity_check(curv, lat);
    if (!r.chern->quantized()) {
      std::ostringstream os;
      os << "Chern number " << r.chern->value << " is not quantized to 1e-6; refine the lattice";
      r.warnings.push_back(os.str());
    }
  }
  if (want_signs) {
    r.fixed_loops = fixed_loop_holonomies(a.links, lat, a.sewing);
    double worst = 0.0;
    for (const auto& f : r.fixed_loops) {
      r.torsion_invariants.push_back(f.sign);
      worst = std::max(worst, f.reality_residual);
    }
    r.diagnostics["max_reality_residual"] = worst;
    if (worst > 1e-2) {
      std::ostringstream os;
      os << "fixed-loop holonomy is not real (residual " << worst << "); refine the lattice";
      r.warnings.push_back(os.str());
    }
  }

  if (r.group == "0") {
    r.verdict = "trivial";
  } else if (r.base == "circle-trivial") {
    r.verdict = r.torsion_invariants.front() < 0 ? "Möbius class" : "trivial class";
  } else if (r.group == "Z") {
    r.verdict = "c1 = " + std::to_string(r.free_invariants.front());
  } else if (r.base == "torus2-eta") {
    r.verdict = "(" + r.group + "; " + std::to_string(r.free_invariants.front()) + "; " +
                sign_list(r.torsion_invariants) + ")";
  } else {
    r.verdict = "(" + r.group + "; " + sign_list(r.torsion_invariants) + ")";
  }
  return r;
}

ClassificationResult classify_real_bundle(const HamiltonianFamily& h, const SymmetryData& j,
                                          const InvolutiveLattice& lat, const BandSelection& bands,
                                          const AnalysisOptions& opt) {
  return classify(analyze_hamiltonian(h, j, lat, bands, opt), lat);
}

ClassificationResult classify_real_bundle(const ProductConnectionSpec& spec,
                                          const InvolutiveLattice& lat,
                                          const AnalysisOptions& opt) {
  return classify(analyze_product(spec, lat, opt), lat);
}

std::string mixed_case_report(const ClassificationResult& r) {
  std::ostringstream os;
  os << "base: " << r.base << "\ngroup: " << r.group << '\n';
  const bool has_free = !r.free_invariants.empty();
  const bool has_torsion = !r.torsion_invariants.empty();
  if (has_free) {
    os << "chern number: " << r.free_invariants.front();
    if (r.chern) os << " (value " << r.chern->value << ")";
    os << '\n';
  }
  if (has_torsion) os << "fixed-loop signs: " << sign_list(r.torsion_invariants) << '\n';
  if (has_free && has_torsion) {
    os << "note: both invariants are reported as a pair; no canonical splitting of the mixed "
          "class into free and torsion parts is known, so no combined label is given\n";
  } else if (has_free) {
    os << "note: torsion-free base, fixed-loop signs omitted\n";
  } else if (has_torsion) {
    os << "note: pure torsion base, no Chern number\n";
  } else {
    os << "note: the classifying group is trivial\n";
  }
  os << "verdict: " << r.verdict << '\n';
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  return os.str();
}

}  // namespace realbloch
