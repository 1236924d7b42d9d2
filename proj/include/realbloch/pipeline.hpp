#pragma once

#include "realbloch/classify.hpp"
#include "realbloch/common.hpp"
#include "realbloch/lattice.hpp"
#include "realbloch/models.hpp"

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace realbloch {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitGapClosure = 3,
  kExitSymmetry = 4,
  kExitRefinement = 5,
  kExitUnsupported = 6,
  kExitStrictWarning = 7,
};

int exit_code_for(ErrorKind kind);
/// One-line suggestion printed with every error.
const char* remediation_hint(ErrorKind kind);

struct LatticeSpec {
  std::string topology;  // circle, torus2, sphere2
  std::vector<int> sizes;
  std::string involution;  // trivial, reflection, antipodal, eta, eta1, xi, kappa
};

struct ModelSpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

struct RunConfig {
  LatticeSpec lattice;
  ModelSpec model;
  BandSelection bands;  // empty: model default
  std::vector<std::string> tasks;
  std::string output_dir;
  double symmetry_tolerance = 1e-10;
  double quantization_tolerance = 1e-6;
  bool resolution_doubling = false;
};

/// Throws Config with a one-line hint on any schema problem.
RunConfig parse_config(const std::string& json_text);

struct RunOptions {
  std::string out_dir;  // overrides RunConfig::output_dir when nonempty
  int threads = 1;
  bool strict = false;
  double resolution_scale = 1.0;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  nlohmann::json report;
};

/// Runs the tasks and writes report.json (plus curvature.csv and
/// connection.csv when computed) into the output directory. Never throws for
/// library errors; they are mapped to exit codes and recorded in the report.
RunOutcome run(const RunConfig& cfg, const RunOptions& opt);
/// Parses and runs. A config that does not parse still leaves an error report
/// in opt.out_dir (or the working directory).
RunOutcome run(const std::string& config_text, const RunOptions& opt);

/// Lattice from a spec, with every size multiplied by `scale` (rounded to
/// even).
InvolutiveLattice make_lattice(const LatticeSpec& spec, double scale = 1.0);

using Model = std::variant<ModelPair, ProductConnectionSpec>;
/// Model by name: mobius, trivial_circle, flat_circle{a},
/// mobius_pullback_torus, degree_k_sphere{k}, oscillator{n, n_basis, delta,
/// f, g}, qwz{m}, direct_sum{models: [a, b]}.
Model make_model(const ModelSpec& spec, const InvolutiveLattice& lat);
OscillatorParams oscillator_params(const nlohmann::json& params);

/// A few closed loops through different regions of the base, for reports and
/// equivariance checks.
std::vector<LoopPath> representative_loops(const InvolutiveLattice& lat);

struct OscillatorOracle {
  /// log(U_l) / h against the closed-form connection averaged along the link.
  double connection_max_error = 0.0;
  /// F_p / area against the closed-form curvature averaged over the plaquette.
  double curvature_max_error = 0.0;
  /// The same against point values at link midpoints and plaquette centers.
  double connection_midpoint_error = 0.0;
  double curvature_center_error = 0.0;
  double spacing = 0.0;  // largest link spacing
};

/// Compares the Berry connection and curvature of the oscillator level with
/// the closed forms, after rotating the frames onto the exact eigenfunctions.
/// Needs the rectangular eta1 torus.
OscillatorOracle oscillator_oracle(const OscillatorParams& p, const InvolutiveLattice& lat);

nlohmann::json to_json(const ClassificationResult& r);
nlohmann::json to_json(const FixedLoopHolonomy& f, const InvolutiveLattice& lat, int id);

}  // namespace realbloch
