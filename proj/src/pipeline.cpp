#include "realbloch/pipeline.hpp"
#include "realbloch/berry.hpp"
#include "realbloch/curvature.hpp"
#include "realbloch/holonomy.hpp"
#include "realbloch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace realbloch {

using nlohmann::json;

namespace {

const std::vector<std::string> kTaskOrder = {"check-symmetry", "berry", "chern", "holonomy",
                                             "classify", "moduli", "oscillator-oracle"};

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

bool wants(const RunConfig& cfg, const std::string& task) {
  return std::find(cfg.tasks.begin(), cfg.tasks.end(), task) != cfg.tasks.end();
}

InvolutionKind parse_involution(const std::string& s) {
  static const std::map<std::string, InvolutionKind> kinds = {
      {"trivial", InvolutionKind::Trivial}, {"reflection", InvolutionKind::Reflection},
      {"antipodal", InvolutionKind::Antipodal}, {"eta", InvolutionKind::Eta},
      {"eta1", InvolutionKind::EtaFirst}, {"xi", InvolutionKind::Xi},
      {"kappa", InvolutionKind::Kappa}};
  const auto it = kinds.find(s);
  if (it == kinds.end()) config_error("unknown involution '" + s + "'");
  return it->second;
}

int scaled(int n, double scale) {
  if (scale == 1.0) return n;
  int s = static_cast<int>(std::lround(n * scale));
  if (s % 2 != 0) ++s;
  return std::max(s, 4);
}

template <class T>
T param(const json& p, const char* key, T fallback) {
  if (!p.contains(key)) return fallback;
  try {
    return p.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("model parameter '") + key + "' has the wrong type");
  }
}

Profile parse_profile(const json& p, const char* key, Profile fallback) {
  if (!p.contains(key)) return fallback;
  const json& v = p.at(key);
  if (v.is_number()) return Profile::constant(v.get<double>());
  if (!v.is_object() || !v.contains("type")) {
    config_error(std::string("profile '") + key + "' must be a number or {type, amplitude}");
  }
  const std::string type = v.at("type").get<std::string>();
  const double amp = param<double>(v, "amplitude", 1.0);
  if (type == "sin") return Profile::sine(amp);
  if (type == "cos") return Profile::cosine(amp);
  if (type == "constant") return Profile::constant(amp);
  config_error("unknown profile type '" + type + "' (sin, cos, constant)");
}

void require_base(const InvolutiveLattice& lat, Topology t, const std::string& model) {
  if (lat.topology() != t) {
    config_error("model '" + model + "' needs a " + to_string(t) + " lattice, got " + lat.base_tag());
  }
}

json lattice_json(const InvolutiveLattice& lat) {
  return {{"base", lat.base_tag()},
          {"sizes", lat.sizes()},
          {"sites", lat.site_count()},
          {"links", lat.link_count()},
          {"plaquettes", lat.plaquette_count()}};
}

json matrix_trace_json(const CMatrix& m) {
  const cplx t = m.trace();
  return {{"re", t.real()}, {"im", t.imag()}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

struct TaskContext {
  const RunConfig& cfg;
  const InvolutiveLattice& lat;
  const Model& model;
  std::vector<std::string>& warnings;
  const std::filesystem::path* csv_dir;  // null: do not write CSV files
};

BandSelection bands_for(const RunConfig& cfg, const ModelPair& m) {
  if (!cfg.bands.empty()) return cfg.bands;
  if (m.h.name == "oscillator") return {param<int>(cfg.model.params, "n", 0)};
  BandSelection b;
  for (int i = 0; i < m.h.dimension / 2; ++i) b.push_back(i);
  return b;
}

json execute(const TaskContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const InvolutiveLattice& lat = ctx.lat;
  AnalysisOptions aopt;
  aopt.symmetry_tolerance = cfg.symmetry_tolerance;

  const auto* pair = std::get_if<ModelPair>(&ctx.model);
  const auto* product = std::get_if<ProductConnectionSpec>(&ctx.model);
  BundleAnalysis a = pair ? analyze_hamiltonian(pair->h, pair->j, lat, bands_for(cfg, *pair), aopt)
                          : analyze_product(*product, lat, aopt);
  json tasks = json::object();

  if (wants(cfg, "check-symmetry")) {
    json t = a.diagnostics;
    t.erase("equivariance_residual");
    t["symmetric"] = true;
    tasks["check-symmetry"] = t;
  }

  if (wants(cfg, "berry")) {
    json t;
    t["rank"] = a.links.rank;
    t["equivariance_residual"] = a.diagnostics.at("equivariance_residual");
    const LocalConnectionForm form = local_connection_from_links(a.links, lat);
    double max_norm = 0.0;
    for (const auto& m : form.a) max_norm = std::max(max_norm, m.norm());
    t["max_connection_norm"] = max_norm;
    if (product) {
      const LocalConnectionForm avg = average_connection(form, a.symmetry, lat);
      const LocalConnectionForm again = bar_j_map(avg, a.symmetry, lat);
      double fixed = 0.0;
      for (std::size_t l = 0; l < avg.a.size(); ++l) fixed = std::max(fixed, (again.a[l] - avg.a[l]).norm());
      t["average_connection_fixed_point_residual"] = fixed;
    }
    if (ctx.csv_dir) {
      std::ostringstream os;
      write_connection_csv(os, form, lat);
      write_file(*ctx.csv_dir / "connection.csv", os.str());
      t["connection_csv"] = "connection.csv";
    }
    tasks["berry"] = t;
  }

  if (wants(cfg, "chern")) {
    if (lat.dimension() != 2) config_error("task 'chern' needs a 2-D base, got " + lat.base_tag());
    const CurvatureField curv = plaquette_curvature(a.links, lat);
    const ChernNumber c = chern_number(curv, lat);
    json t = {{"value", c.value},
              {"integer", c.integer},
              {"quantization_residual", c.quantization_residual},
              {"curvature_parity_residual", curvature_parity_check(curv, lat)}};
    if (c.quantization_residual > cfg.quantization_tolerance) {
      std::ostringstream os;
      os << "Chern number " << c.value << " is off its integer by " << c.quantization_residual
         << "; refine the lattice";
      ctx.warnings.push_back(os.str());
    }
    if (pair && pair->h.name == "degree_k_sphere") {
      const long oracle = degree_oracle(param<int>(cfg.model.params, "k", 1), lat);
      t["degree_oracle"] = oracle;
      if (oracle != c.integer) ctx.warnings.push_back("Chern number disagrees with the degree oracle");
    }
    if (ctx.csv_dir) {
      std::ostringstream os;
      write_curvature_csv(os, curv, lat);
      write_file(*ctx.csv_dir / "curvature.csv", os.str());
      t["curvature_csv"] = "curvature.csv";
    }
    tasks["chern"] = t;
  }

  if (wants(cfg, "holonomy")) {
    json t;
    json fixed = json::array();
    const auto fl = fixed_loop_holonomies(a.links, lat, a.sewing);
    for (std::size_t i = 0; i < fl.size(); ++i) fixed.push_back(to_json(fl[i], lat, static_cast<int>(i)));
    t["fixed_loops"] = fixed;
    json loops = json::array();
    const auto reps = representative_loops(lat);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const HolonomyResult h = wilson_loop(a.links, reps[i], lat);
      const Point& b = lat.site(h.base);
      loops.push_back({{"loop_id", static_cast<int>(i)},
                       {"base_site", h.base},
                       {"base_coords", {b[0], b[1]}},
                       {"steps", reps[i].steps.size()},
                       {"trace", matrix_trace_json(h.hol)},
                       {"equivariance_residual",
                        holonomy_equivariance_check(a.links, a.sewing, reps[i], lat)}});
    }
    t["loops"] = loops;
    tasks["holonomy"] = t;
  }

  if (wants(cfg, "classify")) {
    const ClassificationResult r = classify(a, lat);
    json t = to_json(r);
    t["report"] = mixed_case_report(r);
    for (const auto& w : r.warnings) ctx.warnings.push_back(w);
    tasks["classify"] = t;
  }

  if (wants(cfg, "moduli")) {
    if (cfg.model.name != "flat_circle") config_error("task 'moduli' needs model 'flat_circle'");
    const double av = param<double>(cfg.model.params, "a", 0.0);
    const cplx expected = flat_moduli_holonomy(av);
    const HolonomyResult h = wilson_loop(a.links, coordinate_loop(lat, 0, 0), lat);
    const cplx got = h.hol(0, 0);
    tasks["moduli"] = {{"a", av},
                       {"a_mod_1", av - std::floor(av)},
                       {"flat_moduli_holonomy", {{"re", expected.real()}, {"im", expected.imag()}}},
                       {"wilson_loop", {{"re", got.real()}, {"im", got.imag()}}},
                       {"error", std::abs(got - expected)}};
  }

  if (wants(cfg, "oscillator-oracle")) {
    if (cfg.model.name != "oscillator") config_error("task 'oscillator-oracle' needs model 'oscillator'");
    const OscillatorOracle o = oscillator_oracle(oscillator_params(cfg.model.params), lat);
    tasks["oscillator-oracle"] = {{"connection_max_error", o.connection_max_error},
                                  {"curvature_max_error", o.curvature_max_error},
                                  {"connection_midpoint_error", o.connection_midpoint_error},
                                  {"curvature_center_error", o.curvature_center_error},
                                  {"spacing", o.spacing}};
  }
  return tasks;
}

json config_json(const RunConfig& c) {
  return {{"lattice", {{"topology", c.lattice.topology}, {"sizes", c.lattice.sizes}, {"involution", c.lattice.involution}}},
          {"model", {{"name", c.model.name}, {"params", c.model.params}}},
          {"bands", c.bands},
          {"tasks", c.tasks},
          {"output_dir", c.output_dir},
          {"tolerances", {{"symmetry", c.symmetry_tolerance}, {"quantization", c.quantization_tolerance}}},
          {"resolution_doubling", c.resolution_doubling}};
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidDiscretization:
    case ErrorKind::Domain: return kExitConfig;
    case ErrorKind::GapClosure:
    case ErrorKind::Rank: return kExitGapClosure;
    case ErrorKind::SymmetryInconsistency:
    case ErrorKind::Model: return kExitSymmetry;
    case ErrorKind::SingularOverlap:
    case ErrorKind::BranchCut:
    case ErrorKind::IndeterminateHolonomy:
    case ErrorKind::Truncation: return kExitRefinement;
    case ErrorKind::Unsupported: return kExitUnsupported;
  }
  return kExitInternal;
}

const char* remediation_hint(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "check the config keys, tasks and model parameters against the README";
    case ErrorKind::InvalidDiscretization:
      return "use sizes of at least 4, even where the involution needs it, and n1 == n2 for xi";
    case ErrorKind::Domain: return "check that the model, lattice and task fit together";
    case ErrorKind::Model: return "the model must return Hermitian matrices of its declared size";
    case ErrorKind::GapClosure: return "select bands separated from the rest of the spectrum or change the model parameters";
    case ErrorKind::Rank: return "check the band selection; the projection rank must be constant";
    case ErrorKind::SymmetryInconsistency:
      return "check J, its parity and the involution, or relax tolerances.symmetry";
    case ErrorKind::SingularOverlap:
    case ErrorKind::BranchCut:
    case ErrorKind::IndeterminateHolonomy: return "refine the lattice, e.g. --resolution-scale 2";
    case ErrorKind::Truncation: return "increase n_basis";
    case ErrorKind::Unsupported: return "only parity +1 Real structures on the listed bases are classified";
  }
  return "rerun with the same config and report the failure";
}

namespace {

void record_error(RunOutcome& out, ErrorKind kind, const std::string& what) {
  out.exit_code = exit_code_for(kind);
  out.message = std::string(to_string(kind)) + ": " + what + "\nhint: " + remediation_hint(kind);
  out.report["status"] = "error";
  out.report["error"] = {{"kind", to_string(kind)},
                         {"message", what},
                         {"hint", remediation_hint(kind)},
                         {"exit_code", out.exit_code}};
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  static const std::set<std::string> known = {"lattice", "model", "bands", "tasks", "output_dir",
                                              "tolerances", "resolution_doubling"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) config_error("unknown config key '" + k + "'");
  }
  RunConfig c;
  try {
    if (!j.contains("lattice")) config_error("config needs a 'lattice' section");
    const json& l = j.at("lattice");
    c.lattice.topology = l.at("topology").get<std::string>();
    c.lattice.sizes = l.at("sizes").get<std::vector<int>>();
    if (l.contains("involution")) {
      c.lattice.involution = l.at("involution").get<std::string>();
    } else {
      c.lattice.involution = c.lattice.topology == "sphere2" ? "kappa"
                             : c.lattice.topology == "torus2" ? "eta" : "trivial";
    }
    if (!j.contains("model")) config_error("config needs a 'model' section");
    const json& m = j.at("model");
    c.model.name = m.at("name").get<std::string>();
    if (m.contains("params")) c.model.params = m.at("params");
    if (!c.model.params.is_object()) config_error("model params must be an object");
    if (j.contains("bands")) c.bands = j.at("bands").get<std::vector<int>>();
    if (!j.contains("tasks")) config_error("config needs a 'tasks' list");
    c.tasks = j.at("tasks").get<std::vector<std::string>>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("tolerances")) {
      const json& t = j.at("tolerances");
      c.symmetry_tolerance = param<double>(t, "symmetry", c.symmetry_tolerance);
      c.quantization_tolerance = param<double>(t, "quantization", c.quantization_tolerance);
    }
    if (j.contains("resolution_doubling")) c.resolution_doubling = j.at("resolution_doubling").get<bool>();
  } catch (const json::exception& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
  if (c.tasks.empty()) config_error("tasks must be nonempty");
  for (const auto& t : c.tasks) {
    if (std::find(kTaskOrder.begin(), kTaskOrder.end(), t) == kTaskOrder.end()) {
      config_error("unknown task '" + t + "'");
    }
  }
  for (int b : c.bands) {
    if (b < 0) config_error("band indices must be nonnegative");
  }
  if (!(c.symmetry_tolerance > 0.0) || !(c.quantization_tolerance > 0.0)) {
    config_error("tolerances must be positive");
  }
  return c;
}

InvolutiveLattice make_lattice(const LatticeSpec& spec, double scale) {
  if (!(scale > 0.0)) config_error("resolution scale must be positive");
  const InvolutionKind kind = parse_involution(spec.involution);
  auto need = [&](std::size_t n) {
    if (spec.sizes.size() != n) {
      config_error("lattice '" + spec.topology + "' needs " + std::to_string(n) + " sizes");
    }
  };
  if (spec.topology == "circle") {
    need(1);
    return build_circle(scaled(spec.sizes[0], scale), kind);
  }
  if (spec.topology == "torus2") {
    need(2);
    return build_torus2(scaled(spec.sizes[0], scale), scaled(spec.sizes[1], scale), kind);
  }
  if (spec.topology == "sphere2") {
    need(2);
    if (kind != InvolutionKind::Kappa) config_error("sphere2 supports only the kappa involution");
    return build_sphere2(scaled(spec.sizes[0], scale), scaled(spec.sizes[1], scale));
  }
  config_error("unknown topology '" + spec.topology + "' (circle, torus2, sphere2)");
}

OscillatorParams oscillator_params(const json& p) {
  OscillatorParams o;
  o.n = param<int>(p, "n", o.n);
  o.n_basis = param<int>(p, "n_basis", o.n_basis);
  o.delta = param<double>(p, "delta", o.delta);
  o.f = parse_profile(p, "f", o.f);
  o.g = parse_profile(p, "g", o.g);
  return o;
}

Model make_model(const ModelSpec& spec, const InvolutiveLattice& lat) {
  const std::string& n = spec.name;
  const json& p = spec.params;
  if (n == "mobius") {
    require_base(lat, Topology::Circle, n);
    return model_mobius_circle();
  }
  if (n == "trivial_circle") {
    require_base(lat, Topology::Circle, n);
    return model_trivial_circle();
  }
  if (n == "flat_circle") {
    require_base(lat, Topology::Circle, n);
    return model_flat_circle(param<double>(p, "a", 0.0));
  }
  if (n == "mobius_pullback_torus") {
    require_base(lat, Topology::Torus2, n);
    return model_mobius_pullback_torus();
  }
  if (n == "degree_k_sphere") {
    require_base(lat, Topology::Sphere2, n);
    return model_degree_k_sphere(param<int>(p, "k", 1), lat);
  }
  if (n == "oscillator") {
    require_base(lat, Topology::Torus2, n);
    return model_oscillator(oscillator_params(p), lat);
  }
  if (n == "qwz") {
    require_base(lat, Topology::Torus2, n);
    return model_qwz(param<double>(p, "m", 1.0), lat);
  }
  if (n == "direct_sum") {
    if (!p.contains("models") || !p.at("models").is_array() || p.at("models").size() != 2) {
      config_error("direct_sum needs params.models with two entries");
    }
    Model parts[2];
    for (int i = 0; i < 2; ++i) {
      const json& m = p.at("models").at(static_cast<std::size_t>(i));
      ModelSpec s;
      s.name = param<std::string>(m, "name", "");
      if (m.contains("params")) s.params = m.at("params");
      parts[i] = make_model(s, lat);
    }
    if (parts[0].index() != parts[1].index()) {
      config_error("direct_sum parts must both be Hamiltonians or both be connections");
    }
    if (const auto* a = std::get_if<ModelPair>(&parts[0])) {
      const auto& b = std::get<ModelPair>(parts[1]);
      return ModelPair{direct_sum(a->h, b.h), direct_sum(a->j, b.j)};
    }
    return direct_sum(std::get<ProductConnectionSpec>(parts[0]),
                      std::get<ProductConnectionSpec>(parts[1]));
  }
  config_error("unknown model '" + n + "'");
}

std::vector<LoopPath> representative_loops(const InvolutiveLattice& lat) {
  switch (lat.topology()) {
    case Topology::Circle: return {coordinate_loop(lat, 0, 0)};
    case Topology::Torus2:
      return {coordinate_loop(lat, 0, 0), coordinate_loop(lat, 1, 0),
              coordinate_loop(lat, 0, std::max(1, lat.sizes()[1] / 4))};
    case Topology::Sphere2: {
      const int rings = lat.sizes()[0] - 1;
      return {coordinate_loop(lat, 0, 1), coordinate_loop(lat, 0, std::max(1, rings / 3)),
              coordinate_loop(lat, 1, 0)};
    }
  }
  return {};
}

OscillatorOracle oscillator_oracle(const OscillatorParams& p, const InvolutiveLattice& lat) {
  const ModelPair m = model_oscillator(p, lat);
  const SpectralData s = eigensolve_family(m.h, lat);
  const ProjectionFamily proj = select_projection(s, {p.n});
  const Frame aligned = align_gauge(frame_from_projection(proj), oscillator_reference_frame(p, lat));
  const LinkField u = link_field(aligned, lat);
  const LocalConnectionForm a = local_connection_from_links(u, lat);
  const linalg::Quadrature gl = linalg::gauss_legendre(8);

  OscillatorOracle out;
  for (int l = 0; l < lat.link_count(); ++l) {
    const Link& lk = lat.link(l);
    const Point d = lat.link_displacement(l);
    const Point mid = lat.link_midpoint(l);
    auto along = [&](const Point& x) {
      const auto exact = oscillator_analytic_connection(p, x);
      return (exact[0] * d[0] + exact[1] * d[1]) / lk.spacing;
    };
    cplx average = 0.0;
    for (int i = 0; i < gl.nodes.size(); ++i) {
      const double t = 0.5 * gl.nodes(i);
      average += 0.5 * gl.weights(i) * along({mid[0] + t * d[0], mid[1] + t * d[1]});
    }
    const cplx numeric = a.a[static_cast<std::size_t>(l)](0, 0);
    out.connection_max_error = std::max(out.connection_max_error, std::abs(numeric - average));
    out.connection_midpoint_error = std::max(out.connection_midpoint_error, std::abs(numeric - along(mid)));
    out.spacing = std::max(out.spacing, lk.spacing);
  }
  const CurvatureField f = plaquette_curvature(u, lat);
  const double h1 = kTwoPi / lat.sizes()[0], h2 = kTwoPi / lat.sizes()[1];
  for (int q = 0; q < lat.plaquette_count(); ++q) {
    const Point c = lat.plaquette_center(q);
    cplx average = 0.0;
    for (int i = 0; i < gl.nodes.size(); ++i) {
      for (int k = 0; k < gl.nodes.size(); ++k) {
        const Point x{c[0] + 0.5 * h1 * gl.nodes(i), c[1] + 0.5 * h2 * gl.nodes(k)};
        average += 0.25 * gl.weights(i) * gl.weights(k) * oscillator_curvature_component(p, x);
      }
    }
    const cplx numeric = f.f[static_cast<std::size_t>(q)](0, 0) / (h1 * h2);
    out.curvature_max_error = std::max(out.curvature_max_error, std::abs(numeric - average));
    out.curvature_center_error =
        std::max(out.curvature_center_error, std::abs(numeric - oscillator_curvature_component(p, c)));
  }
  return out;
}

json to_json(const ClassificationResult& r) {
  json j = {{"base", r.base},
            {"group", r.group},
            {"free", r.free_invariants},
            {"torsion", r.torsion_invariants},
            {"verdict", r.verdict},
            {"diagnostics", r.diagnostics},
            {"warnings", r.warnings}};
  return j;
}

json to_json(const FixedLoopHolonomy& f, const InvolutiveLattice& lat, int id) {
  const Point& b = lat.site(f.holonomy.base);
  json j = {{"loop_id", id},
            {"base_site", f.holonomy.base},
            {"base_coords", {b[0], b[1]}},
            {"steps", f.holonomy.loop.steps.size()},
            {"gauge", f.holonomy.gauge},
            {"trace", matrix_trace_json(f.holonomy.hol)},
            {"reality_residual", f.reality_residual}};
  if (f.holonomy.hol.rows() == 1) {
    j["sign"] = f.sign;
  } else {
    j["det_sign"] = f.sign;
  }
  return j;
}

RunOutcome run(const RunConfig& cfg, const RunOptions& opt) {
  RunOutcome out;
  json& report = out.report;
  report["schema"] = "report_v1";
  report["config"] = config_json(cfg);
  report["resolution_scale"] = opt.resolution_scale;
  std::vector<std::string> warnings;
  const std::filesystem::path dir =
      !opt.out_dir.empty() ? opt.out_dir : (!cfg.output_dir.empty() ? cfg.output_dir : ".");

  try {
    if (opt.threads < 1) config_error("thread count must be positive");
    set_thread_count(opt.threads);
    std::filesystem::create_directories(dir);
    const InvolutiveLattice lat = make_lattice(cfg.lattice, opt.resolution_scale);
    report["lattice"] = lattice_json(lat);
    const Model model = make_model(cfg.model, lat);
    report["model"] = {{"name", cfg.model.name}, {"params", cfg.model.params}};
    report["tasks"] = execute({cfg, lat, model, warnings, &dir});

    if (cfg.resolution_doubling) {
      const InvolutiveLattice fine = make_lattice(cfg.lattice, 2.0 * opt.resolution_scale);
      const Model fine_model = make_model(cfg.model, fine);
      std::vector<std::string> fine_warnings;
      json ft = execute({cfg, fine, fine_model, fine_warnings, nullptr});
      json refinement = {{"lattice", lattice_json(fine)}, {"tasks", ft}};
      const json& ct = report["tasks"];
      if (ct.contains("classify")) {
        const bool stable = ct["classify"]["verdict"] == ft["classify"]["verdict"];
        refinement["classification_stable"] = stable;
        if (!stable) warnings.push_back("classification verdict changes under resolution doubling");
      }
      if (ct.contains("oscillator-oracle")) {
        const double c0 = ct["oscillator-oracle"]["connection_max_error"].get<double>();
        const double c1 = ft["oscillator-oracle"]["connection_max_error"].get<double>();
        refinement["connection_error_ratio"] = c0 > 0.0 ? c1 / c0 : 0.0;
      }
      for (auto& w : fine_warnings) warnings.push_back("refined run: " + w);
      report["refinement"] = refinement;
    }
    report["status"] = "ok";
    out.exit_code = kExitOk;
  } catch (const Error& e) {
    record_error(out, e.kind(), e.what());
  } catch (const std::exception& e) {
    out.exit_code = kExitInternal;
    out.message = std::string("internal error: ") + e.what() + "\nhint: rerun with the same config and report the failure";
    report["status"] = "error";
    report["error"] = {{"kind", "internal"}, {"message", e.what()}, {"exit_code", out.exit_code}};
  }
  report["warnings"] = warnings;
  if (out.exit_code == kExitOk && opt.strict && !warnings.empty()) {
    out.exit_code = kExitStrictWarning;
    out.message = "strict mode: " + warnings.front() + "\nhint: address the warning or run without --strict";
  }
  try {
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", report.dump(2) + "\n");
  } catch (const std::exception& e) {
    if (out.exit_code == kExitOk) {
      out.exit_code = kExitInternal;
      out.message = std::string("cannot write report: ") + e.what();
    }
  }
  return out;
}

RunOutcome run(const std::string& config_text, const RunOptions& opt) {
  RunConfig cfg;
  try {
    cfg = parse_config(config_text);
  } catch (const Error& e) {
    RunOutcome out;
    out.report = {{"schema", "report_v1"}, {"warnings", json::array()}};
    record_error(out, e.kind(), e.what());
    try {
      const std::filesystem::path dir = opt.out_dir.empty() ? "." : opt.out_dir;
      std::filesystem::create_directories(dir);
      write_file(dir / "report.json", out.report.dump(2) + "\n");
    } catch (const std::exception&) {
      // The exit code already reports the config problem.
    }
    return out;
  }
  return run(cfg, opt);
}

}  // namespace realbloch
