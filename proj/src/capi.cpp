#include "realbloch/realbloch.h"
#include "realbloch/classify.hpp"
#include "realbloch/pipeline.hpp"

#include <memory>
#include <optional>
#include <string>

struct rb_lattice {
  realbloch::InvolutiveLattice lat;
};

struct rb_model {
  realbloch::Model model;
  std::string name;
  nlohmann::json params;
};

struct rb_result {
  std::optional<realbloch::ClassificationResult> classification;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
int guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const realbloch::Error& e) {
    return fail(realbloch::exit_code_for(e.kind()),
                std::string(realbloch::to_string(e.kind())) + ": " + e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(RB_ERR_CONFIG, std::string("invalid JSON: ") + e.what());
  } catch (const std::exception& e) {
    return fail(RB_ERR_INTERNAL, std::string("internal error: ") + e.what());
  } catch (...) {
    return fail(RB_ERR_INTERNAL, "internal error");
  }
}

}  // namespace

extern "C" {

const char* rb_version(void) { return "1.0.0"; }

const char* rb_last_error(void) { return g_last_error.c_str(); }

int rb_lattice_create(const char* topology, const int* sizes, int n_sizes, const char* involution,
                      rb_lattice** out) {
  if (!topology || !sizes || n_sizes < 1 || !involution || !out) return fail(RB_ERR_CONFIG, "null argument");
  return guarded([&] {
    realbloch::LatticeSpec spec{topology, std::vector<int>(sizes, sizes + n_sizes), involution};
    *out = new rb_lattice{realbloch::make_lattice(spec)};
    return RB_OK;
  });
}

int rb_lattice_counts(const rb_lattice* lat, int* sites, int* links, int* plaquettes) {
  if (!lat) return fail(RB_ERR_CONFIG, "null lattice");
  if (sites) *sites = lat->lat.site_count();
  if (links) *links = lat->lat.link_count();
  if (plaquettes) *plaquettes = lat->lat.plaquette_count();
  return RB_OK;
}

void rb_lattice_destroy(rb_lattice* lat) { delete lat; }

int rb_model_create(const char* name, const char* params_json, const rb_lattice* lat, rb_model** out) {
  if (!name || !lat || !out) return fail(RB_ERR_CONFIG, "null argument");
  return guarded([&] {
    realbloch::ModelSpec spec;
    spec.name = name;
    if (params_json) spec.params = nlohmann::json::parse(params_json);
    if (!spec.params.is_object()) return fail(RB_ERR_CONFIG, "model params must be a JSON object");
    *out = new rb_model{realbloch::make_model(spec, lat->lat), spec.name, spec.params};
    return static_cast<int>(RB_OK);
  });
}

void rb_model_destroy(rb_model* model) { delete model; }

int rb_classify(const rb_model* model, const rb_lattice* lat, const int* bands, int n_bands,
                rb_result** out) {
  if (!model || !lat || !out) return fail(RB_ERR_CONFIG, "null argument");
  return guarded([&] {
    using namespace realbloch;
    ClassificationResult r;
    if (const auto* pair = std::get_if<ModelPair>(&model->model)) {
      BandSelection b;
      if (bands && n_bands > 0) {
        b.assign(bands, bands + n_bands);
      } else if (model->name == "oscillator") {
        b = {oscillator_params(model->params).n};
      } else {
        for (int i = 0; i < pair->h.dimension / 2; ++i) b.push_back(i);
      }
      r = classify_real_bundle(pair->h, pair->j, lat->lat, b);
    } else {
      r = classify_real_bundle(std::get<ProductConnectionSpec>(model->model), lat->lat);
    }
    auto res = std::make_unique<rb_result>();
    res->json = to_json(r).dump(2);
    res->classification = std::move(r);
    *out = res.release();
    return static_cast<int>(RB_OK);
  });
}

int rb_result_chern(const rb_result* r, long* integer, double* value) {
  if (!r) return fail(RB_ERR_CONFIG, "null result");
  if (!r->classification || !r->classification->chern) {
    return fail(RB_ERR_UNSUPPORTED, "result has no Chern number");
  }
  if (integer) *integer = r->classification->chern->integer;
  if (value) *value = r->classification->chern->value;
  return RB_OK;
}

int rb_result_torsion(const rb_result* r, int* signs, int capacity, int* count) {
  if (!r) return fail(RB_ERR_CONFIG, "null result");
  if (!r->classification) return fail(RB_ERR_UNSUPPORTED, "result is not a classification");
  const auto& t = r->classification->torsion_invariants;
  for (int i = 0; i < capacity && i < static_cast<int>(t.size()); ++i) {
    if (signs) signs[i] = t[static_cast<std::size_t>(i)];
  }
  if (count) *count = static_cast<int>(t.size());
  return RB_OK;
}

int rb_result_json(const rb_result* r, const char** json) {
  if (!r || !json) return fail(RB_ERR_CONFIG, "null argument");
  *json = r->json.c_str();
  return RB_OK;
}

void rb_result_destroy(rb_result* r) { delete r; }

int rb_run(const char* config_json, const char* out_dir, int threads, int strict,
           double resolution_scale, rb_result** out) {
  if (!config_json) return fail(RB_ERR_CONFIG, "null config");
  if (out) *out = nullptr;
  return guarded([&] {
    realbloch::RunOptions opt;
    opt.out_dir = out_dir ? out_dir : "";
    opt.threads = threads;
    opt.strict = strict != 0;
    opt.resolution_scale = resolution_scale;
    const realbloch::RunOutcome outcome = realbloch::run(std::string(config_json), opt);
    if (out) {
      auto res = std::make_unique<rb_result>();
      res->json = outcome.report.dump(2);
      *out = res.release();
    }
    if (outcome.exit_code != RB_OK) g_last_error = outcome.message;
    return outcome.exit_code;
  });
}

}  // extern "C"
