#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "realbloch/realbloch.h"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("realbloch_interface_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(REALBLOCH_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

nlohmann::json read_report(const fs::path& dir) {
  std::ifstream in(dir / "report.json");
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("lattices, models and classification") {
  CHECK(std::string(rb_version()).size() > 0);
  rb_lattice* lat = nullptr;
  const int sizes[] = {24, 32};
  REQUIRE(rb_lattice_create("sphere2", sizes, 2, "kappa", &lat) == RB_OK);
  int s = 0, l = 0, p = 0;
  CHECK(rb_lattice_counts(lat, &s, &l, &p) == RB_OK);
  CHECK(s == 23 * 32 + 2);
  CHECK(p == 24 * 32);
  rb_model* model = nullptr;
  REQUIRE(rb_model_create("degree_k_sphere", R"({"k": -2})", lat, &model) == RB_OK);
  rb_result* r = nullptr;
  REQUIRE(rb_classify(model, lat, nullptr, 0, &r) == RB_OK);
  long c = 0;
  double value = 0.0;
  CHECK(rb_result_chern(r, &c, &value) == RB_OK);
  CHECK(c == -2);
  CHECK(std::abs(value + 2.0) < 1e-9);
  const char* json = nullptr;
  CHECK(rb_result_json(r, &json) == RB_OK);
  CHECK(nlohmann::json::parse(json).at("verdict") == "c1 = -2");
  int count = -1;
  CHECK(rb_result_torsion(r, nullptr, 0, &count) == RB_OK);
  CHECK(count == 0);
  rb_result_destroy(r);
  rb_model_destroy(model);
  rb_lattice_destroy(lat);
}

TEST_CASE("torsion signs") {
  rb_lattice* lat = nullptr;
  const int n = 64;
  REQUIRE(rb_lattice_create("circle", &n, 1, "trivial", &lat) == RB_OK);
  rb_model* model = nullptr;
  REQUIRE(rb_model_create("mobius", nullptr, lat, &model) == RB_OK);
  rb_result* r = nullptr;
  REQUIRE(rb_classify(model, lat, nullptr, 0, &r) == RB_OK);
  int signs[4] = {0, 0, 0, 0};
  int count = 0;
  CHECK(rb_result_torsion(r, signs, 4, &count) == RB_OK);
  CHECK(count == 1);
  CHECK(signs[0] == -1);
  long c = 0;
  double v = 0.0;
  CHECK(rb_result_chern(r, &c, &v) == RB_ERR_UNSUPPORTED);
  rb_result_destroy(r);
  rb_model_destroy(model);
  rb_lattice_destroy(lat);
}

TEST_CASE("errors carry codes and messages") {
  rb_lattice* lat = nullptr;
  const int bad = 3;
  CHECK(rb_lattice_create("circle", &bad, 1, "reflection", &lat) == RB_ERR_CONFIG);
  CHECK(lat == nullptr);
  CHECK(std::string(rb_last_error()).size() > 0);
  CHECK(rb_lattice_create("klein", &bad, 1, "trivial", &lat) == RB_ERR_CONFIG);
  const int sizes[] = {8, 8};
  REQUIRE(rb_lattice_create("torus2", sizes, 2, "eta", &lat) == RB_OK);
  rb_model* model = nullptr;
  REQUIRE(rb_model_create("qwz", R"({"m": 2.0})", lat, &model) == RB_OK);
  rb_result* r = nullptr;
  CHECK(rb_classify(model, lat, nullptr, 0, &r) == RB_ERR_GAP_CLOSURE);
  CHECK(r == nullptr);
  CHECK(std::string(rb_last_error()).find("gap") != std::string::npos);
  rb_model_destroy(model);
  CHECK(rb_model_create("qwz", "{not json", lat, &model) == RB_ERR_CONFIG);
  CHECK(rb_classify(nullptr, lat, nullptr, 0, &r) == RB_ERR_CONFIG);
  rb_lattice_destroy(lat);
}

TEST_CASE("full runs") {
  const fs::path dir = fresh_dir("capi_run");
  rb_result* r = nullptr;
  const int code = rb_run(R"({"lattice": {"topology": "circle", "sizes": [64], "involution": "trivial"},
    "model": {"name": "mobius"}, "tasks": ["holonomy", "classify"]})",
                          dir.c_str(), 2, 0, 1.0, &r);
  CHECK(code == RB_OK);
  REQUIRE(r != nullptr);
  const char* json = nullptr;
  rb_result_json(r, &json);
  CHECK(nlohmann::json::parse(json).at("tasks").at("classify").at("torsion") == nlohmann::json::array({-1}));
  rb_result_destroy(r);
  CHECK(rb_run(R"({"tasks": []})", dir.c_str(), 1, 0, 1.0, nullptr) == RB_ERR_CONFIG);
}

}

TEST_SUITE("cli") {

TEST_CASE("spec configs") {
  const fs::path dir = fresh_dir("cli_sphere");
  const auto cfg = write_config(dir, R"({"lattice": {"topology": "sphere2", "sizes": [24, 32]},
    "model": {"name": "degree_k_sphere", "params": {"k": 2}}, "tasks": ["chern", "classify"]})");
  CHECK(run_cli("run " + cfg.string() + " --out " + dir.string()) == 0);
  const auto r = read_report(dir);
  CHECK(r.at("tasks").at("classify").at("free") == nlohmann::json::array({2}));
  CHECK(fs::exists(dir / "curvature.csv"));

  const fs::path m = fresh_dir("cli_mobius");
  const auto mc = write_config(m, R"({"lattice": {"topology": "circle", "sizes": [64], "involution": "trivial"},
    "model": {"name": "mobius"}, "tasks": ["holonomy", "classify"]})");
  CHECK(run_cli("run " + mc.string() + " --out " + m.string() + " --threads 2") == 0);
  CHECK(read_report(m).at("tasks").at("classify").at("torsion") == nlohmann::json::array({-1}));
}

TEST_CASE("exit codes") {
  const fs::path dir = fresh_dir("cli_codes");
  const auto empty = write_config(dir, R"({"lattice": {"topology": "circle", "sizes": [8]},
    "model": {"name": "mobius"}, "tasks": []})");
  CHECK(run_cli("run " + empty.string() + " --out " + dir.string()) == 2);
  CHECK(read_report(dir).at("status") == "error");
  CHECK(run_cli("run " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("--version") == 0);
  const auto gap = write_config(dir, R"({"lattice": {"topology": "torus2", "sizes": [8, 8]},
    "model": {"name": "qwz", "params": {"m": -2.0}}, "tasks": ["classify"]})");
  CHECK(run_cli("run " + gap.string() + " --out " + dir.string()) == 3);
  const auto warns = write_config(dir, R"({"lattice": {"topology": "torus2", "sizes": [8, 8]},
    "model": {"name": "qwz", "params": {"m": 1.0}}, "tasks": ["chern"], "tolerances": {"quantization": 1e-300}})");
  CHECK(run_cli("run " + warns.string() + " --out " + dir.string()) == 0);
  CHECK(run_cli("run " + warns.string() + " --out " + dir.string() + " --strict") == 7);
  const auto scaled = write_config(dir, R"({"lattice": {"topology": "circle", "sizes": [16]},
    "model": {"name": "mobius"}, "tasks": ["classify"]})");
  CHECK(run_cli("run " + scaled.string() + " --out " + dir.string() + " --resolution-scale 2") == 0);
  CHECK(read_report(dir).at("lattice").at("sizes") == nlohmann::json::array({32}));
}

}
