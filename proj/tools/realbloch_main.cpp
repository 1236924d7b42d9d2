#include "realbloch/realbloch.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Real Bloch bundle invariants"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run the tasks of a JSON config");
  std::string config_path;
  std::string out_dir;
  int threads = 1;
  bool strict = false;
  double scale = 1.0;
  run->add_option("config", config_path, "config file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory (overrides output_dir)");
  run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--strict", strict, "treat warnings as failures (exit 7)");
  run->add_option("--resolution-scale", scale, "multiply every lattice size")
      ->check(CLI::PositiveNumber);
  app.add_flag_callback("--version", [] {
    std::cout << "realbloch " << rb_version() << '\n';
    std::exit(0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : RB_ERR_CONFIG;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read " << config_path << '\n';
    return RB_ERR_CONFIG;
  }
  std::ostringstream text;
  text << in.rdbuf();

  const int status = rb_run(text.str().c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), threads,
                            strict ? 1 : 0, scale, nullptr);
  if (status != RB_OK) std::cerr << "error: " << rb_last_error() << '\n';
  return status;
}
