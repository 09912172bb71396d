// stamg: steady transport solves with sweep or angular-multigrid
// preconditioning. `solve` runs one configuration, `study` sweeps the
// reduced scatter order nr from 0 to N.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stamg/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"steady transport solver with angular multigrid"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;  // 0 keeps the config value
  bool dump_mesh = false;
  bool dump_flux = false;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "config file (key = value lines)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default .)");
    sub->add_option("--threads", threads, "override the threads key");
    sub->add_flag("--dump-mesh", dump_mesh, "write the angular mesh as text");
    sub->add_flag("--dump-scalar-flux", dump_flux,
                  "write per-element scalar flux averages");
  };
  CLI::App* solve = app.add_subcommand("solve", "run one configuration");
  CLI::App* study =
      app.add_subcommand("study", "sweep nr from 0 to N with the mg cycle");
  add_common(solve);
  add_common(study);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::ifstream in(config_path);
    std::ostringstream text;
    text << in.rdbuf();
    stamg::RunConfig cfg = stamg::parse_config(text.str());
    if (threads > 0) cfg.threads = threads;
    stamg::RunOptions opt;
    opt.out_dir = out_dir;
    opt.study = study->parsed();
    opt.dump_mesh = dump_mesh;
    opt.dump_flux = dump_flux;
    return stamg::run_harness(cfg, opt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
