#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "blcft/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"blcft: boundary free-field and Liouville correlator laboratory"};
  std::string config_path;
  app.add_option("--config", config_path, "experiment config file")->required();
  long long seed = -1;
  app.add_option("--seed", seed, "override [mc] seed");
  int workers = 0;
  app.add_option("--workers", workers, "override [mc] workers");
  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory for reports and tables");
  CLI11_PARSE(app, argc, argv);

  try {
    blcft::ExperimentConfig cfg = blcft::load_config(config_path);
    if (seed >= 0) cfg.mc.seed = static_cast<std::uint64_t>(seed);
    if (workers > 0) cfg.mc.workers = workers;

    auto t0 = std::chrono::steady_clock::now();
    blcft::RunOutcome outcome = blcft::run_experiment(cfg);
    outcome.report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    std::filesystem::create_directories(out_dir);
    std::filesystem::path dir(out_dir);
    {
      std::ofstream rep(dir / "report.json");
      rep << outcome.report.to_json();
    }
    for (const auto& [name, contents] : outcome.artifacts) {
      std::ofstream f(dir / name);
      f << contents;
    }
    std::cout << outcome.report.to_json();
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
