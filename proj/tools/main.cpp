// infonls <command> --config <path> [--out <dir>] [--threads N]
//
// Exit codes: 0 success, 1 output error, 2 configuration error,
// 3 numerical failure.

#include <CLI11.hpp>

#include <iostream>
#include <thread>

#include "infonls/error.hpp"
#include "infonls/io/config.hpp"
#include "infonls/io/experiment.hpp"

namespace {

constexpr int kExitOutput = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(infonls::ErrorCode code) {
  using infonls::ErrorCode;
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError: return kExitConfig;
    case ErrorCode::IoError: return kExitOutput;
    default: return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized information-theoretic nonlinear Schrodinger toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"evolve", "RK4 time evolution of a configured initial state"},
      {"spectrum", "lowest eigenvalues of the linear Hamiltonian"},
      {"shift-sweep", "first-order energy shifts over eta, L and states"},
      {"eta-opt", "minimize a closed-form shift profile over eta"},
      {"exact-verify", "build exact half-line states and check their residuals"},
      {"cotangent", "linear cotangent-potential cross-check of the exact state"},
      {"measures", "KL, Fisher and Shannon functionals of a state density"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--threads", threads, "worker threads for sweeps")
        ->check(CLI::Range(1u, std::max(1u, 4 * std::thread::hardware_concurrency())));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  infonls::io::ExperimentConfig config;
  try {
    config = infonls::io::load_config(config_path);
  } catch (const infonls::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (command != infonls::io::to_string(config.command)) {
    std::cerr << "config error: file describes '" << infonls::io::to_string(config.command)
              << "' but '" << command << "' was requested\n";
    return kExitConfig;
  }

  infonls::io::RunOptions options;
  options.threads = threads;
  if (!out_dir.empty()) options.output_dir = out_dir;
  try {
    const auto manifest = infonls::io::run_experiment(config, options);
    std::cout << "wrote";
    for (const auto& f : manifest.outputs) std::cout << " " << f;
    std::cout << " manifest.json (" << manifest.wall_time_seconds << " s)\n";
  } catch (const infonls::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
