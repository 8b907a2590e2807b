#pragma once

// Runs a parsed experiment: builds the inputs, dispatches to the kernels,
// writes CSV tables and finally the manifest.

#include <filesystem>
#include <optional>
#include <vector>

#include "infonls/dynamics.hpp"
#include "infonls/io/config.hpp"
#include "infonls/io/results.hpp"
#include "infonls/spectra.hpp"

namespace infonls::io {

/// An evolve run whose norm drift passes this bound is reported as failed.
inline constexpr double kDivergedNormDrift = 1e-3;

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;  // overrides [output] dir
  unsigned threads = 1;
};

Potential make_potential(const ExperimentConfig& config, const Grid& grid);

/// The [state] block realized on the configured grid, normalized.
Wavefunction make_initial_state(const ExperimentConfig& config);

/// One result per (eta, L, state) triple, sorted by eta, then L, then state.
/// Points are evaluated on `threads` workers and merged in that fixed order.
std::vector<ShiftResult> compute_shift_sweep(const ExperimentConfig& config, unsigned threads);

/// Executes config.command. Tables land in the output directory, then
/// manifest.json. A kernel error still writes the manifest, with status
/// "failed" and the outputs produced so far, before it is rethrown.
RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// run_experiment for a shift-sweep config.
RunManifest run_sweep(const ExperimentConfig& config, const RunOptions& options = {});

/// Hash of the canonical config with the output directory left out, so
/// that identical experiments hash alike wherever they are written.
std::string input_hash(const ExperimentConfig& config);

}  // namespace infonls::io
