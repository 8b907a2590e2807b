#pragma once

// Experiment definitions in a sectioned key = value text format. The grammar
// is documented in docs/config.md.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infonls/exact.hpp"
#include "infonls/grid.hpp"

namespace infonls::io {

inline constexpr int kFormatVersion = 1;

enum class Command { evolve, spectrum, shift_sweep, eta_opt, exact_verify, cotangent, measures };

std::string_view to_string(Command command);

struct GridConfig {
  double x_min = 0.0;
  double dx = 0.0;
  std::size_t n_points = 0;
  Boundary boundary = Boundary::dirichlet;

  Grid build() const { return Grid(x_min, dx, n_points, boundary); }
  bool operator==(const GridConfig&) const = default;
};

struct NonlinearityConfig {
  std::vector<double> eta;
  std::vector<double> L;
  ShiftPolicy policy = ShiftPolicy::floor;
  bool operator==(const NonlinearityConfig&) const = default;
};

enum class PotentialKind { zero, constant, harmonic, quartic };

struct PotentialConfig {
  PotentialKind kind = PotentialKind::zero;
  double value = 0.0;     // constant
  double omega = 1.0;     // harmonic
  double strength = 1.0;  // quartic
  bool operator==(const PotentialConfig&) const = default;
};

struct StatesConfig {
  std::vector<int> indices;
  bool operator==(const StatesConfig&) const = default;
};

enum class StateKind { gaussian, plane_wave, exact, eigenstate };

struct StateConfig {
  StateKind kind = StateKind::gaussian;
  double center = 0.0;
  double width = 1.0;
  double wavenumber = 0.0;
  int index = 0;
  bool operator==(const StateConfig&) const = default;
};

struct EvolutionConfig {
  double dt = 0.0;
  std::size_t n_steps = 0;
  std::size_t record_every = 1;
  bool operator==(const EvolutionConfig&) const = default;
};

struct ExactConfig {
  double kappa = 1.0;
  PeriodicProfile alpha = PeriodicProfile::sine();
  std::optional<PeriodicProfile> alpha_alt;
  double exclusion_radius_dx = 3.0;
  bool operator==(const ExactConfig&) const = default;
};

enum class EtaProfile { node, sho_ground };

struct EtaOptConfig {
  EtaProfile profile = EtaProfile::node;
  double L_over_a = 1.0;
  bool operator==(const EtaOptConfig&) const = default;
};

struct ExperimentConfig {
  int format_version = kFormatVersion;
  Command command = Command::evolve;
  PhysConstants constants;
  std::optional<GridConfig> grid;
  std::optional<NonlinearityConfig> nonlinearity;
  std::optional<PotentialConfig> potential;
  std::optional<StatesConfig> states;
  std::optional<StateConfig> state;
  std::optional<EvolutionConfig> evolution;
  std::optional<ExactConfig> exact;
  std::optional<EtaOptConfig> eta_opt;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates. Syntax problems raise ParseError with the line
/// number; semantic ones (ranges, missing blocks, incommensurate shifts)
/// raise ValidationError.
ExperimentConfig parse_config(std::string_view text);

/// Reads a file and parses it; IoError if unreadable.
ExperimentConfig load_config(const std::string& path);

/// Throws ValidationError on the first violated rule.
void validate_config(const ExperimentConfig& config);

/// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

}  // namespace infonls::io
