#include "infonls/io/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "infonls/error.hpp"
#include "infonls/exact.hpp"
#include "infonls/measures.hpp"

#ifndef INFONLS_VERSION
#define INFONLS_VERSION "0.0.0"
#endif

namespace infonls::io {

namespace {

// Calls task(i) for i in [0, count) on up to `threads` workers. The first
// failure (lowest index) is rethrown after all workers finish.
template <typename Task>
void parallel_for(std::size_t count, unsigned threads, Task task) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::mutex guard;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

NonlinearParams single_params(const ExperimentConfig& c) {
  if (!c.nonlinearity) return NonlinearParams::linear(1.0, c.constants);
  return NonlinearParams::create(c.nonlinearity->L.at(0), c.nonlinearity->eta.at(0), c.constants);
}

ShiftPolicy policy_of(const ExperimentConfig& c) {
  return c.nonlinearity ? c.nonlinearity->policy : ShiftPolicy::floor;
}

template <typename T>
std::vector<T> sorted(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v;
}

class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, RunManifest& manifest)
      : dir_(std::move(dir)), manifest_(manifest) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir_.string() + "': " + ec.message());
  }

  void table(const std::vector<Row>& rows, std::string_view schema, const std::string& name) {
    emit_results(rows, schema, dir_ / name);
    manifest_.outputs.push_back(name);
  }

  std::filesystem::path manifest_path() const { return dir_ / "manifest.json"; }

 private:
  std::filesystem::path dir_;
  RunManifest& manifest_;
};

std::vector<Row> state_rows(const Wavefunction& psi) {
  std::vector<Row> rows;
  rows.reserve(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    rows.push_back({psi.grid().x(k), psi[k].real(), psi[k].imag()});
  }
  return rows;
}

void run_evolve(const ExperimentConfig& c, OutputSink& out) {
  const Wavefunction psi0 = make_initial_state(c);
  const Potential V = make_potential(c, psi0.grid());
  const NonlinearParams params = single_params(c);
  const EvolutionReport report =
      evolve(psi0, V, params, c.constants, c.evolution->dt, c.evolution->n_steps, policy_of(c));
  std::vector<Row> rows;
  const std::size_t last = report.times.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    if (i % c.evolution->record_every != 0 && i != last) continue;
    rows.push_back({static_cast<long long>(i), report.times[i], report.norm_drift[i],
                    report.energy_trace[i]});
  }
  out.table(rows, "evolution", "evolution.csv");
  out.table(state_rows(report.final_state), "state", "final_state.csv");
  if (report.failure) throw Error(ErrorCode::NonFinite, *report.failure);
  // A finite but runaway trace is still a failed run; the tables above are
  // kept so the divergence can be inspected.
  const double worst = *std::max_element(report.norm_drift.begin(), report.norm_drift.end());
  if (worst > kDivergedNormDrift) {
    throw Error(ErrorCode::ConvergenceFailure,
                "norm drift " + format_double(worst) + " exceeds " +
                    format_double(kDivergedNormDrift) + "; the evolution diverged");
  }
}

void run_spectrum(const ExperimentConfig& c, OutputSink& out) {
  const Grid grid = c.grid->build();
  const auto indices = sorted(c.states->indices);
  const EigenSolution sol = solve_linear_spectrum(make_potential(c, grid), c.constants,
                                                  static_cast<std::size_t>(indices.back()) + 1);
  std::vector<Row> rows;
  for (int i : indices) rows.push_back({static_cast<long long>(i), sol.energies[static_cast<std::size_t>(i)]});
  out.table(rows, "spectrum", "spectrum.csv");
}

void run_shift_sweep(const ExperimentConfig& c, OutputSink& out, unsigned threads) {
  std::vector<Row> rows;
  for (const ShiftResult& r : compute_shift_sweep(c, threads)) {
    rows.push_back({r.eta, r.L, static_cast<long long>(r.state_index), r.delta_E,
                    std::string(to_string(r.method))});
  }
  out.table(rows, "shift_result", "shift_result.csv");
}

void run_eta_opt(const ExperimentConfig& c, OutputSink& out) {
  const EtaOptConfig& e = *c.eta_opt;
  EtaMinimum m;
  if (e.profile == EtaProfile::node) {
    m = minimize_over_eta(node_shift_eta_profile);
  } else {
    m = minimize_over_eta([&](double eta) { return sho_ground_shift_closed(eta, e.L_over_a); });
  }
  out.table({{std::string(e.profile == EtaProfile::node ? "node" : "sho_ground"), m.eta_star, m.value}},
            "eta_opt", "eta_opt.csv");
}

void run_exact_verify(const ExperimentConfig& c, OutputSink& out) {
  const Grid grid = c.grid->build();
  const NonlinearParams params = single_params(c);
  const ExactConfig& e = *c.exact;
  const double E = exact_energy(e.kappa, params);
  const double lower = exact_energy_bounds(params).lower;
  const double radius = e.exclusion_radius_dx * grid.dx();
  std::vector<std::pair<std::string, PeriodicProfile>> alphas{{"alpha", e.alpha}};
  if (e.alpha_alt) alphas.emplace_back("alpha_alt", *e.alpha_alt);
  std::vector<Row> rows;
  for (const auto& [label, alpha] : alphas) {
    const ExactState state = build_exact_state({e.kappa, alpha, params}, grid);
    const ResidualReport r = nonlinear_residual(state.psi, E, params, c.constants, radius);
    const double rayleigh = residual_energy(state.psi, params, c.constants, radius);
    rows.push_back({label, e.kappa, params.eta(), params.L(), E, rayleigh, lower, r.max_residual,
                    r.excluded_fraction});
  }
  out.table(rows, "exact_verify", "exact_verify.csv");
}

void run_cotangent(const ExperimentConfig& c, OutputSink& out) {
  const Grid grid = c.grid->build();
  const NonlinearParams params = single_params(c);
  const ExactConfig& e = *c.exact;
  const double E = exact_energy(e.kappa, params);
  const CotangentPotentialParams cot = cotangent_params(e.kappa, params, c.constants);
  const ExactState state = build_exact_state({e.kappa, PeriodicProfile::sine(), params}, grid);
  const double residual = linear_residual_cotangent(state.psi, E, cot, c.constants,
                                                    e.exclusion_radius_dx * grid.dx());
  const Potential V = cotangent_potential(cot, grid);
  long long singular = 0;
  long long nodes = 0;
  bool match = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const bool node = state.psi[k] == Complex{};
    singular += V.singular_mask[k] ? 1 : 0;
    nodes += node ? 1 : 0;
    match = match && (node == V.singular_mask[k]);
  }
  out.table({{e.kappa, params.eta(), params.L(), cot.A, cot.B, cot.beta, E, residual, singular,
              nodes, static_cast<long long>(match)}},
            "cotangent", "cotangent.csv");
}

void run_measures(const ExperimentConfig& c, OutputSink& out) {
  const Density p = density(make_initial_state(c));
  const FunctionalValue fisher = fisher_information(p);
  const FunctionalValue shannon = shannon_entropy(p);
  std::vector<Row> rows;
  for (double L : sorted(c.nonlinearity->L)) {
    const FunctionalValue kl = kl_divergence_shifted(p, L, policy_of(c));
    rows.push_back({L, kl.value, kl.quadrature_error_estimate, fisher.value, shannon.value,
                    2.0 * kl.value / (L * L) / fisher.value});
  }
  out.table(rows, "measures", "measures.csv");
}

}  // namespace

Potential make_potential(const ExperimentConfig& c, const Grid& grid) {
  if (!c.potential) return Potential::zero(grid);
  switch (c.potential->kind) {
    case PotentialKind::zero: return Potential::zero(grid);
    case PotentialKind::constant: return Potential::constant(grid, c.potential->value);
    case PotentialKind::harmonic: return Potential::harmonic(grid, c.constants, c.potential->omega);
    case PotentialKind::quartic: return Potential::quartic(grid, c.potential->strength);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown potential kind");
}

Wavefunction make_initial_state(const ExperimentConfig& c) {
  if (!c.grid || !c.state) throw Error(ErrorCode::ValidationError, "initial state needs [grid] and [state]");
  const Grid grid = c.grid->build();
  const StateConfig& s = *c.state;
  switch (s.kind) {
    case StateKind::gaussian:
    case StateKind::plane_wave: {
      std::vector<Complex> v(grid.size());
      for (std::size_t k = 0; k < v.size(); ++k) {
        const double x = grid.x(k);
        const double envelope =
            s.kind == StateKind::gaussian
                ? std::exp(-(x - s.center) * (x - s.center) / (2.0 * s.width * s.width))
                : 1.0;
        v[k] = envelope * std::polar(1.0, s.wavenumber * x);
      }
      return normalize(Wavefunction(grid, std::move(v)));
    }
    case StateKind::exact: {
      const ExactSolutionSpec spec{c.exact->kappa, c.exact->alpha, single_params(c)};
      return build_exact_state(spec, grid).psi;
    }
    case StateKind::eigenstate: {
      const EigenSolution sol = solve_linear_spectrum(make_potential(c, grid), c.constants,
                                                      static_cast<std::size_t>(s.index) + 1);
      return sol.states.at(static_cast<std::size_t>(s.index));
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown state kind");
}

std::vector<ShiftResult> compute_shift_sweep(const ExperimentConfig& c, unsigned threads) {
  if (!c.grid || !c.states || !c.nonlinearity) {
    throw Error(ErrorCode::ValidationError, "shift sweep needs [grid], [states] and [nonlinearity]");
  }
  const Grid grid = c.grid->build();
  const auto etas = sorted(c.nonlinearity->eta);
  const auto lengths = sorted(c.nonlinearity->L);
  const auto indices = sorted(c.states->indices);
  const EigenSolution sol = solve_linear_spectrum(make_potential(c, grid), c.constants,
                                                  static_cast<std::size_t>(indices.back()) + 1);
  const std::size_t per_eta = lengths.size() * indices.size();
  std::vector<ShiftResult> results(etas.size() * per_eta);
  parallel_for(results.size(), threads, [&](std::size_t i) {
    const double eta = etas[i / per_eta];
    const double L = lengths[(i % per_eta) / indices.size()];
    const int state = indices[i % indices.size()];
    const NonlinearParams params = NonlinearParams::create(L, eta, c.constants);
    results[i] = first_order_shift_numeric(sol.states[static_cast<std::size_t>(state)], params,
                                           c.constants, c.nonlinearity->policy, state);
  });
  return results;
}

std::string input_hash(const ExperimentConfig& config) {
  ExperimentConfig copy = config;
  copy.output_dir.clear();
  return fnv1a_hex(render_config(copy));
}

RunManifest run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.command = std::string(to_string(config.command));
  manifest.config_echo = render_config(config);
  manifest.artifact_version = INFONLS_VERSION;
  manifest.input_hash = input_hash(config);
  OutputSink sink(options.output_dir.value_or(config.output_dir), manifest);

  auto finish = [&] {
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(manifest, sink.manifest_path());
  };
  try {
    switch (config.command) {
      case Command::evolve: run_evolve(config, sink); break;
      case Command::spectrum: run_spectrum(config, sink); break;
      case Command::shift_sweep: run_shift_sweep(config, sink, options.threads); break;
      case Command::eta_opt: run_eta_opt(config, sink); break;
      case Command::exact_verify: run_exact_verify(config, sink); break;
      case Command::cotangent: run_cotangent(config, sink); break;
      case Command::measures: run_measures(config, sink); break;
    }
  } catch (const std::exception& e) {
    manifest.status = "failed";
    manifest.error = e.what();
    finish();
    throw;
  }
  finish();
  return manifest;
}

RunManifest run_sweep(const ExperimentConfig& config, const RunOptions& options) {
  if (config.command != Command::shift_sweep) {
    throw Error(ErrorCode::ValidationError, "run_sweep needs command = shift-sweep");
  }
  return run_experiment(config, options);
}

}  // namespace infonls::io
