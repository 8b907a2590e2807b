#pragma once

// CSV tables with fixed per-schema headers, and the JSON run manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace infonls::io {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

using Cell = std::variant<double, long long, std::string>;
using Row = std::vector<Cell>;

/// Column names of a known schema; InvalidArgument for unknown ids.
///   shift_result  eta,L,state_index,delta_E,method
///   spectrum      index,energy
///   evolution     step,time,norm_drift,energy
///   state         x,re,im
///   eta_opt       profile,eta_star,value
///   exact_verify  label,kappa,eta,L,E_closed,E_rayleigh,lower_bound,max_residual,excluded_fraction
///   cotangent     kappa,eta,L,A,B,beta,E,max_residual,singular_points,node_points,sets_match
///   measures      L,kl,kl_quadrature_error,fisher,shannon,kl_fisher_ratio
const std::vector<std::string>& schema_columns(std::string_view schema_id);

/// CSV text for `rows` under `schema_id`. Rows must match the header width;
/// non-finite doubles raise NonFinite.
std::string render_csv(const std::vector<Row>& rows, std::string_view schema_id);

/// Writes render_csv to `path`; IoError if the file cannot be written.
void emit_results(const std::vector<Row>& rows, std::string_view schema_id,
                  const std::filesystem::path& path);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

struct RunManifest {
  std::string command;
  std::string config_echo;  // canonical rendering of the config
  std::string artifact_version;
  double wall_time_seconds = 0.0;
  std::vector<std::string> outputs;  // file names relative to the output dir
  std::string input_hash;
  std::string status = "ok";  // ok | failed
  std::string error;
};

/// Pretty-printed JSON; IoError on write failure.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace infonls::io
