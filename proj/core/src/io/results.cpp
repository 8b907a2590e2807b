#include "infonls/io/results.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "infonls/error.hpp"

namespace infonls::io {

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buffer.data(), ptr);
}

const std::vector<std::string>& schema_columns(std::string_view schema_id) {
  static const std::map<std::string, std::vector<std::string>, std::less<>> schemas{
      {"shift_result", {"eta", "L", "state_index", "delta_E", "method"}},
      {"spectrum", {"index", "energy"}},
      {"evolution", {"step", "time", "norm_drift", "energy"}},
      {"state", {"x", "re", "im"}},
      {"eta_opt", {"profile", "eta_star", "value"}},
      {"exact_verify",
       {"label", "kappa", "eta", "L", "E_closed", "E_rayleigh", "lower_bound", "max_residual",
        "excluded_fraction"}},
      {"cotangent",
       {"kappa", "eta", "L", "A", "B", "beta", "E", "max_residual", "singular_points",
        "node_points", "sets_match"}},
      {"measures", {"L", "kl", "kl_quadrature_error", "fisher", "shannon", "kl_fisher_ratio"}},
  };
  const auto it = schemas.find(schema_id);
  if (it == schemas.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown schema '" + std::string(schema_id) + "'");
  }
  return it->second;
}

namespace {

std::string render_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) throw Error(ErrorCode::NonFinite, "refusing to write a non-finite value");
    return format_double(*d);
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n\r") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    return quoted + "\"";
  }
  return s;
}

}  // namespace

std::string render_csv(const std::vector<Row>& rows, std::string_view schema_id) {
  const auto& columns = schema_columns(schema_id);
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += '\n';
  for (const Row& row : rows) {
    if (row.size() != columns.size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "row width " + std::to_string(row.size()) + " does not match schema '" +
                      std::string(schema_id) + "'");
    }
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + render_cell(row[c]);
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace

void emit_results(const std::vector<Row>& rows, std::string_view schema_id,
                  const std::filesystem::path& path) {
  write_file(path, render_csv(rows, schema_id));
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::array<char, 17> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + 16, hash, 16);
  std::string hex(buffer.data(), ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["artifact"] = "infonls";
  j["artifact_version"] = m.artifact_version;
  j["command"] = m.command;
  j["status"] = m.status;
  if (!m.error.empty()) j["error"] = m.error;
  j["input_hash"] = m.input_hash;
  j["wall_time_seconds"] = m.wall_time_seconds;
  j["outputs"] = m.outputs;
  j["config"] = m.config_echo;
  write_file(path, j.dump(2) + "\n");
}

}  // namespace infonls::io
