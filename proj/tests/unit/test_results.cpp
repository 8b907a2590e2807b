#include <gtest/gtest.h>

#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "infonls/io/results.hpp"

namespace infonls::io {
namespace {

using infonls::testing::expect_error;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("infonls_results_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(Csv, EmptyRowsGiveHeaderOnly) {
  EXPECT_EQ(render_csv({}, "shift_result"), "eta,L,state_index,delta_E,method\n");
  EXPECT_EQ(render_csv({}, "spectrum"), "index,energy\n");
}

TEST(Csv, ShiftResultRow) {
  const std::vector<Row> rows{{0.5, 0.1, 1LL, -1.5625e-4, std::string("sho_closed_form")}};
  EXPECT_EQ(render_csv(rows, "shift_result"),
            "eta,L,state_index,delta_E,method\n0.5,0.1,1,-0.00015625,sho_closed_form\n");
}

TEST(Csv, RefusesNonFiniteNumbers) {
  for (double bad : {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()}) {
    expect_error(ErrorCode::NonFinite,
                 [&] { render_csv({{1LL, bad}}, "spectrum"); });
  }
}

TEST(Csv, RowWidthAndSchemaChecks) {
  expect_error(ErrorCode::InvalidArgument, [] { render_csv({{1LL}}, "spectrum"); });
  expect_error(ErrorCode::InvalidArgument, [] { render_csv({}, "no_such_schema"); });
  expect_error(ErrorCode::InvalidArgument, [] { schema_columns("nope"); });
}

TEST(Csv, QuotesAwkwardStrings) {
  const auto text = render_csv({{std::string("a,b"), std::string("say \"hi\""), 0.0}}, "eta_opt");
  EXPECT_EQ(text, "profile,eta_star,value\n\"a,b\",\"say \"\"hi\"\"\",0\n");
}

TEST(Csv, SchemasAreFixed) {
  EXPECT_EQ(schema_columns("evolution"), (std::vector<std::string>{"step", "time", "norm_drift", "energy"}));
  EXPECT_EQ(schema_columns("state"), (std::vector<std::string>{"x", "re", "im"}));
  EXPECT_EQ(schema_columns("exact_verify").size(), 9u);
  EXPECT_EQ(schema_columns("cotangent").size(), 11u);
  EXPECT_EQ(schema_columns("measures").size(), 6u);
}

TEST(FormatDoubleProperty, ShortestRoundTrip) {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 2000) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(std::memcmp(&back, &v, sizeof v), 0) << s;
    ++checked;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_double(1e-300), "1e-300");
}

TEST(EmitResults, WritesAndFailsCleanly) {
  const auto dir = scratch_dir("emit");
  emit_results({{0LL, 0.5}, {1LL, 1.5}}, "spectrum", dir / "spectrum.csv");
  EXPECT_EQ(slurp(dir / "spectrum.csv"), "index,energy\n0,0.5\n1,1.5\n");
  expect_error(ErrorCode::IoError,
               [&] { emit_results({}, "spectrum", dir / "missing" / "deeper" / "x.csv"); });
  std::filesystem::remove_all(dir);
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
  EXPECT_EQ(fnv1a_hex("a").size(), 16u);
}

TEST(Manifest, JsonFields) {
  const auto dir = scratch_dir("manifest");
  RunManifest m;
  m.command = "spectrum";
  m.config_echo = "format_version = 1\n";
  m.artifact_version = "1.0.0";
  m.wall_time_seconds = 0.25;
  m.outputs = {"spectrum.csv"};
  m.input_hash = "0123456789abcdef";
  write_manifest(m, dir / "manifest.json");
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(j["command"], "spectrum");
  EXPECT_EQ(j["status"], "ok");
  EXPECT_FALSE(j.contains("error"));
  EXPECT_EQ(j["outputs"].size(), 1u);
  EXPECT_EQ(j["input_hash"], "0123456789abcdef");
  EXPECT_EQ(j["config"], "format_version = 1\n");
  EXPECT_DOUBLE_EQ(j["wall_time_seconds"].get<double>(), 0.25);

  m.status = "failed";
  m.error = "NonFinite: boom";
  write_manifest(m, dir / "manifest.json");
  const auto k = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(k["status"], "failed");
  EXPECT_EQ(k["error"], "NonFinite: boom");
  expect_error(ErrorCode::IoError, [&] { write_manifest(m, dir / "no" / "manifest.json"); });
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace infonls::io
