#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "infonls/io/config.hpp"

namespace infonls::io {
namespace {

using infonls::testing::expect_error;

constexpr const char* kMinimalEvolve = R"(format_version = 1
command = evolve

[grid]
x_min = -5
dx = 0.0125
n_points = 800
boundary = periodic

[state]
kind = gaussian

[evolution]
dt = 1e-5
n_steps = 10
)";

std::string with_nonlinearity(const std::string& eta, const std::string& L, const std::string& dx) {
  return "format_version = 1\ncommand = shift-sweep\n[grid]\nx_min = -6\ndx = " + dx +
         "\nn_points = 400\n[nonlinearity]\neta = " + eta + "\nL = " + L +
         "\n[potential]\nkind = harmonic\n[states]\nindices = 0\n";
}

void expect_message(ErrorCode code, const std::string& text, const std::string& fragment) {
  try {
    parse_config(text);
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(ParseConfig, MinimalEvolveFillsDefaults) {
  const auto c = parse_config(kMinimalEvolve);
  EXPECT_EQ(c.format_version, kFormatVersion);
  EXPECT_EQ(c.command, Command::evolve);
  EXPECT_EQ(c.constants.hbar, 1.0);
  EXPECT_EQ(c.constants.mass, 1.0);
  ASSERT_TRUE(c.grid);
  EXPECT_EQ(c.grid->n_points, 800u);
  EXPECT_EQ(c.grid->boundary, Boundary::periodic);
  ASSERT_TRUE(c.state);
  EXPECT_EQ(c.state->width, 1.0);
  EXPECT_EQ(c.evolution->record_every, 1u);
  EXPECT_FALSE(c.nonlinearity);
  EXPECT_EQ(c.output_dir, "out");
}

TEST(ParseConfig, EtaOutOfRange) {
  expect_message(ErrorCode::ValidationError, with_nonlinearity("1.5", "0.1", "0.01"), "(0, 1]");
  expect_message(ErrorCode::ValidationError, with_nonlinearity("0", "0.1", "0.01"), "(0, 1]");
  expect_message(ErrorCode::ValidationError, with_nonlinearity("0.5", "-0.1", "0.01"), "positive");
}

TEST(ParseConfig, IncommensurateShiftNamesTheTriple) {
  // eta L / dx = 0.73 * 0.1 / 0.01 = 7.3
  const auto text = with_nonlinearity("0.73", "0.1", "0.01");
  expect_message(ErrorCode::ValidationError, text, "incommensurate shift");
  expect_message(ErrorCode::ValidationError, text, "eta = 0.73");
  expect_message(ErrorCode::ValidationError, text, "eta*L/dx = 7.3");
}

TEST(ParseConfig, SyntaxErrorsCarryLineNumbers) {
  expect_message(ErrorCode::ParseError, "format_version = 1\ncommand = evolve\nnonsense\n", "line 3");
  expect_message(ErrorCode::ParseError, "format_version = 1\n[grid\n", "line 2");
  expect_message(ErrorCode::ParseError, "format_version = 1\ncommand = evolve\n[bogus]\n", "unknown section");
  expect_message(ErrorCode::ParseError, "format_version = 1\nformat_version = 1\n", "duplicate key");
  expect_message(ErrorCode::ParseError, "format_version = 1\ncommand = evolve\n[grid]\n[grid]\n",
                 "duplicate section");
  expect_message(ErrorCode::ParseError, "format_version = 1\ncommand = evolve\ncolour = red\n",
                 "unknown key");
  expect_message(ErrorCode::ParseError, "format_version = 1\ncommand = fly\n", "must be one of");
  expect_message(ErrorCode::ParseError, "format_version = 1\ncommand = evolve\n[grid]\nx_min = abc\n",
                 "finite number");
  expect_message(ErrorCode::ParseError, "format_version = 1\ncommand = evolve\n[grid]\nx_min = nan\n",
                 "finite number");
  expect_message(ErrorCode::ParseError, "format_version = 1\ncommand = evolve\nkey =\n", "missing value");
  expect_message(ErrorCode::ParseError, "command = evolve\n", "format_version");
  expect_message(ErrorCode::ParseError, "format_version = 2\ncommand = evolve\n", "unsupported");
  expect_message(ErrorCode::ParseError, "format_version = 1\n", "command");
}

TEST(ParseConfig, CommentsAndWhitespace) {
  const std::string text = std::string("# leading comment\n\n   ") + kMinimalEvolve +
                           "\n[output]\n  dir =  somewhere/else   \n# trailing\n";
  const auto c = parse_config(text);
  EXPECT_EQ(c.output_dir, "somewhere/else");
}

TEST(ParseConfig, MissingBlocksForCommand) {
  expect_message(ErrorCode::ValidationError, "format_version = 1\ncommand = spectrum\n", "[grid]");
  expect_message(ErrorCode::ValidationError,
                 "format_version = 1\ncommand = spectrum\n[grid]\nx_min = 0\ndx = 0.1\nn_points = 64\n",
                 "[potential]");
  expect_message(ErrorCode::ValidationError, "format_version = 1\ncommand = eta-opt\n", "[eta_opt]");
  expect_message(ErrorCode::ValidationError,
                 "format_version = 1\ncommand = exact-verify\n[grid]\nx_min = 0\ndx = 0.01\n"
                 "n_points = 1200\n[exact]\nkappa = 1\n",
                 "[nonlinearity]");
}

TEST(ParseConfig, RangeChecks) {
  const std::string base = "format_version = 1\ncommand = spectrum\n[potential]\nkind = zero\n"
                           "[states]\nindices = 0\n[grid]\nx_min = 0\n";
  expect_message(ErrorCode::ValidationError, base + "dx = 0\nn_points = 64\n", "dx");
  expect_message(ErrorCode::ValidationError, base + "dx = 0.1\nn_points = 4\n", "n_points");
  expect_message(ErrorCode::ParseError, base + "dx = 0.1\nn_points = -4\n", "n_points");
  expect_message(ErrorCode::ValidationError,
                 "format_version = 1\ncommand = eta-opt\n[eta_opt]\nL_over_a = -1\n", "L_over_a");
  expect_message(ErrorCode::ValidationError,
                 "format_version = 1\ncommand = eta-opt\n[constants]\nhbar = 0\n[eta_opt]\n", "hbar");
}

TEST(ParseConfig, ExactProfiles) {
  const auto c = parse_config(
      "format_version = 1\ncommand = exact-verify\n[grid]\nx_min = 0\ndx = 0.01\nn_points = 1200\n"
      "[nonlinearity]\neta = 0.8\nL = 0.1\n[exact]\nkappa = 1\nalpha = 1:1, 2:0.5\nalpha_alt = 3:-0.2\n");
  ASSERT_TRUE(c.exact);
  EXPECT_EQ(c.exact->alpha, (PeriodicProfile{{{1, 1.0}, {2, 0.5}}}));
  ASSERT_TRUE(c.exact->alpha_alt);
  EXPECT_EQ(*c.exact->alpha_alt, (PeriodicProfile{{{3, -0.2}}}));
  expect_message(ErrorCode::ValidationError,
                 "format_version = 1\ncommand = exact-verify\n[grid]\nx_min = 0\ndx = 0.01\n"
                 "n_points = 1200\n[nonlinearity]\neta = 1\nL = 0.1\n[exact]\n",
                 "eta < 1");
  expect_message(ErrorCode::ParseError,
                 "format_version = 1\ncommand = exact-verify\n[exact]\nalpha = 0:1\n", "harmonic index");
}

TEST(ParseConfig, PlaneWaveMustFitPeriodicBox) {
  const std::string good = std::string("format_version = 1\ncommand = evolve\n[grid]\nx_min = -5\n"
                                       "dx = 0.0125\nn_points = 800\nboundary = periodic\n"
                                       "[state]\nkind = plane_wave\nwavenumber = ") +
                           "1.8849555921538759" + "\n[evolution]\ndt = 1e-5\nn_steps = 10\n";
  EXPECT_NO_THROW(parse_config(good));
  std::string bad = good;
  bad.replace(bad.find("1.8849555921538759"), 18, "2");
  expect_message(ErrorCode::ValidationError, bad, "does not fit the periodic box");
}

TEST(ParseConfig, EvolveTakesOnePair) {
  const std::string text = std::string(kMinimalEvolve) + "[nonlinearity]\neta = 0.5, 0.25\nL = 0.1\n";
  expect_message(ErrorCode::ValidationError, text, "exactly one eta and one L");
}

TEST(LoadConfig, UnreadableFile) {
  expect_error(ErrorCode::IoError, [] { load_config("/nonexistent/definitely/missing.cfg"); });
}

TEST(CommandNames, RoundTrip) {
  EXPECT_EQ(to_string(Command::shift_sweep), "shift-sweep");
  EXPECT_EQ(to_string(Command::eta_opt), "eta-opt");
  EXPECT_EQ(to_string(Command::exact_verify), "exact-verify");
  EXPECT_EQ(to_string(Command::evolve), "evolve");
  EXPECT_EQ(to_string(Command::measures), "measures");
}

TEST(ConfigRoundTripProperty, ShippedConfigs) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(INFONLS_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    const auto c = load_config(entry.path().string());
    EXPECT_EQ(parse_config(render_config(c)), c) << entry.path();
    EXPECT_EQ(render_config(parse_config(render_config(c))), render_config(c));
    ++count;
  }
  EXPECT_GE(count, 7u);
}

TEST(ConfigRoundTripProperty, RandomizedConfigs) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ExperimentConfig c;
    c.command = Command::shift_sweep;
    c.constants = {0.5 + u(rng), 0.5 + u(rng)};
    const double dx = 1e-3 * (1.0 + std::floor(10.0 * u(rng)));
    c.grid = GridConfig{-10.0 * u(rng), dx, 64 + static_cast<std::size_t>(1000 * u(rng)),
                        u(rng) < 0.5 ? Boundary::periodic : Boundary::dirichlet};
    NonlinearityConfig n;
    const double eta = 0.125 * (1 + static_cast<int>(7 * u(rng)));
    n.eta.push_back(eta);
    for (int i = 0; i < 3; ++i) {
      const int steps = 1 + static_cast<int>(20 * u(rng));
      n.L.push_back(steps * dx / eta);
    }
    n.policy = u(rng) < 0.5 ? ShiftPolicy::floor : ShiftPolicy::geometric;
    c.nonlinearity = n;
    c.potential = PotentialConfig{PotentialKind::quartic, u(rng), u(rng), 0.1 + u(rng)};
    c.states = StatesConfig{{0, 1 + static_cast<int>(5 * u(rng))}};
    c.exact = ExactConfig{0.1 + u(rng), PeriodicProfile{{{1, u(rng) + 0.1}, {2, -u(rng)}}},
                          PeriodicProfile{{{3, 1.0 / 3.0}}}, 3.0};
    c.output_dir = "out/run_" + std::to_string(trial);
    ASSERT_NO_THROW(validate_config(c)) << render_config(c);
    EXPECT_EQ(parse_config(render_config(c)), c) << render_config(c);
  }
}

TEST(ValidateConfig, DirectObjects) {
  ExperimentConfig c;
  c.command = Command::eta_opt;
  c.eta_opt = EtaOptConfig{};
  EXPECT_NO_THROW(validate_config(c));
  c.format_version = 3;
  expect_error(ErrorCode::ValidationError, [&] { validate_config(c); });
}

}  // namespace
}  // namespace infonls::io
