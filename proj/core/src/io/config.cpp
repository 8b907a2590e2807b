#include "infonls/io/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "infonls/error.hpp"
#include "infonls/io/results.hpp"

namespace infonls::io {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::evolve, "evolve"},
    {Command::spectrum, "spectrum"},
    {Command::shift_sweep, "shift-sweep"},
    {Command::eta_opt, "eta-opt"},
    {Command::exact_verify, "exact-verify"},
    {Command::cotangent, "cotangent"},
    {Command::measures, "measures"},
}};

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<Boundary, 2> kBoundaries{{{Boundary::periodic, "periodic"},
                                               {Boundary::dirichlet, "dirichlet"}}};
constexpr NameTable<ShiftPolicy, 3> kPolicies{{{ShiftPolicy::periodic, "periodic"},
                                                {ShiftPolicy::floor, "floor"},
                                                {ShiftPolicy::geometric, "geometric"}}};
constexpr NameTable<PotentialKind, 4> kPotentials{{{PotentialKind::zero, "zero"},
                                                   {PotentialKind::constant, "constant"},
                                                   {PotentialKind::harmonic, "harmonic"},
                                                   {PotentialKind::quartic, "quartic"}}};
constexpr NameTable<StateKind, 4> kStates{{{StateKind::gaussian, "gaussian"},
                                           {StateKind::plane_wave, "plane_wave"},
                                           {StateKind::exact, "exact"},
                                           {StateKind::eigenstate, "eigenstate"}}};
constexpr NameTable<EtaProfile, 2> kProfiles{{{EtaProfile::node, "node"},
                                              {EtaProfile::sho_ground, "sho_ground"}}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ValidationError, what); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry, std::less<>>;

class Reader {
 public:
  explicit Reader(std::string_view text) { scan(text); }

  bool has_section(std::string_view name) const { return sections_.count(name) > 0; }
  int section_line(std::string_view name) const { return section_lines_.find(name)->second; }

  const Entry* find(std::string_view section, std::string_view key) {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.find(key);
    if (e == s->second.end()) return nullptr;
    e->second.used = true;
    return &e->second;
  }

  // Every key must have been consumed by some field.
  void reject_unknown() const {
    for (const auto& [section, entries] : sections_) {
      for (const auto& [key, entry] : entries) {
        if (!entry.used) {
          parse_error(entry.line, "unknown key '" + key + "'" +
                                      (section.empty() ? "" : " in [" + section + "]"));
        }
      }
    }
  }

 private:
  void scan(std::string_view text) {
    static const std::array<std::string_view, 11> known{
        "", "constants", "grid", "nonlinearity", "potential", "states",
        "state", "evolution", "exact", "eta_opt", "output"};
    std::string current;
    sections_[current];
    section_lines_[current] = 0;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto end = text.find('\n', pos);
      std::string_view line = text.substr(pos, end == std::string_view::npos ? end : end - pos);
      pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') parse_error(line_no, "unterminated section header");
        current = std::string(trim(line.substr(1, line.size() - 2)));
        if (current.empty()) parse_error(line_no, "empty section name");
        if (std::find(known.begin(), known.end(), current) == known.end()) {
          parse_error(line_no, "unknown section [" + current + "]");
        }
        if (sections_.count(current) > 0) parse_error(line_no, "duplicate section [" + current + "]");
        sections_[current];
        section_lines_[current] = line_no;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) parse_error(line_no, "expected 'key = value'");
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty()) parse_error(line_no, "missing key before '='");
      if (value.empty()) parse_error(line_no, "missing value for '" + key + "'");
      auto& section = sections_[current];
      if (section.count(key) > 0) parse_error(line_no, "duplicate key '" + key + "'");
      section[key] = Entry{value, line_no, false};
    }
  }

  std::map<std::string, Section, std::less<>> sections_;
  std::map<std::string, int, std::less<>> section_lines_;
};

double to_double(std::string_view token, int line, std::string_view key) {
  double v = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    parse_error(line, "'" + std::string(key) + "' expects a finite number, got '" +
                          std::string(token) + "'");
  }
  return v;
}

long long to_integer(std::string_view token, int line, std::string_view key) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    parse_error(line, "'" + std::string(key) + "' expects an integer, got '" + std::string(token) +
                          "'");
  }
  return v;
}

template <typename E, std::size_t N>
E to_enum(const NameTable<E, N>& table, std::string_view token, int line, std::string_view key) {
  for (const auto& [v, name] : table) {
    if (name == token) return v;
  }
  std::string options;
  for (const auto& [v, name] : table) options += (options.empty() ? "" : ", ") + std::string(name);
  parse_error(line, "'" + std::string(key) + "' must be one of {" + options + "}, got '" +
                        std::string(token) + "'");
}

PeriodicProfile to_profile(std::string_view text, int line, std::string_view key) {
  PeriodicProfile profile{{}};
  for (std::string_view pair : split(text, ',')) {
    const auto colon = pair.find(':');
    if (colon == std::string_view::npos) {
      parse_error(line, "'" + std::string(key) + "' expects harmonic:amplitude pairs");
    }
    const long long m = to_integer(trim(pair.substr(0, colon)), line, key);
    const double a = to_double(trim(pair.substr(colon + 1)), line, key);
    if (m < 1 || m > 1'000'000) parse_error(line, "harmonic index must be in [1, 1e6]");
    profile.harmonics.emplace_back(static_cast<int>(m), a);
  }
  return profile;
}

// Typed accessors over one section.
class SectionView {
 public:
  SectionView(Reader& reader, std::string_view section) : reader_(reader), section_(section) {}

  std::optional<double> number(std::string_view key) {
    const Entry* e = reader_.find(section_, key);
    if (e == nullptr) return std::nullopt;
    return to_double(e->value, e->line, key);
  }
  std::optional<long long> integer(std::string_view key) {
    const Entry* e = reader_.find(section_, key);
    if (e == nullptr) return std::nullopt;
    return to_integer(e->value, e->line, key);
  }
  std::optional<std::vector<double>> numbers(std::string_view key) {
    const Entry* e = reader_.find(section_, key);
    if (e == nullptr) return std::nullopt;
    std::vector<double> out;
    for (std::string_view token : split(e->value, ',')) out.push_back(to_double(token, e->line, key));
    return out;
  }
  std::optional<std::vector<int>> integers(std::string_view key) {
    const Entry* e = reader_.find(section_, key);
    if (e == nullptr) return std::nullopt;
    std::vector<int> out;
    for (std::string_view token : split(e->value, ',')) {
      const long long v = to_integer(token, e->line, key);
      if (v < 0 || v > 1'000'000) parse_error(e->line, "'" + std::string(key) + "' out of range");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }
  template <typename E, std::size_t N>
  std::optional<E> choice(const NameTable<E, N>& table, std::string_view key) {
    const Entry* e = reader_.find(section_, key);
    if (e == nullptr) return std::nullopt;
    return to_enum(table, e->value, e->line, key);
  }
  std::optional<PeriodicProfile> profile(std::string_view key) {
    const Entry* e = reader_.find(section_, key);
    if (e == nullptr) return std::nullopt;
    return to_profile(e->value, e->line, key);
  }
  std::optional<std::string> text(std::string_view key) {
    const Entry* e = reader_.find(section_, key);
    if (e == nullptr) return std::nullopt;
    return e->value;
  }
  int line_of(std::string_view key) {
    const Entry* e = reader_.find(section_, key);
    return e == nullptr ? reader_.section_line(section_) : e->line;
  }

 private:
  Reader& reader_;
  std::string_view section_;
};

std::size_t to_count(long long v, int line, std::string_view key) {
  if (v < 0) parse_error(line, "'" + std::string(key) + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

std::string fmt(double v) { return format_double(v); }

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string render_profile(const PeriodicProfile& p) {
  std::string out;
  for (std::size_t i = 0; i < p.harmonics.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(p.harmonics[i].first) + ":" + fmt(p.harmonics[i].second);
  }
  return out;
}

void require(bool present, Command command, std::string_view block) {
  if (!present) {
    invalid("command '" + std::string(to_string(command)) + "' needs a [" + std::string(block) +
            "] section");
  }
}

void check_shift(double eta, double L, double dx) {
  const double ratio = eta * L / dx;
  const double nearest = std::round(ratio);
  if (nearest < 1.0 || std::abs(ratio - nearest) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    invalid("incommensurate shift: eta = " + fmt(eta) + ", L = " + fmt(L) + ", dx = " + fmt(dx) +
            " gives eta*L/dx = " + fmt(ratio) + ", which must be a positive integer");
  }
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommands) {
    if (c == command) return name;
  }
  return "?";
}

ExperimentConfig parse_config(std::string_view text) {
  Reader reader(text);
  ExperimentConfig config;
  SectionView top(reader, "");

  const auto version = top.integer("format_version");
  if (!version) parse_error(1, "missing 'format_version'");
  if (*version != kFormatVersion) {
    parse_error(top.line_of("format_version"),
                "unsupported format_version " + std::to_string(*version) + " (expected " +
                    std::to_string(kFormatVersion) + ")");
  }
  const auto command = top.choice(kCommands, "command");
  if (!command) parse_error(1, "missing 'command'");
  config.command = *command;

  if (reader.has_section("constants")) {
    SectionView s(reader, "constants");
    config.constants.hbar = s.number("hbar").value_or(1.0);
    config.constants.mass = s.number("mass").value_or(1.0);
  }
  if (reader.has_section("grid")) {
    SectionView s(reader, "grid");
    GridConfig g;
    const auto x_min = s.number("x_min");
    const auto dx = s.number("dx");
    const auto n = s.integer("n_points");
    if (!x_min || !dx || !n) {
      parse_error(reader.section_line("grid"), "[grid] needs x_min, dx and n_points");
    }
    g.x_min = *x_min;
    g.dx = *dx;
    g.n_points = to_count(*n, s.line_of("n_points"), "n_points");
    g.boundary = s.choice(kBoundaries, "boundary").value_or(Boundary::dirichlet);
    config.grid = g;
  }
  if (reader.has_section("nonlinearity")) {
    SectionView s(reader, "nonlinearity");
    NonlinearityConfig n;
    n.eta = s.numbers("eta").value_or(std::vector<double>{});
    n.L = s.numbers("L").value_or(std::vector<double>{});
    n.policy = s.choice(kPolicies, "policy").value_or(ShiftPolicy::floor);
    config.nonlinearity = n;
  }
  if (reader.has_section("potential")) {
    SectionView s(reader, "potential");
    PotentialConfig p;
    p.kind = s.choice(kPotentials, "kind").value_or(PotentialKind::zero);
    p.value = s.number("value").value_or(0.0);
    p.omega = s.number("omega").value_or(1.0);
    p.strength = s.number("strength").value_or(1.0);
    config.potential = p;
  }
  if (reader.has_section("states")) {
    SectionView s(reader, "states");
    StatesConfig st;
    const auto indices = s.integers("indices");
    if (!indices) parse_error(reader.section_line("states"), "[states] needs 'indices'");
    st.indices = *indices;
    config.states = st;
  }
  if (reader.has_section("state")) {
    SectionView s(reader, "state");
    StateConfig st;
    st.kind = s.choice(kStates, "kind").value_or(StateKind::gaussian);
    st.center = s.number("center").value_or(0.0);
    st.width = s.number("width").value_or(1.0);
    st.wavenumber = s.number("wavenumber").value_or(0.0);
    const auto index = s.integer("index").value_or(0);
    if (index < 0 || index > 1'000'000) parse_error(s.line_of("index"), "'index' out of range");
    st.index = static_cast<int>(index);
    config.state = st;
  }
  if (reader.has_section("evolution")) {
    SectionView s(reader, "evolution");
    EvolutionConfig e;
    const auto dt = s.number("dt");
    const auto steps = s.integer("n_steps");
    if (!dt || !steps) parse_error(reader.section_line("evolution"), "[evolution] needs dt and n_steps");
    e.dt = *dt;
    e.n_steps = to_count(*steps, s.line_of("n_steps"), "n_steps");
    e.record_every = to_count(s.integer("record_every").value_or(1), s.line_of("record_every"),
                              "record_every");
    config.evolution = e;
  }
  if (reader.has_section("exact")) {
    SectionView s(reader, "exact");
    ExactConfig e;
    e.kappa = s.number("kappa").value_or(1.0);
    e.alpha = s.profile("alpha").value_or(PeriodicProfile::sine());
    e.alpha_alt = s.profile("alpha_alt");
    e.exclusion_radius_dx = s.number("exclusion_radius_dx").value_or(3.0);
    config.exact = e;
  }
  if (reader.has_section("eta_opt")) {
    SectionView s(reader, "eta_opt");
    EtaOptConfig e;
    e.profile = s.choice(kProfiles, "profile").value_or(EtaProfile::node);
    e.L_over_a = s.number("L_over_a").value_or(1.0);
    config.eta_opt = e;
  }
  if (reader.has_section("output")) {
    SectionView s(reader, "output");
    config.output_dir = s.text("dir").value_or("out");
  }
  reader.reject_unknown();
  validate_config(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& c) {
  if (c.format_version != kFormatVersion) invalid("unsupported format_version");
  if (!(c.constants.hbar > 0.0) || !(c.constants.mass > 0.0)) {
    invalid("hbar and mass must be positive");
  }
  const Command cmd = c.command;
  const bool needs_grid = cmd != Command::eta_opt;
  if (needs_grid) require(c.grid.has_value(), cmd, "grid");
  if (c.grid) {
    if (!(c.grid->dx > 0.0)) invalid("grid dx must be positive");
    if (c.grid->n_points < 8) invalid("grid needs n_points >= 8");
  }

  if (c.nonlinearity) {
    for (double eta : c.nonlinearity->eta) {
      if (!(eta > 0.0 && eta <= 1.0)) invalid("eta = " + fmt(eta) + " outside the range (0, 1]");
    }
    for (double L : c.nonlinearity->L) {
      if (!(L > 0.0)) invalid("L = " + fmt(L) + " must be positive");
    }
    if (c.grid) {
      for (double eta : c.nonlinearity->eta) {
        for (double L : c.nonlinearity->L) check_shift(eta, L, c.grid->dx);
      }
    }
  }
  auto single_pair = [&](std::string_view what) {
    require(c.nonlinearity.has_value(), cmd, "nonlinearity");
    if (c.nonlinearity->eta.size() != 1 || c.nonlinearity->L.size() != 1) {
      invalid(std::string(what) + " takes exactly one eta and one L");
    }
  };
  if (c.state && c.state->kind == StateKind::gaussian && !(c.state->width > 0.0)) {
    invalid("state width must be positive");
  }
  if (c.evolution) {
    if (!(c.evolution->dt > 0.0)) invalid("evolution dt must be positive");
    if (c.evolution->record_every < 1) invalid("record_every must be >= 1");
  }
  if (c.exact) {
    if (!(c.exact->kappa > 0.0)) invalid("kappa must be positive");
    if (!(c.exact->exclusion_radius_dx >= 0.0)) invalid("exclusion_radius_dx must be >= 0");
    try {
      c.exact->alpha.validate();
      if (c.exact->alpha_alt) c.exact->alpha_alt->validate();
    } catch (const Error& e) {
      invalid(e.what());
    }
  }
  if (c.eta_opt && !(c.eta_opt->L_over_a > 0.0)) invalid("L_over_a must be positive");

  switch (cmd) {
    case Command::evolve:
      require(c.state.has_value(), cmd, "state");
      require(c.evolution.has_value(), cmd, "evolution");
      if (c.nonlinearity) single_pair("evolve");
      if (c.state->kind == StateKind::exact) {
        require(c.exact.has_value(), cmd, "exact");
        single_pair("an exact initial state");
      }
      if (c.state->kind == StateKind::eigenstate) require(c.potential.has_value(), cmd, "potential");
      if (c.state->kind == StateKind::plane_wave && c.grid &&
          c.grid->boundary == Boundary::periodic) {
        // A wave that does not close on itself has a phase jump at the seam.
        const double box = static_cast<double>(c.grid->n_points) * c.grid->dx;
        const double turns = c.state->wavenumber * box / (2.0 * std::numbers::pi);
        if (std::abs(turns - std::round(turns)) > 1e-9 * std::max(1.0, std::abs(turns))) {
          std::ostringstream msg;
          msg << "wavenumber = " << c.state->wavenumber << " does not fit the periodic box of length "
              << box << " (" << turns << " periods)";
          invalid(msg.str());
        }
      }
      break;
    case Command::spectrum:
      require(c.potential.has_value(), cmd, "potential");
      require(c.states.has_value(), cmd, "states");
      break;
    case Command::shift_sweep:
      require(c.potential.has_value(), cmd, "potential");
      require(c.states.has_value(), cmd, "states");
      require(c.nonlinearity.has_value(), cmd, "nonlinearity");
      if (c.nonlinearity->eta.empty() || c.nonlinearity->L.empty()) {
        invalid("shift-sweep needs at least one eta and one L");
      }
      break;
    case Command::eta_opt:
      require(c.eta_opt.has_value(), cmd, "eta_opt");
      break;
    case Command::exact_verify:
    case Command::cotangent:
      require(c.exact.has_value(), cmd, "exact");
      single_pair(to_string(cmd));
      if (!(c.nonlinearity->eta[0] < 1.0)) invalid("exact solutions need eta < 1");
      break;
    case Command::measures:
      require(c.state.has_value(), cmd, "state");
      require(c.nonlinearity.has_value(), cmd, "nonlinearity");
      if (c.nonlinearity->L.empty()) invalid("measures needs at least one L");
      for (double L : c.nonlinearity->L) check_shift(1.0, L, c.grid->dx);
      break;
  }
  if (c.states) {
    if (c.states->indices.empty()) invalid("[states] indices must not be empty");
  }
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "format_version = " << c.format_version << "\n";
  out << "command = " << to_string(c.command) << "\n";
  out << "\n[constants]\nhbar = " << fmt(c.constants.hbar) << "\nmass = " << fmt(c.constants.mass)
      << "\n";
  if (c.grid) {
    out << "\n[grid]\nx_min = " << fmt(c.grid->x_min) << "\ndx = " << fmt(c.grid->dx)
        << "\nn_points = " << c.grid->n_points
        << "\nboundary = " << name_of(kBoundaries, c.grid->boundary) << "\n";
  }
  if (c.nonlinearity) {
    out << "\n[nonlinearity]\n";
    if (!c.nonlinearity->eta.empty()) out << "eta = " << join(c.nonlinearity->eta) << "\n";
    if (!c.nonlinearity->L.empty()) out << "L = " << join(c.nonlinearity->L) << "\n";
    out << "policy = " << name_of(kPolicies, c.nonlinearity->policy) << "\n";
  }
  if (c.potential) {
    out << "\n[potential]\nkind = " << name_of(kPotentials, c.potential->kind)
        << "\nvalue = " << fmt(c.potential->value) << "\nomega = " << fmt(c.potential->omega)
        << "\nstrength = " << fmt(c.potential->strength) << "\n";
  }
  if (c.states) out << "\n[states]\nindices = " << join(c.states->indices) << "\n";
  if (c.state) {
    out << "\n[state]\nkind = " << name_of(kStates, c.state->kind)
        << "\ncenter = " << fmt(c.state->center) << "\nwidth = " << fmt(c.state->width)
        << "\nwavenumber = " << fmt(c.state->wavenumber) << "\nindex = " << c.state->index << "\n";
  }
  if (c.evolution) {
    out << "\n[evolution]\ndt = " << fmt(c.evolution->dt) << "\nn_steps = " << c.evolution->n_steps
        << "\nrecord_every = " << c.evolution->record_every << "\n";
  }
  if (c.exact) {
    out << "\n[exact]\nkappa = " << fmt(c.exact->kappa) << "\nalpha = " << render_profile(c.exact->alpha)
        << "\n";
    if (c.exact->alpha_alt) out << "alpha_alt = " << render_profile(*c.exact->alpha_alt) << "\n";
    out << "exclusion_radius_dx = " << fmt(c.exact->exclusion_radius_dx) << "\n";
  }
  if (c.eta_opt) {
    out << "\n[eta_opt]\nprofile = " << name_of(kProfiles, c.eta_opt->profile)
        << "\nL_over_a = " << fmt(c.eta_opt->L_over_a) << "\n";
  }
  out << "\n[output]\ndir = " << c.output_dir << "\n";
  return out.str();
}

}  // namespace infonls::io
