// Copyright 2026 The itnctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "itnctl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "itnctl/errors.hpp"

namespace itnctl {

SweepConfig ScenarioConfig::sweep_config() const {
  SweepConfig s;
  s.relaxation = relaxation;
  s.tol = tol;
  s.max_iters = max_iters;
  s.adjoint_mode = adjoint_mode;
  s.cost = cost;
  return s;
}

std::vector<double> reference_b_values() { return {0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75}; }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// Raised by value parsers; the caller attaches line and column.
struct BadValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw BadValue("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw BadValue("expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw BadValue("expected true or false, got '" + std::string(s) + "'");
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_double(trim(s.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

struct Field {
  std::string_view key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

// `member` is a generic accessor usable on const and non-const configs.
template <typename Member>
Field real(std::string_view key, Member member) {
  return {key, [member](ScenarioConfig& c, std::string_view v) { member(c) = parse_double(v); },
          [member](const ScenarioConfig& c) { return format_double(member(c)); }};
}

template <typename Member>
Field count(std::string_view key, Member member) {
  return {key,
          [member](ScenarioConfig& c, std::string_view v) {
            using T = std::remove_reference_t<decltype(member(c))>;
            member(c) = static_cast<T>(parse_unsigned(v));
          },
          [member](const ScenarioConfig& c) { return std::to_string(member(c)); }};
}

#define ITN_REAL(key, expr) real(key, [](auto& c) -> auto& { return expr; })
#define ITN_COUNT(key, expr) count(key, [](auto& c) -> auto& { return expr; })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"name", [](ScenarioConfig& c, std::string_view v) { c.name = std::string(v); },
       [](const ScenarioConfig& c) { return c.name; }},
      ITN_REAL("lambda_h_rec", c.params.lambda_h_rec),
      ITN_REAL("lambda_v_rec", c.params.lambda_v_rec),
      ITN_REAL("mu_h", c.params.mu_h),
      ITN_REAL("delta_h", c.params.delta_h),
      ITN_REAL("gamma_h", c.params.gamma_h),
      ITN_REAL("mu_v1", c.params.mu_v1),
      ITN_REAL("mu_max", c.params.mu_max),
      ITN_REAL("b", c.params.b),
      ITN_REAL("beta_max", c.params.beta_max),
      ITN_REAL("p1", c.params.p1),
      ITN_REAL("p2", c.params.p2),
      ITN_REAL("a1", c.params.a1),
      ITN_REAL("a2", c.params.a2),
      ITN_REAL("c", c.params.c),
      {"itn_mortality_policy",
       [](ScenarioConfig& c, std::string_view v) {
         if (v == "product") {
           c.params.itn_mortality_policy = ItnMortalityPolicy::Product;
         } else if (v == "fixed_term") {
           c.params.itn_mortality_policy = ItnMortalityPolicy::FixedTerm;
         } else {
           throw BadValue("expected product or fixed_term, got '" + std::string(v) + "'");
         }
       },
       [](const ScenarioConfig& c) { return std::string(to_string(c.params.itn_mortality_policy)); }},
      ITN_REAL("s_h", c.x0.s_h),
      ITN_REAL("i_h", c.x0.i_h),
      ITN_REAL("s_v", c.x0.s_v),
      ITN_REAL("i_v", c.x0.i_v),
      ITN_REAL("t0", c.t0),
      ITN_REAL("tf", c.tf),
      ITN_COUNT("n", c.n),
      {"cost",
       [](ScenarioConfig& c, std::string_view v) {
         if (v == "j1") {
           c.cost = CostKind::J1;
         } else if (v == "j2") {
           c.cost = CostKind::J2;
         } else {
           throw BadValue("expected j1 or j2, got '" + std::string(v) + "'");
         }
       },
       [](const ScenarioConfig& c) { return std::string(to_string(c.cost)); }},
      {"adjoint_mode",
       [](ScenarioConfig& c, std::string_view v) {
         if (v == "paper") {
           c.adjoint_mode = AdjointMode::PaperStated;
         } else if (v == "exact") {
           c.adjoint_mode = AdjointMode::Exact;
         } else {
           throw BadValue("expected paper or exact, got '" + std::string(v) + "'");
         }
       },
       [](const ScenarioConfig& c) { return std::string(to_string(c.adjoint_mode)); }},
      {"sweep_b", [](ScenarioConfig& c, std::string_view v) { c.sweep_b = parse_list(v); },
       [](const ScenarioConfig& c) { return format_list(c.sweep_b); }},
      {"control_enabled",
       [](ScenarioConfig& c, std::string_view v) { c.control_enabled = parse_bool(v); },
       [](const ScenarioConfig& c) { return std::string(c.control_enabled ? "true" : "false"); }},
      {"output_dir", [](ScenarioConfig& c, std::string_view v) { c.output_dir = std::string(v); },
       [](const ScenarioConfig& c) { return c.output_dir.string(); }},
      ITN_COUNT("seed", c.seed),
      ITN_REAL("relaxation", c.relaxation),
      ITN_REAL("tol", c.tol),
      ITN_COUNT("max_iters", c.max_iters),
      ITN_COUNT("verify_n", c.verify_n),
      ITN_COUNT("gradcheck_n", c.gradcheck_n),
      ITN_COUNT("gradcheck_directions", c.gradcheck_directions),
      ITN_REAL("gradcheck_epsilon", c.gradcheck_epsilon),
      ITN_COUNT("direct_max_iters", c.direct_max_iters),
  };
  return table;
}

#undef ITN_REAL
#undef ITN_COUNT

const Field* find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

// Parses one `key = value` assignment; `line` and `column_base` locate it
// for error messages. `raw` has comments already removed.
void apply_assignment(ScenarioConfig& cfg, std::string_view raw, int line, int column_base) {
  const auto eq = raw.find('=');
  if (eq == std::string_view::npos) {
    const auto first = raw.find_first_not_of(" \t");
    throw ParseError("expected 'key = value'", line,
                     column_base + static_cast<int>(first == std::string_view::npos ? 0 : first));
  }
  const std::string_view key = trim(raw.substr(0, eq));
  if (key.empty()) throw ParseError("missing key before '='", line, column_base + static_cast<int>(eq));
  const Field* field = find_field(key);
  if (!field) {
    std::string where = line > 0 ? " (line " + std::to_string(line) + ")" : " (override)";
    throw UnknownKey("unknown configuration key '" + std::string(key) + "'" + where);
  }
  const std::string_view rest = raw.substr(eq + 1);
  const auto value_offset = rest.find_first_not_of(" \t");
  const int value_column =
      column_base + static_cast<int>(eq + 1 + (value_offset == std::string_view::npos ? 0 : value_offset));
  try {
    field->set(cfg, trim(rest));
  } catch (const BadValue& e) {
    throw ParseError("bad value for '" + std::string(key) + "': " + e.what(), line, value_column);
  }
}

}  // namespace

std::vector<std::string_view> config_keys() {
  std::vector<std::string_view> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    apply_assignment(base, line, line_no, 1);
  }
  return base;
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment) {
  apply_assignment(cfg, assignment, 0, 1);
}

void validate(const ScenarioConfig& cfg) {
  validate(cfg.params);
  for (double v : cfg.x0.components()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvariantViolation("initial state constraint violated: compartments finite and >= 0");
    }
  }
  if (!(cfg.x0.n_h() > 0.0)) throw InvariantViolation("initial state constraint violated: s_h + i_h > 0");
  if (!std::isfinite(cfg.t0) || !std::isfinite(cfg.tf) || !(cfg.tf > cfg.t0)) {
    throw InvariantViolation("time grid constraint violated: tf > t0");
  }
  if (cfg.n < 1) throw InvariantViolation("time grid constraint violated: n >= 1");
  for (double b : cfg.sweep_b) {
    if (!(b >= 0.0 && b <= 1.0)) throw InvariantViolation("sweep constraint violated: sweep_b values in [0,1]");
  }
  validate(cfg.sweep_config());
  if (cfg.verify_n < 1 || cfg.gradcheck_n < 1) {
    throw InvariantViolation("verification constraint violated: verify_n >= 1 and gradcheck_n >= 1");
  }
  if (cfg.gradcheck_directions < 1) {
    throw InvariantViolation("verification constraint violated: gradcheck_directions >= 1");
  }
  if (!(cfg.gradcheck_epsilon > 0.0)) {
    throw InvariantViolation("verification constraint violated: gradcheck_epsilon > 0");
  }
  if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos) {
    throw InvariantViolation("name constraint violated: non-empty, no path separators");
  }
}

ScenarioConfig load_config(const std::optional<std::filesystem::path>& path,
                           const std::vector<std::string>& overrides) {
  ScenarioConfig cfg;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw IoError("cannot read config file " + path->string());
    std::ostringstream text;
    text << in.rdbuf();
    cfg = parse_config(text.str(), cfg);
  }
  for (const auto& o : overrides) apply_override(cfg, o);
  validate(cfg);
  return cfg;
}

std::string to_config_text(const ScenarioConfig& cfg) {
  std::string out = "# resolved itnctl scenario\n";
  for (const auto& f : fields()) {
    out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace itnctl
