#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"

namespace rotacover::cli {

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& s) {
  Int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + fmt(v[i]);
  return out;
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

template <class T>
Field number(const char* section, const char* key, T ExperimentConfig::*member) {
  Field f{section, key, nullptr, nullptr};
  f.get = [member](const ExperimentConfig& c) {
    if constexpr (std::is_floating_point_v<T>) {
      return fmt(c.*member);
    } else {
      return std::to_string(c.*member);
    }
  };
  f.set = [member](ExperimentConfig& c, const std::string& v) {
    if constexpr (std::is_floating_point_v<T>) {
      c.*member = parse_double(v);
    } else {
      c.*member = parse_int<T>(v);
    }
  };
  return f;
}

Field text(const char* section, const char* key, std::string ExperimentConfig::*member) {
  return {section, key, [member](const ExperimentConfig& c) { return c.*member; },
          [member](ExperimentConfig& c, const std::string& v) { c.*member = v; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> all = {
      number("experiment", "eps", &ExperimentConfig::eps),
      number("experiment", "seed", &ExperimentConfig::seed),
      {"lattice", "basis",
       [](const ExperimentConfig& c) {
         return join({c.basis.first.x, c.basis.first.y, c.basis.second.x, c.basis.second.y});
       },
       [](ExperimentConfig& c, const std::string& v) {
         const auto b = parse_list(v);
         if (b.size() != 4) throw std::invalid_argument("basis needs four numbers");
         c.basis = {{b[0], b[1]}, {b[2], b[3]}};
       }},
      text("angles", "kind", &ExperimentConfig::angle_kind),
      {"angles", "values", [](const ExperimentConfig& c) { return join(c.angle_values); },
       [](ExperimentConfig& c, const std::string& v) { c.angle_values = parse_list(v); }},
      number("angles", "count", &ExperimentConfig::angle_count),
      number("region", "r_lo", &ExperimentConfig::r_lo),
      number("region", "r_hi", &ExperimentConfig::r_hi),
      number("region", "phi_lo", &ExperimentConfig::phi_lo),
      number("region", "phi_hi", &ExperimentConfig::phi_hi),
      number("region", "max_depth", &ExperimentConfig::max_depth),
      number("region", "raster_width", &ExperimentConfig::raster_width),
      number("region", "raster_height", &ExperimentConfig::raster_height),
      number("budget", "enumeration_cap", &ExperimentConfig::enumeration_cap),
      number("budget", "search_cap", &ExperimentConfig::search_cap),
      number("budget", "grid", &ExperimentConfig::grid),
      number("budget", "r_budget", &ExperimentConfig::r_budget),
      number("holes", "min_radius", &ExperimentConfig::min_radius),
      number("holes", "rho", &ExperimentConfig::rho),
      number("holes", "min_clearance", &ExperimentConfig::min_clearance),
      number("holes", "count", &ExperimentConfig::count),
      number("holes", "depth", &ExperimentConfig::depth),
      number("good", "r_start", &ExperimentConfig::r_start),
      number("good", "shells", &ExperimentConfig::shells),
      number("good", "terms", &ExperimentConfig::terms),
      number("good", "shells_per_term", &ExperimentConfig::shells_per_term),
      text("fourier", "measure", &ExperimentConfig::measure),
      number("fourier", "probe_levels", &ExperimentConfig::probe_levels),
      {"fourier", "strict_epsilon", [](const ExperimentConfig& c) { return std::string(c.strict_epsilon ? "true" : "false"); },
       [](ExperimentConfig& c, const std::string& v) {
         if (v != "true" && v != "false") throw std::invalid_argument("expected true or false, got '" + v + "'");
         c.strict_epsilon = v == "true";
       }},
      number("cantor", "stages", &ExperimentConfig::stages),
      text("render", "input", &ExperimentConfig::input),
      text("output", "dir", &ExperimentConfig::out_dir),
  };
  return all;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  std::set<std::string> seen;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(source, line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      bool known = false;
      for (const Field& f : fields()) known = known || section == f.section;
      if (!known) throw ConfigError(source, line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "expected key = value");
    if (section.empty()) throw ConfigError(source, line, "assignment outside a section");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const Field* field = nullptr;
    for (const Field& f : fields())
      if (section == f.section && key == f.key) field = &f;
    if (!field) throw ConfigError(source, line, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second) throw ConfigError(source, line, "duplicate key '" + key + "'");
    try {
      field->set(cfg, value);
    } catch (const std::exception& e) {
      throw ConfigError(source, line, key + ": " + e.what());
    }
  }
  check_config(cfg, source);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string to_text(const ExperimentConfig& config) {
  std::string out, section;
  for (const Field& f : fields()) {
    if (section != f.section) {
      section = f.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    out += std::string(f.key) + " = " + f.get(config) + "\n";
  }
  return out;
}

void check_config(const ExperimentConfig& c, const std::string& source) {
  const auto fail = [&](const std::string& what) { throw ConfigError(source, 0, what); };
  if (!(c.eps > 0.0)) fail("eps must be positive");
  if (c.enumeration_cap == 0 || c.search_cap == 0 || c.grid <= 0 || !(c.r_budget > 0.0)) {
    fail("budgets must be positive");
  }
  if (c.max_depth <= 0 || c.raster_width <= 0 || c.raster_height <= 0) fail("region sizes must be positive");
  if (!(c.r_lo >= 0.0 && c.r_hi > c.r_lo) || !(c.phi_hi > c.phi_lo)) fail("region bounds are empty");
  if (c.count <= 0 || c.depth < 0 || c.shells <= 0 || c.terms <= 0 || c.shells_per_term <= 0 ||
      c.stages <= 0 || c.probe_levels <= 0 || c.angle_count <= 0) {
    fail("counts must be positive");
  }
  static const std::set<std::string> kinds = {"finite", "arc", "union", "random"};
  if (!kinds.count(c.angle_kind)) fail("angles kind must be finite, arc, union or random");
  if (c.measure != "restriction" && c.measure != "atoms") fail("fourier measure must be restriction or atoms");
}

AngleSet angle_set_of(const ExperimentConfig& c) {
  const auto& v = c.angle_values;
  if (c.angle_kind == "finite") return make_finite(v);
  if (c.angle_kind == "random") {
    // Portable draw: 53 high bits of mt19937_64 scaled to [0, 2π).
    std::mt19937_64 rng(c.seed);
    std::vector<double> a;
    for (int i = 0; i < c.angle_count; ++i) a.push_back(static_cast<double>(rng() >> 11) * 0x1p-53 * kTwoPi);
    return make_finite(a);
  }
  if (v.size() % 2 != 0 || v.empty()) throw ConfigError("config", 0, "arc values come in start length pairs");
  if (c.angle_kind == "arc") {
    if (v.size() != 2) throw ConfigError("config", 0, "an arc takes one start length pair");
    return Arc::make(v[0], v[1]);
  }
  ArcUnion u;
  for (std::size_t i = 0; i < v.size(); i += 2) u.arcs.push_back(Arc::make(v[i], v[i + 1]));
  return u;
}

CircleMeasure measure_of(const ExperimentConfig& c) {
  const AngleSet set = angle_set_of(c);
  if (c.measure == "atoms") {
    const auto* f = std::get_if<FiniteAngles>(&set);
    if (!f) throw ConfigError("config", 0, "atomic measures need finite or random angles");
    AtomicMeasure m;
    for (double a : f->angles) m.atoms.push_back({a, 1.0 / static_cast<double>(f->angles.size())});
    return m;
  }
  if (const auto* a = std::get_if<Arc>(&set)) return RestrictionMeasure{{*a}};
  if (const auto* u = std::get_if<ArcUnion>(&set)) return RestrictionMeasure{u->arcs};
  throw ConfigError("config", 0, "restriction measures need arc or union angles");
}

}  // namespace rotacover::cli
