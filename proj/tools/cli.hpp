#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotacover/cantor.hpp"
#include "rotacover/constructions.hpp"
#include "rotacover/coverage.hpp"
#include "rotacover/fourier.hpp"

namespace rotacover {

// JSON forms of the library results, found by argument-dependent lookup.
using nlohmann::json;

void to_json(json& j, const Vec2& v);
void from_json(const json& j, Vec2& v);
void to_json(json& j, const Arc& a);
void from_json(const json& j, Arc& a);
void to_json(json& j, const PolarBox& b);
void from_json(const json& j, PolarBox& b);
void to_json(json& j, const Hole& h);
void from_json(const json& j, Hole& h);
void to_json(json& j, const CoverageReport& r);
void from_json(const json& j, CoverageReport& r);
void to_json(json& j, const GoodSequenceResult& r);
void from_json(const json& j, GoodSequenceResult& r);
void to_json(json& j, const BadSequenceResult& r);
void from_json(const json& j, BadSequenceResult& r);
void to_json(json& j, const PerfectSetResult& r);
void from_json(const json& j, PerfectSetResult& r);
void to_json(json& j, const DilateCover& d);
void from_json(const json& j, DilateCover& d);
void to_json(json& j, const CriterionReport& r);
void from_json(const json& j, CriterionReport& r);
void to_json(json& j, const CantorReport& r);
void from_json(const json& j, CantorReport& r);

}  // namespace rotacover

namespace rotacover::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct ExperimentConfig {
  // [experiment]
  double eps = 0.3;
  std::uint64_t seed = 1;
  // [lattice]
  Basis basis{{1, 0}, {0, 1}};
  // [angles]: finite (values are angles), arc (start length), union (start
  // length pairs) or random (count angles drawn from the seed)
  std::string angle_kind = "arc";
  std::vector<double> angle_values{0.0, kTwoPi};
  int angle_count = 5;
  // [region]
  double r_lo = 5.0;
  double r_hi = 6.0;
  double phi_lo = 0.0;
  double phi_hi = kTwoPi;
  int max_depth = 12;
  int raster_width = 360;
  int raster_height = 60;
  // [budget]
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t search_cap = 4'000'000;
  int grid = 64;
  double r_budget = 4096.0;
  // [holes]
  double min_radius = 50.0;
  double rho = 0.05;
  double min_clearance = 0.02;
  int count = 5;
  int depth = 4;
  // [good]
  double r_start = 10.0;
  int shells = 10;
  int terms = 3;
  int shells_per_term = 2;
  // [fourier]
  std::string measure = "restriction";  // restriction | atoms
  int probe_levels = 10;
  bool strict_epsilon = false;
  // [cantor]
  int stages = 6;
  // [render]
  std::string input = "coverage.json";
  // [output]
  std::string out_dir = "out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);
std::string to_text(const ExperimentConfig& config);

// Throws ConfigError (line 0) on out-of-range values.
void check_config(const ExperimentConfig& config, const std::string& source = "config");

AngleSet angle_set_of(const ExperimentConfig& config);
CircleMeasure measure_of(const ExperimentConfig& config);

// --- artifacts ---------------------------------------------------------------

// Envelope artifact with "schema": 1 and the command name.
json artifact(const std::string& command, json body);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

// P6 raster: rows are radii (r_lo at the top), columns are angles; covered
// white, uncovered black, ambiguous gray.
std::string render_ppm(const CoverageReport& report, int width, int height);

std::string profile_csv(const CriterionReport& report);
std::string envelope_csv(const CantorReport& report);

// --- commands ----------------------------------------------------------------

// Runs the command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rotacover::cli
