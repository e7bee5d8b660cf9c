#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "cli.hpp"
#include "rotacover/parallel.hpp"

namespace rotacover::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  ExperimentConfig config;
  fs::path out_dir;
  std::ostream& out;
};

// Raised by a command when its own recheck disagrees with the result.
struct RecheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw RecheckFailed(what);
}

Lattice lattice_of(const ExperimentConfig& c) { return Lattice(c.basis); }

PolarBox region_of(const ExperimentConfig& c) { return {c.r_lo, c.r_hi, c.phi_lo, c.phi_hi}; }

FiniteAngles finite_angles_of(const ExperimentConfig& c) {
  const AngleSet set = angle_set_of(c);
  const auto* f = std::get_if<FiniteAngles>(&set);
  if (!f) throw ConfigError("config", 0, "this command needs finite or random angles");
  return *f;
}

Arc arc_of(const ExperimentConfig& c) {
  const AngleSet set = angle_set_of(c);
  const auto* a = std::get_if<Arc>(&set);
  if (!a) throw ConfigError("config", 0, "this command needs an arc");
  return *a;
}

void sort_cells(CoverageReport& r) {
  std::sort(r.cells.begin(), r.cells.end(), [](const CoverageCell& a, const CoverageCell& b) {
    return std::tie(a.box.r_lo, a.box.phi_lo, a.box.r_hi, a.box.phi_hi, a.depth) <
           std::tie(b.box.r_lo, b.box.phi_lo, b.box.r_hi, b.box.phi_hi, b.depth);
  });
}

void save(const Context& ctx, const std::string& name, const std::string& command, const json& body) {
  write_json((ctx.out_dir / name).string(), artifact(command, body));
  ctx.out << "wrote " << (ctx.out_dir / name).string() << "\n";
}

void save_text(const Context& ctx, const std::string& name, const std::string& text) {
  write_text((ctx.out_dir / name).string(), text);
  ctx.out << "wrote " << (ctx.out_dir / name).string() << "\n";
}

// --- commands ----------------------------------------------------------------

void cover_check(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const AngleSet angles = angle_set_of(c);
  const Lattice lattice = lattice_of(c);
  VerifyOptions vo;
  vo.enumeration_cap = c.enumeration_cap;
  CoverageReport rep = verify_region(angles, lattice, c.eps, region_of(c), c.max_depth, vo);
  sort_cells(rep);

  const double area = rep.region.area();
  require(std::abs(rep.total_area() - area) <= 1e-9 * area, "cell areas do not add up to the region");
  // Cell centers must agree with the point test.
  const AngleSupport support = support_of(angles);
  const std::size_t stride = std::max<std::size_t>(1, rep.cells.size() / 2000);
  for (std::size_t i = 0; i < rep.cells.size(); i += stride) {
    const CoverageCell& cell = rep.cells[i];
    if (cell.verdict == Verdict::ambiguous) continue;
    const Vec2 center = from_polar(0.5 * (cell.box.r_lo + cell.box.r_hi), 0.5 * (cell.box.phi_lo + cell.box.phi_hi));
    const Verdict v = covers_point(center, support, lattice, c.eps);
    require(v == Verdict::ambiguous || v == cell.verdict, "cell verdict disagrees with the point test");
  }

  save(ctx, "coverage.json", "cover-check", rep);
  save_text(ctx, "coverage.ppm", render_ppm(rep, c.raster_width, c.raster_height));
  ctx.out << "cells " << rep.cells.size() << ", covered " << rep.covered_area << ", uncovered "
          << rep.uncovered_area << ", ambiguous " << rep.ambiguous_area << " of " << area << "\n";
  ctx.out << (rep.fully_covered() ? "region covered\n" : "region not certified covered\n");
}

void find_holes(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const FiniteAngles angles = finite_angles_of(c);
  const Lattice lattice = lattice_of(c);
  HoleSearchOptions o;
  o.min_clearance = c.min_clearance;
  o.enumeration_cap = c.enumeration_cap;
  std::vector<Hole> holes;
  for (int i = 0; i < c.count; ++i) {
    o.avoid = holes;
    holes.push_back(find_hole_beyond(angles, lattice, c.eps, c.min_radius, c.rho, o));
  }
  const AngleSupport support = support_of(angles);
  for (const Hole& h : holes) {
    require(norm(h.center) >= c.min_radius, "hole inside the requested radius");
    const double cl = hole_clearance(h.center, h.radius, support, lattice, c.eps);
    require(cl >= c.min_clearance, "hole clearance below the minimum on recheck");
  }
  save(ctx, "holes.json", "find-holes", {{"angles", angles.angles}, {"holes", holes}});
  for (const Hole& h : holes) {
    ctx.out << "hole at (" << h.center.x << ", " << h.center.y << ") radius " << h.radius << " clearance "
            << h.clearance << "\n";
  }
}

GoodSequenceOptions good_options(const ExperimentConfig& c) {
  GoodSequenceOptions o;
  o.cover.verify.enumeration_cap = c.enumeration_cap;
  return o;
}

void report_sequence(const Context& ctx, const GoodSequenceResult& r) {
  ctx.out << r.angles.size() << " angles over " << r.shells.size() << " shells from r = " << r.r_start
          << ", limit " << r.limit << ", " << r.adjustments.size() << " adjustments\n";
}

void build_good(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const Lattice lattice = lattice_of(c);
  const GoodSequenceResult r = build_good_sequence(lattice, c.eps, arc_of(c), c.r_start, c.shells, good_options(c));
  const CheckResult check = check_good_sequence(r, lattice, c.max_depth);
  require(check.ok, check.failure);
  save(ctx, "good_sequence.json", "build-good", r);
  report_sequence(ctx, r);
}

void build_very_good(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const Lattice lattice = lattice_of(c);
  const GoodSequenceResult r = build_very_good_sequence(lattice, default_very_good_schedule(c.terms), c.r_start,
                                                        c.shells_per_term, good_options(c));
  const CheckResult check = check_good_sequence(r, lattice, c.max_depth);
  require(check.ok, check.failure);
  save(ctx, "very_good_sequence.json", "build-very-good", r);
  report_sequence(ctx, r);
}

BadConstructionOptions bad_options(const ExperimentConfig& c) {
  BadConstructionOptions o;
  o.rho = c.rho;
  o.search.min_clearance = c.min_clearance;
  o.search.enumeration_cap = c.enumeration_cap;
  return o;
}

void build_bad(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const Lattice lattice = lattice_of(c);
  const BadSequenceResult r = build_bad_sequence(lattice, c.eps, c.count, bad_options(c));
  const CheckResult check = check_bad_sequence(r, lattice, c.eps);
  require(check.ok, check.failure);
  save(ctx, "bad_sequence.json", "build-bad", r);
  ctx.out << r.angles.size() << " angles, " << r.holes.size() << " holes\n";
}

void build_perfect(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const Lattice lattice = lattice_of(c);
  const Arc root = c.angle_kind == "arc" ? arc_of(c) : Arc{0.0, 0.2};
  const PerfectSetResult r = build_bad_perfect_set(lattice, c.eps, c.depth, root, bad_options(c));
  const CheckResult check = check_perfect_set(r, lattice, c.eps);
  require(check.ok, check.failure);
  save(ctx, "perfect_set.json", "build-perfect", r);
  ctx.out << r.levels.size() << " levels, " << (r.levels.empty() ? 0 : r.levels.back().size()) << " leaf arcs, "
          << r.holes.size() << " holes\n";
}

void fourier_check(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const CircleMeasure sigma = measure_of(c);
  const Lattice lattice = lattice_of(c);
  std::vector<std::pair<double, double>> annuli;
  for (int k = 0; k < c.probe_levels; ++k) annuli.emplace_back(std::ldexp(1.0, k), std::ldexp(1.0, k + 1));
  DeltaOptions d;
  d.strict_epsilon = c.strict_epsilon;
  const CriterionReport rep = check_goodness_criterion(sigma, lattice, c.eps, annuli, c.grid, d);
  require(rep.delta > 0.0 && rep.delta <= 1.0, "delta outside (0, 1]");
  require(rep.sups.size() == annuli.size(), "missing annulus sups");
  for (double s : rep.sups) require(s >= 0.0 && s <= 1.0 + 1e-9, "transform sup above the total mass");
  save(ctx, "fourier.json", "fourier-check", {{"measure", kind_name(sigma)}, {"eps", c.eps}, {"report", rep}});
  save_text(ctx, "fourier_profile.csv", profile_csv(rep));
  ctx.out << "delta " << rep.delta << ", last sup " << (rep.sups.empty() ? 0.0 : rep.sups.back()) << ": "
          << to_string(rep.verdict) << " (" << rep.note << ")\n";
}

void cantor_build(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  CantorOptions o;
  o.r_budget = c.r_budget;
  const CantorReport rep = run_construction(arc_of(c), c.stages, o);
  for (const StageRecord& s : rep.stages) {
    double mass = 0.0;
    for (const SmoothBump& b : s.arcs) mass += b.mass;
    require(std::abs(mass - 1.0) <= 1e-12, "stage mass differs from 1");
  }
  require(support_halves(rep), "support length does not halve per cycle");
  const EnvelopeResult env = envelope_check(rep);
  json env_json = {{"pass", env.pass}, {"worst_excess", env.worst_excess}, {"samples", env.samples},
                   {"violations", json::array()}};
  for (const EnvelopeViolation& v : env.violations)
    env_json["violations"].push_back({{"n", v.n}, {"k", v.k}, {"excess", v.excess}, {"at", v.at}});
  save(ctx, "cantor.json", "cantor-build", {{"construction", rep}, {"envelope_check", env_json}});
  save_text(ctx, "cantor_envelope.csv", envelope_csv(rep));
  ctx.out << rep.stages.size() << " stages, final support " << rep.stages.back().support_length
          << ", envelope check " << (env.pass ? "passed" : "failed") << "\n";
  require(env.pass, "envelope check failed");
}

void dilate(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const DilateCover d = dilate_cover(c.eps);
  const int K = static_cast<int>(std::ceil(1.0 / c.eps - 1e-12));
  require(static_cast<int>(d.factors.size()) <= K, "more factors than the ceiling of 1/eps");
  require(d.max_min_distance < c.eps, "dilates leave a point at distance eps");
  save(ctx, "dilate.json", "dilate-cover", d);
  ctx.out << d.factors.size() << " factors, minimal prefix " << d.minimal_prefix << ", worst distance "
          << d.max_min_distance << "\n";
}

void render(const Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const json doc = read_json(c.input);
  if (doc.value("schema", 0) != 1 || doc.value("command", "") != "cover-check") {
    throw ConfigError(c.input, 0, "not a cover-check artifact");
  }
  CoverageReport rep = doc.at("result").get<CoverageReport>();
  sort_cells(rep);
  save_text(ctx, "render.ppm", render_ppm(rep, c.raster_width, c.raster_height));
}

const std::map<std::string, std::pair<std::string, std::function<void(const Context&)>>>& commands() {
  static const std::map<std::string, std::pair<std::string, std::function<void(const Context&)>>> all = {
      {"cover-check", {"certify coverage of a polar region", cover_check}},
      {"find-holes", {"find disks missed by a finite angle set", find_holes}},
      {"build-good", {"build a good sequence inside an arc", build_good}},
      {"build-very-good", {"build a very good sequence", build_very_good}},
      {"build-bad", {"build a bad sequence with certified holes", build_bad}},
      {"build-perfect", {"build a bad perfect set", build_perfect}},
      {"fourier-check", {"evaluate the Fourier goodness criterion", fourier_check}},
      {"cantor-build", {"run the Cantor-type measure construction", cantor_build}},
      {"dilate-cover", {"integer dilates covering the circle", dilate}},
      {"render", {"rasterize a saved coverage report", render}},
  };
  return all;
}

void report_error(std::ostream& err, bool as_json, const std::string& kind, const std::string& message, int code) {
  if (as_json) {
    err << json{{"schema", 1}, {"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump() << "\n";
  } else {
    err << "rotacover: " << kind << ": " << message << "\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coverage of the plane by rotated fattened lattices", "rotacover"};
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool json_errors = false;
  app.add_option("--config", config_path, "experiment config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--seed", seed, "random seed (overrides [experiment] seed)");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_flag("--json-errors", json_errors, "print errors as JSON on stderr");
  app.require_subcommand(1, 1);
  app.fallthrough();
  for (const auto& [name, entry] : commands()) app.add_subcommand(name, entry.first);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    static const std::set<std::string> valued = {"--config", "--out", "--seed", "--threads"};
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      json_errors = json_errors || a == "--json-errors";
      if (valued.count(a)) {
        ++i;
      } else if (a.rfind("-", 0) != 0 && !commands().count(a)) {
        message = "unknown subcommand '" + a + "'";
        break;
      }
    }
    report_error(err, json_errors, "usage", message, kExitUsage);
    err << app.help();
    return kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (app.count("--seed")) config.seed = seed;
    if (app.count("--out")) config.out_dir = out_dir;
    if (const char* budget = std::getenv("ROTACOVER_BUDGET")) {
      try {
        const unsigned long long cap = std::stoull(budget);
        if (cap == 0) throw std::invalid_argument("zero");
        config.enumeration_cap = cap;
      } catch (const std::exception&) {
        throw ConfigError("ROTACOVER_BUDGET", 0, std::string("expected a positive integer, got '") + budget + "'");
      }
    }
    check_config(config);
    if (app.count("--threads")) set_thread_count(threads);
    fs::create_directories(config.out_dir);
    Context ctx{config, fs::path(config.out_dir), out};
    commands().at(name).second(ctx);
    return kExitOk;
  } catch (const ConfigError& e) {
    report_error(err, json_errors, "config", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const PreconditionError& e) {
    report_error(err, json_errors, "precondition", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    report_error(err, json_errors, "budget", e.what(), kExitBudget);
    return kExitBudget;
  } catch (const InvariantFailure& e) {
    report_error(err, json_errors, "invariant", e.what(), kExitInvariant);
    return kExitInvariant;
  } catch (const RecheckFailed& e) {
    report_error(err, json_errors, "invariant", e.what(), kExitInvariant);
    return kExitInvariant;
  } catch (const json::exception& e) {
    report_error(err, json_errors, "input", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const std::exception& e) {
    report_error(err, json_errors, "error", e.what(), kExitInvariant);
    return kExitInvariant;
  }
}

}  // namespace rotacover::cli
