#include "rotacover/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "rotacover/errors.hpp"

namespace rotacover {

double StageMeasure::support_length() const {
  double t = 0.0;
  for (const SmoothBump& b : arcs) t += b.arc.length;
  return t;
}

double StageMeasure::total_mass() const {
  double t = 0.0;
  for (const SmoothBump& b : arcs) t += b.mass;
  return t;
}

namespace {

// Offset of `a` inside the root arc, with a small tolerance below zero.
double root_offset(const Arc& root, double angle) {
  double o = normalize_angle(angle - root.start);
  if (o > kTwoPi - 1e-12) o -= kTwoPi;
  return o;
}

}  // namespace

void validate(const StageMeasure& stage) {
  if (stage.arcs.empty()) throw InvariantFailure("stage has no arcs");
  if (std::abs(stage.total_mass() - 1.0) > 1e-12) throw InvariantFailure("stage mass differs from 1");
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i < stage.arcs.size(); ++i) {
    const SmoothBump& b = stage.arcs[i];
    if (!(b.mass >= 0.0) || !(b.arc.length > 0.0)) throw InvariantFailure("stage arc with negative mass or no length");
    if (i > 0 && b.arc.length > stage.arcs[i - 1].arc.length) throw InvariantFailure("stage arcs out of order");
    const double lo = root_offset(stage.root, b.arc.start);
    if (lo < -1e-12 || lo + b.arc.length > stage.root.length + 1e-12) {
      throw InvariantFailure("stage arc leaves the root arc");
    }
    spans.emplace_back(lo, lo + b.arc.length);
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first < spans[i - 1].second - 1e-12) throw InvariantFailure("stage arcs overlap");
  }
}

StageMeasure init_measure(const Arc& arc) {
  validate(AngleSet{arc});
  if (arc.length >= kTwoPi) throw PreconditionError("construction needs a proper arc");
  StageMeasure s;
  s.root = arc;
  s.arcs.push_back(SmoothBump{arc, 1.0, 0.0});
  return s;
}

namespace {

double octave_sup(const CircleSpectrum& spec, double lo, const CantorOptions& options, std::size_t& samples) {
  const AnnulusSup a = sup_on_annulus(spec, lo, 2.0 * lo, options.grid);
  samples += a.samples;
  return a.sup;
}

double log_slope(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = static_cast<double>(j), y = std::log(std::max(v[j], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

[[noreturn]] void over_budget(double r, double budget) {
  std::ostringstream msg;
  msg << "R exceeds frequency budget (" << r << " > " << budget << ")";
  throw BudgetExceeded(msg.str());
}

}  // namespace

RnEvidence choose_Rn(const StageMeasure& stage, const CantorOptions& options) {
  validate(stage);
  double R = std::max({static_cast<double>(stage.n), stage.R, 1.0});
  const double bound = 1.0 / stage.n;
  std::map<double, double> cache;  // octave start → sup
  CircleSpectrum spec;
  int spec_order = -1;
  std::size_t samples = 0;
  for (;;) {
    if (8.0 * R > options.r_budget) over_budget(8.0 * R, options.r_budget);
    if (spec_order < spectrum_order(8.0 * R)) {
      spec_order = spectrum_order(std::min(options.r_budget, 16.0 * R));
      spec = spectrum_of(stage.arcs, spec_order);
      cache.clear();
    }
    RnEvidence ev;
    ev.R = R;
    bool ok = true;
    for (int j = 0; j < 3; ++j) {
      const double lo = std::ldexp(R, j);
      auto it = cache.find(lo);
      if (it == cache.end()) it = cache.emplace(lo, octave_sup(spec, lo, options, samples)).first;
      ev.octave_sups.push_back(it->second);
      if (it->second > bound) ok = false;
    }
    ev.tail_slope = log_slope(ev.octave_sups);
    if (ok && ev.tail_slope <= 0.0) {
      ev.samples = samples;
      return ev;
    }
    R *= 2.0;
  }
}

namespace {

StageMeasure split_first(const StageMeasure& stage, int N, double width_override = 0.0) {
  const SmoothBump first = stage.arcs.front();
  const double shortest = stage.arcs.back().arc.length;
  const double piece = first.arc.length / N;
  const double width = width_override > 0.0 ? width_override : std::min(piece / 2.0, shortest / 2.0);
  StageMeasure next = stage;
  next.arcs.erase(next.arcs.begin());
  double placed = 0.0;
  std::vector<SmoothBump> fresh;
  for (int k = 0; k < N; ++k) {
    const double a = first.arc.start + k * piece;
    SmoothBump b{Arc{normalize_angle(a), width}, 0.0, 0.0};
    // The last piece takes the remainder so the split is an exact partition.
    b.mass = k + 1 < N ? bump_mass_on(first, a, piece) : std::max(0.0, first.mass - placed);
    placed += b.mass;
    fresh.push_back(b);
  }
  next.arcs.insert(next.arcs.end(), fresh.begin(), fresh.end());
  std::stable_sort(next.arcs.begin(), next.arcs.end(),
                   [](const SmoothBump& x, const SmoothBump& y) { return x.arc.length > y.arc.length; });
  next.n = stage.n + 1;
  return next;
}

}  // namespace

RefineResult refine_step(const StageMeasure& stage, const CantorOptions& options) {
  validate(stage);
  if (!(stage.R >= stage.n)) throw PreconditionError("stage needs R_n from choose_Rn");
  if (stage.R > options.r_budget) over_budget(stage.R, options.r_budget);
  const double bound = std::ldexp(1.0, -stage.n) / (2.0 * stage.n);
  const int order = spectrum_order(stage.R);
  const CircleSpectrum old_first = spectrum_of(std::vector<SmoothBump>{stage.arcs.front()}, order);
  for (int N = 2; N <= options.n_cap; N *= 2) {
    StageMeasure next = split_first(stage, N);
    std::vector<SmoothBump> fresh(next.arcs.end() - N, next.arcs.end());
    CircleSpectrum diff = spectrum_of(fresh, order);
    diff -= old_first;
    const double sup = sup_on_annulus(diff, 0.0, stage.R, options.grid).sup;
    if (sup <= bound) {
      validate(next);
      return {std::move(next), N, sup, bound};
    }
  }
  throw BudgetExceeded("subdivision cap reached without meeting the dyadic bound");
}

CantorReport run_construction(const Arc& arc, int stages, const CantorOptions& options) {
  if (stages < 1) throw PreconditionError("need at least one stage");
  CantorReport rep;
  rep.root = arc;
  StageMeasure cur = init_measure(arc);
  for (int n = 1; n <= stages; ++n) {
    StageRecord rec;
    rec.evidence = choose_Rn(cur, options);
    cur.R = rec.evidence.R;
    rec.n = n;
    rec.support_length = cur.support_length();
    rec.top_mass = cur.top_mass();
    rec.R = cur.R;
    rec.envelope = 2.0 / n + rec.top_mass;
    rec.arc_count = cur.arcs.size();
    rec.arcs = cur.arcs;
    if (n < stages) {
      RefineResult step = refine_step(cur, options);
      rec.N = step.N;
      rec.diff_sup = step.diff_sup;
      step.next.R = cur.R;
      cur = std::move(step.next);
    }
    rep.stages.push_back(std::move(rec));
  }
  return rep;
}

EnvelopeResult envelope_check(const CantorReport& report, const SampleGrid& grid) {
  EnvelopeResult out;
  const auto& st = report.stages;
  if (st.empty()) return out;
  auto upper = [&](std::size_t i) { return i + 1 < st.size() ? st[i + 1].R : 8.0 * st[i].R; };
  for (std::size_t k = 0; k < st.size(); ++k) {
    double r_max = 0.0;
    for (std::size_t n = 0; n <= k; ++n) r_max = std::max(r_max, upper(n));
    const CircleSpectrum spec = spectrum_of(st[k].arcs, spectrum_order(r_max));
    for (std::size_t n = 0; n <= k; ++n) {
      const double lo = st[n].R, hi = upper(n);
      if (!(hi > lo)) continue;
      const AnnulusSup a = sup_on_annulus(spec, lo, hi, grid);
      out.samples += a.samples;
      const double excess = a.sup - st[n].envelope;
      out.worst_excess = std::max(out.worst_excess, excess);
      if (excess > kEnvelopeTolerance) {
        out.pass = false;
        out.violations.push_back({st[n].n, st[k].n, excess, a.at});
      }
    }
  }
  return out;
}

CantorReport corrupt_stage(const CantorReport& report, std::size_t index, double width) {
  if (index >= report.stages.size()) throw PreconditionError("no such stage");
  CantorReport out = report;
  StageRecord& rec = out.stages[index];
  const Arc& first = rec.arcs.front().arc;
  rec.arcs = {SmoothBump{Arc{first.start, std::min(width, first.length)}, 1.0, 0.0}};
  rec.arc_count = 1;
  rec.support_length = rec.arcs.front().arc.length;
  return out;
}

bool support_halves(const CantorReport& report) {
  const auto& st = report.stages;
  for (std::size_t i = 0; i < st.size(); ++i) {
    const std::size_t j = i + st[i].arc_count;
    if (j >= st.size()) continue;
    if (st[j].support_length > 0.5 * st[i].support_length + 1e-9) return false;
  }
  return true;
}

}  // namespace rotacover
