#pragma once

#include <cstddef>
#include <vector>

#include "rotacover/fourier.hpp"

namespace rotacover {

// Stage n of the measure-zero construction: bumps sorted by nonincreasing arc
// length, all inside `root`, pairwise disjoint, masses summing to 1.
struct StageMeasure {
  Arc root;
  std::vector<SmoothBump> arcs;
  int n = 1;
  double R = 0.0;  // R_{n−1} until choose_Rn fixes R_n

  double support_length() const;
  double total_mass() const;
  double top_mass() const { return arcs.empty() ? 0.0 : arcs.front().mass; }
};

// Throws InvariantFailure when an invariant of the stage is broken.
void validate(const StageMeasure& stage);

struct CantorOptions {
  double r_budget = 4096.0;   // largest |ξ| any grid may reach
  int n_cap = 1 << 16;        // largest subdivision count
  SampleGrid grid;            // radial and angular spacing of every probe
};

StageMeasure init_measure(const Arc& arc);

// Evidence behind R_n: sampled sups of |μ̂_n| on [R·2^j, R·2^{j+1}], j = 0..2,
// and the fitted slope of their logarithms against j.
struct RnEvidence {
  double R = 0.0;
  std::vector<double> octave_sups;
  double tail_slope = 0.0;
  std::size_t samples = 0;
};

// Doubles R from max(n, R_{n−1}, 1) until every octave sup on [R, 8R] is at
// most 1/n and the octave sups do not grow. Throws BudgetExceeded past the
// frequency budget.
RnEvidence choose_Rn(const StageMeasure& stage, const CantorOptions& options = {});

struct RefineResult {
  StageMeasure next;
  int N = 0;
  double diff_sup = 0.0;  // sampled sup of |μ̂_{n+1} − μ̂_n| over |ξ| ≤ R_n
  double diff_bound = 0.0;
};

// Splits the first arc into N equal pieces and moves each piece's mass into a
// bump at its start of length min(piece/2, shortest/2). N doubles from 2 until
// the sampled difference over |ξ| ≤ R_n is at most 2^{−n}/(2n).
RefineResult refine_step(const StageMeasure& stage, const CantorOptions& options = {});

struct StageRecord {
  int n = 0;
  double support_length = 0.0;
  double top_mass = 0.0;     // μ_n(I₁)
  double R = 0.0;            // R_n
  double envelope = 0.0;     // 2/n + μ_n(I₁)
  int N = 0;                 // pieces used to reach stage n + 1 (0 at the end)
  double diff_sup = 0.0;
  std::size_t arc_count = 0;
  RnEvidence evidence;
  std::vector<SmoothBump> arcs;
};

struct CantorReport {
  Arc root;
  std::vector<StageRecord> stages;
};

CantorReport run_construction(const Arc& arc, int stages, const CantorOptions& options = {});

struct EnvelopeViolation {
  int n = 0;       // envelope index
  int k = 0;       // stage whose transform exceeded it
  double excess = 0.0;
  Vec2 at;
};

struct EnvelopeResult {
  bool pass = true;
  double worst_excess = -1.0;  // max over (n, k) of sup|μ̂_k| − ε_n
  std::vector<EnvelopeViolation> violations;
  std::size_t samples = 0;
};

// Recomputes every stage transform and checks |μ̂_k| ≤ ε_n + 1e−6 on
// R_n ≤ |ξ| ≤ R_{n+1} for k ≥ n (the last stage uses [R_n, 8R_n]).
EnvelopeResult envelope_check(const CantorReport& report, const SampleGrid& grid = {0, 0.2, 0.5});

inline constexpr double kEnvelopeTolerance = 1e-6;

// Negative control: the whole mass of stage `index` is moved into one bump of
// length `width` at the start of its first arc, bypassing the N search.
CantorReport corrupt_stage(const CantorReport& report, std::size_t index, double width = 1e-6);

// Support length after m_n further steps is at most half (up to 1e−9) for every
// n with n + m_n within the run.
bool support_halves(const CantorReport& report);

}  // namespace rotacover
