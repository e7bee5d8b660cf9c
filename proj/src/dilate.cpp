#include <cmath>
#include <numeric>
#include <sstream>

#include "rotacover/constructions.hpp"

namespace rotacover {

namespace {

// min_{k ≤ K} dist(k·p/q, Z), as a numerator over q.
long min_dist_numerator(long p, long q, int K) {
  long best = q;
  for (long k = 1; k <= K; ++k) {
    const long r = (k * p) % q;
    best = std::min(best, std::min(r, q - r));
  }
  return best;
}

}  // namespace

// Every local maximum of x ↦ min_k dist(kx, Z) is a peak (2m+1)/(2k) of one
// tent or a crossing (m1+m2)/(k1+k2) of a rising and a falling tent, so
// rationals with denominator ≤ 2K suffice.
std::pair<long, long> dilate_max_min_distance(int K) {
  if (K < 1) throw PreconditionError("need at least one factor");
  long best_num = 0, best_den = 1;
  for (long q = 1; q <= 2L * K; ++q) {
    for (long p = 0; p <= q; ++p) {
      const long num = min_dist_numerator(p, q, K);
      if (num * best_den > best_num * q) {
        best_num = num;
        best_den = q;
      }
    }
  }
  const long g = std::gcd(best_num, best_den);
  return {best_num / g, best_den / g};
}

DilateCover dilate_cover(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw PreconditionError("epsilon must lie in (0, 1/2)");
  const int K = static_cast<int>(std::ceil(1.0 / eps - 1e-12));
  DilateCover out;
  for (int k = 1; k <= K; ++k) out.factors.push_back(k);
  for (long q = 1; q <= 2L * K; ++q) out.breakpoints += static_cast<std::size_t>(q + 1);

  const auto [num, den] = dilate_max_min_distance(K);
  out.max_min_distance = static_cast<double>(num) / static_cast<double>(den);
  if (!(out.max_min_distance < eps)) {
    std::ostringstream msg;
    msg << "dilates 1.." << K << " leave a point at distance " << num << "/" << den;
    throw InvariantFailure(msg.str());
  }
  for (int k = 1; k <= K; ++k) {
    const auto [n, d] = dilate_max_min_distance(k);
    if (static_cast<double>(n) / static_cast<double>(d) < eps) {
      out.minimal_prefix = k;
      break;
    }
  }
  return out;
}

}  // namespace rotacover
