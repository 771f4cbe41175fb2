#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/market.hpp"
#include "core/mechanisms.hpp"
#include "core/rng.hpp"

namespace sc {

// Everything a registered statistic may look at for one synthetic market.
struct StatContext {
  const Market& market;
  const PreferenceProfile& submitted;
  const Matching& matching;
  const PreferenceProfile* induced = nullptr;       // null if the market has no embedded prefs
  const SessionSet* sessions = nullptr;             // attribute lookup
  const std::vector<int>* donor_sessions = nullptr; // 1-based donor per position
  const std::string* attribute = nullptr;           // attribute column for sorting stats
};

using StatisticFn = std::function<double(const StatContext&)>;

// Named pure functions of a synthetic market and its matching:
//   pareto_efficient, avg_rank, max_rank, true_envy_share,
//   reported_envy_share, improvable_share, sorting_between,
//   sorting_dispersion
const std::map<std::string, StatisticFn>& statistic_registry();

struct RecombinantConfig {
  std::string statistic = "avg_rank";
  Mechanism mechanism = Mechanism::da;
  long long draws_per_block = 10000;  // R
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<double> tau;  // target truth rate; empty = plain recombination
  int rm_cap = 10000;
  std::string attribute = "raven";
  bool keep_draws = false;  // also return every draw value (memory: K*N*R doubles)
};

struct RecombinantReport {
  std::string statistic;
  std::string mechanism;
  int num_sessions = 0;    // K
  int num_positions = 0;   // N
  long long draws_per_block = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double sigma2 = 0.0;     // draw-level variance
  double phi = 0.0;        // within-block covariance estimate (may be negative)
  double variance = 0.0;   // sigma2/(K*N*R) + N*max(phi,0)/K
  double std_error = 0.0;
  double donor_truth_rate = 0.0;
  std::optional<double> tau;
  std::optional<double> mix_x;
  std::vector<double> block_means;  // K*N values, session-major order
  std::vector<double> draws;        // filled only when keep_draws
};

// One synthetic profile for block (session, position): the block position
// keeps the donor session's submission, every other position is drawn
// uniformly (with replacement) across sessions. donors, if given, receives
// the 1-based donor session per position.
PreferenceProfile draw_synthetic(const SessionSet& sessions, int session, StudentId position,
                                 Rng& rng, std::vector<int>* donors = nullptr);

// Calibrated variant: each non-block position keeps its drawn donor report
// with probability mix_x, otherwise the induced ranking is imputed. The
// donor is drawn first either way (it still identifies attributes), and the
// block position is never touched.
PreferenceProfile draw_calibrated(const SessionSet& sessions, const PreferenceProfile& induced,
                                  double mix_x, int session, StudentId position, Rng& rng,
                                  std::vector<int>* donors = nullptr);

// Donor-keep probability x achieving an expected per-market truth rate tau
// (truthful reports are imputed at rate 1-x), given donor truth rate p_d
// and N positions. x(p_d) = 1, x(1-(1-p_d)/N) = 0; throws Errc::infeasible
// outside that range.
double calib_mix(double p_d, int n, double tau);

// Block-resampling estimator: K*N blocks, R seeded draws each; the variance
// combines the draw-level variance with the within-block covariance phi
// estimated from per-block half means. Deterministic for any worker count.
RecombinantReport recombinant_estimate(const SessionSet& sessions, const Market& market,
                                       const RecombinantConfig& config);

}  // namespace sc
