#pragma once

#include <cstdint>
#include <vector>

#include "core/market.hpp"

namespace sc {

struct RankMinimalSet {
  long long min_total_rank = 0;
  std::vector<Matching> matchings;  // every optimum, lexicographic order
  bool truncated = false;           // cap cut enumeration short
};

// Finds the minimum achievable total rank (sum over students of the rank of
// their assigned school) and enumerates every matching attaining it, up to
// max_optima. Throws Errc::infeasible when the market has fewer seats than
// students.
RankMinimalSet enumerate_rank_minimizing(const Market& market, const PreferenceProfile& profile,
                                         int max_optima = 10000);

// One rank-minimizing matching drawn uniformly from the full optimum set,
// deterministic in seed. Throws Errc::budget if the set was truncated at
// max_optima, unless allow_truncated is set.
Matching run_rm(const Market& market, const PreferenceProfile& profile, std::uint64_t seed,
                int max_optima = 10000, bool allow_truncated = false);

}  // namespace sc
