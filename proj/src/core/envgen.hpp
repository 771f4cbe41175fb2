#pragma once

#include <cstdint>
#include <vector>

#include "core/market.hpp"

namespace sc {

struct UtilityRow {
  StudentId student = 0;
  SchoolId school = 0;
  double walk = 0.0;     // walking-zone bonus
  double quality = 0.0;  // parity-keyed quality payoff
  double taste = 0.0;    // idiosyncratic draw
  double total = 0.0;
};

struct GeneratedMarket {
  Market market;  // priorities + embedded true preferences
  std::vector<UtilityRow> utilities;
};

// i.i.d. uniform priority orders, one per school, capacities as given
// (capacities[s-1] = capacity of school s).
std::vector<School> gen_priorities(int num_students, const std::vector<int>& capacities,
                                   std::uint64_t seed);

// The designed 18-student market: two large schools (capacity 4) and five
// small ones (capacity 2). Utilities are walk + quality + taste where the
// walking-zone bonus is 10 (default zones: students 1-4 at school 1, 5-8 at
// school 2, then pairs at schools 3..7), quality alternates by student
// parity (odd: 40/20/10..., even: 20/40/10...), and taste is uniform on
// [0, taste_max], redrawn until the induced order is strict. taste_max = 0
// is a test hook: utilities become deterministic and ties break by school
// id. zone_override, if given, maps each student to their zone school.
GeneratedMarket gen_designed_market(int num_students, std::uint64_t seed,
                                    const std::vector<SchoolId>* zone_override = nullptr,
                                    double taste_max = 40.0);

}  // namespace sc
