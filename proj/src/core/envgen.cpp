#include "core/envgen.hpp"

#include <algorithm>
#include <numeric>

#include "core/rng.hpp"

namespace sc {

std::vector<School> gen_priorities(int num_students, const std::vector<int>& capacities,
                                   std::uint64_t seed) {
  if (num_students < 1) throw Error(Errc::validation, "need at least one student");
  if (capacities.empty()) throw Error(Errc::validation, "need at least one school");
  std::vector<School> out;
  for (SchoolId s = 1; s <= static_cast<int>(capacities.size()); ++s) {
    if (capacities[s - 1] < 1)
      throw Error(Errc::validation, "capacities must be positive");
    School school;
    school.id = s;
    school.capacity = capacities[s - 1];
    school.priority.resize(num_students);
    std::iota(school.priority.begin(), school.priority.end(), 1);
    Rng rng(derive_seed(seed, 0x7072696f, static_cast<std::uint64_t>(s)));
    rng.shuffle(school.priority);
    out.push_back(std::move(school));
  }
  return out;
}

GeneratedMarket gen_designed_market(int num_students, std::uint64_t seed,
                                    const std::vector<SchoolId>* zone_override,
                                    double taste_max) {
  constexpr int kSchools = 7;
  if (num_students != 18)
    throw Error(Errc::validation, "the designed environment is laid out for exactly 18 students");
  if (taste_max < 0.0) throw Error(Errc::validation, "taste_max must be non-negative");

  std::vector<SchoolId> zone(num_students);
  if (zone_override) {
    if (static_cast<int>(zone_override->size()) != num_students)
      throw Error(Errc::validation, "zone override must cover every student");
    for (SchoolId z : *zone_override)
      if (z < 1 || z > kSchools)
        throw Error(Errc::validation, "zone override names an unknown school");
    zone = *zone_override;
  } else {
    for (StudentId i = 1; i <= num_students; ++i) {
      if (i <= 4) zone[i - 1] = 1;
      else if (i <= 8) zone[i - 1] = 2;
      else zone[i - 1] = 3 + (i - 9) / 2;
    }
  }

  GeneratedMarket out;
  std::vector<std::vector<SchoolId>> orders(num_students);
  for (StudentId i = 1; i <= num_students; ++i) {
    Rng rng(derive_seed(seed, 0x74617374, static_cast<std::uint64_t>(i)));
    std::vector<double> walk(kSchools, 0.0), quality(kSchools, 10.0), taste(kSchools, 0.0);
    walk[zone[i - 1] - 1] = 10.0;
    quality[0] = (i % 2 == 1) ? 40.0 : 20.0;
    quality[1] = (i % 2 == 1) ? 20.0 : 40.0;

    std::vector<double> total(kSchools);
    for (;;) {
      for (int s = 0; s < kSchools; ++s) {
        taste[s] = taste_max > 0.0 ? taste_max * rng.next_unit() : 0.0;
        total[s] = walk[s] + quality[s] + taste[s];
      }
      std::vector<double> sorted = total;
      std::sort(sorted.begin(), sorted.end());
      bool tied = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
      if (!tied || taste_max == 0.0) break;
    }

    std::vector<SchoolId> order(kSchools);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](SchoolId a, SchoolId b) {
      if (total[a - 1] != total[b - 1]) return total[a - 1] > total[b - 1];
      return a < b;  // only reachable with the taste hook off
    });
    orders[i - 1] = order;

    for (int s = 0; s < kSchools; ++s)
      out.utilities.push_back(
          {i, s + 1, walk[s], quality[s], taste[s], total[s]});
  }

  std::vector<int> capacities = {4, 4, 2, 2, 2, 2, 2};
  std::vector<School> schools =
      gen_priorities(num_students, capacities, derive_seed(seed, 0x7a6f6e65));
  out.market = Market(num_students, std::move(schools),
                      PreferenceProfile(kSchools, std::move(orders)), "designed18");
  return out;
}

}  // namespace sc
