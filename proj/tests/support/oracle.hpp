// Brute-force reference implementations used to cross-check the library.
// Everything here enumerates, on purpose: these routes must stay independent
// of the algorithms under test, so they share no code with src/core beyond
// the basic Market/Matching types.
#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "core/market.hpp"

namespace oracle {

// Every complete matching (each student seated, capacities respected),
// generated in lexicographic by-student order.
inline std::vector<sc::Matching> all_complete_matchings(const sc::Market& market) {
  std::vector<sc::Matching> out;
  std::vector<int> free_seats(market.num_schools());
  for (int s = 1; s <= market.num_schools(); ++s) free_seats[s - 1] = market.capacity(s);
  std::vector<sc::SchoolId> cur(market.num_students(), 0);
  auto rec = [&](auto&& rec, int i) -> void {
    if (i > market.num_students()) {
      out.emplace_back(cur);
      return;
    }
    for (sc::SchoolId s = 1; s <= market.num_schools(); ++s) {
      if (free_seats[s - 1] == 0) continue;
      --free_seats[s - 1];
      cur[i - 1] = s;
      rec(rec, i + 1);
      ++free_seats[s - 1];
    }
  };
  rec(rec, 1);
  return out;
}

inline long long total_rank(const sc::Matching& mu, const sc::PreferenceProfile& prefs) {
  long long sum = 0;
  for (sc::StudentId i = 1; i <= mu.num_students(); ++i) sum += prefs.rank_of(i, mu.of(i));
  return sum;
}

// Minimum total rank and all argmins, via full enumeration.
inline std::pair<long long, std::vector<sc::Matching>> rank_minimizers(
    const sc::Market& market, const sc::PreferenceProfile& prefs) {
  long long best = -1;
  std::vector<sc::Matching> argmin;
  for (const sc::Matching& mu : all_complete_matchings(market)) {
    long long cost = total_rank(mu, prefs);
    if (best < 0 || cost < best) {
      best = cost;
      argmin.clear();
    }
    if (cost == best) argmin.push_back(mu);
  }
  return {best, argmin};
}

// a weakly improves on b everywhere and strictly somewhere (ranks by prefs;
// unassigned counts worse than any school).
inline bool dominates(const sc::Matching& a, const sc::Matching& b,
                      const sc::PreferenceProfile& prefs) {
  bool strict = false;
  for (sc::StudentId i = 1; i <= a.num_students(); ++i) {
    int ra = prefs.rank_or_unassigned(i, a.of(i));
    int rb = prefs.rank_or_unassigned(i, b.of(i));
    if (ra > rb) return false;
    if (ra < rb) strict = true;
  }
  return strict;
}

// Pareto efficiency by scanning every complete matching for a dominator.
inline bool pareto_efficient_bruteforce(const sc::Matching& mu, const sc::Market& market,
                                        const sc::PreferenceProfile& prefs) {
  for (const sc::Matching& other : all_complete_matchings(market))
    if (dominates(other, mu, prefs)) return false;
  return true;
}

// Stability check written directly from the definition: student i and school
// s block when i strictly prefers s to their assignment and s has either a
// free seat or an assigned student it ranks below i.
inline std::vector<std::pair<sc::StudentId, sc::SchoolId>> blocking_pairs_bruteforce(
    const sc::Matching& mu, const sc::PreferenceProfile& prefs, const sc::Market& market) {
  std::vector<std::pair<sc::StudentId, sc::SchoolId>> out;
  for (sc::StudentId i = 1; i <= mu.num_students(); ++i) {
    for (sc::SchoolId s = 1; s <= market.num_schools(); ++s) {
      if (prefs.rank_or_unassigned(i, s) >= prefs.rank_or_unassigned(i, mu.of(i))) continue;
      int seated = 0;
      bool outranked = false;
      for (sc::StudentId j = 1; j <= mu.num_students(); ++j) {
        if (mu.of(j) != s) continue;
        ++seated;
        if (market.priority_rank(s, i) < market.priority_rank(s, j)) outranked = true;
      }
      if (seated < market.capacity(s) || outranked) out.emplace_back(i, s);
    }
  }
  return out;
}

// Justified-envy triples per the definition, with 0 standing in for an
// empty seat.
inline std::set<std::tuple<sc::StudentId, sc::SchoolId, sc::StudentId>> envy_triples_bruteforce(
    const sc::Matching& mu, const sc::PreferenceProfile& prefs, const sc::Market& market) {
  std::set<std::tuple<sc::StudentId, sc::SchoolId, sc::StudentId>> out;
  for (sc::StudentId i = 1; i <= mu.num_students(); ++i) {
    for (sc::SchoolId s = 1; s <= market.num_schools(); ++s) {
      if (prefs.rank_or_unassigned(i, s) >= prefs.rank_or_unassigned(i, mu.of(i))) continue;
      int seated = 0;
      for (sc::StudentId j = 1; j <= mu.num_students(); ++j) {
        if (mu.of(j) != s) continue;
        ++seated;
        if (market.priority_rank(s, i) < market.priority_rank(s, j)) out.insert({i, s, j});
      }
      if (seated < market.capacity(s)) out.insert({i, s, 0});
    }
  }
  return out;
}

// Uniformly random market for property tests. Drawn with std::mt19937_64 so
// the test stream never coincides with the library's generator. Preferences
// are embedded as true_prefs; capacities sum to at least num_students when
// `cover` is set.
inline sc::Market random_market(std::mt19937_64& rng, int num_students, int num_schools,
                                bool cover = true) {
  std::vector<int> caps(num_schools, 1);
  int seats = num_schools;
  std::uniform_int_distribution<int> extra(0, 2);
  for (int s = 0; s < num_schools; ++s) {
    caps[s] += extra(rng);
    seats += caps[s] - 1;
  }
  while (cover && seats < num_students) {
    caps[static_cast<size_t>(rng() % num_schools)] += 1;
    ++seats;
  }
  std::vector<sc::School> schools;
  std::vector<sc::StudentId> ids(num_students);
  for (int i = 0; i < num_students; ++i) ids[i] = i + 1;
  for (int s = 1; s <= num_schools; ++s) {
    std::vector<sc::StudentId> prio = ids;
    std::shuffle(prio.begin(), prio.end(), rng);
    schools.push_back({s, caps[s - 1], std::move(prio)});
  }
  std::vector<std::vector<sc::SchoolId>> orders(num_students);
  std::vector<sc::SchoolId> base(num_schools);
  for (int s = 0; s < num_schools; ++s) base[s] = s + 1;
  for (int i = 0; i < num_students; ++i) {
    orders[i] = base;
    std::shuffle(orders[i].begin(), orders[i].end(), rng);
  }
  return sc::Market(num_students, std::move(schools),
                    sc::PreferenceProfile(num_schools, std::move(orders)));
}

}  // namespace oracle
