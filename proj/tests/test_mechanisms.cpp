#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "core/assignment.hpp"
#include "core/market.hpp"
#include "core/mechanisms.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using sc::Matching;
using sc::PreferenceProfile;

namespace {

const PreferenceProfile& truthful(const sc::Market& m) { return *m.true_prefs(); }

}  // namespace

TEST_CASE("mechanism names round-trip") {
  for (auto m : {sc::Mechanism::da, sc::Mechanism::eada, sc::Mechanism::rm})
    CHECK(sc::mechanism_from_string(sc::to_string(m)) == m);
  CHECK_THROWS_AS(sc::mechanism_from_string("boston"), sc::Error);
}

TEST_CASE("four-student deferred acceptance: matching and full trace") {
  sc::DaResult result = sc::run_da(fixtures::toy4(), truthful(fixtures::toy4()));
  CHECK(result.matching.raw() == fixtures::kToy4Da);
  REQUIRE(result.trace.rounds.size() == 7);

  using Apps = std::vector<std::pair<sc::StudentId, sc::SchoolId>>;
  const sc::DaRound& r1 = result.trace.rounds[0];
  CHECK(r1.applications == Apps{{1, 2}, {2, 2}, {3, 4}, {4, 4}});
  CHECK(r1.holders[1] == std::vector<sc::StudentId>{1});
  CHECK(r1.holders[3] == std::vector<sc::StudentId>{4});
  CHECK(r1.rejected[1] == std::vector<sc::StudentId>{2});
  CHECK(r1.rejected[3] == std::vector<sc::StudentId>{3});

  const sc::DaRound& r2 = result.trace.rounds[1];
  CHECK(r2.applications == Apps{{2, 4}, {3, 3}});
  CHECK(r2.rejected[3] == std::vector<sc::StudentId>{4});

  // the long rejection chain: s2's seat changes hands twice more
  const sc::DaRound& r4 = result.trace.rounds[3];
  CHECK(r4.applications == Apps{{3, 2}});
  CHECK(r4.holders[1] == std::vector<sc::StudentId>{3});
  CHECK(r4.rejected[1] == std::vector<sc::StudentId>{1});

  const sc::DaRound& r7 = result.trace.rounds[6];
  CHECK(r7.applications == Apps{{3, 1}});
  for (int s = 0; s < 4; ++s) CHECK(r7.rejected[s].empty());
  CHECK(r7.holders[0] == std::vector<sc::StudentId>{3});
  CHECK(r7.holders[1] == std::vector<sc::StudentId>{4});
  CHECK(r7.holders[2] == std::vector<sc::StudentId>{1});
  CHECK(r7.holders[3] == std::vector<sc::StudentId>{2});
}

TEST_CASE("four-student efficiency-adjusted da settles schools in order") {
  sc::EadaResult result = sc::run_eada(fixtures::toy4(), truthful(fixtures::toy4()));
  CHECK(result.matching.raw() == fixtures::kToy4Eada);
  REQUIRE(result.iterations.size() == 4);
  CHECK(result.iterations[0].underdemanded == std::vector<sc::SchoolId>{1});
  CHECK(result.iterations[1].underdemanded == std::vector<sc::SchoolId>{3});
  CHECK(result.iterations[2].underdemanded == std::vector<sc::SchoolId>{4});
  CHECK(result.iterations[3].underdemanded == std::vector<sc::SchoolId>{2});

  using Settled = std::vector<std::pair<sc::StudentId, sc::SchoolId>>;
  CHECK(result.iterations[0].settled == Settled{{3, 1}});
  CHECK(result.iterations[1].settled == Settled{{4, 3}});
  CHECK(result.iterations[2].settled == Settled{{2, 4}});
  CHECK(result.iterations[3].settled == Settled{{1, 2}});

  // iteration 1 reruns the full instance, so its trace equals plain DA
  sc::DaResult da = sc::run_da(fixtures::toy4(), truthful(fixtures::toy4()));
  CHECK(result.iterations[0].da.matching == da.matching);
  CHECK(result.iterations[0].da.trace.rounds.size() == 7);
  // iteration 2 runs without student 3 / school 1 and needs only 3 rounds
  CHECK(result.iterations[1].da.trace.rounds.size() == 3);
}

TEST_CASE("eighteen-student market: da and eada reproduce the frozen reference runs") {
  const sc::Market& lab = fixtures::lab18();
  sc::DaResult da = sc::run_da(lab, truthful(lab));
  CHECK(da.matching.raw() == fixtures::kLab18Da);
  CHECK(da.trace.rounds.size() == 13);

  sc::EadaResult eada = sc::run_eada(lab, truthful(lab));
  CHECK(eada.matching.raw() == fixtures::kLab18Eada);
  REQUIRE(eada.iterations.size() == 5);
  CHECK(eada.iterations[0].underdemanded == std::vector<sc::SchoolId>{6});
  CHECK(eada.iterations[1].underdemanded == std::vector<sc::SchoolId>{3, 4, 7});
  CHECK(eada.iterations[2].underdemanded == std::vector<sc::SchoolId>{1});
  CHECK(eada.iterations[3].underdemanded == std::vector<sc::SchoolId>{5});
  CHECK(eada.iterations[4].underdemanded == std::vector<sc::SchoolId>{2});
}

TEST_CASE("da traces account for every rejection and hold capacities") {
  std::mt19937_64 rng(7101);
  for (int trial = 0; trial < 50; ++trial) {
    sc::Market m = oracle::random_market(rng, 2 + static_cast<int>(rng() % 6), 2 + rng() % 4);
    sc::DaResult result = sc::run_da(m, truthful(m));
    for (const sc::DaRound& round : result.trace.rounds) {
      CHECK_FALSE(round.applications.empty());
      for (int s = 1; s <= m.num_schools(); ++s) {
        CHECK(static_cast<int>(round.holders[s - 1].size()) <= m.capacity(s));
        // holders are listed in priority order
        for (size_t k = 1; k < round.holders[s - 1].size(); ++k)
          CHECK(m.higher_priority(s, round.holders[s - 1][k - 1], round.holders[s - 1][k]));
      }
    }
    // final holders snapshot equals the returned matching
    const sc::DaRound& last = result.trace.rounds.back();
    for (sc::StudentId i = 1; i <= m.num_students(); ++i) {
      sc::SchoolId s = result.matching.of(i);
      if (s == 0) continue;
      const auto& hold = last.holders[s - 1];
      CHECK(std::find(hold.begin(), hold.end(), i) != hold.end());
    }
  }
}

TEST_CASE("da is stable with respect to the submitted preferences") {
  std::mt19937_64 rng(20260814);
  for (int trial = 0; trial < 200; ++trial) {
    sc::Market m = oracle::random_market(rng, 2 + static_cast<int>(rng() % 6), 2 + rng() % 4,
                                         trial % 4 != 0);  // every 4th market may under-seat
    sc::DaResult result = sc::run_da(m, truthful(m));
    CHECK(oracle::blocking_pairs_bruteforce(result.matching, truthful(m), m).empty());
  }
}

TEST_CASE("eada weakly dominates da and is efficient") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 120; ++trial) {
    sc::Market m = oracle::random_market(rng, 2 + static_cast<int>(rng() % 5), 2 + rng() % 4);
    Matching da = sc::run_da(m, truthful(m)).matching;
    Matching eada = sc::run_eada(m, truthful(m)).matching;
    if (eada != da) CHECK(oracle::dominates(eada, da, truthful(m)));
    if (m.num_students() <= 6)
      CHECK(oracle::pareto_efficient_bruteforce(eada, m, truthful(m)));
  }
}

TEST_CASE("restricting da to the full market changes nothing") {
  const sc::Market& lab = fixtures::lab18();
  std::vector<bool> all_students(lab.num_students() + 1, true);
  std::vector<bool> all_schools(lab.num_schools() + 1, true);
  sc::DaResult restricted =
      sc::run_da_restricted(lab, truthful(lab), all_students, all_schools);
  sc::DaResult full = sc::run_da(lab, truthful(lab));
  CHECK(restricted.matching == full.matching);
  CHECK(restricted.trace.rounds.size() == full.trace.rounds.size());
}

TEST_CASE("rank minimization enumerates exactly the brute-force optimum set") {
  // toy instance first: minimum 7 via two matchings
  sc::RankMinimalSet set = sc::enumerate_rank_minimizing(fixtures::toy4(),
                                                         truthful(fixtures::toy4()));
  CHECK(set.min_total_rank == 7);
  CHECK_FALSE(set.truncated);
  REQUIRE(set.matchings.size() == 2);
  CHECK(set.matchings[0].raw() == fixtures::kToy4RmA);
  CHECK(set.matchings[1].raw() == fixtures::kToy4RmB);

  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    sc::Market m = oracle::random_market(rng, 2 + static_cast<int>(rng() % 5), 2 + rng() % 4);
    sc::RankMinimalSet got = sc::enumerate_rank_minimizing(m, truthful(m));
    auto [want_cost, want_set] = oracle::rank_minimizers(m, truthful(m));
    CHECK(got.min_total_rank == want_cost);
    REQUIRE(got.matchings.size() == want_set.size());
    // both enumerations emit lexicographic by-student order
    std::sort(want_set.begin(), want_set.end());
    for (size_t k = 0; k < want_set.size(); ++k) CHECK(got.matchings[k] == want_set[k]);
  }
}

TEST_CASE("rank minimization reports infeasibility and budget exhaustion") {
  sc::Market tight(3, {{1, 1, {1, 2, 3}}, {2, 1, {1, 2, 3}}});
  sc::PreferenceProfile prefs(2, {{1, 2}, {1, 2}, {2, 1}});
  CHECK_THROWS_WITH_AS(sc::enumerate_rank_minimizing(tight, prefs),
                       doctest::Contains("seats"), sc::Error);
  try {
    sc::enumerate_rank_minimizing(tight, prefs);
  } catch (const sc::Error& e) {
    CHECK(e.code() == sc::Errc::infeasible);
  }

  sc::RankMinimalSet capped =
      sc::enumerate_rank_minimizing(fixtures::toy4(), truthful(fixtures::toy4()), 1);
  CHECK(capped.truncated);
  CHECK(capped.matchings.size() == 1);
  CHECK(capped.min_total_rank == 7);

  try {
    sc::run_rm(fixtures::toy4(), truthful(fixtures::toy4()), 1, 1);
    FAIL("expected budget error");
  } catch (const sc::Error& e) {
    CHECK(e.code() == sc::Errc::budget);
  }
  CHECK_NOTHROW(sc::run_rm(fixtures::toy4(), truthful(fixtures::toy4()), 1, 1, true));
}

TEST_CASE("rm draws are deterministic per seed and uniform across seeds") {
  const sc::Market& toy = fixtures::toy4();
  Matching first = sc::run_rm(toy, truthful(toy), 7);
  CHECK(sc::run_rm(toy, truthful(toy), 7) == first);

  int count_a = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Matching mu = sc::run_rm(toy, truthful(toy), seed);
    bool is_a = mu.raw() == fixtures::kToy4RmA;
    if (is_a) ++count_a;
    CHECK((is_a || mu.raw() == fixtures::kToy4RmB));
  }
  // a fair coin over 10k draws stays well inside +-2%
  CHECK(count_a > 4800);
  CHECK(count_a < 5200);
}

TEST_CASE("rm total rank is minimal against every feasible matching") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 40; ++trial) {
    sc::Market m = oracle::random_market(rng, 2 + static_cast<int>(rng() % 5), 2 + rng() % 3);
    Matching mu = sc::run_rm(m, truthful(m), trial);
    long long cost = oracle::total_rank(mu, truthful(m));
    for (const Matching& other : oracle::all_complete_matchings(m))
      CHECK(cost <= oracle::total_rank(other, truthful(m)));
  }
}
