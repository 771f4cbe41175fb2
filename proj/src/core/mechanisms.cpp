#include "core/mechanisms.hpp"

#include <algorithm>

namespace sc {

Mechanism mechanism_from_string(const std::string& name) {
  if (name == "da") return Mechanism::da;
  if (name == "eada") return Mechanism::eada;
  if (name == "rm") return Mechanism::rm;
  throw Error(Errc::validation, "unknown mechanism '" + name + "' (expected da, eada or rm)");
}

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::da: return "da";
    case Mechanism::eada: return "eada";
    case Mechanism::rm: return "rm";
  }
  return "?";
}

DaResult run_da_restricted(const Market& market, const PreferenceProfile& profile,
                           const std::vector<bool>& active_students,
                           const std::vector<bool>& active_schools) {
  int n = market.num_students();
  int m = market.num_schools();
  if (profile.num_students() != n || profile.num_schools() != m)
    throw Error(Errc::validation, "profile shape does not match market");

  std::vector<int> next(n, 0);           // next rank to try, 0-based
  std::vector<SchoolId> held(n, 0);      // current tentative school, 0 = none
  std::vector<std::vector<StudentId>> holders(m);

  DaResult out;
  for (;;) {
    DaRound round;
    for (StudentId i = 1; i <= n; ++i) {
      if (!active_students[i - 1] || held[i - 1] != 0) continue;
      while (next[i - 1] < m && !active_schools[profile.choice(i, next[i - 1] + 1) - 1])
        ++next[i - 1];
      if (next[i - 1] >= m) continue;  // exhausted every active school
      SchoolId s = profile.choice(i, ++next[i - 1]);
      round.applications.emplace_back(i, s);
    }
    if (round.applications.empty()) break;

    round.rejected.assign(m, {});
    for (const auto& [i, s] : round.applications) holders[s - 1].push_back(i);
    for (SchoolId s = 1; s <= m; ++s) {
      auto& pool = holders[s - 1];
      if (pool.empty()) continue;
      std::sort(pool.begin(), pool.end(), [&](StudentId a, StudentId b) {
        return market.higher_priority(s, a, b);
      });
      int q = market.capacity(s);
      if (static_cast<int>(pool.size()) > q) {
        round.rejected[s - 1].assign(pool.begin() + q, pool.end());
        pool.resize(q);
      }
    }
    std::fill(held.begin(), held.end(), 0);
    for (SchoolId s = 1; s <= m; ++s)
      for (StudentId i : holders[s - 1]) held[i - 1] = s;

    round.holders = holders;
    out.trace.rounds.push_back(std::move(round));
  }

  out.matching = Matching(std::move(held));
  return out;
}

DaResult run_da(const Market& market, const PreferenceProfile& profile) {
  std::vector<bool> all_students(market.num_students(), true);
  std::vector<bool> all_schools(market.num_schools(), true);
  return run_da_restricted(market, profile, all_students, all_schools);
}

EadaResult run_eada(const Market& market, const PreferenceProfile& profile) {
  int n = market.num_students();
  int m = market.num_schools();
  std::vector<bool> students(n, true), schools(m, true);
  std::vector<SchoolId> final_school(n, 0);
  int remaining = n;

  EadaResult out;
  while (remaining > 0) {
    if (std::none_of(schools.begin(), schools.end(), [](bool b) { return b; })) {
      // more students than seats: whoever is left stays unassigned
      break;
    }
    EadaIteration it;
    it.da = run_da_restricted(market, profile, students, schools);

    std::vector<bool> rejected_at(m, false);
    for (const DaRound& r : it.da.trace.rounds)
      for (SchoolId s = 1; s <= m; ++s)
        if (!r.rejected.empty() && !r.rejected[s - 1].empty()) rejected_at[s - 1] = true;

    for (SchoolId s = 1; s <= m; ++s)
      if (schools[s - 1] && !rejected_at[s - 1]) it.underdemanded.push_back(s);
    if (it.underdemanded.empty())
      throw Error(Errc::validation, "internal: no underdemanded school in iteration");

    for (SchoolId s : it.underdemanded) {
      for (StudentId i = 1; i <= n; ++i) {
        if (students[i - 1] && it.da.matching.of(i) == s) {
          it.settled.emplace_back(i, s);
          final_school[i - 1] = s;
          students[i - 1] = false;
          --remaining;
        }
      }
      schools[s - 1] = false;
    }
    out.iterations.push_back(std::move(it));
  }

  out.matching = Matching(std::move(final_school));
  return out;
}

}  // namespace sc
