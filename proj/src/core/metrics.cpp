#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace sc {

int RankProfile::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

RankProfile rank_profile(const Matching& matching, const PreferenceProfile& prefs) {
  if (!matching.complete())
    throw Error(Errc::validation, "rank profile needs a complete matching");
  RankProfile out;
  out.counts.assign(prefs.num_schools(), 0);
  for (StudentId i = 1; i <= matching.num_students(); ++i)
    out.counts[prefs.rank_of(i, matching.of(i)) - 1] += 1;
  return out;
}

Rational average_rank(const RankProfile& profile) {
  long long sum = 0;
  for (std::size_t r = 0; r < profile.counts.size(); ++r)
    sum += static_cast<long long>(r + 1) * profile.counts[r];
  long long n = profile.total();
  if (n == 0) throw Error(Errc::validation, "empty rank profile");
  long long g = std::gcd(sum, n);
  return Rational{sum / g, n / g};
}

int max_rank(const RankProfile& profile) {
  for (int r = static_cast<int>(profile.counts.size()); r >= 1; --r)
    if (profile.counts[r - 1] > 0) return r;
  return 0;
}

EnvyReport justified_envy(const Matching& matching, const PreferenceProfile& prefs,
                          const Market& market) {
  EnvyReport out;
  auto rosters = matching.rosters(market.num_schools());
  std::set<StudentId> enviers;
  for (StudentId i = 1; i <= matching.num_students(); ++i) {
    int own = prefs.rank_or_unassigned(i, matching.of(i));
    for (SchoolId s = 1; s <= market.num_schools(); ++s) {
      if (s == matching.of(i) || prefs.rank_of(i, s) >= own) continue;
      const auto& seated = rosters[s - 1];
      if (static_cast<int>(seated.size()) < market.capacity(s)) {
        out.triples.push_back({i, s, 0});
        enviers.insert(i);
      }
      for (StudentId j : seated) {
        if (market.higher_priority(s, i, j)) {
          out.triples.push_back({i, s, j});
          enviers.insert(i);
        }
      }
    }
  }
  out.num_enviers = static_cast<int>(enviers.size());
  return out;
}

std::vector<std::pair<StudentId, SchoolId>> blocking_pairs(const Matching& matching,
                                                           const PreferenceProfile& prefs,
                                                           const Market& market) {
  std::set<std::pair<StudentId, SchoolId>> pairs;
  for (const EnvyTriple& t : justified_envy(matching, prefs, market).triples)
    pairs.insert({t.envier, t.school});
  return {pairs.begin(), pairs.end()};
}

bool pareto_dominates(const Matching& a, const Matching& b, const PreferenceProfile& prefs) {
  bool strict = false;
  for (StudentId i = 1; i <= a.num_students(); ++i) {
    int ra = prefs.rank_or_unassigned(i, a.of(i));
    int rb = prefs.rank_or_unassigned(i, b.of(i));
    if (ra > rb) return false;
    if (ra < rb) strict = true;
  }
  return strict;
}

bool is_pareto_efficient(const Matching& matching, const PreferenceProfile& prefs,
                         const Market& market) {
  int n = matching.num_students();
  auto rosters = matching.rosters(market.num_schools());

  for (StudentId i = 1; i <= n; ++i) {
    int own = prefs.rank_or_unassigned(i, matching.of(i));
    for (SchoolId s = 1; s <= market.num_schools(); ++s)
      if (static_cast<int>(rosters[s - 1].size()) < market.capacity(s) &&
          prefs.rank_of(i, s) < own)
        return false;
  }

  // cycle of students, each strictly preferring the next one's school
  std::vector<std::vector<int>> adj(n);
  for (StudentId i = 1; i <= n; ++i) {
    int own = prefs.rank_or_unassigned(i, matching.of(i));
    for (StudentId j = 1; j <= n; ++j)
      if (j != i && matching.of(j) != matching.of(i) &&
          prefs.rank_or_unassigned(i, matching.of(j)) < own)
        adj[i - 1].push_back(j - 1);
  }
  std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
  auto has_cycle = [&](auto&& self, int u) -> bool {
    color[u] = 1;
    for (int v : adj[u]) {
      if (color[v] == 1) return true;
      if (color[v] == 0 && self(self, v)) return true;
    }
    color[u] = 2;
    return false;
  };
  for (int u = 0; u < n; ++u)
    if (color[u] == 0 && has_cycle(has_cycle, u)) return false;
  return true;
}

double improvable_share(const Matching& matching, const PreferenceProfile& prefs) {
  int n = matching.num_students();
  std::vector<bool> improvable(n, false);
  for (StudentId i = 1; i <= n; ++i) {
    for (StudentId j = i + 1; j <= n; ++j) {
      if (matching.of(i) == matching.of(j)) continue;
      bool i_up = prefs.rank_or_unassigned(i, matching.of(j)) <
                  prefs.rank_or_unassigned(i, matching.of(i));
      bool j_up = prefs.rank_or_unassigned(j, matching.of(i)) <
                  prefs.rank_or_unassigned(j, matching.of(j));
      if (i_up && j_up) improvable[i - 1] = improvable[j - 1] = true;
    }
  }
  return static_cast<double>(std::count(improvable.begin(), improvable.end(), true)) / n;
}

SortingIndex sorting_metrics(const Matching& matching, const std::vector<double>& scores,
                             const Market& market) {
  int n = matching.num_students();
  if (static_cast<int>(scores.size()) != n)
    throw Error(Errc::validation, "scores must cover every student");

  auto rosters = matching.rosters(market.num_schools());
  double grand = 0.0;
  for (double v : scores) grand += v;
  grand /= n;

  double total_ss = 0.0;
  for (double v : scores) total_ss += (v - grand) * (v - grand);

  SortingIndex out;
  if (total_ss == 0.0) return out;

  double between_ss = 0.0;
  std::vector<double> means;
  for (const auto& seated : rosters) {
    if (seated.empty()) continue;
    double m = 0.0;
    for (StudentId i : seated) m += scores[i - 1];
    m /= static_cast<double>(seated.size());
    means.push_back(m);
    between_ss += static_cast<double>(seated.size()) * (m - grand) * (m - grand);
  }
  out.between_share = between_ss / total_ss;

  double mm = 0.0;
  for (double m : means) mm += m;
  mm /= static_cast<double>(means.size());
  double var = 0.0;
  for (double m : means) var += (m - mm) * (m - mm);
  out.dispersion = std::sqrt(var / static_cast<double>(means.size()));
  return out;
}

}  // namespace sc
