#include "core/assignment.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "core/rng.hpp"

namespace sc {

namespace {

// Min-cost assignment of students first_student..n to schools with the given
// remaining capacities, costs = preference ranks. Successive shortest paths
// with Bellman-Ford; the graphs here are tiny.
class SuffixSolver {
 public:
  SuffixSolver(const Market& market, const PreferenceProfile& profile)
      : market_(market), profile_(profile), n_(market.num_students()), m_(market.num_schools()) {}

  long long min_cost(int first_student, const std::vector<int>& caps) {
    if (first_student > n_) return 0;
    auto key = std::make_pair(first_student, caps);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    long long v = solve(first_student, caps);
    memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  static constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

  long long solve(int first_student, const std::vector<int>& caps) {
    int students = n_ - first_student + 1;
    // node ids: 0 = source, 1..students, students+1..students+m_, sink last
    int sink = students + m_ + 1;
    struct Edge {
      int to;
      int cap;
      long long cost;
      int rev;
    };
    std::vector<std::vector<Edge>> g(sink + 1);
    auto add_edge = [&](int a, int b, int cap, long long cost) {
      g[a].push_back({b, cap, cost, static_cast<int>(g[b].size())});
      g[b].push_back({a, 0, -cost, static_cast<int>(g[a].size()) - 1});
    };
    for (int k = 0; k < students; ++k) {
      add_edge(0, 1 + k, 1, 0);
      StudentId i = first_student + k;
      for (SchoolId s = 1; s <= m_; ++s)
        if (caps[s - 1] > 0) add_edge(1 + k, students + s, 1, profile_.rank_of(i, s));
    }
    for (SchoolId s = 1; s <= m_; ++s)
      if (caps[s - 1] > 0) add_edge(students + s, sink, caps[s - 1], 0);

    long long total = 0;
    for (int unit = 0; unit < students; ++unit) {
      std::vector<long long> dist(sink + 1, kInf);
      std::vector<std::pair<int, int>> parent(sink + 1, {-1, -1});
      dist[0] = 0;
      bool changed = true;
      while (changed) {
        changed = false;
        for (int u = 0; u <= sink; ++u) {
          if (dist[u] == kInf) continue;
          for (std::size_t e = 0; e < g[u].size(); ++e) {
            const Edge& ed = g[u][e];
            if (ed.cap > 0 && dist[u] + ed.cost < dist[ed.to]) {
              dist[ed.to] = dist[u] + ed.cost;
              parent[ed.to] = {u, static_cast<int>(e)};
              changed = true;
            }
          }
        }
      }
      if (dist[sink] >= kInf) return kInf;  // not all students placeable
      total += dist[sink];
      for (int v = sink; v != 0;) {
        auto [u, e] = parent[v];
        g[u][e].cap -= 1;
        g[v][g[u][e].rev].cap += 1;
        v = u;
      }
    }
    return total;
  }

  const Market& market_;
  const PreferenceProfile& profile_;
  int n_, m_;
  std::map<std::pair<int, std::vector<int>>, long long> memo_;
};

}  // namespace

RankMinimalSet enumerate_rank_minimizing(const Market& market, const PreferenceProfile& profile,
                                         int max_optima) {
  int n = market.num_students();
  int m = market.num_schools();
  if (profile.num_students() != n || profile.num_schools() != m)
    throw Error(Errc::validation, "profile shape does not match market");
  if (max_optima < 1) throw Error(Errc::validation, "max_optima must be positive");
  if (market.total_seats() < n)
    throw Error(Errc::infeasible, "market has " + std::to_string(market.total_seats()) +
                                      " seats for " + std::to_string(n) + " students");

  SuffixSolver solver(market, profile);
  std::vector<int> caps(m);
  for (SchoolId s = 1; s <= m; ++s) caps[s - 1] = market.capacity(s);

  RankMinimalSet out;
  out.min_total_rank = solver.min_cost(1, caps);

  // Depth-first branch and bound: fix schools student by student, keep a
  // branch only when its cost plus the residual optimum still meets the
  // global optimum. Visiting schools in id order yields each optimal
  // matching exactly once, in lexicographic order.
  std::vector<SchoolId> chosen(n, 0);
  bool done = false;

  auto dfs = [&](auto&& self, int i, long long cost) -> void {
    if (done) return;
    if (i > n) {
      if (static_cast<int>(out.matchings.size()) == max_optima) {
        out.truncated = true;
        done = true;
        return;
      }
      out.matchings.emplace_back(chosen);
      return;
    }
    for (SchoolId s = 1; s <= m && !done; ++s) {
      if (caps[s - 1] == 0) continue;
      long long c = cost + profile.rank_of(i, s);
      caps[s - 1] -= 1;
      if (c + solver.min_cost(i + 1, caps) == out.min_total_rank) {
        chosen[i - 1] = s;
        self(self, i + 1, c);
        chosen[i - 1] = 0;
      }
      caps[s - 1] += 1;
    }
  };
  dfs(dfs, 1, 0);
  return out;
}

Matching run_rm(const Market& market, const PreferenceProfile& profile, std::uint64_t seed,
                int max_optima, bool allow_truncated) {
  RankMinimalSet set = enumerate_rank_minimizing(market, profile, max_optima);
  if (set.truncated && !allow_truncated)
    throw Error(Errc::budget, "rank-minimal optimum set exceeds cap of " +
                                  std::to_string(max_optima) + " matchings");
  Rng rng(derive_seed(seed, 0x726d));
  return set.matchings[rng.next_below(set.matchings.size())];
}

}  // namespace sc
