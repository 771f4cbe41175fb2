#pragma once

#include <vector>

#include "core/market.hpp"

namespace sc {

// counts[r-1] = number of students assigned their r-th ranked school.
// Requires a complete matching; counts sum to the number of students.
struct RankProfile {
  std::vector<int> counts;
  int total() const;
};

RankProfile rank_profile(const Matching& matching, const PreferenceProfile& prefs);

struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

Rational average_rank(const RankProfile& profile);  // reduced fraction
int max_rank(const RankProfile& profile);

// (envier, school, envied): envier prefers school to their own assignment
// and either outranks the seated student `envied` in the school's priority
// order, or the school has an unfilled seat (then envied = 0).
struct EnvyTriple {
  StudentId envier = 0;
  SchoolId school = 0;
  StudentId envied = 0;
  bool operator==(const EnvyTriple&) const = default;
};

struct EnvyReport {
  std::vector<EnvyTriple> triples;
  int num_enviers = 0;  // distinct envier ids
  bool stable() const { return triples.empty(); }
};

EnvyReport justified_envy(const Matching& matching, const PreferenceProfile& prefs,
                          const Market& market);

// Distinct (student, school) blocking pairs, ascending.
std::vector<std::pair<StudentId, SchoolId>> blocking_pairs(const Matching& matching,
                                                           const PreferenceProfile& prefs,
                                                           const Market& market);

// a weakly improves every student relative to b and strictly improves one.
bool pareto_dominates(const Matching& a, const Matching& b, const PreferenceProfile& prefs);

// Checks for an improving trade: either some student prefers a school with
// an unfilled seat, or a cycle of students each preferring the next one's
// school exists.
bool is_pareto_efficient(const Matching& matching, const PreferenceProfile& prefs,
                         const Market& market);

// Share of students who strictly improve in some two-student swap in which
// the partner also (necessarily strictly) improves.
double improvable_share(const Matching& matching, const PreferenceProfile& prefs);

// Ability sorting of a score across schools: share of total variance lying
// between schools (school means weighted by assigned counts) and the
// population SD of school means. Schools with no assigned students are
// ignored; zero total variance yields zeros.
struct SortingIndex {
  double between_share = 0.0;
  double dispersion = 0.0;
};

SortingIndex sorting_metrics(const Matching& matching, const std::vector<double>& scores,
                             const Market& market);

}  // namespace sc
