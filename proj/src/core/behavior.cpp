#include "core/behavior.hpp"

#include <algorithm>
#include <numeric>

#include "core/assignment.hpp"
#include "core/rng.hpp"

namespace sc {

namespace {

struct MeanRank {
  long long sum = 0;
  long long count = 1;
  double value() const { return static_cast<double>(sum) / static_cast<double>(count); }
};

bool operator==(const MeanRank& a, const MeanRank& b) {
  // cross-multiplied exact comparison; counts are capped well below overflow
  return a.sum * b.count == b.sum * a.count;
}

bool operator<(const MeanRank& a, const MeanRank& b) { return a.sum * b.count < b.sum * a.count; }

// Induced rank student i obtains from the mechanism on `profile`.
MeanRank achieved_rank(const Market& market, const PreferenceProfile& profile,
                       const PreferenceProfile& induced, StudentId i, Mechanism mechanism,
                       RmMode rm_mode, std::uint64_t seed, int rm_cap) {
  switch (mechanism) {
    case Mechanism::da:
      return {induced.rank_or_unassigned(i, run_da(market, profile).matching.of(i)), 1};
    case Mechanism::eada:
      return {induced.rank_or_unassigned(i, run_eada(market, profile).matching.of(i)), 1};
    case Mechanism::rm:
      if (rm_mode == RmMode::single_draw) {
        Matching mu = run_rm(market, profile, seed, rm_cap);
        return {induced.rank_or_unassigned(i, mu.of(i)), 1};
      } else {
        RankMinimalSet set = enumerate_rank_minimizing(market, profile, rm_cap);
        if (set.truncated)
          throw Error(Errc::budget, "rank-minimal optimum set exceeds cap in all-optima mode");
        MeanRank out{0, static_cast<long long>(set.matchings.size())};
        for (const Matching& mu : set.matchings)
          out.sum += induced.rank_or_unassigned(i, mu.of(i));
        return out;
      }
  }
  throw Error(Errc::validation, "unknown mechanism");
}

// induced relative order of `subset` must survive in the submission
bool order_preserved(const PreferenceProfile& induced, const PreferenceProfile& submitted,
                     StudentId i, const std::vector<SchoolId>& subset) {
  std::vector<SchoolId> a, b;
  for (SchoolId s : induced.order(i))
    if (std::find(subset.begin(), subset.end(), s) != subset.end()) a.push_back(s);
  for (SchoolId s : submitted.order(i))
    if (std::find(subset.begin(), subset.end(), s) != subset.end()) b.push_back(s);
  return a == b;
}

}  // namespace

bool is_truthful(const PreferenceProfile& submitted, const PreferenceProfile& induced,
                 StudentId i) {
  return submitted.order(i) == induced.order(i);
}

bool has_safe_top(const Market& market, const PreferenceProfile& induced, StudentId i) {
  SchoolId top = induced.top(i);
  return market.priority_rank(top, i) <= market.capacity(top);
}

bool is_obvious_mistake(const Market& market, const PreferenceProfile& induced,
                        const PreferenceProfile& submitted, StudentId i) {
  return has_safe_top(market, induced, i) && submitted.top(i) != induced.top(i);
}

Consequence classify_consequence(const Market& market, const PreferenceProfile& submitted,
                                 const PreferenceProfile& induced, StudentId i,
                                 Mechanism mechanism, RmMode rm_mode, std::uint64_t seed,
                                 int rm_cap) {
  if (is_truthful(submitted, induced, i)) return {ConsequenceKind::not_applicable, 0.0};

  PreferenceProfile counterfactual = submitted.with_order(i, induced.order(i));
  MeanRank actual = achieved_rank(market, submitted, induced, i, mechanism, rm_mode, seed, rm_cap);
  MeanRank truthful =
      achieved_rank(market, counterfactual, induced, i, mechanism, rm_mode, seed, rm_cap);

  if (actual == truthful) return {ConsequenceKind::inconsequential, 0.0};
  double delta = std::abs(actual.value() - truthful.value());
  if (actual < truthful) return {ConsequenceKind::beneficial, delta};
  return {ConsequenceKind::harmful, delta};
}

ManipulationScan scan_manipulations(const Market& market, const PreferenceProfile& others,
                                    const PreferenceProfile& induced, StudentId i,
                                    Mechanism mechanism, long long budget, std::uint64_t seed,
                                    int rm_cap) {
  if (budget < 1) throw Error(Errc::validation, "scan budget must be positive");
  int m = market.num_schools();
  RmMode mode = mechanism == Mechanism::rm ? RmMode::all_optima : RmMode::single_draw;

  PreferenceProfile truthful_profile = others.with_order(i, induced.order(i));
  MeanRank baseline =
      achieved_rank(market, truthful_profile, induced, i, mechanism, mode, seed, rm_cap);

  ManipulationScan out;
  out.student = i;
  out.baseline_rank = baseline.value();

  long long total = 1;
  for (int k = 2; k <= m; ++k) {
    total *= k;
    if (total > budget + 1) break;  // permutation count only matters near the budget
  }
  long long candidates = total - 1;  // non-truthful reports
  out.budget_exhausted = candidates > budget;

  auto consider = [&](const std::vector<SchoolId>& report) {
    PreferenceProfile trial = others.with_order(i, report);
    MeanRank achieved = achieved_rank(market, trial, induced, i, mechanism, mode, seed, rm_cap);
    ++out.num_candidates;
    if (achieved == baseline) {
      ++out.num_inconsequential;
    } else if (achieved < baseline) {
      out.beneficial.emplace_back(report, achieved.value());
    } else {
      ++out.num_harmful;
    }
  };

  if (!out.budget_exhausted) {
    std::vector<SchoolId> report(m);
    std::iota(report.begin(), report.end(), 1);
    do {
      if (report != induced.order(i)) consider(report);
    } while (std::next_permutation(report.begin(), report.end()));
  } else {
    Rng rng(derive_seed(seed, 0x5ca9, static_cast<std::uint64_t>(i)));
    std::vector<SchoolId> report(m);
    for (long long k = 0; k < budget; ++k) {
      do {
        std::iota(report.begin(), report.end(), 1);
        rng.shuffle(report);
      } while (report == induced.order(i));
      consider(report);
    }
  }
  return out;
}

bool detect_skip_down(const PreferenceProfile& induced, const PreferenceProfile& submitted,
                      StudentId i, std::pair<SchoolId, SchoolId> high_demand) {
  std::vector<SchoolId> hd = {high_demand.first, high_demand.second};
  std::vector<SchoolId> demoted;
  for (SchoolId s : hd) {
    if (submitted.rank_of(i, s) < induced.rank_of(i, s)) return false;  // promoted
    if (submitted.rank_of(i, s) > induced.rank_of(i, s)) demoted.push_back(s);
  }
  if (demoted.empty()) return false;

  std::vector<SchoolId> excluded = demoted;
  if (demoted.size() < 2) excluded.push_back(induced.top(i));
  std::vector<SchoolId> rest;
  for (SchoolId s = 1; s <= induced.num_schools(); ++s)
    if (std::find(excluded.begin(), excluded.end(), s) == excluded.end()) rest.push_back(s);
  return order_preserved(induced, submitted, i, rest);
}

bool detect_inflate_demand(const PreferenceProfile& induced, const PreferenceProfile& submitted,
                           StudentId i, std::pair<SchoolId, SchoolId> high_demand) {
  if (submitted.top(i) != induced.top(i)) return false;
  std::vector<SchoolId> promoted;
  for (SchoolId s : {high_demand.first, high_demand.second}) {
    if (s == induced.top(i)) continue;
    int pos = submitted.rank_of(i, s);
    if ((pos == 2 || pos == 3) && pos < induced.rank_of(i, s)) promoted.push_back(s);
  }
  if (promoted.empty()) return false;

  std::vector<SchoolId> excluded = promoted;
  excluded.push_back(induced.top(i));
  std::vector<SchoolId> rest;
  for (SchoolId s = 1; s <= induced.num_schools(); ++s)
    if (std::find(excluded.begin(), excluded.end(), s) == excluded.end()) rest.push_back(s);
  return order_preserved(induced, submitted, i, rest);
}

std::optional<int> first_deviation_position(const PreferenceProfile& induced,
                                            const PreferenceProfile& submitted, StudentId i) {
  const auto& a = induced.order(i);
  const auto& b = submitted.order(i);
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) return static_cast<int>(k + 1);
  return std::nullopt;
}

BehaviorRecord classify_subject(const Market& market, const PreferenceProfile& submitted,
                                const PreferenceProfile& induced, StudentId i,
                                Mechanism mechanism, RmMode rm_mode,
                                std::optional<std::pair<SchoolId, SchoolId>> high_demand,
                                std::uint64_t seed, int rm_cap) {
  BehaviorRecord rec;
  rec.student = i;
  rec.truthful = is_truthful(submitted, induced, i);
  rec.safe_top = has_safe_top(market, induced, i);
  rec.obvious_mistake = is_obvious_mistake(market, induced, submitted, i);
  if (high_demand) {
    rec.skip_down = detect_skip_down(induced, submitted, i, *high_demand);
    rec.inflate_demand = detect_inflate_demand(induced, submitted, i, *high_demand);
  }
  rec.consequence =
      classify_consequence(market, submitted, induced, i, mechanism, rm_mode, seed, rm_cap);
  rec.first_deviation = first_deviation_position(induced, submitted, i);
  return rec;
}

BehaviorSummary summarize_behavior(const std::vector<BehaviorRecord>& records, int num_schools) {
  BehaviorSummary s;
  s.first_deviation_hist.assign(num_schools, 0);
  double gain = 0.0, loss = 0.0;
  for (const BehaviorRecord& r : records) {
    ++s.num_subjects;
    if (r.truthful) ++s.num_truthful;
    if (r.safe_top) ++s.num_safe_top;
    if (r.obvious_mistake) ++s.num_obvious_mistakes;
    if (r.skip_down) ++s.num_skip_down;
    if (r.inflate_demand) ++s.num_inflate_demand;
    switch (r.consequence.kind) {
      case ConsequenceKind::beneficial:
        ++s.num_beneficial;
        gain += r.consequence.delta_rank;
        break;
      case ConsequenceKind::harmful:
        ++s.num_harmful;
        loss += r.consequence.delta_rank;
        break;
      case ConsequenceKind::inconsequential:
        ++s.num_inconsequential;
        break;
      case ConsequenceKind::not_applicable:
        break;
    }
    if (r.first_deviation) ++s.first_deviation_hist[*r.first_deviation - 1];
  }
  if (s.num_beneficial > 0) s.mean_rank_gain = gain / s.num_beneficial;
  if (s.num_harmful > 0) s.mean_rank_loss = loss / s.num_harmful;
  return s;
}

}  // namespace sc
