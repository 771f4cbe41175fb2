#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "core/market.hpp"
#include "core/mechanisms.hpp"

namespace sc {

// How rank-minimizing outcomes enter counterfactual comparisons: one seeded
// draw from the optimum set, or the average induced rank over all optima.
enum class RmMode { single_draw, all_optima };

bool is_truthful(const PreferenceProfile& submitted, const PreferenceProfile& induced,
                 StudentId i);

// The student's priority position at their induced top choice is within its
// capacity, so listing it first guarantees that seat under DA.
bool has_safe_top(const Market& market, const PreferenceProfile& induced, StudentId i);

// Safe top choice, yet the submitted first choice differs from it.
bool is_obvious_mistake(const Market& market, const PreferenceProfile& induced,
                        const PreferenceProfile& submitted, StudentId i);

enum class ConsequenceKind {
  not_applicable,   // the report was truthful
  inconsequential,  // same induced rank as the truthful counterfactual
  beneficial,       // strictly better rank than truthful
  harmful,          // strictly worse rank than truthful
};

struct Consequence {
  ConsequenceKind kind = ConsequenceKind::not_applicable;
  double delta_rank = 0.0;  // magnitude of change; fractional under all-optima RM
};

// Re-runs the mechanism with student i's report replaced by their induced
// ranking, everyone else unchanged, and compares i's induced rank across the
// two runs.
Consequence classify_consequence(const Market& market, const PreferenceProfile& submitted,
                                 const PreferenceProfile& induced, StudentId i,
                                 Mechanism mechanism, RmMode rm_mode = RmMode::single_draw,
                                 std::uint64_t seed = 0, int rm_cap = 10000);

struct ManipulationScan {
  StudentId student = 0;
  double baseline_rank = 0.0;  // induced rank when i reports truthfully
  std::vector<std::pair<std::vector<SchoolId>, double>> beneficial;  // report, achieved rank
  long long num_harmful = 0;
  long long num_inconsequential = 0;
  long long num_candidates = 0;
  bool budget_exhausted = false;  // candidate space larger than the budget
};

// Classifies candidate reports for student i against the truthful baseline,
// holding everyone else's submission fixed. Exhaustive over all M!-1
// non-truthful reports when the budget allows, otherwise a seeded uniform
// sample of the budgeted size.
ManipulationScan scan_manipulations(const Market& market, const PreferenceProfile& others,
                                    const PreferenceProfile& induced, StudentId i,
                                    Mechanism mechanism, long long budget = 1000000,
                                    std::uint64_t seed = 0, int rm_cap = 10000);

// Deliberate demotion of high-demand schools: at least one demoted relative
// to the induced ranking, none promoted, and the rest of the list keeps its
// induced relative order.
bool detect_skip_down(const PreferenceProfile& induced, const PreferenceProfile& submitted,
                      StudentId i, std::pair<SchoolId, SchoolId> high_demand);

// Keeps the induced top choice first but pushes a high-demand school (not
// the top itself) up into position 2 or 3, the rest keeping induced order.
bool detect_inflate_demand(const PreferenceProfile& induced, const PreferenceProfile& submitted,
                           StudentId i, std::pair<SchoolId, SchoolId> high_demand);

// First list position where the submission departs from the induced
// ranking; empty when truthful.
std::optional<int> first_deviation_position(const PreferenceProfile& induced,
                                            const PreferenceProfile& submitted, StudentId i);

struct BehaviorRecord {
  StudentId student = 0;
  bool truthful = false;
  bool safe_top = false;
  bool obvious_mistake = false;
  bool skip_down = false;
  bool inflate_demand = false;
  Consequence consequence;
  std::optional<int> first_deviation;
};

BehaviorRecord classify_subject(const Market& market, const PreferenceProfile& submitted,
                                const PreferenceProfile& induced, StudentId i,
                                Mechanism mechanism, RmMode rm_mode,
                                std::optional<std::pair<SchoolId, SchoolId>> high_demand,
                                std::uint64_t seed = 0, int rm_cap = 10000);

struct BehaviorSummary {
  int num_subjects = 0;
  int num_truthful = 0;
  int num_safe_top = 0;
  int num_obvious_mistakes = 0;
  int num_beneficial = 0;
  int num_harmful = 0;
  int num_inconsequential = 0;
  int num_skip_down = 0;
  int num_inflate_demand = 0;
  double mean_rank_gain = 0.0;  // over beneficial deviators
  double mean_rank_loss = 0.0;  // over harmful deviators
  std::vector<int> first_deviation_hist;  // slot p-1 = deviations first seen at position p
};

BehaviorSummary summarize_behavior(const std::vector<BehaviorRecord>& records, int num_schools);

}  // namespace sc
