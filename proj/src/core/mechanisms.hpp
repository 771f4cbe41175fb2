#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/market.hpp"

namespace sc {

enum class Mechanism { da, eada, rm };

Mechanism mechanism_from_string(const std::string& name);  // "da" | "eada" | "rm"
std::string to_string(Mechanism m);

// One synchronous proposal round. holders/rejected are indexed by school
// (slot s-1) and listed in priority order; holders is the post-round
// snapshot, rejected covers exactly this round. Every student rejected at s
// was either a new applicant to s this round or displaced from holding s.
struct DaRound {
  std::vector<std::pair<StudentId, SchoolId>> applications;
  std::vector<std::vector<StudentId>> holders;
  std::vector<std::vector<StudentId>> rejected;
};

struct DaTrace {
  std::vector<DaRound> rounds;
};

struct DaResult {
  Matching matching;
  DaTrace trace;
};

// Student-proposing deferred acceptance with synchronous rounds: every
// unheld student proposes to their best unexhausted school, then schools
// keep the top-capacity slice of holders plus new applicants.
DaResult run_da(const Market& market, const PreferenceProfile& profile);

// DA on the sub-instance spanned by the active students and schools, with
// preferences and priorities restricted. Ids in the trace stay original.
DaResult run_da_restricted(const Market& market, const PreferenceProfile& profile,
                           const std::vector<bool>& active_students,
                           const std::vector<bool>& active_schools);

struct EadaIteration {
  DaResult da;                          // DA on the iteration's sub-instance
  std::vector<SchoolId> underdemanded;  // schools that rejected nobody in that run
  std::vector<std::pair<StudentId, SchoolId>> settled;
};

struct EadaResult {
  Matching matching;
  std::vector<EadaIteration> iterations;
};

// Efficiency-adjusted DA in the simplified form with universal consent:
// repeatedly run DA, permanently match every underdemanded school with its
// holders, remove them, and recurse on the remainder.
EadaResult run_eada(const Market& market, const PreferenceProfile& profile);

}  // namespace sc
