#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sc {

// Students and schools carry 1-based dense integer ids. A SchoolId of 0 in a
// matching means "unassigned", which can only arise when a market has fewer
// seats than students.
using StudentId = int;
using SchoolId = int;

enum class Errc {
  validation = 2,   // malformed or inconsistent input
  infeasible = 3,   // well-formed input with no feasible solution
  budget = 4,       // enumeration or sampling budget exhausted
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Strict ordering of all schools, best first, one row per student.
class PreferenceProfile {
 public:
  PreferenceProfile() = default;
  PreferenceProfile(int num_schools, std::vector<std::vector<SchoolId>> orders);

  int num_students() const { return static_cast<int>(orders_.size()); }
  int num_schools() const { return num_schools_; }
  const std::vector<SchoolId>& order(StudentId i) const { return orders_[i - 1]; }
  SchoolId choice(StudentId i, int rank) const { return orders_[i - 1][rank - 1]; }
  SchoolId top(StudentId i) const { return orders_[i - 1][0]; }
  int rank_of(StudentId i, SchoolId s) const { return rank_[i - 1][s - 1]; }
  // rank with unassigned (0) treated as strictly worse than every school
  int rank_or_unassigned(StudentId i, SchoolId s) const {
    return s == 0 ? num_schools_ + 1 : rank_[i - 1][s - 1];
  }
  PreferenceProfile with_order(StudentId i, std::vector<SchoolId> order) const;

  bool operator==(const PreferenceProfile&) const = default;

 private:
  int num_schools_ = 0;
  std::vector<std::vector<SchoolId>> orders_;
  std::vector<std::vector<int>> rank_;
};

struct School {
  SchoolId id = 0;
  int capacity = 0;
  std::vector<StudentId> priority;  // every student, highest priority first
};

class Market {
 public:
  Market() = default;
  Market(int num_students, std::vector<School> schools,
         std::optional<PreferenceProfile> true_prefs = std::nullopt,
         std::string name = "");

  int num_students() const { return num_students_; }
  int num_schools() const { return static_cast<int>(schools_.size()); }
  int total_seats() const { return total_seats_; }
  const School& school(SchoolId s) const { return schools_[s - 1]; }
  const std::vector<School>& schools() const { return schools_; }
  int capacity(SchoolId s) const { return schools_[s - 1].capacity; }
  // 1-based position of student i in s's priority order (1 = highest)
  int priority_rank(SchoolId s, StudentId i) const { return prio_pos_[s - 1][i - 1]; }
  bool higher_priority(SchoolId s, StudentId i, StudentId j) const {
    return prio_pos_[s - 1][i - 1] < prio_pos_[s - 1][j - 1];
  }
  const std::optional<PreferenceProfile>& true_prefs() const { return true_prefs_; }
  const std::string& name() const { return name_; }

 private:
  int num_students_ = 0;
  int total_seats_ = 0;
  std::vector<School> schools_;
  std::vector<std::vector<int>> prio_pos_;
  std::optional<PreferenceProfile> true_prefs_;
  std::string name_;
};

class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<SchoolId> by_student) : by_student_(std::move(by_student)) {}

  int num_students() const { return static_cast<int>(by_student_.size()); }
  SchoolId of(StudentId i) const { return by_student_[i - 1]; }
  bool complete() const;
  const std::vector<SchoolId>& raw() const { return by_student_; }
  // students per school, ascending id; index 0 = school 1
  std::vector<std::vector<StudentId>> rosters(int num_schools) const;

  auto operator<=>(const Matching&) const = default;

 private:
  std::vector<SchoolId> by_student_;
};

// Money is held in integer pence with an explicit rational scale so that
// half-stakes amounts stay exact (5500 * 1/2 = 2750).
struct PayoffSchedule {
  std::vector<std::int64_t> pence;  // by rank, unscaled
  std::int64_t scale_num = 1;
  std::int64_t scale_den = 1;

  int num_ranks() const { return static_cast<int>(pence.size()); }
  std::int64_t payoff_pence(int rank) const;
  void validate() const;  // throws unless scaled amounts are integral and strictly decreasing
};

// One lab session: submitted rankings by seat position plus any numeric
// per-position attributes carried in extra CSV columns (e.g. a test score).
struct Session {
  PreferenceProfile profile;
  std::map<std::string, std::vector<double>> attrs;
};

class SessionSet {
 public:
  SessionSet() = default;
  explicit SessionSet(std::vector<Session> sessions);

  int num_sessions() const { return static_cast<int>(sessions_.size()); }
  int num_positions() const { return sessions_.empty() ? 0 : sessions_[0].profile.num_students(); }
  int num_schools() const { return sessions_.empty() ? 0 : sessions_[0].profile.num_schools(); }
  // sessions are 1-based like every other id in reports
  const Session& session(int k) const { return sessions_[k - 1]; }
  // share of (session, position) cells whose ranking equals the induced one
  double donor_truth_rate(const PreferenceProfile& induced) const;

 private:
  std::vector<Session> sessions_;
};

}  // namespace sc
