#include "core/market.hpp"

#include <algorithm>
#include <numeric>

namespace sc {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(Errc::validation, msg);
}

}  // namespace

PreferenceProfile::PreferenceProfile(int num_schools, std::vector<std::vector<SchoolId>> orders)
    : num_schools_(num_schools), orders_(std::move(orders)) {
  require(num_schools_ >= 1, "profile needs at least one school");
  rank_.resize(orders_.size());
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    const auto& row = orders_[i];
    require(static_cast<int>(row.size()) == num_schools_,
            "student " + std::to_string(i + 1) + ": ranking must list every school once");
    std::vector<int>& rk = rank_[i];
    rk.assign(num_schools_, 0);
    for (int pos = 0; pos < num_schools_; ++pos) {
      SchoolId s = row[pos];
      require(s >= 1 && s <= num_schools_,
              "student " + std::to_string(i + 1) + ": unknown school id " + std::to_string(s));
      require(rk[s - 1] == 0,
              "student " + std::to_string(i + 1) + ": school " + std::to_string(s) + " listed twice");
      rk[s - 1] = pos + 1;
    }
  }
}

PreferenceProfile PreferenceProfile::with_order(StudentId i, std::vector<SchoolId> order) const {
  std::vector<std::vector<SchoolId>> orders = orders_;
  orders[i - 1] = std::move(order);
  return PreferenceProfile(num_schools_, std::move(orders));
}

Market::Market(int num_students, std::vector<School> schools,
               std::optional<PreferenceProfile> true_prefs, std::string name)
    : num_students_(num_students), schools_(std::move(schools)),
      true_prefs_(std::move(true_prefs)), name_(std::move(name)) {
  require(num_students_ >= 1, "market needs at least one student");
  require(!schools_.empty(), "market needs at least one school");
  std::sort(schools_.begin(), schools_.end(),
            [](const School& a, const School& b) { return a.id < b.id; });
  int m = static_cast<int>(schools_.size());
  prio_pos_.assign(m, {});
  total_seats_ = 0;
  for (int k = 0; k < m; ++k) {
    const School& s = schools_[k];
    require(s.id == k + 1, "school ids must be dense 1..M (got " + std::to_string(s.id) + ")");
    require(s.capacity >= 1, "school " + std::to_string(s.id) + ": capacity must be positive");
    total_seats_ += s.capacity;
    require(static_cast<int>(s.priority.size()) == num_students_,
            "school " + std::to_string(s.id) + ": priority order must list every student once");
    auto& pos = prio_pos_[k];
    pos.assign(num_students_, 0);
    for (int p = 0; p < num_students_; ++p) {
      StudentId i = s.priority[p];
      require(i >= 1 && i <= num_students_,
              "school " + std::to_string(s.id) + ": unknown student id " + std::to_string(i));
      require(pos[i - 1] == 0,
              "school " + std::to_string(s.id) + ": student " + std::to_string(i) + " listed twice");
      pos[i - 1] = p + 1;
    }
  }
  if (true_prefs_) {
    require(true_prefs_->num_students() == num_students_,
            "embedded preferences cover " + std::to_string(true_prefs_->num_students()) +
                " students, market has " + std::to_string(num_students_));
    require(true_prefs_->num_schools() == m,
            "embedded preferences rank " + std::to_string(true_prefs_->num_schools()) +
                " schools, market has " + std::to_string(m));
  }
}

bool Matching::complete() const {
  return std::all_of(by_student_.begin(), by_student_.end(), [](SchoolId s) { return s != 0; });
}

std::vector<std::vector<StudentId>> Matching::rosters(int num_schools) const {
  std::vector<std::vector<StudentId>> out(num_schools);
  for (int i = 1; i <= num_students(); ++i) {
    SchoolId s = of(i);
    if (s != 0) out[s - 1].push_back(i);
  }
  return out;
}

std::int64_t PayoffSchedule::payoff_pence(int rank) const {
  return pence[rank - 1] * scale_num / scale_den;
}

void PayoffSchedule::validate() const {
  if (pence.empty()) throw Error(Errc::validation, "payoff schedule is empty");
  if (scale_num <= 0 || scale_den <= 0)
    throw Error(Errc::validation, "payoff scale must be positive");
  std::int64_t prev = 0;
  for (int r = 1; r <= num_ranks(); ++r) {
    if (pence[r - 1] * scale_num % scale_den != 0)
      throw Error(Errc::validation, "scaled payoff for rank " + std::to_string(r) +
                                        " is not a whole number of pence");
    std::int64_t v = payoff_pence(r);
    if (r > 1 && v >= prev)
      throw Error(Errc::validation, "payoffs must be strictly decreasing in rank");
    prev = v;
  }
}

SessionSet::SessionSet(std::vector<Session> sessions) : sessions_(std::move(sessions)) {
  require(!sessions_.empty(), "session set is empty");
  int n = sessions_[0].profile.num_students();
  int m = sessions_[0].profile.num_schools();
  for (std::size_t k = 0; k < sessions_.size(); ++k) {
    const Session& sess = sessions_[k];
    require(sess.profile.num_students() == n && sess.profile.num_schools() == m,
            "session " + std::to_string(k + 1) + " has a different shape than session 1");
    for (const auto& [key, col] : sess.attrs)
      require(static_cast<int>(col.size()) == n,
              "session " + std::to_string(k + 1) + ": attribute '" + key +
                  "' does not cover every position");
  }
}

double SessionSet::donor_truth_rate(const PreferenceProfile& induced) const {
  int truthful = 0, cells = 0;
  for (const Session& sess : sessions_) {
    for (StudentId j = 1; j <= sess.profile.num_students(); ++j) {
      ++cells;
      if (sess.profile.order(j) == induced.order(j)) ++truthful;
    }
  }
  return static_cast<double>(truthful) / cells;
}

}  // namespace sc
