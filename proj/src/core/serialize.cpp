#include "core/serialize.hpp"

#include <sstream>

namespace sc {

using nlohmann::json;

json to_json(const Matching& matching) {
  json assignment = json::object();
  for (StudentId i = 1; i <= matching.num_students(); ++i)
    assignment[std::to_string(i)] = matching.of(i);
  return json{{"assignment", assignment}};
}

namespace {

json round_to_json(const DaRound& round) {
  json schools = json::object();
  int m = static_cast<int>(round.holders.size());
  for (SchoolId s = 1; s <= m; ++s) {
    const auto& held = round.holders[s - 1];
    const auto& rej = round.rejected[s - 1];
    if (held.empty() && rej.empty()) continue;
    schools[std::to_string(s)] = {{"holders", held}, {"rejected", rej}};
  }
  json apps = json::array();
  for (const auto& [i, s] : round.applications) apps.push_back({i, s});
  return json{{"applications", apps}, {"schools", schools}};
}

}  // namespace

json to_json(const DaTrace& trace) {
  json rounds = json::array();
  for (const DaRound& r : trace.rounds) rounds.push_back(round_to_json(r));
  return json{{"rounds", rounds}};
}

json to_json(const EadaResult& result) {
  json iterations = json::array();
  for (const EadaIteration& it : result.iterations) {
    json settled = json::array();
    for (const auto& [i, s] : it.settled) settled.push_back({i, s});
    iterations.push_back({{"da", to_json(it.da.trace)},
                          {"underdemanded", it.underdemanded},
                          {"settled", settled}});
  }
  return json{{"iterations", iterations}};
}

json to_json(const RankProfile& profile) {
  Rational avg = average_rank(profile);
  return json{{"counts", profile.counts},
              {"average_rank", {{"num", avg.num}, {"den", avg.den}, {"value", avg.value()}}},
              {"max_rank", max_rank(profile)}};
}

json to_json(const EnvyReport& report) {
  json triples = json::array();
  for (const EnvyTriple& t : report.triples) {
    json e = {{"envier", t.envier}, {"school", t.school}};
    if (t.envied != 0)
      e["envied"] = t.envied;
    else
      e["envied"] = "empty-seat";
    triples.push_back(std::move(e));
  }
  return json{{"triples", triples},
              {"num_triples", report.triples.size()},
              {"num_enviers", report.num_enviers},
              {"stable", report.stable()}};
}

json to_json(const RecombinantReport& report) {
  json j{{"statistic", report.statistic},
         {"mechanism", report.mechanism},
         {"K", report.num_sessions},
         {"N", report.num_positions},
         {"R", report.draws_per_block},
         {"seed", report.seed},
         {"mean", report.mean},
         {"sigma2", report.sigma2},
         {"phi", report.phi},
         {"variance", report.variance},
         {"std_error", report.std_error},
         {"donor_truth_rate", report.donor_truth_rate},
         {"block_means", report.block_means}};
  if (report.tau) {
    j["tau"] = *report.tau;
    j["mix_x"] = *report.mix_x;
  }
  return j;
}

json to_json(const BehaviorSummary& s) {
  return json{{"num_subjects", s.num_subjects},
              {"num_truthful", s.num_truthful},
              {"truth_rate", s.num_subjects ? static_cast<double>(s.num_truthful) / s.num_subjects : 0.0},
              {"num_safe_top", s.num_safe_top},
              {"num_obvious_mistakes", s.num_obvious_mistakes},
              {"num_beneficial", s.num_beneficial},
              {"num_harmful", s.num_harmful},
              {"num_inconsequential", s.num_inconsequential},
              {"num_skip_down", s.num_skip_down},
              {"num_inflate_demand", s.num_inflate_demand},
              {"mean_rank_gain", s.mean_rank_gain},
              {"mean_rank_loss", s.mean_rank_loss},
              {"first_deviation_hist", s.first_deviation_hist}};
}

json to_json(const ManipulationScan& scan) {
  json beneficial = json::array();
  for (const auto& [report, rank] : scan.beneficial)
    beneficial.push_back({{"report", report}, {"achieved_rank", rank}});
  return json{{"student", scan.student},
              {"baseline_rank", scan.baseline_rank},
              {"beneficial", beneficial},
              {"num_beneficial", scan.beneficial.size()},
              {"num_harmful", scan.num_harmful},
              {"num_inconsequential", scan.num_inconsequential},
              {"num_candidates", scan.num_candidates},
              {"budget_exhausted", scan.budget_exhausted}};
}

std::string behavior_records_csv(const std::vector<BehaviorRecord>& records,
                                 const std::vector<int>& session_of_record) {
  std::ostringstream out;
  out << "session,position,truthful,safe_top,obvious_mistake,consequence,delta_rank,"
         "skip_down,inflate_demand,first_deviation\n";
  for (std::size_t k = 0; k < records.size(); ++k) {
    const BehaviorRecord& r = records[k];
    const char* kind = "";
    switch (r.consequence.kind) {
      case ConsequenceKind::not_applicable: kind = "na"; break;
      case ConsequenceKind::inconsequential: kind = "inconsequential"; break;
      case ConsequenceKind::beneficial: kind = "beneficial"; break;
      case ConsequenceKind::harmful: kind = "harmful"; break;
    }
    out << session_of_record[k] << ',' << r.student << ',' << (r.truthful ? 1 : 0) << ','
        << (r.safe_top ? 1 : 0) << ',' << (r.obvious_mistake ? 1 : 0) << ',' << kind << ','
        << r.consequence.delta_rank << ',' << (r.skip_down ? 1 : 0) << ','
        << (r.inflate_demand ? 1 : 0) << ',';
    if (r.first_deviation) out << *r.first_deviation;
    out << '\n';
  }
  return out.str();
}

}  // namespace sc
