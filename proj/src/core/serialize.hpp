#pragma once

#include <string>

#include <json.hpp>

#include "core/behavior.hpp"
#include "core/market.hpp"
#include "core/mechanisms.hpp"
#include "core/metrics.hpp"
#include "core/recombine.hpp"

namespace sc {

nlohmann::json to_json(const Matching& matching);
nlohmann::json to_json(const DaTrace& trace);
nlohmann::json to_json(const EadaResult& result);
nlohmann::json to_json(const RankProfile& profile);
nlohmann::json to_json(const EnvyReport& report);
nlohmann::json to_json(const RecombinantReport& report);
nlohmann::json to_json(const BehaviorSummary& summary);
nlohmann::json to_json(const ManipulationScan& scan);

std::string behavior_records_csv(const std::vector<BehaviorRecord>& records,
                                 const std::vector<int>& session_of_record);

}  // namespace sc
