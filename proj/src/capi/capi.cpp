#include "schoolchoice.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/assignment.hpp"
#include "core/behavior.hpp"
#include "core/envgen.hpp"
#include "core/market.hpp"
#include "core/market_io.hpp"
#include "core/mechanisms.hpp"
#include "core/metrics.hpp"
#include "core/recombine.hpp"
#include "core/rng.hpp"
#include "core/serialize.hpp"
#include "core/stats.hpp"

using nlohmann::json;

struct sc_market {
  sc::Market m;
};

struct sc_sessions {
  sc::SessionSet set;
};

namespace {

thread_local std::string g_error;

char* dup_cstr(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
sc_status guarded(Fn&& fn) {
  try {
    g_error.clear();
    fn();
    return SC_OK;
  } catch (const sc::Error& e) {
    g_error = e.what();
    switch (e.code()) {
      case sc::Errc::validation:
        return SC_ERROR_VALIDATION;
      case sc::Errc::infeasible:
        return SC_ERROR_INFEASIBLE;
      case sc::Errc::budget:
        return SC_ERROR_BUDGET;
    }
    return SC_ERROR_INTERNAL;
  } catch (const json::exception& e) {
    // malformed JSON arriving through the API is an input problem
    g_error = e.what();
    return SC_ERROR_VALIDATION;
  } catch (const std::exception& e) {
    g_error = e.what();
    return SC_ERROR_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return SC_ERROR_INTERNAL;
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw sc::Error(sc::Errc::validation, msg);
}

json parse_options(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return json::object();
  json j = json::parse(text);  // json::exception maps to SC_ERROR_VALIDATION
  require(j.is_object(), std::string(what) + " must be a JSON object");
  return j;
}

void reject_unknown_keys(const json& options, std::initializer_list<const char*> known,
                         const char* what) {
  for (const auto& item : options.items()) {
    bool found = false;
    for (const char* k : known)
      if (item.key() == k) found = true;
    if (!found) {
      std::string allowed;
      for (const char* k : known) allowed += std::string(allowed.empty() ? "" : ", ") + k;
      throw sc::Error(sc::Errc::validation, std::string(what) + ": unknown key \"" + item.key() +
                                                "\" (allowed: " + allowed + ")");
    }
  }
}

const sc::PreferenceProfile& require_induced(const sc::Market& m) {
  if (!m.true_prefs())
    throw sc::Error(sc::Errc::validation, "market carries no true preference lists");
  return *m.true_prefs();
}

const sc::Session& session_at(const sc_sessions* s, size_t index) {
  require(index < static_cast<size_t>(s->set.num_sessions()), "session index out of range");
  return s->set.session(static_cast<int>(index) + 1);
}

void check_compatible(const sc::Market& m, const sc::SessionSet& set) {
  require(set.num_sessions() > 0, "no sessions given");
  require(set.num_positions() == m.num_students() && set.num_schools() == m.num_schools(),
          "session shape does not match the market");
}

int effective_cap(int rm_cap) { return rm_cap > 0 ? rm_cap : 10000; }

// Shared mechanism dispatch for sc_match / sc_evaluate; fills `out` with
// the matching plus any mechanism-specific extras.
sc::Matching run_mechanism(const sc::Market& m, const sc::PreferenceProfile& profile,
                           const std::string& mechanism, std::uint64_t seed, int rm_cap,
                           bool with_trace, json* out) {
  sc::Mechanism mech = sc::mechanism_from_string(mechanism);
  switch (mech) {
    case sc::Mechanism::da: {
      sc::DaResult result = sc::run_da(m, profile);
      if (out != nullptr && with_trace) (*out)["trace"] = sc::to_json(result.trace);
      return result.matching;
    }
    case sc::Mechanism::eada: {
      sc::EadaResult result = sc::run_eada(m, profile);
      if (out != nullptr && with_trace) (*out)["trace"] = sc::to_json(result);
      return result.matching;
    }
    case sc::Mechanism::rm: {
      int cap = effective_cap(rm_cap);
      sc::Matching matching = sc::run_rm(m, profile, seed, cap);
      if (out != nullptr) {
        (*out)["seed"] = seed;
        if (with_trace) {
          sc::RankMinimalSet set = sc::enumerate_rank_minimizing(m, profile, cap);
          (*out)["trace"] = {{"min_total_rank", set.min_total_rank},
                             {"num_optima", set.matchings.size()},
                             {"truncated", set.truncated}};
        }
      }
      return matching;
    }
  }
  throw sc::Error(sc::Errc::validation, "unknown mechanism");
}

json metric_block(const sc::Matching& matching, const sc::PreferenceProfile& prefs,
                  const sc::Market& m) {
  json out = json::object();
  if (matching.complete()) out["rank_profile"] = sc::to_json(sc::rank_profile(matching, prefs));
  sc::EnvyReport envy = sc::justified_envy(matching, prefs, m);
  out["justified_envy"] = {{"num_triples", envy.triples.size()},
                           {"num_enviers", envy.num_enviers},
                           {"stable", envy.stable()}};
  out["blocking_pairs"] = sc::blocking_pairs(matching, prefs, m).size();
  out["pareto_efficient"] = sc::is_pareto_efficient(matching, prefs, m);
  out["improvable_share"] = sc::improvable_share(matching, prefs);
  return out;
}

std::optional<std::pair<sc::SchoolId, sc::SchoolId>> parse_high_demand(const json& options,
                                                                       const sc::Market& m) {
  if (!options.contains("high_demand")) return std::nullopt;
  const json& hd = options.at("high_demand");
  require(hd.is_array() && hd.size() == 2 && hd[0].is_number_integer() &&
              hd[1].is_number_integer(),
          "high_demand must be an array of two school ids");
  int a = hd[0].get<int>();
  int b = hd[1].get<int>();
  require(a >= 1 && a <= m.num_schools() && b >= 1 && b <= m.num_schools() && a != b,
          "high_demand schools must be two distinct valid ids");
  return std::make_pair(a, b);
}

sc::RmMode parse_rm_mode(const json& options, sc::RmMode fallback) {
  if (!options.contains("rm_mode")) return fallback;
  std::string mode = options.at("rm_mode").get<std::string>();
  if (mode == "single_draw") return sc::RmMode::single_draw;
  if (mode == "all_optima") return sc::RmMode::all_optima;
  throw sc::Error(sc::Errc::validation, "rm_mode must be \"single_draw\" or \"all_optima\"");
}

std::string format_double(double v) { return json(v).dump(); }

}  // namespace

extern "C" {

const char* sc_version(void) { return "1.0.0"; }

const char* sc_last_error(void) { return g_error.c_str(); }

void sc_string_free(char* s) { std::free(s); }

sc_status sc_market_from_json(const char* json_text, sc_market** out) {
  return guarded([&] {
    require(json_text != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<sc_market>();
    handle->m = sc::parse_market_json(json_text);
    *out = handle.release();
  });
}

sc_status sc_market_to_json(const sc_market* m, char** out_json) {
  return guarded([&] {
    require(m != nullptr && out_json != nullptr, "null argument");
    *out_json = dup_cstr(sc::render_market_json(m->m));
  });
}

void sc_market_free(sc_market* m) { delete m; }

int sc_market_num_students(const sc_market* m) { return m == nullptr ? 0 : m->m.num_students(); }

int sc_market_num_schools(const sc_market* m) { return m == nullptr ? 0 : m->m.num_schools(); }

sc_status sc_market_with_induced(const sc_market* m, const char* induced_csv, sc_market** out) {
  return guarded([&] {
    require(m != nullptr && induced_csv != nullptr && out != nullptr, "null argument");
    sc::Session induced = sc::parse_session_csv(induced_csv);
    require(induced.profile.num_students() == m->m.num_students() &&
                induced.profile.num_schools() == m->m.num_schools(),
            "induced preference shape does not match the market");
    auto handle = std::make_unique<sc_market>();
    std::vector<sc::School> schools = m->m.schools();
    handle->m = sc::Market(m->m.num_students(), std::move(schools), induced.profile, m->m.name());
    *out = handle.release();
  });
}

sc_status sc_market_generate(int num_students, uint64_t seed, double taste_max,
                             char** out_market_json, char** out_utilities_csv) {
  return guarded([&] {
    require(out_market_json != nullptr, "null argument");
    sc::GeneratedMarket generated = sc::gen_designed_market(num_students, seed, nullptr, taste_max);
    *out_market_json = dup_cstr(sc::render_market_json(generated.market));
    if (out_utilities_csv != nullptr) {
      std::ostringstream csv;
      csv << "student,school,walk,quality,taste,total\n";
      for (const sc::UtilityRow& row : generated.utilities)
        csv << row.student << ',' << row.school << ',' << format_double(row.walk) << ','
            << format_double(row.quality) << ',' << format_double(row.taste) << ','
            << format_double(row.total) << '\n';
      *out_utilities_csv = dup_cstr(csv.str());
    }
  });
}

sc_status sc_sessions_from_csv(const char* const* csv_texts, size_t num_sessions,
                               const sc_market* m, sc_sessions** out) {
  return guarded([&] {
    require(csv_texts != nullptr && m != nullptr && out != nullptr, "null argument");
    require(num_sessions > 0, "no sessions given");
    std::vector<sc::Session> sessions;
    sessions.reserve(num_sessions);
    for (size_t k = 0; k < num_sessions; ++k) {
      require(csv_texts[k] != nullptr, "null session text");
      sessions.push_back(sc::parse_session_csv(csv_texts[k]));
    }
    auto handle = std::make_unique<sc_sessions>();
    handle->set = sc::SessionSet(std::move(sessions));
    check_compatible(m->m, handle->set);
    *out = handle.release();
  });
}

sc_status sc_sessions_truthful(const sc_market* m, size_t num_sessions, sc_sessions** out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "null argument");
    require(num_sessions > 0, "no sessions given");
    const sc::PreferenceProfile& induced = require_induced(m->m);
    std::vector<sc::Session> sessions(num_sessions, sc::Session{induced, {}});
    auto handle = std::make_unique<sc_sessions>();
    handle->set = sc::SessionSet(std::move(sessions));
    *out = handle.release();
  });
}

void sc_sessions_free(sc_sessions* s) { delete s; }

sc_status sc_match(const sc_market* m, const sc_sessions* s, size_t session_index,
                   const char* mechanism, uint64_t seed, int rm_cap, int with_trace,
                   char** out_json) {
  return guarded([&] {
    require(m != nullptr && s != nullptr && mechanism != nullptr && out_json != nullptr,
            "null argument");
    check_compatible(m->m, s->set);
    const sc::Session& session = session_at(s, session_index);
    json out;
    out["mechanism"] = mechanism;
    sc::Matching matching =
        run_mechanism(m->m, session.profile, mechanism, seed, rm_cap, with_trace != 0, &out);
    out["matching"] = sc::to_json(matching);
    out["complete"] = matching.complete();
    *out_json = dup_cstr(out.dump(2));
  });
}

sc_status sc_evaluate(const sc_market* m, const sc_sessions* s, size_t session_index,
                      const char* mechanism, uint64_t seed, int rm_cap, char** out_json) {
  return guarded([&] {
    require(m != nullptr && s != nullptr && mechanism != nullptr && out_json != nullptr,
            "null argument");
    check_compatible(m->m, s->set);
    const sc::Session& session = session_at(s, session_index);
    json out;
    out["mechanism"] = mechanism;
    sc::Matching matching =
        run_mechanism(m->m, session.profile, mechanism, seed, rm_cap, false, &out);
    out["matching"] = sc::to_json(matching);
    out["complete"] = matching.complete();
    out["reported"] = metric_block(matching, session.profile, m->m);
    if (m->m.true_prefs()) out["true"] = metric_block(matching, *m->m.true_prefs(), m->m);
    if (!session.attrs.empty()) {
      json sorting = json::object();
      for (const auto& [name, scores] : session.attrs) {
        sc::SortingIndex index = sc::sorting_metrics(matching, scores, m->m);
        sorting[name] = {{"between_share", index.between_share},
                         {"dispersion", index.dispersion}};
      }
      out["sorting"] = sorting;
    }
    *out_json = dup_cstr(out.dump(2));
  });
}

sc_status sc_analyze(const sc_market* m, const sc_sessions* s, const char* options_json,
                     char** out_records_csv, char** out_summary_json) {
  return guarded([&] {
    require(m != nullptr && s != nullptr && out_records_csv != nullptr &&
                out_summary_json != nullptr,
            "null argument");
    check_compatible(m->m, s->set);
    const sc::PreferenceProfile& induced = require_induced(m->m);
    json options = parse_options(options_json, "analyze options");
    reject_unknown_keys(options, {"mechanism", "seed", "rm_cap", "rm_mode", "high_demand"},
                        "analyze options");
    sc::Mechanism mech = sc::mechanism_from_string(options.value("mechanism", "da"));
    std::uint64_t seed = options.value("seed", std::uint64_t{0});
    int rm_cap = effective_cap(options.value("rm_cap", 0));
    sc::RmMode rm_mode = parse_rm_mode(options, sc::RmMode::all_optima);
    auto high_demand = parse_high_demand(options, m->m);

    std::vector<sc::BehaviorRecord> records;
    std::vector<int> session_of_record;
    json per_session = json::array();
    for (int k = 1; k <= s->set.num_sessions(); ++k) {
      const sc::Session& session = s->set.session(k);
      std::uint64_t session_seed = sc::derive_seed(seed, 0x616e616cULL, k);
      int truthful = 0;
      for (sc::StudentId i = 1; i <= m->m.num_students(); ++i) {
        records.push_back(sc::classify_subject(m->m, session.profile, induced, i, mech, rm_mode,
                                               high_demand, session_seed, rm_cap));
        session_of_record.push_back(k);
        if (records.back().truthful) ++truthful;
      }
      per_session.push_back(
          {{"session", k},
           {"truth_rate", static_cast<double>(truthful) / m->m.num_students()}});
    }
    sc::BehaviorSummary summary = sc::summarize_behavior(records, m->m.num_schools());
    json out;
    out["summary"] = sc::to_json(summary);
    out["per_session"] = per_session;
    *out_records_csv = dup_cstr(sc::behavior_records_csv(records, session_of_record));
    *out_summary_json = dup_cstr(out.dump(2));
  });
}

sc_status sc_scan(const sc_market* m, const sc_sessions* s, size_t session_index, int student,
                  const char* options_json, char** out_json) {
  return guarded([&] {
    require(m != nullptr && s != nullptr && out_json != nullptr, "null argument");
    check_compatible(m->m, s->set);
    const sc::Session& session = session_at(s, session_index);
    const sc::PreferenceProfile& induced = require_induced(m->m);
    require(student >= 1 && student <= m->m.num_students(), "student id out of range");
    json options = parse_options(options_json, "scan options");
    reject_unknown_keys(options, {"mechanism", "seed", "rm_cap", "budget"}, "scan options");
    sc::Mechanism mech = sc::mechanism_from_string(options.value("mechanism", "da"));
    std::uint64_t seed = options.value("seed", std::uint64_t{0});
    int rm_cap = effective_cap(options.value("rm_cap", 0));
    long long budget = options.value("budget", 1000000LL);
    sc::ManipulationScan scan = sc::scan_manipulations(m->m, session.profile, induced, student,
                                                       mech, budget, seed, rm_cap);
    *out_json = dup_cstr(sc::to_json(scan).dump(2));
  });
}

sc_status sc_recombine(const sc_market* m, const sc_sessions* s, const char* config_json,
                       char** out_json) {
  return guarded([&] {
    require(m != nullptr && s != nullptr && out_json != nullptr, "null argument");
    check_compatible(m->m, s->set);
    json options = parse_options(config_json, "recombine config");
    reject_unknown_keys(options,
                        {"statistic", "mechanism", "draws_per_block", "seed", "workers", "tau",
                         "rm_cap", "attribute", "keep_draws"},
                        "recombine config");
    sc::RecombinantConfig config;
    config.statistic = options.value("statistic", config.statistic);
    config.mechanism = sc::mechanism_from_string(options.value("mechanism", "da"));
    config.draws_per_block = options.value("draws_per_block", config.draws_per_block);
    config.seed = options.value("seed", config.seed);
    config.workers = options.value("workers", config.workers);
    if (options.contains("tau")) config.tau = options.at("tau").get<double>();
    config.rm_cap = effective_cap(options.value("rm_cap", 0));
    config.attribute = options.value("attribute", config.attribute);
    config.keep_draws = options.value("keep_draws", config.keep_draws);
    sc::RecombinantReport report = sc::recombinant_estimate(s->set, m->m, config);
    *out_json = dup_cstr(sc::to_json(report).dump(2));
  });
}

sc_status sc_calibrate(double donor_truth_rate, int num_students, double tau, double* out_x) {
  return guarded([&] {
    require(out_x != nullptr, "null argument");
    *out_x = sc::calib_mix(donor_truth_rate, num_students, tau);
  });
}

sc_status sc_fisher_exact(int64_t a, int64_t b, int64_t c, int64_t d, double* out_p) {
  return guarded([&] {
    require(out_p != nullptr, "null argument");
    *out_p = sc::fisher_exact(a, b, c, d);
  });
}

sc_status sc_binomial_test(int64_t successes, int64_t trials, double p0, double* out_p) {
  return guarded([&] {
    require(out_p != nullptr, "null argument");
    *out_p = sc::binomial_test(successes, trials, p0);
  });
}

}  // extern "C"
