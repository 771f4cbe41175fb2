// schoolmatch — command-line front end for the school-choice engine.
//
// Every subcommand reads plain JSON/CSV files, writes JSON/CSV outputs into
// --out, and drops a manifest.json recording the command, semantic settings,
// input digests, and output names so a run can be replayed and verified.
// Outputs depend only on inputs and --seed; --workers never changes bytes.
//
// Exit codes: 0 ok, 2 validation failure, 3 infeasible configuration,
// 4 enumeration/sampling budget exhausted.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "schoolchoice.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;

[[noreturn]] void die(int code, const std::string& msg) {
  std::cerr << "schoolmatch: error: " << msg << "\n";
  std::exit(code);
}

void check(int rc) {
  if (rc != SC_OK) die(rc, sc_last_error());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(kExitValidation, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die(kExitValidation, "cannot write " + path.string());
  out << content;
}

// RAII for strings handed out by the library.
struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { sc_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? std::string() : std::string(ptr); }
};

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Collects inputs/outputs while a command runs, then writes manifest.json.
// Execution-resource flags (e.g. --workers) are deliberately not part of the
// config echo: results never depend on them.
class Manifest {
 public:
  Manifest(std::string command, fs::path out_dir)
      : command_(std::move(command)), out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  std::string input(const std::string& path) {
    std::string bytes = slurp(path);
    inputs_[path] = fnv1a64_hex(bytes);
    return bytes;
  }

  void config(const std::string& key, json value) { config_[key] = std::move(value); }

  void output(const std::string& name, const std::string& content) {
    spit(out_dir_ / name, content);
    outputs_.push_back(name);
  }

  void write() {
    json m;
    m["command"] = command_;
    m["tool_version"] = sc_version();
    m["config"] = config_;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    spit(out_dir_ / "manifest.json", m.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path out_dir_;
  json config_ = json::object();
  std::map<std::string, std::string> inputs_;  // path -> digest, sorted
  std::vector<std::string> outputs_;
};

struct MarketHandle {
  sc_market* ptr = nullptr;
  ~MarketHandle() { sc_market_free(ptr); }
};

struct SessionsHandle {
  sc_sessions* ptr = nullptr;
  ~SessionsHandle() { sc_sessions_free(ptr); }
};

void load_market(Manifest& manifest, const std::string& market_path,
                 const std::string& induced_path, MarketHandle& market) {
  std::string market_json = manifest.input(market_path);
  check(sc_market_from_json(market_json.c_str(), &market.ptr));
  if (!induced_path.empty()) {
    std::string induced_csv = manifest.input(induced_path);
    sc_market* with = nullptr;
    check(sc_market_with_induced(market.ptr, induced_csv.c_str(), &with));
    sc_market_free(market.ptr);
    market.ptr = with;
  }
}

void load_sessions(Manifest& manifest, const std::vector<std::string>& paths,
                   const sc_market* market, SessionsHandle& sessions) {
  std::vector<std::string> texts;
  texts.reserve(paths.size());
  for (const std::string& path : paths) texts.push_back(manifest.input(path));
  std::vector<const char*> ptrs;
  ptrs.reserve(texts.size());
  for (const std::string& text : texts) ptrs.push_back(text.c_str());
  check(sc_sessions_from_csv(ptrs.data(), ptrs.size(), market, &sessions.ptr));
}

// One summary row so downstream tables can be assembled without jq.
std::string metrics_csv(const json& evaluate) {
  auto block_cols = [](const json& block, const std::string& prefix, std::string& header,
                       std::string& row) {
    const bool complete = block.contains("rank_profile");
    header += "," + prefix + "avg_rank," + prefix + "max_rank," + prefix + "envy_triples," +
              prefix + "enviers," + prefix + "stable," + prefix + "blocking_pairs," + prefix +
              "pareto_efficient," + prefix + "improvable_share";
    std::ostringstream r;
    if (complete) {
      r << ',' << block["rank_profile"]["average_rank"]["value"].get<double>() << ','
        << block["rank_profile"]["max_rank"].get<int>();
    } else {
      r << ",,";
    }
    r << ',' << block["justified_envy"]["num_triples"].get<long long>() << ','
      << block["justified_envy"]["num_enviers"].get<int>() << ','
      << (block["justified_envy"]["stable"].get<bool>() ? 1 : 0) << ','
      << block["blocking_pairs"].get<long long>() << ','
      << (block["pareto_efficient"].get<bool>() ? 1 : 0) << ','
      << block["improvable_share"].get<double>();
    row += r.str();
  };
  std::string header = "mechanism,complete";
  std::string row = evaluate["mechanism"].get<std::string>();
  row += evaluate["complete"].get<bool>() ? ",1" : ",0";
  block_cols(evaluate["reported"], "reported_", header, row);
  if (evaluate.contains("true")) block_cols(evaluate["true"], "true_", header, row);
  return header + "\n" + row + "\n";
}

int cmd_match(const std::string& market_path, const std::string& profile_path,
              const std::string& mechanism, std::uint64_t seed, int rm_cap, bool trace,
              const std::string& out_dir) {
  Manifest manifest("match", out_dir);
  MarketHandle market;
  load_market(manifest, market_path, "", market);
  SessionsHandle sessions;
  load_sessions(manifest, {profile_path}, market.ptr, sessions);
  manifest.config("mechanism", mechanism);
  manifest.config("seed", seed);
  manifest.config("rm_cap", rm_cap);
  manifest.config("trace", trace);

  OwnedString match_json;
  check(sc_match(market.ptr, sessions.ptr, 0, mechanism.c_str(), seed, rm_cap, trace ? 1 : 0,
                 &match_json.ptr));
  manifest.output("matching.json", match_json.str() + "\n");

  OwnedString eval_json;
  check(sc_evaluate(market.ptr, sessions.ptr, 0, mechanism.c_str(), seed, rm_cap,
                    &eval_json.ptr));
  manifest.output("metrics.json", eval_json.str() + "\n");
  manifest.output("metrics.csv", metrics_csv(json::parse(eval_json.str())));
  manifest.write();
  return 0;
}

int cmd_analyze(const std::string& market_path, const std::string& induced_path,
                const std::vector<std::string>& session_paths, const std::string& mechanism,
                const std::vector<int>& high_demand, const std::string& rm_mode,
                std::uint64_t seed, int rm_cap, const std::string& out_dir) {
  Manifest manifest("analyze", out_dir);
  MarketHandle market;
  load_market(manifest, market_path, induced_path, market);
  SessionsHandle sessions;
  load_sessions(manifest, session_paths, market.ptr, sessions);

  json options;
  options["mechanism"] = mechanism;
  options["seed"] = seed;
  if (rm_cap > 0) options["rm_cap"] = rm_cap;
  if (!rm_mode.empty()) options["rm_mode"] = rm_mode;
  if (!high_demand.empty()) options["high_demand"] = high_demand;
  for (const auto& item : options.items()) manifest.config(item.key(), item.value());

  OwnedString records_csv;
  OwnedString summary_json;
  check(sc_analyze(market.ptr, sessions.ptr, options.dump().c_str(), &records_csv.ptr,
                   &summary_json.ptr));
  manifest.output("records.csv", records_csv.str());
  manifest.output("summary.json", summary_json.str() + "\n");
  manifest.write();
  return 0;
}

int cmd_scan(const std::string& market_path, const std::string& induced_path,
             const std::string& profile_path, int student, const std::string& mechanism,
             long long budget, std::uint64_t seed, int rm_cap, const std::string& out_dir) {
  Manifest manifest("scan", out_dir);
  MarketHandle market;
  load_market(manifest, market_path, induced_path, market);
  SessionsHandle sessions;
  load_sessions(manifest, {profile_path}, market.ptr, sessions);

  json options;
  options["mechanism"] = mechanism;
  options["budget"] = budget;
  options["seed"] = seed;
  if (rm_cap > 0) options["rm_cap"] = rm_cap;
  manifest.config("student", student);
  for (const auto& item : options.items()) manifest.config(item.key(), item.value());

  OwnedString scan_json;
  check(sc_scan(market.ptr, sessions.ptr, 0, student, options.dump().c_str(), &scan_json.ptr));
  manifest.output("scan.json", scan_json.str() + "\n");
  manifest.write();
  return 0;
}

int cmd_recombine(const std::string& market_path, const std::string& induced_path,
                  const std::vector<std::string>& session_paths, const std::string& statistic,
                  const std::string& mechanism, long long draws, std::uint64_t seed, double tau,
                  bool has_tau, const std::string& attribute, bool keep_draws, int rm_cap,
                  int workers, const std::string& out_dir) {
  Manifest manifest("recombine", out_dir);
  MarketHandle market;
  load_market(manifest, market_path, induced_path, market);
  SessionsHandle sessions;
  load_sessions(manifest, session_paths, market.ptr, sessions);

  json config;
  config["statistic"] = statistic;
  config["mechanism"] = mechanism;
  config["draws_per_block"] = draws;
  config["seed"] = seed;
  if (has_tau) config["tau"] = tau;
  if (!attribute.empty()) config["attribute"] = attribute;
  if (keep_draws) config["keep_draws"] = true;
  if (rm_cap > 0) config["rm_cap"] = rm_cap;
  for (const auto& item : config.items()) manifest.config(item.key(), item.value());
  config["workers"] = workers;  // execution detail: passed on, not echoed

  OwnedString report_json;
  check(sc_recombine(market.ptr, sessions.ptr, config.dump().c_str(), &report_json.ptr));
  json report = json::parse(report_json.str());
  if (keep_draws && report.contains("draws")) {
    std::ostringstream csv;
    csv << "index,value\n";
    const auto& draws_array = report.at("draws");
    for (size_t d = 0; d < draws_array.size(); ++d)
      csv << d << ',' << draws_array[d].dump() << '\n';
    report.erase("draws");
    manifest.output("draws.csv", csv.str());
  }
  manifest.output("report.json", report.dump(2) + "\n");
  manifest.write();
  return 0;
}

int cmd_calibrate(double donor_rate, int positions, const std::vector<double>& taus,
                  const std::string& out_dir) {
  std::ostringstream table;
  table << "tau,x,feasible,note\n";
  bool any_infeasible = false;
  for (double tau : taus) {
    double x = 0.0;
    int rc = sc_calibrate(donor_rate, positions, tau, &x);
    if (rc == SC_OK) {
      table << tau << ',' << x << ",1,\n";
      std::cout << "tau=" << tau << "  x=" << x << "\n";
    } else if (rc == SC_ERROR_INFEASIBLE) {
      any_infeasible = true;
      table << tau << ",,0," << sc_last_error() << '\n';
      std::cout << "tau=" << tau << "  infeasible: " << sc_last_error() << "\n";
    } else {
      die(rc, sc_last_error());
    }
  }
  if (!out_dir.empty()) {
    Manifest manifest("calibrate", out_dir);
    manifest.config("donor_rate", donor_rate);
    manifest.config("positions", positions);
    manifest.config("tau", taus);
    manifest.output("calibration.csv", table.str());
    manifest.write();
  }
  return any_infeasible ? SC_ERROR_INFEASIBLE : 0;
}

int cmd_gen(int n, std::uint64_t seed, double taste_max, const std::string& out_dir) {
  Manifest manifest("gen", out_dir);
  manifest.config("n", n);
  manifest.config("seed", seed);
  manifest.config("taste_max", taste_max);
  OwnedString market_json;
  OwnedString utilities_csv;
  check(sc_market_generate(n, seed, taste_max, &market_json.ptr, &utilities_csv.ptr));
  manifest.output("market.json", market_json.str() + "\n");
  manifest.output("utilities.csv", utilities_csv.str());
  manifest.write();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"school-choice mechanisms, behavioral analysis, and recombinant estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sc_version()));

  // match
  std::string market_path, profile_path, mechanism = "da", out_dir;
  std::uint64_t seed = 0;
  int rm_cap = 0;
  bool trace = false;
  auto* match = app.add_subcommand("match", "run one mechanism on one submitted profile");
  match->add_option("--market", market_path, "market JSON file")->required();
  match->add_option("--profile", profile_path, "submitted rankings CSV")->required();
  match->add_option("--mechanism", mechanism, "da | eada | rm")->capture_default_str();
  match->add_option("--seed", seed, "draw seed (rm)")->capture_default_str();
  match->add_option("--rm-cap", rm_cap, "optimum enumeration cap (rm)");
  match->add_flag("--trace", trace, "include the full mechanism trace");
  match->add_option("--out", out_dir, "output directory")->required();

  // analyze
  std::string induced_path, rm_mode;
  std::vector<std::string> session_paths;
  std::vector<int> high_demand;
  auto* analyze = app.add_subcommand("analyze", "classify every report in one or more sessions");
  analyze->add_option("--market", market_path, "market JSON file")->required();
  analyze->add_option("--induced", induced_path, "true rankings CSV (overrides market)");
  analyze->add_option("--sessions", session_paths, "session CSV files")->required();
  analyze->add_option("--mechanism", mechanism, "da | eada | rm")->capture_default_str();
  analyze->add_option("--high-demand", high_demand, "two school ids for the pattern detectors")
      ->expected(2);
  analyze->add_option("--rm-mode", rm_mode, "single_draw | all_optima");
  analyze->add_option("--seed", seed, "draw seed (rm)")->capture_default_str();
  analyze->add_option("--rm-cap", rm_cap, "optimum enumeration cap (rm)");
  analyze->add_option("--out", out_dir, "output directory")->required();

  // scan
  int student = 0;
  long long budget = 1000000;
  auto* scan = app.add_subcommand("scan", "search one student's misreports for improvements");
  scan->add_option("--market", market_path, "market JSON file")->required();
  scan->add_option("--induced", induced_path, "true rankings CSV (overrides market)");
  scan->add_option("--profile", profile_path, "submitted rankings CSV")->required();
  scan->add_option("--student", student, "student id")->required();
  scan->add_option("--mechanism", mechanism, "da | eada | rm")->capture_default_str();
  scan->add_option("--budget", budget, "max candidate reports")->capture_default_str();
  scan->add_option("--seed", seed, "sampling/draw seed")->capture_default_str();
  scan->add_option("--rm-cap", rm_cap, "optimum enumeration cap (rm)");
  scan->add_option("--out", out_dir, "output directory")->required();

  // recombine
  std::string statistic, attribute;
  long long draws = 10000;
  double tau = 0.0;
  bool keep_draws = false;
  int workers = 1;
  auto* recombine = app.add_subcommand("recombine", "recombinant estimate of a statistic");
  recombine->add_option("--market", market_path, "market JSON file")->required();
  recombine->add_option("--induced", induced_path, "true rankings CSV (overrides market)");
  recombine->add_option("--sessions", session_paths, "session CSV files")->required();
  recombine->add_option("--statistic", statistic, "registered statistic name")->required();
  recombine->add_option("--mechanism", mechanism, "da | eada | rm")->capture_default_str();
  recombine->add_option("--draws", draws, "draws per block (R)")->capture_default_str();
  recombine->add_option("--seed", seed, "master seed")->capture_default_str();
  auto* tau_opt = recombine->add_option("--tau", tau, "calibrated truth-rate target");
  recombine->add_option("--attribute", attribute, "session attribute for donor-score statistics");
  recombine->add_flag("--keep-draws", keep_draws, "also write every draw value");
  recombine->add_option("--rm-cap", rm_cap, "optimum enumeration cap (rm)");
  recombine->add_option("--workers", workers, "worker threads (never affects results)")
      ->capture_default_str();
  recombine->add_option("--out", out_dir, "output directory")->required();

  // calibrate
  double donor_rate = 0.0;
  int positions = 0;
  std::vector<double> taus;
  auto* calibrate = app.add_subcommand("calibrate", "mixing weights for truth-rate targets");
  calibrate->add_option("donor_rate", donor_rate, "donor pool truth rate p_d")->required();
  calibrate->add_option("positions", positions, "positions per market (N)")->required();
  calibrate->add_option("tau", taus, "target truth rates")->required();
  calibrate->add_option("--out", out_dir, "optional output directory for the table");

  // gen
  int n = 18;
  double taste_max = 40.0;
  auto* gen = app.add_subcommand("gen", "generate the 18-student designed market");
  gen->add_option("--n", n, "number of students")->capture_default_str();
  gen->add_option("--seed", seed, "generation seed")->capture_default_str();
  gen->add_option("--taste-max", taste_max, "taste shock upper bound")->capture_default_str();
  gen->add_option("--out", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  if (match->parsed())
    return cmd_match(market_path, profile_path, mechanism, seed, rm_cap, trace, out_dir);
  if (analyze->parsed())
    return cmd_analyze(market_path, induced_path, session_paths, mechanism, high_demand, rm_mode,
                       seed, rm_cap, out_dir);
  if (scan->parsed())
    return cmd_scan(market_path, induced_path, profile_path, student, mechanism, budget, seed,
                    rm_cap, out_dir);
  if (recombine->parsed())
    return cmd_recombine(market_path, induced_path, session_paths, statistic, mechanism, draws,
                         seed, tau, tau_opt->count() > 0, attribute, keep_draws, rm_cap, workers,
                         out_dir);
  if (calibrate->parsed()) return cmd_calibrate(donor_rate, positions, taus, out_dir);
  if (gen->parsed()) return cmd_gen(n, seed, taste_max, out_dir);
  return kExitValidation;
}
