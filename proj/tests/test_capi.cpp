// Exercises the shared-library C surface exactly as an external caller
// would: only schoolchoice.h, opaque handles, status codes, and strings.
#include <doctest.h>

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schoolchoice.h"

using nlohmann::json;

namespace {

std::string read_file(const std::string& name) {
  std::ifstream in(std::string(SC_DATA_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Market {
  sc_market* ptr = nullptr;
  ~Market() { sc_market_free(ptr); }
};

struct Sessions {
  sc_sessions* ptr = nullptr;
  ~Sessions() { sc_sessions_free(ptr); }
};

struct Str {
  char* ptr = nullptr;
  ~Str() { sc_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

void load_toy(Market& market, Sessions& sessions) {
  std::string text = read_file("toy4_market.json");
  REQUIRE(sc_market_from_json(text.c_str(), &market.ptr) == SC_OK);
  REQUIRE(sc_sessions_truthful(market.ptr, 1, &sessions.ptr) == SC_OK);
}

}  // namespace

TEST_CASE("version and error strings have static lifetime") {
  CHECK(sc_version() != nullptr);
  CHECK(std::strlen(sc_version()) > 0);
  CHECK(sc_last_error() != nullptr);
}

TEST_CASE("market parsing, inspection, and round-trip") {
  Market market;
  std::string text = read_file("lab18_market.json");
  REQUIRE(sc_market_from_json(text.c_str(), &market.ptr) == SC_OK);
  CHECK(sc_market_num_students(market.ptr) == 18);
  CHECK(sc_market_num_schools(market.ptr) == 7);

  Str rendered;
  REQUIRE(sc_market_to_json(market.ptr, &rendered.ptr) == SC_OK);
  Market again;
  CHECK(sc_market_from_json(rendered.ptr, &again.ptr) == SC_OK);
  CHECK(sc_market_num_students(again.ptr) == 18);
}

TEST_CASE("malformed input returns the validation status and a message") {
  sc_market* out = nullptr;
  CHECK(sc_market_from_json("{nope", &out) == SC_ERROR_VALIDATION);
  CHECK(out == nullptr);
  CHECK(std::strlen(sc_last_error()) > 0);

  CHECK(sc_market_from_json(R"({"schools": []})", &out) == SC_ERROR_VALIDATION);
  CHECK(sc_market_from_json(nullptr, &out) == SC_ERROR_VALIDATION);
}

TEST_CASE("matching through the c api") {
  Market market;
  Sessions sessions;
  load_toy(market, sessions);

  Str out;
  REQUIRE(sc_match(market.ptr, sessions.ptr, 0, "da", 0, 0, 1, &out.ptr) == SC_OK);
  json result = json::parse(out.str());
  CHECK(result["mechanism"] == "da");
  CHECK(result["matching"]["assignment"]["1"] == 3);
  CHECK(result["matching"]["assignment"]["3"] == 1);
  CHECK(result["trace"]["rounds"].size() == 7);

  Str eada;
  REQUIRE(sc_match(market.ptr, sessions.ptr, 0, "eada", 0, 0, 0, &eada.ptr) == SC_OK);
  json eada_result = json::parse(eada.str());
  CHECK(eada_result["matching"]["assignment"]["1"] == 2);
  CHECK_FALSE(eada_result.contains("trace"));

  Str bad;
  CHECK(sc_match(market.ptr, sessions.ptr, 0, "boston", 0, 0, 0, &bad.ptr) ==
        SC_ERROR_VALIDATION);
  CHECK(sc_match(market.ptr, sessions.ptr, 5, "da", 0, 0, 0, &bad.ptr) == SC_ERROR_VALIDATION);

  // rm budget exhaustion surfaces as the budget status
  Str rm;
  CHECK(sc_match(market.ptr, sessions.ptr, 0, "rm", 1, 1, 0, &rm.ptr) == SC_ERROR_BUDGET);
}

TEST_CASE("evaluation blocks carry reported and true metrics") {
  Market market;
  Sessions sessions;
  load_toy(market, sessions);
  Str out;
  REQUIRE(sc_evaluate(market.ptr, sessions.ptr, 0, "eada", 0, 0, &out.ptr) == SC_OK);
  json result = json::parse(out.str());
  CHECK(result["complete"] == true);
  CHECK(result["reported"]["rank_profile"]["average_rank"]["num"] == 9);
  CHECK(result["reported"]["rank_profile"]["average_rank"]["den"] == 4);
  CHECK(result["true"]["pareto_efficient"] == true);
  CHECK(result["reported"]["justified_envy"]["num_triples"] == 1);
}

TEST_CASE("behavioral analysis over the c api") {
  Market market;
  std::string text = read_file("lab18_market.json");
  REQUIRE(sc_market_from_json(text.c_str(), &market.ptr) == SC_OK);
  std::string csv = read_file("lab18_truthful.csv");
  const char* one[] = {csv.c_str()};
  Sessions sessions;
  REQUIRE(sc_sessions_from_csv(one, 1, market.ptr, &sessions.ptr) == SC_OK);

  Str records;
  Str summary;
  REQUIRE(sc_analyze(market.ptr, sessions.ptr, R"({"mechanism": "da"})", &records.ptr,
                     &summary.ptr) == SC_OK);
  json s = json::parse(summary.str());
  CHECK(s["summary"]["num_subjects"] == 18);
  CHECK(s["summary"]["num_truthful"] == 18);
  CHECK(s["per_session"][0]["truth_rate"] == 1.0);
  // one header plus one row per subject
  const std::string rows = records.str();
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 19);

  Str r2;
  Str s2;
  CHECK(sc_analyze(market.ptr, sessions.ptr, R"({"mechanismo": "da"})", &r2.ptr, &s2.ptr) ==
        SC_ERROR_VALIDATION);
  CHECK(std::string(sc_last_error()).find("mechanismo") != std::string::npos);
}

TEST_CASE("manipulation scan over the c api") {
  Market market;
  Sessions sessions;
  load_toy(market, sessions);
  Str out;
  REQUIRE(sc_scan(market.ptr, sessions.ptr, 0, 1, R"({"mechanism": "da", "budget": 23})",
                  &out.ptr) == SC_OK);
  json scan = json::parse(out.str());
  CHECK(scan["student"] == 1);
  CHECK(scan["num_candidates"] == 23);
  CHECK(scan["beneficial"].empty());

  CHECK(sc_scan(market.ptr, sessions.ptr, 0, 99, "{}", &out.ptr) == SC_ERROR_VALIDATION);
}

TEST_CASE("recombination over the c api") {
  Market market;
  std::string text = read_file("lab18_market.json");
  REQUIRE(sc_market_from_json(text.c_str(), &market.ptr) == SC_OK);
  Sessions sessions;
  REQUIRE(sc_sessions_truthful(market.ptr, 2, &sessions.ptr) == SC_OK);

  Str out;
  REQUIRE(sc_recombine(market.ptr, sessions.ptr,
                       R"({"statistic": "avg_rank", "draws_per_block": 8, "seed": 3})",
                       &out.ptr) == SC_OK);
  json report = json::parse(out.str());
  CHECK(report["mean"] == 49.0 / 18.0);
  CHECK(report["variance"] == 0.0);
  CHECK(report["K"] == 2);

  Str bad;
  CHECK(sc_recombine(market.ptr, sessions.ptr, R"({"statistic": "nope", "draws_per_block": 8})",
                     &bad.ptr) == SC_ERROR_VALIDATION);
}

TEST_CASE("calibration and exact tests over the c api") {
  double x = -1.0;
  REQUIRE(sc_calibrate(0.29, 18, 0.70, &x) == SC_OK);
  CHECK(x == doctest::Approx(0.38856669428334717).epsilon(1e-12));  // 469/1207
  CHECK(sc_calibrate(0.29, 18, 0.97, &x) == SC_ERROR_INFEASIBLE);
  CHECK(std::string(sc_last_error()).find("feasible") != std::string::npos);

  double p = 0.0;
  REQUIRE(sc_fisher_exact(28, 80, 31, 77, &p) == SC_OK);
  CHECK(p == doctest::Approx(0.760227831479957).epsilon(1e-9));
  CHECK(sc_fisher_exact(-1, 1, 1, 1, &p) == SC_ERROR_VALIDATION);

  REQUIRE(sc_binomial_test(0, 108, 0.05, &p) == SC_OK);
  CHECK(p == doctest::Approx(0.006860713462530307).epsilon(1e-9));
}

TEST_CASE("market generation and induced-preference replacement") {
  Str market_json;
  Str utilities;
  REQUIRE(sc_market_generate(18, 42, 40.0, &market_json.ptr, &utilities.ptr) == SC_OK);
  CHECK(json::parse(market_json.str())["students"].size() == 18);
  CHECK(utilities.str().rfind("student,school,", 0) == 0);
  CHECK(sc_market_generate(17, 42, 40.0, &market_json.ptr, nullptr) == SC_ERROR_VALIDATION);

  // replace the toy market's embedded preferences with a flipped set
  Market market;
  std::string text = read_file("toy4_market.json");
  REQUIRE(sc_market_from_json(text.c_str(), &market.ptr) == SC_OK);
  const char* flipped =
      "position,rank1,rank2,rank3,rank4\n"
      "1,4,3,2,1\n2,4,3,2,1\n3,4,3,2,1\n4,4,3,2,1\n";
  Market swapped;
  REQUIRE(sc_market_with_induced(market.ptr, flipped, &swapped.ptr) == SC_OK);
  Str rendered;
  REQUIRE(sc_market_to_json(swapped.ptr, &rendered.ptr) == SC_OK);
  json m = json::parse(rendered.str());
  CHECK(m["students"][0]["prefs"] == json::array({4, 3, 2, 1}));
}
