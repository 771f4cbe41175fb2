#include "core/market_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace sc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(Errc::validation, msg); }

// Accepts 7, "7", "s7", "i12", ... and returns the integer part.
int parse_id(const json& v, const char* what) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string()) {
    const std::string& s = v.get<std::string>();
    std::size_t k = 0;
    while (k < s.size() && !std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (k < s.size()) {
      try {
        return std::stoi(s.substr(k));
      } catch (const std::exception&) {
      }
    }
    fail(std::string(what) + ": cannot read id from label '" + s + "'");
  }
  fail(std::string(what) + ": id must be an integer or a label");
}

std::vector<int> parse_id_list(const json& v, const char* what) {
  if (!v.is_array()) fail(std::string(what) + ": expected a list");
  std::vector<int> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(parse_id(e, what));
  return out;
}

json parsed(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(std::string(what) + ": not valid JSON");
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (std::string& f : out) {
    std::size_t a = f.find_first_not_of(" \t");
    std::size_t b = f.find_last_not_of(" \t");
    f = (a == std::string::npos) ? "" : f.substr(a, b - a + 1);
  }
  return out;
}

}  // namespace

Market parse_market_json(const std::string& text) {
  json j = parsed(text, "market");
  if (!j.is_object() || !j.contains("schools")) fail("market: missing 'schools'");

  std::vector<School> schools;
  for (const auto& js : j["schools"]) {
    School s;
    if (!js.contains("id") || !js.contains("capacity") || !js.contains("priority"))
      fail("market: each school needs id, capacity and priority");
    s.id = parse_id(js["id"], "school");
    if (!js["capacity"].is_number_integer()) fail("market: capacity must be an integer");
    s.capacity = js["capacity"].get<int>();
    s.priority = parse_id_list(js["priority"], "priority");
    schools.push_back(std::move(s));
  }
  if (schools.empty()) fail("market: no schools");

  int n = static_cast<int>(schools[0].priority.size());
  std::optional<PreferenceProfile> prefs;
  if (j.contains("students")) {
    const auto& arr = j["students"];
    if (!arr.is_array()) fail("market: 'students' must be a list");
    std::vector<std::vector<SchoolId>> orders(arr.size());
    std::vector<bool> seen(arr.size(), false);
    int with_prefs = 0;
    for (const auto& je : arr) {
      if (!je.contains("id")) fail("market: each student needs an id");
      int id = parse_id(je["id"], "student");
      if (id < 1 || id > static_cast<int>(arr.size()))
        fail("market: student ids must be dense 1..N (got " + std::to_string(id) + ")");
      if (seen[id - 1]) fail("market: duplicate student id " + std::to_string(id));
      seen[id - 1] = true;
      if (je.contains("prefs")) {
        orders[id - 1] = parse_id_list(je["prefs"], "prefs");
        ++with_prefs;
      }
    }
    if (static_cast<int>(arr.size()) != n)
      fail("market: students list has " + std::to_string(arr.size()) +
           " entries but priorities cover " + std::to_string(n));
    if (with_prefs > 0) {
      if (with_prefs != n) fail("market: either every student lists prefs or none do");
      prefs = PreferenceProfile(static_cast<int>(schools.size()), std::move(orders));
    }
  }

  std::string name = j.value("name", "");
  return Market(n, std::move(schools), std::move(prefs), std::move(name));
}

std::string render_market_json(const Market& market) {
  json j;
  if (!market.name().empty()) j["name"] = market.name();
  j["schools"] = json::array();
  for (const School& s : market.schools())
    j["schools"].push_back({{"id", s.id}, {"capacity", s.capacity}, {"priority", s.priority}});
  j["students"] = json::array();
  for (StudentId i = 1; i <= market.num_students(); ++i) {
    json e = {{"id", i}};
    if (market.true_prefs()) e["prefs"] = market.true_prefs()->order(i);
    j["students"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

Session parse_session_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail("session: empty file");
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "position")
    fail("session: header must start with 'position,rank1,...'");
  int m = 0;
  while (1 + m < static_cast<int>(header.size()) &&
         header[1 + m] == "rank" + std::to_string(m + 1))
    ++m;
  if (m == 0) fail("session: no rank columns found");
  std::vector<std::string> attr_names(header.begin() + 1 + m, header.end());
  for (const std::string& a : attr_names)
    if (a.empty()) fail("session: empty attribute column name");

  std::vector<std::vector<SchoolId>> orders;
  std::vector<std::pair<int, std::vector<double>>> rows;  // position, attrs
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size())
      fail("session line " + std::to_string(lineno) + ": expected " +
           std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
    try {
      int pos = std::stoi(f[0]);
      std::vector<SchoolId> order(m);
      for (int r = 0; r < m; ++r) {
        const std::string& cell = f[1 + r];
        std::size_t k = 0;
        while (k < cell.size() && !std::isdigit(static_cast<unsigned char>(cell[k]))) ++k;
        order[r] = std::stoi(cell.substr(k));
      }
      std::vector<double> attrs(attr_names.size());
      for (std::size_t a = 0; a < attr_names.size(); ++a) attrs[a] = std::stod(f[1 + m + a]);
      rows.emplace_back(pos, std::move(attrs));
      orders.push_back(std::move(order));
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail("session line " + std::to_string(lineno) + ": malformed value");
    }
  }
  int n = static_cast<int>(rows.size());
  if (n == 0) fail("session: no data rows");

  Session out;
  std::vector<std::vector<SchoolId>> by_pos(n);
  std::vector<bool> seen(n, false);
  for (auto& name : attr_names) out.attrs[name].assign(n, 0.0);
  for (int r = 0; r < n; ++r) {
    int pos = rows[r].first;
    if (pos < 1 || pos > n) fail("session: position " + std::to_string(pos) + " out of range 1.." +
                                 std::to_string(n));
    if (seen[pos - 1]) fail("session: duplicate position " + std::to_string(pos));
    seen[pos - 1] = true;
    by_pos[pos - 1] = std::move(orders[r]);
    for (std::size_t a = 0; a < attr_names.size(); ++a)
      out.attrs[attr_names[a]][pos - 1] = rows[r].second[a];
  }
  out.profile = PreferenceProfile(m, std::move(by_pos));
  return out;
}

std::string render_session_csv(const Session& session) {
  std::ostringstream out;
  int m = session.profile.num_schools();
  out << "position";
  for (int r = 1; r <= m; ++r) out << ",rank" << r;
  for (const auto& [name, _] : session.attrs) out << ',' << name;
  out << '\n';
  for (StudentId i = 1; i <= session.profile.num_students(); ++i) {
    out << i;
    for (SchoolId s : session.profile.order(i)) out << ',' << s;
    for (const auto& [_, col] : session.attrs) {
      out << ',';
      double v = col[i - 1];
      if (v == std::floor(v) && std::abs(v) < 1e15)
        out << static_cast<long long>(v);
      else
        out << v;
    }
    out << '\n';
  }
  return out.str();
}

PayoffSchedule parse_payoffs_json(const std::string& text) {
  json j = parsed(text, "payoffs");
  if (!j.is_object() || !j.contains("ranks") || !j["ranks"].is_array())
    fail("payoffs: expected {\"ranks\": [...], \"scale\": x}");
  PayoffSchedule p;
  for (const auto& v : j["ranks"]) {
    if (!v.is_number()) fail("payoffs: amounts must be numbers");
    double pounds = v.get<double>();
    double pence = pounds * 100.0;
    if (std::abs(pence - std::llround(pence)) > 1e-6)
      fail("payoffs: amount is not a whole number of pence");
    p.pence.push_back(std::llround(pence));
  }
  double scale = j.value("scale", 1.0);
  // express the scale as an exact small fraction
  for (std::int64_t den = 1; den <= 1000; ++den) {
    double num = scale * static_cast<double>(den);
    if (std::abs(num - std::llround(num)) < 1e-9) {
      p.scale_num = std::llround(num);
      p.scale_den = den;
      break;
    }
  }
  if (std::abs(static_cast<double>(p.scale_num) / static_cast<double>(p.scale_den) - scale) > 1e-9)
    fail("payoffs: scale is not a simple fraction");
  p.validate();
  return p;
}

std::string render_payoffs_json(const PayoffSchedule& schedule) {
  json j;
  j["ranks"] = json::array();
  for (std::int64_t v : schedule.pence) j["ranks"].push_back(static_cast<double>(v) / 100.0);
  j["scale"] = static_cast<double>(schedule.scale_num) / static_cast<double>(schedule.scale_den);
  return j.dump(2) + "\n";
}

}  // namespace sc
