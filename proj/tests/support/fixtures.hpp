// Shared fixtures: the two bundled markets plus the externally verified
// outcomes the suites assert against.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "core/market.hpp"
#include "core/market_io.hpp"

#ifndef SC_DATA_DIR
#error "SC_DATA_DIR must point at the bundled data directory"
#endif

namespace fixtures {

inline std::string read_file(const std::string& name) {
  std::ifstream in(std::string(SC_DATA_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline const sc::Market& toy4() {
  static sc::Market market = sc::parse_market_json(read_file("toy4_market.json"));
  return market;
}

inline const sc::Market& lab18() {
  static sc::Market market = sc::parse_market_json(read_file("lab18_market.json"));
  return market;
}

// toy4, truthful reports: DA needs 7 rounds and leaves everyone at least one
// rank short of the efficient outcome that EADA then restores.
inline const std::vector<sc::SchoolId> kToy4Da = {3, 4, 1, 2};
inline const std::vector<sc::SchoolId> kToy4Eada = {2, 4, 1, 3};
inline const std::vector<sc::SchoolId> kToy4RmA = {1, 2, 3, 4};  // lexicographically first
inline const std::vector<sc::SchoolId> kToy4RmB = {1, 2, 4, 3};

// lab18, truthful reports.
inline const std::vector<sc::SchoolId> kLab18Da = {1, 4, 6, 2, 3, 2, 5, 7, 3,
                                                   1, 6, 2, 7, 1, 1, 5, 4, 2};
inline const std::vector<sc::SchoolId> kLab18Eada = {1, 4, 6, 2, 3, 2, 3, 7, 4,
                                                     5, 6, 2, 1, 1, 1, 5, 7, 2};
// A reference rank-minimizing matching (one member of the 95-strong
// optimum set).
inline const std::vector<sc::SchoolId> kLab18Rm = {6, 4, 3, 1, 1, 3, 2, 7, 1,
                                                   6, 2, 4, 5, 2, 1, 5, 7, 2};

}  // namespace fixtures
