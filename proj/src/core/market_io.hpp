#pragma once

#include <string>

#include "core/market.hpp"

namespace sc {

// Market file: JSON with schools (id, capacity, priority) and students
// (id, prefs). Ids may be plain integers or labels like "s3" / "i12"; labels
// are mapped to their integer part on ingest. prefs may be omitted (then the
// market carries no induced preferences), but either all students have them
// or none do.
Market parse_market_json(const std::string& text);
std::string render_market_json(const Market& market);

// Session file: CSV with header "position,rank1,...,rankM[,<attr>...]".
// Every position 1..N appears exactly once; extra numeric columns become
// per-position attributes.
Session parse_session_csv(const std::string& text);
std::string render_session_csv(const Session& session);

// Payoff file: JSON {"ranks": [...], "scale": x} with amounts in currency
// units (pounds); parsed into integer pence.
PayoffSchedule parse_payoffs_json(const std::string& text);
std::string render_payoffs_json(const PayoffSchedule& schedule);

}  // namespace sc
