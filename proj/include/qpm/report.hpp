#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qpm/instances.hpp"
#include "qpm/ledger.hpp"
#include "qpm/matcher.hpp"
#include "qpm/sieve.hpp"

namespace qpm::report {

// All report JSON uses insertion-ordered objects so reruns are byte-stable.
using Json = nlohmann::ordered_json;

Json ledger_json(const QueryLedger& l);
Json schedule_json(const SieveSchedule& s);
Json sieve_json(std::uint64_t seed, const SieveSchedule& sch, const SieveResult& res,
                const QueryLedger& ledger);
Json match_json(const MatchOutcome& outcome);

// RFC 4180 quoting: fields with commas, quotes or newlines are quoted and
// inner quotes doubled.
std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace qpm::report
