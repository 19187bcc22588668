#include "qpm/report.hpp"

#include <fstream>
#include <sstream>

namespace qpm::report {

Json ledger_json(const QueryLedger& l) {
    Json j;
    j["text_queries"] = l.text_queries;
    j["pattern_queries"] = l.pattern_queries;
    j["quantum_cost"] = l.quantum_cost;
    j["classical_work"] = l.classical_work;
    return j;
}

Json schedule_json(const SieveSchedule& s) {
    Json j;
    j["n"] = s.n_bits;
    j["d"] = s.dims;
    j["stages"] = s.stage_count;
    j["bit_widths"] = s.bit_widths;
    j["pool_size"] = s.pool_size;
    j["stop_threshold"] = s.stop_threshold;
    j["c"] = s.c;
    return j;
}

Json sieve_json(std::uint64_t seed, const SieveSchedule& sch, const SieveResult& res,
                const QueryLedger& ledger) {
    Json j;
    j["seed"] = seed;
    j["schedule"] = schedule_json(sch);
    Json stages = Json::array();
    for (const auto& st : res.stages) {
        Json s;
        s["stage"] = st.stage;
        s["bins"] = st.bins;
        s["input"] = st.input;
        s["output"] = st.output;
        s["steps"] = st.steps;
        stages.push_back(s);
    }
    j["stages"] = stages;
    j["prepared"] = res.prepared;
    j["final_size"] = res.final_states.size();
    j["success"] = res.success;
    j["shortfall"] = res.shortfall;
    j["ledger"] = ledger_json(ledger);
    return j;
}

Json match_json(const MatchOutcome& outcome) {
    Json j;
    j["verdict"] = outcome.verdict == Verdict::found ? "found" : "not_found";
    if (outcome.verdict == Verdict::found) {
        Json off = Json::array();
        for (int i = 0; i < outcome.offset.dims; ++i) off.push_back(outcome.offset[i]);
        j["offset"] = off;
    }
    j["trials_used"] = outcome.trials_used;
    j["ledger"] = ledger_json(outcome.ledger);
    return j;
}

std::string csv_escape(const std::string& field) {
    bool needs_quote = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    out += '\n';
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace qpm::report
