#pragma once

#include <cstdint>

namespace qpm {

enum class Role { text, pattern };

// Dual-column cost accounting, the honest boundary between what the modeled
// algorithm is charged and what the simulation actually did:
//   text_queries / pattern_queries: oracle accesses made on the algorithm
//       path (base-symbol granularity; one derived-view access costs k^d).
//   quantum_cost: modeled quantum query charge (amplitude amplification,
//       Grover multipliers, state preparations).
//   classical_work: every base read the simulator performed, including
//       simulation-side scans that the modeled algorithm would never make.
// Counters only ever increase; ledgers merge by componentwise addition.
struct QueryLedger {
    std::uint64_t text_queries = 0;
    std::uint64_t pattern_queries = 0;
    std::uint64_t quantum_cost = 0;
    std::uint64_t classical_work = 0;

    // Algorithm-path read that the simulator actually performed.
    void charge_read(Role r, std::uint64_t k) {
        (r == Role::text ? text_queries : pattern_queries) += k;
        classical_work += k;
    }
    // Oracle query charged to the algorithm without a materialized read
    // (label-level state preparation).
    void charge_oracle(Role r, std::uint64_t k) {
        (r == Role::text ? text_queries : pattern_queries) += k;
    }
    void charge_quantum(std::uint64_t k) { quantum_cost += k; }
    // Simulation-side read (instance scans, oracles); not an algorithm query.
    void charge_scan(std::uint64_t k) { classical_work += k; }

    void merge(const QueryLedger& o) {
        text_queries += o.text_queries;
        pattern_queries += o.pattern_queries;
        quantum_cost += o.quantum_cost;
        classical_work += o.classical_work;
    }

    friend bool operator==(const QueryLedger&, const QueryLedger&) = default;
};

}  // namespace qpm
