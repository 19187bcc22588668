#include "qpm/baseline.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qpm {

OracleReport brute_force_match(const GridString& text, const GridString& pattern) {
    if (text.dims() != pattern.dims()) throw std::invalid_argument("brute_force_match: dimension mismatch");
    if (pattern.side() > text.side()) throw std::invalid_argument("brute_force_match: pattern larger than text");
    const int d = text.dims();
    const std::int64_t m = pattern.side();
    const std::int64_t range = text.side() - m + 1;

    OracleReport rep;
    Vec s = Vec::zero(d);
    do {
        bool all = true;
        Vec x = Vec::zero(d);
        do {
            rep.queries_used.charge_read(Role::text, 1);
            rep.queries_used.charge_read(Role::pattern, 1);
            if (text.at(s + x) != pattern.at(x)) {
                all = false;
                break;
            }
        } while (next_point(x, m));
        if (all) rep.all_matches.push_back(s);
    } while (next_point(s, range));
    return rep;  // row-major sweep emits offsets in lexicographic order
}

MatchOutcome classical_injective_match(const GridString& text, const GridString& pattern,
                                       double gamma, Rng rng, QueryLedger& ledger) {
    if (text.dims() != pattern.dims()) throw std::invalid_argument("classical match: dimension mismatch");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("classical match: gamma must be in (0, 1]");
    const int d = text.dims();
    const std::int64_t n = text.side();
    const std::int64_t m = pattern.side();
    if (m > n) throw std::invalid_argument("classical match: pattern larger than text");

    const std::int64_t k = std::min<std::int64_t>(
        static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n)))), m);

    QueryLedger local;
    MatchOutcome out;

    // Corner block of the pattern, hashed for O(1) collision lookups.
    std::unordered_map<Symbol, Vec> corner;
    {
        Vec z = Vec::zero(d);
        do {
            Symbol v = read(pattern, z, Role::pattern, local);
            if (!corner.emplace(v, z).second)
                throw std::runtime_error("classical match: pattern corner block is not injective");
        } while (next_point(z, k));
    }

    const std::uint64_t verify_samples = static_cast<std::uint64_t>(std::ceil(3.0 / gamma));
    const std::int64_t probes_per_axis = (n + k - 1) / k;
    std::unordered_map<Symbol, std::int64_t> probe_seen;
    Rng vr = rng.fork(0x76657279);

    Vec bi = Vec::zero(d);
    std::int64_t probe_index = 0;
    do {
        Vec tau(d);
        for (int i = 0; i < d; ++i) tau.v[i] = bi[i] * k;
        Symbol v = read(text, tau, Role::text, local);
        auto dup = probe_seen.emplace(v, probe_index);
        if (!dup.second) throw std::runtime_error("classical match: text probes collided, input not injective");
        ++probe_index;

        auto it = corner.find(v);
        if (it == corner.end()) continue;
        Vec s = tau - it->second;
        bool in_range = true;
        for (int i = 0; i < d; ++i) in_range = in_range && s[i] >= 0 && s[i] <= n - m;
        if (!in_range) continue;

        bool ok = true;
        for (std::uint64_t j = 0; j < verify_samples && ok; ++j) {
            Vec x(d);
            for (int i = 0; i < d; ++i)
                x.v[i] = static_cast<std::int64_t>(vr.below(static_cast<std::uint64_t>(m)));
            ok = read(text, s + x, Role::text, local) == read(pattern, x, Role::pattern, local);
        }
        if (ok) {
            out.verdict = Verdict::found;
            out.offset = s;
            break;
        }
    } while (next_point(bi, probes_per_axis));

    out.ledger = local;
    ledger.merge(local);
    return out;
}

PhaseLabel brute_force_shift(const HiddenShiftInstance& inst) {
    const unsigned nd = static_cast<unsigned>(inst.n_bits()) * static_cast<unsigned>(inst.dims());
    if (nd > 12) throw std::invalid_argument("brute_force_shift: domain beyond the scan cap (n*d <= 12)");
    const std::uint64_t domain = inst.domain_size();
    const std::uint64_t mask = (1ULL << inst.n_bits()) - 1;
    const int d = inst.dims();

    std::uint64_t best_s = 0, best_count = 0;
    for (std::uint64_t s = 0; s < domain; ++s) {
        std::uint64_t count = 0;
        for (std::uint64_t x = 0; x < domain; ++x) {
            std::uint64_t shifted = 0;
            for (int i = 0; i < d; ++i) {
                unsigned sh = static_cast<unsigned>(inst.n_bits()) * static_cast<unsigned>(d - 1 - i);
                shifted = (shifted << inst.n_bits()) | (((x >> sh) + (s >> sh)) & mask);
            }
            if (inst.g_table().at_flat(static_cast<std::int64_t>(x)) ==
                inst.f_table().at_flat(static_cast<std::int64_t>(shifted)))
                ++count;
        }
        if (count > best_count) {  // strict: first (lexicographically least) wins ties
            best_count = count;
            best_s = s;
        }
    }
    PhaseLabel out(inst.n_bits(), d);
    for (int i = 0; i < d; ++i)
        out.c[i] = (best_s >> (static_cast<unsigned>(inst.n_bits()) * static_cast<unsigned>(d - 1 - i))) & mask;
    return out;
}

}  // namespace qpm
