#include "qpm/matcher.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qpm {

namespace {

constexpr std::uint64_t kTagTrial = 0x7472696c;
constexpr std::uint64_t kTagRecover = 0x72656376;
constexpr std::uint64_t kTagCheck = 0x63686b31;
constexpr std::uint64_t kTagPin = 0x70696e31;
constexpr std::uint64_t kTagConfirm = 0x636e6672;
constexpr std::uint64_t kTagGamma = 0x67616d61;

void validate_pair(const GridString& text, const GridString& pattern) {
    if (text.dims() != pattern.dims()) throw std::invalid_argument("matcher: dimension mismatch");
    if (pattern.side() > text.side()) throw std::invalid_argument("matcher: pattern larger than text");
}

Vec ell_to_vec(const PhaseLabel& l) {
    Vec v(l.dims);
    for (int i = 0; i < l.dims; ++i) v.v[i] = static_cast<std::int64_t>(l.c[i]);
    return v;
}

}  // namespace

MatchDerived derive_match_quantities(std::int64_t n, std::int64_t m, int d, const MatchParams& params) {
    if (params.nu < 1) throw std::invalid_argument("matcher: nu must be positive");
    if (2 * params.nu > m) throw std::invalid_argument("matcher: nu exceeds m/2");
    if (m - params.nu < 2) throw std::invalid_argument("matcher: m - nu < 2, no usable window");
    if (!(params.gamma > 0.0 && params.gamma <= 1.0)) throw std::invalid_argument("matcher: gamma must be in (0, 1]");

    MatchDerived q;
    q.m_prime = std::int64_t{1} << (63 - std::countl_zero(static_cast<std::uint64_t>(m - params.nu)));
    const double lg = std::log2(static_cast<double>(q.m_prime));
    if (params.eps_tol > 0.0) {
        q.eps = params.eps_tol;
    } else {
        double raw = 1.0 / (lg * lg * std::exp2(std::sqrt(2.0 * std::log2(3.0) * d * lg)));
        q.eps = std::max(raw, 1.0 / static_cast<double>(q.m_prime));
    }
    q.window = static_cast<std::int64_t>(std::floor(q.eps * static_cast<double>(q.m_prime)));
    q.t_range = n - params.nu - q.m_prime + 2;
    if (q.t_range < 1) throw std::invalid_argument("matcher: text too small for the window");
    const double ratio = static_cast<double>(n) / (q.eps * static_cast<double>(q.m_prime));
    q.grover_multiplier = static_cast<std::uint64_t>(std::ceil(std::pow(ratio, 0.5 * d)));
    if (params.trial_budget > 0)
        q.trial_budget = params.trial_budget;
    else
        q.trial_budget = static_cast<std::uint64_t>(std::ceil(8.0 * std::pow(ratio, d) * std::log(20.0)));
    return q;
}

bool check(const SubgridView& a, const SubgridView& b, double gamma, Rng& rng, QueryLedger& ledger) {
    if (a.side != b.side || a.base->dims() != b.base->dims())
        throw std::invalid_argument("check: views must have the same shape");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("check: gamma must be in (0, 1]");
    const int d = a.base->dims();
    const std::uint64_t samples = static_cast<std::uint64_t>(std::ceil(3.0 / gamma));
    ledger.charge_quantum(static_cast<std::uint64_t>(std::ceil(3.0 / std::sqrt(gamma))));
    for (std::uint64_t i = 0; i < samples; ++i) {
        Vec x(d);
        for (int j = 0; j < d; ++j)
            x.v[j] = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(a.side)));
        if (a.read(x, ledger) != b.read(x, ledger)) return false;
    }
    return true;
}

namespace {

// Shared steps of the two rough checks; `exact_step2` selects the
// single-megacharacter test instead of the gamma check.
RoughCheckResult rough_check_impl(const GridString& text, const GridString& pattern,
                                  const MatchParams& params, const Vec& t, Rng& rng,
                                  QueryLedger& ledger, bool exact_step2) {
    validate_pair(text, pattern);
    const int d = text.dims();
    const std::int64_t n = text.side();
    const std::int64_t m = pattern.side();
    MatchDerived q = derive_match_quantities(n, m, d, params);
    for (int i = 0; i < d; ++i) {
        if (t[i] < 0 || t[i] >= q.t_range) throw std::invalid_argument("rough_check: t out of range");
    }

    ShiftChannel ch = make_window_channel(text, t, pattern, params.nu, q.m_prime, ledger);
    PhaseLabel ell_label;
    try {
        ell_label = recover_shift(ch, params.pool_constant, rng.fork(kTagRecover), ledger, params.recover);
    } catch (const RecoveryError&) {
        return {};  // unrecoverable window: reject this guess
    }
    Vec ell = ell_to_vec(ell_label);
    for (int i = 0; i < d; ++i) {
        if (static_cast<double>(ell[i]) > q.eps * static_cast<double>(q.m_prime)) return {};
    }

    if (exact_step2) {
        // T^nu and P^nu are injective and the match exists, so a single
        // megacharacter equality settles the guess.
        if (!blocks_equal_metered(text, t + ell, Role::text, pattern, Vec::zero(d), Role::pattern,
                                  params.nu, ledger))
            return {};
        return {true, ell};
    }
    for (int i = 0; i < d; ++i) {
        if (t[i] + ell[i] > n - m) return {};  // claimed offset overruns the text
    }
    SubgridView tw(text, t + ell, m, Role::text);
    SubgridView pw(pattern, Vec::zero(d), m, Role::pattern);
    Rng check_rng = rng.fork(kTagCheck);
    if (!check(tw, pw, params.gamma, check_rng, ledger)) return {};
    return {true, ell};
}

}  // namespace

RoughCheckResult rough_check(const GridString& text, const GridString& pattern,
                             const MatchParams& params, const Vec& t, Rng rng, QueryLedger& ledger) {
    return rough_check_impl(text, pattern, params, t, rng, ledger, false);
}

RoughCheckResult rough_check2(const GridString& text, const GridString& pattern,
                              const MatchParams& params, const Vec& t, Rng rng, QueryLedger& ledger) {
    return rough_check_impl(text, pattern, params, t, rng, ledger, true);
}

namespace {

bool confirm_offset(const GridString& text, const GridString& pattern, const Vec& offset,
                    const MatchParams& params, Rng& rng, QueryLedger& ledger) {
    const int d = text.dims();
    const std::int64_t m = pattern.side();
    if (params.full_verify) {
        std::uint64_t cells = static_cast<std::uint64_t>(ipow(m, d));
        ledger.charge_read(Role::text, cells);
        ledger.charge_read(Role::pattern, cells);
        return blocks_equal(text, offset, pattern, Vec::zero(d), m);
    }
    SubgridView tw(text, offset, m, Role::text);
    SubgridView pw(pattern, Vec::zero(d), m, Role::pattern);
    for (int r = 0; r < params.confirm_reps; ++r) {
        Rng crng = rng.fork(kTagConfirm).fork(static_cast<std::uint64_t>(r));
        if (!check(tw, pw, params.gamma, crng, ledger)) return false;
    }
    return true;
}

}  // namespace

MatchOutcome find_match(const GridString& text, const GridString& pattern, const MatchParams& params,
                        Rng rng, QueryLedger& ledger) {
    validate_pair(text, pattern);
    const int d = text.dims();
    const std::int64_t n = text.side();
    const std::int64_t m = pattern.side();
    MatchDerived q = derive_match_quantities(n, m, d, params);

    MatchOutcome out;
    QueryLedger local;
    std::uint64_t per_call_quantum = 0;
    bool have_cost = false;

    for (std::uint64_t trial = 0; trial < q.trial_budget; ++trial) {
        Rng trial_rng = rng.fork(kTagTrial).fork(trial);
        Vec t(d);
        for (int i = 0; i < d; ++i)
            t.v[i] = static_cast<std::int64_t>(trial_rng.below(static_cast<std::uint64_t>(q.t_range)));

        QueryLedger call;
        RoughCheckResult rc = rough_check(text, pattern, params, t, trial_rng.fork(0), call);
        if (!have_cost) {
            per_call_quantum = call.quantum_cost;
            have_cost = true;
        }
        call.quantum_cost = 0;  // replaced below by the Grover-model charge
        local.merge(call);
        out.trials_used = trial + 1;
        if (!rc.accepted) continue;

        // Pin the exact offset with one more recovery at the same guess.
        QueryLedger pin;
        RoughCheckResult pinned = rough_check(text, pattern, params, t, trial_rng.fork(kTagPin), pin);
        pin.quantum_cost = 0;
        local.merge(pin);
        if (!pinned.accepted) continue;
        Vec offset = t + pinned.ell;
        bool in_range = true;
        for (int i = 0; i < d; ++i) in_range = in_range && offset[i] >= 0 && offset[i] <= n - m;
        if (!in_range) continue;
        Rng confirm_rng = trial_rng.fork(1);
        if (!confirm_offset(text, pattern, offset, params, confirm_rng, local)) continue;

        out.verdict = Verdict::found;
        out.offset = offset;
        break;
    }

    // Grover accounting: multiplier uses of one rough check plus the final
    // pin-down use, independent of how long the classical loop ran.
    local.quantum_cost = q.grover_multiplier * per_call_quantum + (out.verdict == Verdict::found ? per_call_quantum : 0);
    out.ledger = local;
    ledger.merge(local);
    return out;
}

MatchOutcome find_match_auto_nu(const GridString& text, const GridString& pattern, double gamma,
                                Rng rng, QueryLedger& ledger, const std::optional<MatchParams>& base) {
    validate_pair(text, pattern);
    const std::int64_t m = pattern.side();
    MatchOutcome last;
    QueryLedger total;
    std::uint64_t level = 0;
    for (std::int64_t nu = 1; 2 * nu <= m && m - nu >= 2; nu *= 2, ++level) {
        MatchParams params = base.value_or(MatchParams{});
        params.nu = nu;
        params.gamma = gamma;
        int log_nu = 0;
        while ((std::int64_t{1} << log_nu) < nu) ++log_nu;
        params.confirm_reps = std::max(3, log_nu + 1);
        MatchOutcome o = find_match(text, pattern, params, rng.fork(level), total);
        last.trials_used += o.trials_used;
        if (o.verdict == Verdict::found) {
            last.verdict = Verdict::found;
            last.offset = o.offset;
            break;
        }
    }
    last.ledger = total;
    ledger.merge(total);
    return last;
}

double estimate_gamma(const GridString& text, const GridString& pattern, std::uint64_t offsets,
                      std::uint64_t samples_per_offset, Rng rng) {
    const int d = text.dims();
    const std::int64_t n = text.side();
    const std::int64_t m = pattern.side();
    Rng r = rng.fork(kTagGamma);
    double best = 1.0;
    QueryLedger scratch;
    for (std::uint64_t i = 0; i < offsets; ++i) {
        Vec s(d);
        for (int j = 0; j < d; ++j)
            s.v[j] = static_cast<std::int64_t>(r.below(static_cast<std::uint64_t>(n - m + 1)));
        std::uint64_t mismatches = 0;
        for (std::uint64_t k = 0; k < samples_per_offset; ++k) {
            Vec x(d);
            for (int j = 0; j < d; ++j)
                x.v[j] = static_cast<std::int64_t>(r.below(static_cast<std::uint64_t>(m)));
            scratch.charge_scan(2);
            if (text.at(s + x) != pattern.at(x)) ++mismatches;
        }
        if (mismatches == 0) continue;  // likely a match offset; the promise excludes it
        best = std::min(best, static_cast<double>(mismatches) / static_cast<double>(samples_per_offset));
    }
    return best;
}

}  // namespace qpm
