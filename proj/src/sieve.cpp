#include "qpm/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "qpm/gf2.hpp"
#include "qpm/grid_io.hpp"

namespace qpm {

namespace {

// rng stream tags
constexpr std::uint64_t kTagPrepare = 0x70726570;
constexpr std::uint64_t kTagCoin = 0x636f696e;
constexpr std::uint64_t kTagSieve = 0x73696576;
constexpr std::uint64_t kTagMeasure = 0x6d656173;
constexpr std::uint64_t kTagRound = 0x726f756e;
constexpr std::uint64_t kTagOffset = 0x6f666673;
constexpr std::uint64_t kTagVote = 0x766f7465;

constexpr std::uint64_t kPoolCap = 100'000'000ULL;  // largest simulable pool

}  // namespace

PhaseLabel PhaseLabel::add(const PhaseLabel& o) const {
    if (n_bits != o.n_bits || dims != o.dims) throw std::invalid_argument("label shape mismatch");
    PhaseLabel r(n_bits, dims);
    for (int i = 0; i < dims; ++i) r.c[i] = (c[i] + o.c[i]) & mask();
    return r;
}

PhaseLabel PhaseLabel::sub(const PhaseLabel& o) const {
    if (n_bits != o.n_bits || dims != o.dims) throw std::invalid_argument("label shape mismatch");
    PhaseLabel r(n_bits, dims);
    for (int i = 0; i < dims; ++i) r.c[i] = (c[i] - o.c[i]) & mask();
    return r;
}

bool PhaseLabel::low_bits_zero(int count) const {
    if (count <= 0) return true;
    std::uint64_t m = (1ULL << count) - 1;
    for (int i = 0; i < dims; ++i)
        if (c[i] & m) return false;
    return true;
}

std::string PhaseLabel::str() const {
    std::string s = "(";
    for (int i = 0; i < dims; ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    return s + ")";
}

SieveSchedule make_schedule(int n, int d, double pool_constant) {
    if (n < 1 || d < 1) throw std::invalid_argument("make_schedule: n and d must be positive");
    if (d > kMaxDims) throw std::invalid_argument("make_schedule: dims too large");
    if (!(pool_constant > 0.0)) throw std::invalid_argument("make_schedule: pool constant must be positive");

    const double log2_3 = std::log2(3.0);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double sqrt_dn = std::sqrt(static_cast<double>(d) * static_cast<double>(n));

    SieveSchedule sch;
    sch.n_bits = n;
    sch.dims = d;
    sch.stage_count = static_cast<int>(std::max<long long>(
        1, std::llround(std::sqrt(2.0 * std::log(2.0) / std::log(3.0)) * sqrt_dn)));
    const int S = sch.stage_count;

    const double raw_c = static_cast<double>(d) * sqrt_n / S + log2_3 * (S + 1) / (2.0 * sqrt_n);
    sch.exponent = raw_c * sqrt_n;  // equals (raw_c / sqrt(d)) * sqrt(d n)
    sch.c = raw_c / std::sqrt(static_cast<double>(d));

    std::vector<double> real(static_cast<size_t>(S));
    sch.bit_widths.resize(static_cast<size_t>(S));
    long long sum = 0;
    for (int i = 0; i < S; ++i) {
        real[static_cast<size_t>(i)] = (sch.exponent - log2_3 * (i + 1)) / d;
        long long b = std::max<long long>(0, std::llround(real[static_cast<size_t>(i)]));
        sch.bit_widths[static_cast<size_t>(i)] = static_cast<int>(b);
        sum += b;
    }
    // Repair the rounded widths so they sum to exactly n-1, adjusting the
    // entries with the largest rounding error first (ties: lowest index).
    const long long target = n - 1;
    while (sum > target) {
        int pick = -1;
        double best = -1e300;
        for (int i = 0; i < S; ++i) {
            if (sch.bit_widths[static_cast<size_t>(i)] == 0) continue;
            double err = sch.bit_widths[static_cast<size_t>(i)] - real[static_cast<size_t>(i)];
            if (err > best) {
                best = err;
                pick = i;
            }
        }
        --sch.bit_widths[static_cast<size_t>(pick)];
        --sum;
    }
    while (sum < target) {
        int pick = 0;
        double best = -1e300;
        for (int i = 0; i < S; ++i) {
            double err = real[static_cast<size_t>(i)] - sch.bit_widths[static_cast<size_t>(i)];
            if (err > best) {
                best = err;
                pick = i;
            }
        }
        ++sch.bit_widths[static_cast<size_t>(pick)];
        ++sum;
    }

    double pool = std::ceil(pool_constant * static_cast<double>(n) * std::exp2(sch.exponent));
    constexpr double kSaturate = 4.6116860184273879e18;  // 2^62
    if (!(pool < kSaturate))
        sch.pool_size = 1ULL << 62;
    else
        sch.pool_size = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(pool));
    sch.stop_threshold = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
    return sch;
}

ShiftChannel ShiftChannel::restricted(std::uint64_t beta_mask, std::uint64_t a_mask) const {
    if (n_bits < 2) throw std::logic_error("ShiftChannel: cannot restrict a 1-bit domain");
    ShiftChannel child;
    child.n_bits = n_bits - 1;
    child.dims = dims;
    child.f_eval_cost = f_eval_cost;
    child.g_eval_cost = g_eval_cost;
    child.f_role = f_role;
    child.g_role = g_role;
    child.sealed_shift = PhaseLabel(child.n_bits, dims);
    if (!alive) {
        child.alive = false;
        return child;
    }
    for (int i = 0; i < dims; ++i) {
        if (((sealed_shift.c[i] ^ (beta_mask >> i)) & 1) != 0) {
            // Wrong low bit: the required child offset would be odd in this
            // component, which f'(x) = f(2x + a) cannot represent.
            child.alive = false;
            return child;
        }
    }
    child.alive = true;
    for (int i = 0; i < dims; ++i) child.sealed_shift.c[i] = sealed_shift.c[i] >> 1;

    const std::uint64_t m = (1ULL << n_bits) - 1;
    for (std::uint64_t y : mismatch) {
        std::uint64_t flat = 0;
        bool in_coset = true;
        for (int i = 0; i < dims && in_coset; ++i) {
            std::uint64_t yi = component(y, i);
            std::uint64_t ti = (yi - ((a_mask >> i) & 1) + ((beta_mask >> i) & 1)) & m;
            if (ti & 1) {
                in_coset = false;
            } else {
                flat = (flat << child.n_bits) | (ti >> 1);
            }
        }
        if (in_coset) child.mismatch.push_back(flat);
    }
    return child;
}

HiddenShiftInstance::HiddenShiftInstance(int n, int d, std::uint64_t q, GridString f, GridString g,
                                         PhaseLabel shift, std::vector<std::uint64_t> corrupted)
    : n_(n), d_(d), q_(q), f_(std::move(f)), g_(std::move(g)), shift_(shift), corrupted_(std::move(corrupted)) {
    if (n < 1 || n > 63 || d < 1 || d > kMaxDims) throw std::invalid_argument("HiddenShiftInstance: bad shape");
    if (static_cast<unsigned>(n) * static_cast<unsigned>(d) > 62)
        throw std::invalid_argument("HiddenShiftInstance: domain too large");
    std::sort(corrupted_.begin(), corrupted_.end());
}

HiddenShiftInstance HiddenShiftInstance::plant(int n, int d, std::uint64_t q, Rng rng) {
    if (n < 1 || n > 63 || d < 1 || d > kMaxDims) throw std::invalid_argument("plant: bad shape");
    if (static_cast<unsigned>(n) * static_cast<unsigned>(d) > 26)
        throw std::invalid_argument("plant: domain too large to materialize");
    const std::int64_t side = std::int64_t{1} << n;
    const std::uint64_t domain = 1ULL << (static_cast<unsigned>(n) * static_cast<unsigned>(d));
    if (q < domain) throw std::invalid_argument("plant: alphabet smaller than the domain");
    if (q > (1ULL << 30)) throw std::invalid_argument("plant: alphabet too large to materialize");

    // Partial Fisher-Yates over [q]: the first `domain` draws give a uniform
    // injection.
    std::vector<std::uint64_t> values(q);
    for (std::uint64_t i = 0; i < q; ++i) values[i] = i;
    GridString f(d, side, q);
    for (std::uint64_t i = 0; i < domain; ++i) {
        std::uint64_t j = i + rng.below(q - i);
        std::swap(values[i], values[j]);
        f.set_flat(static_cast<std::int64_t>(i), values[i]);
    }

    PhaseLabel s(n, d);
    for (int i = 0; i < d; ++i) s.c[i] = rng.below(1ULL << n);

    GridString g(d, side, q);
    const std::uint64_t m = (1ULL << n) - 1;
    for (std::uint64_t x = 0; x < domain; ++x) {
        std::uint64_t shifted = 0;
        for (int i = 0; i < d; ++i) {
            std::uint64_t xi = (x >> (static_cast<unsigned>(n) * static_cast<unsigned>(d - 1 - i))) & m;
            shifted = (shifted << n) | ((xi + s.c[i]) & m);
        }
        g.set_flat(static_cast<std::int64_t>(x), f.at_flat(static_cast<std::int64_t>(shifted)));
    }
    return HiddenShiftInstance(n, d, q, std::move(f), std::move(g), s, {});
}

void HiddenShiftInstance::validate() const {
    const std::uint64_t domain = domain_size();
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(domain * 2);
    for (std::uint64_t x = 0; x < domain; ++x) {
        if (!seen.insert(f_.at_flat(static_cast<std::int64_t>(x))).second)
            throw std::runtime_error("instance invariant violated: f is not injective");
    }
    seen.clear();
    for (std::uint64_t x = 0; x < domain; ++x) {
        if (!seen.insert(g_.at_flat(static_cast<std::int64_t>(x))).second)
            throw std::runtime_error("instance invariant violated: g is not injective");
    }
    const std::uint64_t m = (1ULL << n_) - 1;
    std::vector<std::uint64_t> observed;
    for (std::uint64_t x = 0; x < domain; ++x) {
        std::uint64_t shifted = 0;
        for (int i = 0; i < d_; ++i) {
            std::uint64_t xi = (x >> (static_cast<unsigned>(n_) * static_cast<unsigned>(d_ - 1 - i))) & m;
            shifted = (shifted << n_) | ((xi + shift_.c[i]) & m);
        }
        if (g_.at_flat(static_cast<std::int64_t>(x)) != f_.at_flat(static_cast<std::int64_t>(shifted)))
            observed.push_back(x);
    }
    if (observed != corrupted_)
        throw std::runtime_error("instance invariant violated: mismatch set differs from corrupted set");
}

ShiftChannel HiddenShiftInstance::channel() const {
    ShiftChannel ch;
    ch.n_bits = n_;
    ch.dims = d_;
    ch.alive = true;
    ch.sealed_shift = shift_;
    ch.mismatch = corrupted_;
    ch.f_eval_cost = ch.g_eval_cost = 1;
    return ch;
}

void HiddenShiftInstance::save(const std::string& path, const std::string& provenance) const {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "qpmshift 1\n";
    os << n_ << ' ' << d_ << ' ' << q_ << ' ' << corrupted_.size() << '\n';
    if (!provenance.empty()) os << "# provenance " << provenance << '\n';
    write_grid_text(os, f_);
    write_grid_text(os, g_);
    os << "sealed\n";
    for (int i = 0; i < d_; ++i) os << shift_.c[i] << (i + 1 == d_ ? '\n' : ' ');
    for (size_t i = 0; i < corrupted_.size(); ++i)
        os << corrupted_[i] << (((i + 1) % 16 == 0 || i + 1 == corrupted_.size()) ? '\n' : ' ');
    if (!os) throw std::runtime_error("write failed: " + path);
}

HiddenShiftInstance HiddenShiftInstance::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::string magic;
    std::getline(is, magic);
    if (magic.rfind("qpmshift 1", 0) != 0) throw std::runtime_error("not a hidden-shift instance file");
    int n = 0, d = 0;
    std::uint64_t q = 0;
    std::size_t ncorrupt = 0;
    is >> n >> d >> q >> ncorrupt;
    GridString f = read_grid_text(is);
    GridString g = read_grid_text(is);
    std::string word;
    is >> word;
    if (word != "sealed") throw std::runtime_error("hidden-shift file: missing sealed section");
    PhaseLabel s(n, d);
    for (int i = 0; i < d; ++i) is >> s.c[i];
    std::vector<std::uint64_t> corrupted(ncorrupt);
    for (auto& c : corrupted) is >> c;
    if (!is) throw std::runtime_error("hidden-shift file: truncated");
    return HiddenShiftInstance(n, d, q, std::move(f), std::move(g), s, std::move(corrupted));
}

PhaseState prepare_state(const ShiftChannel& ch, Rng& rng, QueryLedger& ledger) {
    ledger.charge_oracle(ch.f_role, ch.f_eval_cost);
    ledger.charge_oracle(ch.g_role, ch.g_eval_cost);
    ledger.charge_quantum(ch.f_eval_cost + ch.g_eval_cost);
    PhaseState st;
    st.label = PhaseLabel(ch.n_bits, ch.dims);
    for (int i = 0; i < ch.dims; ++i) st.label.c[i] = rng.below(1ULL << ch.n_bits);
    double p = ch.poison_probability();
    if (p >= 1.0)
        st.poisoned = true;
    else if (p > 0.0)
        st.poisoned = rng.next_double() < p;
    return st;
}

std::pair<PhaseState, bool> combine(const PhaseState& a, const PhaseState& b, Rng& coin_rng) {
    if (a.label.n_bits != b.label.n_bits || a.label.dims != b.label.dims)
        throw std::invalid_argument("combine: state shape mismatch");
    bool success = coin_rng.coin();
    PhaseState out;
    out.label = success ? a.label.sub(b.label) : a.label.add(b.label);
    out.poisoned = a.poisoned || b.poisoned;
    return {out, success};
}

namespace {

// Sortable bin key: the masked low bits of every component packed into one
// word (component 0 most significant). Requires n*d <= 62, which every
// simulable pool already satisfies.
std::uint64_t bin_key(const PhaseLabel& l, std::uint64_t low_mask) {
    std::uint64_t k = 0;
    for (int i = 0; i < l.dims; ++i) k = (k << l.n_bits) | (l.c[i] & low_mask);
    return k;
}

}  // namespace

std::vector<PhaseState> run_stage(std::vector<PhaseState> pool, int stage, const SieveSchedule& schedule,
                                  const Rng& run_rng, StageRecord* record, std::uint64_t* work) {
    if (stage < 1 || stage > schedule.stage_count) throw std::invalid_argument("run_stage: bad stage index");
    if (static_cast<unsigned>(schedule.n_bits) * static_cast<unsigned>(schedule.dims) > 62)
        throw std::invalid_argument("run_stage: label space too large to bin");
    int bits_before = 0;
    for (int j = 0; j + 1 < stage; ++j) bits_before += schedule.bit_widths[static_cast<size_t>(j)];
    const int bits_through = bits_before + schedule.bit_widths[static_cast<size_t>(stage - 1)];
    const std::uint64_t low_mask = bits_through >= 64 ? ~0ULL : (1ULL << bits_through) - 1;

    // Bins are runs of equal keys in the sorted order array: the key is the
    // full low-bit value of every component, and failures are re-filed under
    // their new value, so any two states sharing a bin always agree on the
    // entire processed block. Sorting (key, arrival index) pairs keeps
    // arrival order within a bin and visits bins in key order, making coin
    // indices reproducible.
    std::vector<PhaseState> states = std::move(pool);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> order;
    order.reserve(states.size());
    for (std::uint32_t i = 0; i < states.size(); ++i) {
        if (!states[i].label.low_bits_zero(bits_before))
            throw std::logic_error("sieve invariant violated: stage input has non-zero processed bits");
        order.emplace_back(bin_key(states[i].label, low_mask), i);
    }
    std::sort(order.begin(), order.end());

    if (record) {
        record->stage = stage;
        record->input = states.size();
        record->steps = 0;
        record->output = 0;
        record->bins = 0;
        for (size_t i = 0; i < order.size(); ++i)
            if (i == 0 || order[i].first != order[i - 1].first) ++record->bins;
    }

    std::vector<PhaseState> out;
    Rng coin_base = run_rng.fork(kTagCoin).fork(static_cast<std::uint64_t>(stage));
    std::uint64_t step = 0;
    while (order.size() > schedule.stop_threshold) {
        // A step only happens when something can be paired.
        bool pairable = false;
        for (size_t i = 0; i + 1 < order.size() && !pairable; ++i)
            pairable = order[i].first == order[i + 1].first;
        if (!pairable) break;
        ++step;
        Rng step_base = coin_base.fork(step);
        std::vector<PhaseState> next_states;
        std::vector<std::pair<std::uint64_t, std::uint32_t>> next_order;
        next_states.reserve(order.size() / 4 + 1);
        std::uint64_t pair_index = 0;
        size_t i = 0;
        while (i < order.size()) {
            size_t j = i;
            while (j < order.size() && order[j].first == order[i].first) ++j;
            size_t pairs = (j - i) / 2;
            for (size_t p = 0; p < pairs; ++p) {
                Rng coin = step_base.fork(pair_index++);
                auto [st, success] =
                    combine(states[order[i + 2 * p].second], states[order[i + 2 * p + 1].second], coin);
                if (success) {
                    if (!st.label.low_bits_zero(bits_through))
                        throw std::logic_error("sieve invariant violated: success left non-zero block bits");
                    out.push_back(st);
                } else {
                    next_order.emplace_back(bin_key(st.label, low_mask),
                                            static_cast<std::uint32_t>(next_states.size()));
                    next_states.push_back(st);
                }
            }
            // odd state out is discarded
            i = j;
        }
        if (work) *work += order.size() + pair_index;
        std::sort(next_order.begin(), next_order.end());
        states = std::move(next_states);
        order = std::move(next_order);
    }
    if (record) {
        record->steps = step;
        record->output = out.size();
    }
    return out;
}

SieveResult run_sieve(const ShiftChannel& ch, const SieveSchedule& schedule, std::uint64_t k_target,
                      const Rng& rng, QueryLedger& ledger) {
    if (schedule.n_bits != ch.n_bits || schedule.dims != ch.dims)
        throw std::invalid_argument("run_sieve: schedule does not match the instance");
    if (schedule.pool_size > kPoolCap)
        throw std::invalid_argument("run_sieve: pool size beyond simulation cap");

    SieveResult res;
    res.prepared = schedule.pool_size;
    std::vector<PhaseState> pool;
    pool.reserve(schedule.pool_size);
    Rng prep = rng.fork(kTagPrepare);
    for (std::uint64_t i = 0; i < schedule.pool_size; ++i) pool.push_back(prepare_state(ch, prep, ledger));

    if (ch.n_bits == 1) {
        // Every prepared label is already of final form; the sieve is a
        // pass-through.
        res.final_states = std::move(pool);
    } else {
        for (int stage = 1; stage <= schedule.stage_count; ++stage) {
            StageRecord rec;
            pool = run_stage(std::move(pool), stage, schedule, rng, &rec, &res.work);
            res.stages.push_back(rec);
            if (pool.empty()) break;
        }
        res.final_states = std::move(pool);
    }
    for (const auto& st : res.final_states) {
        if (!st.label.low_bits_zero(ch.n_bits - 1))
            throw std::logic_error("sieve invariant violated: final label outside {0, 2^(n-1)}^d");
    }
    res.success = res.final_states.size() >= k_target;
    res.shortfall = !res.success;
    return res;
}

ParitySample measure_final(const PhaseState& state, const ShiftChannel& ch, Rng& rng) {
    if (!state.label.low_bits_zero(ch.n_bits - 1))
        throw std::invalid_argument("measure_final: label is not of final form");
    ParitySample s;
    for (int i = 0; i < ch.dims; ++i)
        s.beta_mask |= ((state.label.c[i] >> (ch.n_bits - 1)) & 1) << i;
    if (state.poisoned) {
        s.parity = rng.coin() ? 1 : 0;
    } else {
        int p = 0;
        for (int i = 0; i < ch.dims; ++i)
            p ^= static_cast<int>((s.beta_mask >> i) & (ch.sealed_shift.c[i] & 1));
        s.parity = p;
    }
    return s;
}

std::uint64_t recover_low_bits(const ShiftChannel& ch, double pool_constant, const Rng& rng,
                               QueryLedger& ledger, const RecoverOptions& opts) {
    const std::uint64_t k_target = opts.k_target ? opts.k_target : 2ULL * static_cast<std::uint64_t>(ch.dims) + 2;
    SieveSchedule schedule = make_schedule(ch.n_bits, ch.dims, pool_constant);
    Gf2Solver solver(ch.dims);
    for (int attempt = 0; attempt <= opts.sieve_retries; ++attempt) {
        SieveResult res = run_sieve(ch, schedule, k_target, rng.fork(kTagSieve).fork(static_cast<std::uint64_t>(attempt)), ledger);
        Rng meas = rng.fork(kTagMeasure).fork(static_cast<std::uint64_t>(attempt));
        for (const auto& st : res.final_states) {
            ParitySample sample = measure_final(st, ch, meas);
            solver.add_equation(sample.beta_mask, sample.parity != 0);
            if (solver.full_rank()) return *solver.solve();
        }
    }
    throw RecoveryError("low-bit recovery: sieve retry cap exceeded before spanning GF(2)^d", -1);
}

PhaseLabel recover_shift(const ShiftChannel& ch, double pool_constant, const Rng& rng,
                         QueryLedger& ledger, const RecoverOptions& opts) {
    PhaseLabel result(ch.n_bits, ch.dims);
    ShiftChannel cur = ch;
    Rng offsets = rng.fork(kTagOffset);
    for (int round = 0; round < ch.n_bits; ++round) {
        std::uint64_t beta;
        try {
            beta = recover_low_bits(cur, pool_constant, rng.fork(kTagRound).fork(static_cast<std::uint64_t>(round)), ledger, opts);
        } catch (const RecoveryError& e) {
            throw RecoveryError(std::string(e.what()) + " (round " + std::to_string(round) + ")", round);
        }
        for (int i = 0; i < ch.dims; ++i)
            result.c[i] |= ((beta >> i) & 1) << round;
        if (round + 1 < ch.n_bits) {
            std::uint64_t a_mask = 0;
            if (opts.randomize_offset) {
                Rng ar = offsets.fork(static_cast<std::uint64_t>(round));
                a_mask = ar.below(1ULL << ch.dims);
            }
            cur = cur.restricted(beta, a_mask);
        }
    }
    return result;
}

std::optional<PhaseLabel> recover_shift_voted(const ShiftChannel& ch, double pool_constant,
                                              const Rng& rng, QueryLedger& ledger,
                                              const RecoverOptions& opts) {
    std::map<PhaseLabel, int> counts;
    const int votes = std::max(1, opts.votes);
    for (int v = 0; v < votes; ++v) {
        try {
            PhaseLabel s = recover_shift(ch, pool_constant, rng.fork(kTagVote).fork(static_cast<std::uint64_t>(v)), ledger, opts);
            if (++counts[s] > votes / 2) return s;
        } catch (const RecoveryError&) {
            // abstain
        }
    }
    return std::nullopt;
}

ShiftChannel make_window_channel(const GridString& text, const Vec& text_origin,
                                 const GridString& pattern, std::int64_t block,
                                 std::int64_t window_side, QueryLedger& ledger) {
    const int d = text.dims();
    if (pattern.dims() != d) throw std::invalid_argument("window channel: dimension mismatch");
    if (window_side < 2 || (window_side & (window_side - 1)) != 0)
        throw std::invalid_argument("window channel: window side must be a power of two >= 2");
    int n = 0;
    while ((std::int64_t{1} << n) < window_side) ++n;
    if (static_cast<unsigned>(n) * static_cast<unsigned>(d) > 62)
        throw std::invalid_argument("window channel: domain too large");

    const Vec extent = Vec::filled(d, window_side);
    auto fh = block_fingerprints(text, block, text_origin, extent, &ledger);
    auto gh = block_fingerprints(pattern, block, Vec::zero(d), extent, &ledger);

    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> f_pos;
    f_pos.reserve(fh.size() * 2);
    for (std::uint64_t y = 0; y < fh.size(); ++y) f_pos[fh[static_cast<size_t>(y)]].push_back(y);

    // Vote for candidate shifts: a fingerprint match g(x) = f(y) suggests
    // s = y - x (componentwise mod window).
    const std::uint64_t comp_mask = (1ULL << n) - 1;
    std::unordered_map<std::uint64_t, std::uint64_t> votes;
    for (std::uint64_t x = 0; x < gh.size(); ++x) {
        auto it = f_pos.find(gh[static_cast<size_t>(x)]);
        if (it == f_pos.end()) continue;
        for (std::uint64_t y : it->second) {
            std::uint64_t s = 0;
            for (int i = 0; i < d; ++i) {
                unsigned sh = static_cast<unsigned>(n) * static_cast<unsigned>(d - 1 - i);
                std::uint64_t diff = ((y >> sh) - (x >> sh)) & comp_mask;
                s = (s << n) | diff;
            }
            ++votes[s];
        }
    }

    ShiftChannel ch;
    ch.n_bits = n;
    ch.dims = d;
    ch.f_eval_cost = ch.g_eval_cost = static_cast<std::uint64_t>(ipow(block, d));
    ch.sealed_shift = PhaseLabel(n, d);
    if (votes.empty()) {
        ch.alive = false;
        return ch;
    }
    std::uint64_t best_s = 0, best_count = 0;
    bool first = true;
    for (const auto& [s, count] : votes) {
        if (first || count > best_count || (count == best_count && s < best_s)) {
            best_s = s;
            best_count = count;
            first = false;
        }
    }
    ch.alive = true;
    for (int i = 0; i < d; ++i)
        ch.sealed_shift.c[i] = (best_s >> (static_cast<unsigned>(n) * static_cast<unsigned>(d - 1 - i))) & comp_mask;
    for (std::uint64_t x = 0; x < gh.size(); ++x) {
        std::uint64_t shifted = 0;
        for (int i = 0; i < d; ++i) {
            unsigned sh = static_cast<unsigned>(n) * static_cast<unsigned>(d - 1 - i);
            shifted = (shifted << n) | (((x >> sh) + ch.sealed_shift.c[i]) & comp_mask);
        }
        if (gh[static_cast<size_t>(x)] != fh[static_cast<size_t>(shifted)]) ch.mismatch.push_back(x);
    }
    return ch;
}

}  // namespace qpm
