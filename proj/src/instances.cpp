#include "qpm/instances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "qpm/injectivity.hpp"
#include "qpm/stats.hpp"

namespace qpm {

namespace {

constexpr std::uint64_t kTagText = 0x74657874;
constexpr std::uint64_t kTagPattern = 0x70617474;
constexpr std::uint64_t kTagOffset = 0x6f666673;
constexpr std::uint64_t kTagBlocks = 0x626c6f63;
constexpr std::uint64_t kTagNoise = 0x6e6f6973;

GridString uniform_grid(std::int64_t side, int d, std::uint64_t q, Rng rng) {
    GridString g(d, side, q);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) g.set_flat(i, rng.below(q));
    return g;
}

// Sample `count` distinct integers from [range) by partial Fisher-Yates.
std::vector<std::int64_t> sample_without_replacement(std::int64_t range, std::int64_t count, Rng& rng) {
    std::vector<std::int64_t> idx(static_cast<size_t>(range));
    for (std::int64_t i = 0; i < range; ++i) idx[static_cast<size_t>(i)] = i;
    for (std::int64_t i = 0; i < count; ++i) {
        std::int64_t j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(range - i)));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    idx.resize(static_cast<size_t>(count));
    return idx;
}

}  // namespace

const char* gen_mode_name(GenMode m) {
    switch (m) {
        case GenMode::random_planted: return "planted";
        case GenMode::random_unplanted: return "unplanted";
        case GenMode::adversarial: return "adversarial";
        case GenMode::permutation_d0: return "perm-d0";
        default: return "perm-d1";
    }
}

std::optional<GenMode> gen_mode_from_name(const std::string& name) {
    if (name == "planted") return GenMode::random_planted;
    if (name == "unplanted") return GenMode::random_unplanted;
    if (name == "adversarial") return GenMode::adversarial;
    if (name == "perm-d0") return GenMode::permutation_d0;
    if (name == "perm-d1") return GenMode::permutation_d1;
    return std::nullopt;
}

TextPatternInstance gen_random(const GenSpec& spec) {
    if (spec.mode != GenMode::random_planted && spec.mode != GenMode::random_unplanted)
        throw std::invalid_argument("gen_random: spec mode is not a random mode");
    if (spec.m > spec.n || spec.m < 1) throw std::invalid_argument("gen_random: need 1 <= m <= n");
    Rng root(spec.seed);
    TextPatternInstance out;
    out.text = uniform_grid(spec.n, spec.d, spec.q, root.fork(kTagText));
    if (spec.mode == GenMode::random_unplanted) {
        out.pattern = uniform_grid(spec.m, spec.d, spec.q, root.fork(kTagPattern));
        return out;
    }
    Rng off_rng = root.fork(kTagOffset);
    Vec offset(spec.d);
    for (int i = 0; i < spec.d; ++i)
        offset.v[i] = static_cast<std::int64_t>(off_rng.below(static_cast<std::uint64_t>(spec.n - spec.m + 1)));
    GridString p(spec.d, spec.m, spec.q);
    Vec z = Vec::zero(spec.d);
    do {
        p.set(z, out.text.at(offset + z));
    } while (next_point(z, spec.m));
    out.pattern = std::move(p);
    out.planted_offset = offset;
    return out;
}

TextPatternInstance gen_adversarial(std::int64_t n, std::int64_t m, int d, double gamma,
                                    bool leave_clean, std::uint64_t seed) {
    if (m < 1 || n < m || n % m != 0) throw std::invalid_argument("gen_adversarial: n must be a multiple of m");
    const std::int64_t p = n / m;
    const std::int64_t block_cells = ipow(m, d);
    const std::int64_t displaced = static_cast<std::int64_t>(std::ceil(gamma * static_cast<double>(block_cells)));
    if (displaced < 1 || displaced > block_cells)
        throw std::invalid_argument("gen_adversarial: gamma * m^d must round up to within [1, m^d]");
    const std::uint64_t two_m = static_cast<std::uint64_t>(2 * m);
    std::uint64_t q = 1;
    for (int i = 0; i < d; ++i) {
        if (q > (1ULL << 62) / two_m) throw std::invalid_argument("gen_adversarial: alphabet overflow");
        q *= two_m;
    }

    auto encode = [&](const Vec& x, std::int64_t shift) {
        std::uint64_t v = 0;
        for (int i = 0; i < d; ++i) v = v * two_m + static_cast<std::uint64_t>(x[i] + shift);
        return v;
    };

    TextPatternInstance out;
    GridString pattern(d, m, q);
    {
        Vec x = Vec::zero(d);
        do {
            pattern.set(x, encode(x, 0));
        } while (next_point(x, m));
    }

    Rng root(seed);
    const std::int64_t block_count = ipow(p, d);
    std::int64_t clean_block = -1;
    if (leave_clean)
        clean_block = static_cast<std::int64_t>(root.fork(kTagOffset).below(static_cast<std::uint64_t>(block_count)));

    GridString text(d, n, q);
    Rng blocks = root.fork(kTagBlocks);
    for (std::int64_t bi = 0; bi < block_count; ++bi) {
        Vec corner = unflatten(bi, p, d);
        for (int i = 0; i < d; ++i) corner.v[i] *= m;
        std::unordered_set<std::int64_t> bad;
        if (bi != clean_block) {
            Rng br = blocks.fork(static_cast<std::uint64_t>(bi));
            auto picks = sample_without_replacement(block_cells, displaced, br);
            bad.insert(picks.begin(), picks.end());
        }
        Vec z = Vec::zero(d);
        std::int64_t zi = 0;
        do {
            text.set(corner + z, encode(z, bad.count(zi) ? m : 0));
            ++zi;
        } while (next_point(z, m));
    }
    out.text = std::move(text);
    out.pattern = std::move(pattern);
    if (leave_clean) {
        Vec corner = unflatten(clean_block, p, d);
        for (int i = 0; i < d; ++i) corner.v[i] *= m;
        out.planted_offset = corner;
    }
    return out;
}

TextPatternInstance gen_permutation_pair(std::int64_t n, std::int64_t m, int d, bool same_source,
                                         std::uint64_t seed) {
    if (m < 1 || m > n) throw std::invalid_argument("gen_permutation_pair: need 1 <= m <= n");
    const std::int64_t cells = ipow(n, d);
    Rng root(seed);
    Rng trng = root.fork(kTagText);
    std::vector<std::int64_t> perm = sample_without_replacement(cells, cells, trng);
    GridString text(d, n, static_cast<std::uint64_t>(cells));
    for (std::int64_t i = 0; i < cells; ++i) text.set_flat(i, static_cast<std::uint64_t>(perm[static_cast<size_t>(i)]));

    TextPatternInstance out;
    const std::int64_t pat_cells = ipow(m, d);
    GridString pat(d, m, static_cast<std::uint64_t>(cells));
    if (same_source) {
        Rng off_rng = root.fork(kTagOffset);
        Vec offset(d);
        for (int i = 0; i < d; ++i)
            offset.v[i] = static_cast<std::int64_t>(off_rng.below(static_cast<std::uint64_t>(n - m + 1)));
        Vec z = Vec::zero(d);
        do {
            pat.set(z, text.at(offset + z));
        } while (next_point(z, m));
        out.planted_offset = offset;
    } else {
        Rng prng = root.fork(kTagPattern);
        auto values = sample_without_replacement(cells, pat_cells, prng);
        for (std::int64_t i = 0; i < pat_cells; ++i)
            pat.set_flat(i, static_cast<std::uint64_t>(values[static_cast<size_t>(i)]));
    }
    out.text = std::move(text);
    out.pattern = std::move(pat);
    return out;
}

TailExperimentResult injectivity_tail_experiment(std::int64_t n, int d, std::uint64_t q,
                                                 std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("injectivity_tail_experiment: trials must be positive");
    TailExperimentResult res;
    res.trials = trials;
    double raw = std::pow(3.0 * d * std::log(static_cast<double>(n)) / std::log(static_cast<double>(q)),
                          1.0 / static_cast<double>(d));
    res.threshold_k = static_cast<std::int64_t>(std::ceil(raw));
    Rng root(seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
        GridString s = uniform_grid(n, d, q, root.fork(t));
        bool hit;
        if (res.threshold_k <= 1) {
            hit = true;  // upsilon >= 1 always
        } else if (res.threshold_k > n) {
            hit = false;  // upsilon <= side always
        } else {
            // upsilon(S) >= k  iff  S^{|>k-1} is not injective
            hit = !derived_injective(s, res.threshold_k - 1);
        }
        if (hit) ++res.hits;
    }
    res.frequency = static_cast<double>(res.hits) / static_cast<double>(trials);
    res.wilson_low = stats::wilson_lower(res.hits, trials);
    res.wilson_high = stats::wilson_upper(res.hits, trials);
    return res;
}

std::pair<GridString, GridString> megacharacter_blocking(const GridString& text,
                                                         const GridString& pattern, std::int64_t b) {
    if (b < 1) throw std::invalid_argument("megacharacter_blocking: b must be positive");
    if (text.side() % b != 0 || pattern.side() % b != 0)
        throw std::invalid_argument("megacharacter_blocking: b must divide both sides");
    if (text.dims() != pattern.dims() || text.alphabet() != pattern.alphabet())
        throw std::invalid_argument("megacharacter_blocking: incompatible strings");
    const int d = text.dims();
    const std::int64_t cells = ipow(b, d);
    const double bits = static_cast<double>(cells) * std::log2(static_cast<double>(text.alphabet()));
    if (bits > 62.0) throw std::invalid_argument("megacharacter_blocking: blocked alphabet exceeds 64 bits");
    std::uint64_t blocked_q = 1;
    for (std::int64_t i = 0; i < cells; ++i) blocked_q *= text.alphabet();

    auto block_one = [&](const GridString& g) {
        GridString out(d, g.side() / b, blocked_q);
        Vec pos = Vec::zero(d);
        do {
            Vec corner = pos;
            for (int i = 0; i < d; ++i) corner.v[i] *= b;
            std::uint64_t v = 0;
            Vec z = Vec::zero(d);
            do {
                v = v * g.alphabet() + g.at(corner + z);
            } while (next_point(z, b));
            out.set(pos, v);
        } while (next_point(pos, g.side() / b));
        return out;
    };
    return {block_one(text), block_one(pattern)};
}

HiddenShiftInstance inject_noise(const HiddenShiftInstance& inst, double eps_noise, std::uint64_t seed) {
    if (eps_noise < 0.0 || eps_noise >= 1.0) throw std::invalid_argument("inject_noise: eps must be in [0, 1)");
    const std::uint64_t domain = inst.domain_size();
    const std::uint64_t count =
        static_cast<std::uint64_t>(std::ceil(eps_noise * static_cast<double>(domain)));
    if (count == 0) return inst;
    if (!inst.corrupted().empty()) throw std::invalid_argument("inject_noise: instance already noisy");
    if (inst.alphabet() < domain + count)
        throw std::invalid_argument("inject_noise: alphabet too small to preserve injectivity");

    Rng rng = Rng(seed).fork(kTagNoise);
    std::unordered_set<std::uint64_t> image;
    image.reserve(domain * 2);
    GridString g = inst.g_table();
    for (std::uint64_t x = 0; x < domain; ++x) image.insert(g.at_flat(static_cast<std::int64_t>(x)));

    std::vector<std::int64_t> positions =
        sample_without_replacement(static_cast<std::int64_t>(domain), static_cast<std::int64_t>(count), rng);
    std::vector<std::uint64_t> corrupted;
    corrupted.reserve(positions.size());
    for (std::int64_t pos : positions) {
        std::uint64_t fresh;
        do {
            fresh = rng.below(inst.alphabet());
        } while (image.count(fresh));
        image.insert(fresh);
        g.set_flat(pos, fresh);
        corrupted.push_back(static_cast<std::uint64_t>(pos));
    }
    return HiddenShiftInstance(inst.n_bits(), inst.dims(), inst.alphabet(), inst.f_table(), std::move(g),
                               inst.sealed_shift(), std::move(corrupted));
}

HiddenShiftInstance gen_hidden_shift(int n, int d, std::uint64_t seed, double eps_noise, std::uint64_t q) {
    const std::uint64_t domain = 1ULL << (static_cast<unsigned>(n) * static_cast<unsigned>(d));
    if (q == 0) q = domain * 2;
    HiddenShiftInstance inst = HiddenShiftInstance::plant(n, d, q, Rng(seed));
    if (eps_noise > 0.0) inst = inject_noise(inst, eps_noise, seed ^ 0x9e3779b97f4a7c15ULL);
    return inst;
}

std::string gen_spec_json(const GenSpec& spec) {
    std::ostringstream os;
    os << "{\"mode\":\"" << gen_mode_name(spec.mode) << "\",\"n\":" << spec.n << ",\"m\":" << spec.m
       << ",\"d\":" << spec.d << ",\"q\":" << spec.q << ",\"seed\":" << spec.seed;
    if (spec.mode == GenMode::adversarial)
        os << ",\"gamma\":" << spec.gamma << ",\"leave_clean\":" << (spec.leave_clean ? "true" : "false");
    os << "}";
    return os.str();
}

}  // namespace qpm
