// qpm: generate instances, run the hidden-shift sieve, match patterns, and
// benchmark the cost ledger. Every command is deterministic given its
// configuration and seed; reports differ across reruns only in wall_ms.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qpm/baseline.hpp"
#include "qpm/calibrate.hpp"
#include "qpm/grid_io.hpp"
#include "qpm/injectivity.hpp"
#include "qpm/instances.hpp"
#include "qpm/matcher.hpp"
#include "qpm/parallel.hpp"
#include "qpm/report.hpp"
#include "qpm/sieve.hpp"

namespace fs = std::filesystem;
using qpm::report::Json;
using Clock = std::chrono::steady_clock;

namespace {

std::int64_t wall_ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

[[noreturn]] void fail(int code, const std::string& message) {
    Json err;
    err["error"] = message;
    err["code"] = code;
    std::cerr << err.dump() << "\n";
    std::exit(code);
}

std::string resolve_out(const std::string& path) {
    if (path.empty() || fs::path(path).is_absolute()) return path;
    const char* base = std::getenv("QPM_OUT");
    if (!base || !*base) return path;
    fs::create_directories(base);
    return (fs::path(base) / path).string();
}

void emit(const Json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        qpm::report::write_file(resolve_out(path), j.dump(2) + "\n");
    }
}

// --config FILE holds a JSON object per subcommand: {"match": {"n": ...}}.
// Its entries become tokens injected right after the subcommand, so flags
// given explicitly on the command line always win.
std::vector<std::string> inject_config(int argc, char** argv) {
    std::vector<std::string> raw(argv + 1, argv + argc);
    std::string config_path;
    std::vector<std::string> args;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config" && i + 1 < raw.size()) {
            config_path = raw[++i];
            continue;
        }
        args.push_back(raw[i]);
    }
    if (config_path.empty() || args.empty()) return args;
    Json cfg;
    try {
        cfg = Json::parse(qpm::report::read_file(config_path));
    } catch (const std::exception& e) {
        fail(1, std::string("config: ") + e.what());
    }
    const std::string sub = args[0];
    if (!cfg.contains(sub)) return args;
    std::vector<std::string> out{sub};
    for (auto& [key, value] : cfg[sub].items()) {
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back("--" + key);
            continue;
        }
        out.push_back("--" + key);
        out.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& spec) {
    std::vector<std::pair<int, int>> sizes;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto x = item.find('x');
        if (x == std::string::npos) throw std::invalid_argument("sizes: expected nXd entries");
        sizes.emplace_back(std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1)));
    }
    return sizes;
}

std::vector<std::int64_t> parse_list(const std::string& spec) {
    std::vector<std::int64_t> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

double pool_constant_from(const std::string& calibration_file, double explicit_pc) {
    if (explicit_pc > 0.0) return explicit_pc;
    if (!calibration_file.empty()) {
        Json j = Json::parse(qpm::report::read_file(calibration_file));
        return j.at("pool_constant").get<double>();
    }
    return 8.0;  // safe default for every size this artifact runs
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
    std::string mode = "planted";
    std::int64_t n = 64, m = 16;
    int d = 1;
    std::uint64_t q = 2;
    std::uint64_t seed = 1;
    double gamma = 0.25;
    bool no_clean = false;
    double noise = 0.0;
    int shift_n = 0;  // nonzero: hidden-shift instance instead of text/pattern
    std::string out = "instance";
    bool binary = false;
    std::string report;
};

int cmd_gen(const GenArgs& a) {
    auto t0 = Clock::now();
    Json rep;
    std::vector<std::string> files;
    if (a.shift_n > 0) {
        auto inst = qpm::gen_hidden_shift(a.shift_n, a.d, a.seed, a.noise);
        std::ostringstream prov;
        prov << "{\"kind\":\"hidden-shift\",\"n\":" << a.shift_n << ",\"d\":" << a.d
             << ",\"seed\":" << a.seed << ",\"noise\":" << a.noise << "}";
        std::string path = resolve_out(a.out + ".qps");
        inst.save(path, prov.str());
        files.push_back(path);
        rep["kind"] = "hidden-shift";
        rep["n"] = a.shift_n;
        rep["d"] = a.d;
        rep["noise_fraction"] = inst.noise_fraction();
    } else {
        auto mode = qpm::gen_mode_from_name(a.mode);
        if (!mode) fail(1, "unknown mode: " + a.mode);
        qpm::GenSpec spec;
        spec.mode = *mode;
        spec.n = a.n;
        spec.m = a.m;
        spec.d = a.d;
        spec.q = a.q;
        spec.seed = a.seed;
        spec.gamma = a.gamma;
        spec.leave_clean = !a.no_clean;

        qpm::TextPatternInstance inst;
        switch (*mode) {
            case qpm::GenMode::random_planted:
            case qpm::GenMode::random_unplanted:
                inst = qpm::gen_random(spec);
                break;
            case qpm::GenMode::adversarial:
                inst = qpm::gen_adversarial(a.n, a.m, a.d, a.gamma, !a.no_clean, a.seed);
                break;
            case qpm::GenMode::permutation_d0:
                inst = qpm::gen_permutation_pair(a.n, a.m, a.d, false, a.seed);
                break;
            case qpm::GenMode::permutation_d1:
                inst = qpm::gen_permutation_pair(a.n, a.m, a.d, true, a.seed);
                break;
        }
        std::string prov = qpm::gen_spec_json(spec);
        std::string tpath = resolve_out(a.out + "_text.qpg");
        std::string ppath = resolve_out(a.out + "_pattern.qpg");
        qpm::save_grid(tpath, inst.text, prov, a.binary);
        qpm::save_grid(ppath, inst.pattern, prov, a.binary);
        files = {tpath, ppath};

        // sealed answers live only in the metadata file, never in the grids
        Json meta;
        meta["spec"] = Json::parse(prov);
        if (inst.planted_offset) {
            Json off = Json::array();
            for (int i = 0; i < a.d; ++i) off.push_back((*inst.planted_offset)[i]);
            meta["sealed"] = Json{{"planted_offset", off}};
        }
        std::string mpath = resolve_out(a.out + "_meta.json");
        qpm::report::write_file(mpath, meta.dump(2) + "\n");
        files.push_back(mpath);
        rep["kind"] = "text-pattern";
        rep["spec"] = Json::parse(prov);
    }
    rep["files"] = files;
    rep["wall_ms"] = wall_ms_since(t0);
    emit(rep, a.report);
    return 0;
}

// -------------------------------------------------------------- sieve ----

struct SieveArgs {
    std::string instance;  // .qps path; empty: generate on the fly
    int n = 8, d = 1;
    double noise = 0.0;
    std::uint64_t instance_seed = 1;
    std::uint64_t seed = 1;
    double pool_constant = 0.0;
    std::string calibration;
    std::uint64_t k_target = 4;
    bool recover = false;
    int votes = 1;
    bool test_mode = false;
    bool random_a = false;
    std::string stage_csv;
    std::string report;
};

int cmd_sieve(const SieveArgs& a) {
    auto t0 = Clock::now();
    qpm::HiddenShiftInstance inst;
    try {
        inst = a.instance.empty() ? qpm::gen_hidden_shift(a.n, a.d, a.instance_seed, a.noise)
                                  : qpm::HiddenShiftInstance::load(a.instance);
    } catch (const std::exception& e) {
        fail(1, e.what());
    }
    double pc = pool_constant_from(a.calibration, a.pool_constant);
    auto schedule = qpm::make_schedule(inst.n_bits(), inst.dims(), pc);
    qpm::QueryLedger ledger;
    qpm::SieveResult result;
    try {
        result = qpm::run_sieve(inst.channel(), schedule, a.k_target, qpm::Rng(a.seed), ledger);
    } catch (const std::exception& e) {
        fail(2, e.what());
    }

    Json rep = qpm::report::sieve_json(a.seed, schedule, result, ledger);
    rep["pool_constant"] = pc;

    if (!a.stage_csv.empty()) {
        std::string csv = qpm::report::csv_row({"stage", "bins", "input", "output"});
        for (const auto& st : result.stages)
            csv += qpm::report::csv_row({std::to_string(st.stage), std::to_string(st.bins),
                                         std::to_string(st.input), std::to_string(st.output)});
        qpm::report::write_file(resolve_out(a.stage_csv), csv);
    }

    int exit_code = 0;
    if (a.recover) {
        qpm::RecoverOptions opts;
        opts.votes = a.votes;
        opts.randomize_offset = a.random_a;
        qpm::QueryLedger rled;
        auto s = qpm::recover_shift_voted(inst.channel(), pc, qpm::Rng(a.seed).fork(0x7265636bULL), rled, opts);
        if (s) {
            Json shift = Json::array();
            for (int i = 0; i < inst.dims(); ++i) shift.push_back(s->c[i]);
            rep["recovered_shift"] = shift;
            if (a.test_mode) {
                bool match = *s == inst.sealed_shift();
                rep["recovered_matches_sealed"] = match;
                if (!match) exit_code = 2;
            }
        } else {
            rep["recovered_shift"] = nullptr;
            exit_code = 2;
        }
        rep["recovery_ledger"] = qpm::report::ledger_json(rled);
    }
    rep["wall_ms"] = wall_ms_since(t0);
    emit(rep, a.report);
    return exit_code;
}

// -------------------------------------------------------------- match ----

struct MatchArgs {
    std::string text, pattern;
    double gamma = 0.25;
    std::int64_t nu = 0;  // 0: compute from injectivity lengths
    bool auto_nu = false;
    double eps = 0.0;
    std::uint64_t budget = 0;
    double pool_constant = 0.0;
    std::string calibration;
    std::uint64_t seed = 1;
    int confirm_reps = 2;
    bool full_verify = false;
    bool baseline = false;
    std::string report;
};

int cmd_match(const MatchArgs& a) {
    auto t0 = Clock::now();
    qpm::GridString text, pattern;
    try {
        text = qpm::load_grid(a.text).grid;
        pattern = qpm::load_grid(a.pattern).grid;
    } catch (const std::exception& e) {
        fail(1, e.what());
    }

    qpm::MatchParams params;
    params.gamma = a.gamma;
    params.eps_tol = a.eps;
    params.trial_budget = a.budget;
    params.pool_constant = pool_constant_from(a.calibration, a.pool_constant);
    params.confirm_reps = a.confirm_reps;
    params.full_verify = a.full_verify;

    Json rep;
    qpm::QueryLedger ledger;
    qpm::MatchOutcome outcome;
    try {
        if (a.auto_nu) {
            outcome = qpm::find_match_auto_nu(text, pattern, a.gamma, qpm::Rng(a.seed), ledger,
                                              std::optional<qpm::MatchParams>(params));
            rep["nu"] = "auto";
        } else {
            params.nu = a.nu > 0 ? a.nu
                                 : std::max(qpm::m_injectivity_length(text, pattern.side()),
                                            qpm::injectivity_length(pattern));
            outcome = qpm::find_match(text, pattern, params, qpm::Rng(a.seed), ledger);
            rep["nu"] = params.nu;
        }
    } catch (const std::exception& e) {
        fail(1, e.what());
    }
    rep["gamma"] = a.gamma;
    rep["seed"] = a.seed;
    rep["result"] = qpm::report::match_json(outcome);

    if (a.baseline) {
        qpm::QueryLedger bled;
        Json base;
        try {
            auto b = qpm::classical_injective_match(text, pattern, a.gamma, qpm::Rng(a.seed).fork(1), bled);
            base["classical"] = qpm::report::match_json(b);
        } catch (const std::exception& e) {
            base["classical"] = Json{{"error", e.what()}};
        }
        auto oracle = qpm::brute_force_match(text, pattern);
        Json matches = Json::array();
        for (const auto& s : oracle.all_matches) {
            Json off = Json::array();
            for (int i = 0; i < s.dims; ++i) off.push_back(s[i]);
            matches.push_back(off);
        }
        base["brute_force"] = Json{{"all_matches", matches},
                                   {"ledger", qpm::report::ledger_json(oracle.queries_used)}};
        rep["baseline"] = base;
    }
    rep["wall_ms"] = wall_ms_since(t0);
    emit(rep, a.report);
    return 0;
}

// ---------------------------------------------------------- calibrate ----

struct CalibrateArgs {
    std::string sizes;  // "16x1,8x2"; chains through smaller n automatically
    bool no_chain = false;
    int trials = 30;
    double target = 0.75;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string out = "calibration.json";
    std::string report;
};

int cmd_calibrate(const CalibrateArgs& a) {
    auto t0 = Clock::now();
    qpm::CalibrateConfig cfg;
    try {
        auto tops = a.sizes.empty() ? std::vector<std::pair<int, int>>{{16, 1}, {8, 2}} : parse_sizes(a.sizes);
        if (a.no_chain) {
            cfg.sizes = tops;
        } else {
            // recovery recurses through every smaller n, so calibrate chains
            int max1 = 2, max2 = 0;
            for (auto [n, d] : tops) {
                if (d == 1)
                    max1 = std::max(max1, n);
                else if (d == 2)
                    max2 = std::max(max2, n);
                else
                    cfg.sizes.emplace_back(n, d);
            }
            auto chain = qpm::default_calibration_sizes(max1, max2 ? max2 : 2);
            cfg.sizes.insert(cfg.sizes.end(), chain.begin(), chain.end());
        }
        cfg.trials_per_size = a.trials;
        cfg.target = a.target;
        cfg.seed = a.seed;
        cfg.workers = a.workers > 0 ? a.workers : qpm::hardware_workers();
    } catch (const std::exception& e) {
        fail(1, e.what());
    }
    qpm::CalibrateResult res;
    try {
        res = qpm::calibrate_pool_constant(cfg);
    } catch (const std::exception& e) {
        fail(2, e.what());
    }
    Json rep;
    rep["pool_constant"] = res.pool_constant;
    Json sizes = Json::array();
    for (auto [n, d] : res.sizes) sizes.push_back(Json{{"n", n}, {"d", d}});
    rep["sizes"] = sizes;
    rep["worst_rate"] = res.worst_rate;
    rep["target"] = cfg.target;
    rep["trials_per_size"] = cfg.trials_per_size;
    qpm::report::write_file(resolve_out(a.out), rep.dump(2) + "\n");
    rep["wall_ms"] = wall_ms_since(t0);
    emit(rep, a.report);
    return 0;
}

// -------------------------------------------------------------- bench ----

struct BenchArgs {
    std::string suite = "match";  // match | baseline | sieve
    std::string n_list = "256,512,1024";
    std::string m_list;  // empty: fixed m below
    std::int64_t m = 64;
    int d = 1;
    std::uint64_t q = 2;
    double gamma = 0.25;
    std::int64_t nu = 0;
    int seeds = 10;
    std::uint64_t seed = 1;
    double pool_constant = 0.0;
    std::string calibration;
    int workers = 0;
    bool resume = false;
    std::string out = "bench.csv";
};

struct BenchRow {
    std::string csv;
};

int cmd_bench(const BenchArgs& a) {
    std::vector<std::int64_t> ns, ms;
    try {
        ns = parse_list(a.n_list);
        ms = a.m_list.empty() ? std::vector<std::int64_t>{} : parse_list(a.m_list);
    } catch (const std::exception& e) {
        fail(1, e.what());
    }
    if (a.suite != "match" && a.suite != "baseline" && a.suite != "sieve")
        fail(1, "unknown suite: " + a.suite);
    double pc = pool_constant_from(a.calibration, a.pool_constant);

    struct Point {
        std::int64_t n, m;
        std::uint64_t seed_index;
    };
    std::vector<Point> points;
    for (size_t i = 0; i < ns.size(); ++i) {
        std::int64_t m = ms.empty() ? a.m : ms[i < ms.size() ? i : ms.size() - 1];
        for (int s = 0; s < a.seeds; ++s) points.push_back({ns[i], m, static_cast<std::uint64_t>(s)});
    }

    const std::string out_path = resolve_out(a.out);
    const std::string header = qpm::report::csv_row(
        {"n", "m", "d", "q", "gamma", "nu", "seed", "verdict", "quantum_cost", "text_queries",
         "pattern_queries", "classical_work", "wall_ms"});
    size_t done = 0;
    if (a.resume && fs::exists(out_path)) {
        std::ifstream is(out_path);
        std::string line;
        while (std::getline(is, line))
            if (!line.empty()) ++done;
        if (done > 0) --done;  // header
    }
    if (done >= points.size()) return 0;

    int workers = a.workers > 0 ? a.workers : qpm::hardware_workers();
    std::vector<Point> todo(points.begin() + static_cast<std::ptrdiff_t>(done), points.end());
    auto rows = qpm::run_trials<BenchRow>(todo.size(), workers, [&](size_t idx) {
        const Point& p = todo[idx];
        auto t0 = Clock::now();
        std::uint64_t master = qpm::mix64(a.seed ^ (0x9e3779b97f4a7c15ULL * (p.seed_index + 1)) ^
                                          static_cast<std::uint64_t>(p.n * 1315423911 + p.m));
        std::string verdict;
        qpm::QueryLedger led;
        std::int64_t nu_used = a.nu;
        if (a.suite == "sieve") {
            auto inst = qpm::gen_hidden_shift(static_cast<int>(p.n), a.d, master);
            qpm::RecoverOptions opts;
            auto s = qpm::recover_shift_voted(inst.channel(), pc, qpm::Rng(master).fork(1), led, opts);
            verdict = (s && *s == inst.sealed_shift()) ? "recovered" : "failed";
            nu_used = 0;
        } else {
            qpm::GenSpec spec;
            spec.n = p.n;
            spec.m = p.m;
            spec.d = a.d;
            spec.q = a.q;
            spec.seed = master;
            spec.mode = qpm::GenMode::random_planted;
            auto inst = qpm::gen_random(spec);
            if (a.suite == "match") {
                qpm::MatchParams params;
                params.gamma = a.gamma;
                params.pool_constant = pc;
                params.nu = nu_used > 0 ? nu_used
                                        : std::max(qpm::m_injectivity_length(inst.text, p.m),
                                                   qpm::injectivity_length(inst.pattern));
                nu_used = params.nu;
                auto out = qpm::find_match(inst.text, inst.pattern, params, qpm::Rng(master).fork(2), led);
                verdict = out.verdict == qpm::Verdict::found ? "found" : "not_found";
            } else {
                auto out = qpm::classical_injective_match(inst.text, inst.pattern, a.gamma,
                                                          qpm::Rng(master).fork(3), led);
                verdict = out.verdict == qpm::Verdict::found ? "found" : "not_found";
                nu_used = 0;
            }
        }
        BenchRow row;
        row.csv = qpm::report::csv_row(
            {std::to_string(p.n), std::to_string(p.m), std::to_string(a.d), std::to_string(a.q),
             std::to_string(a.gamma), std::to_string(nu_used), std::to_string(p.seed_index),
             verdict, std::to_string(led.quantum_cost), std::to_string(led.text_queries),
             std::to_string(led.pattern_queries), std::to_string(led.classical_work),
             std::to_string(wall_ms_since(t0))});
        return row;
    });

    std::ofstream os(out_path, done > 0 ? std::ios::app : std::ios::out);
    if (!os) fail(1, "cannot open for writing: " + out_path);
    if (done == 0) os << header;
    for (auto& r : rows) os << r.csv;
    return 0;
}

// ------------------------------------------------------------- verify ----

struct VerifyArgs {
    std::string report;
    std::string text, pattern;
};

int cmd_verify(const VerifyArgs& a) {
    Json rep;
    qpm::GridString text, pattern;
    Json match_report;
    try {
        match_report = Json::parse(qpm::report::read_file(a.report));
        text = qpm::load_grid(a.text).grid;
        pattern = qpm::load_grid(a.pattern).grid;
    } catch (const std::exception& e) {
        fail(1, e.what());
    }
    auto oracle = qpm::brute_force_match(text, pattern);
    const auto& result = match_report.contains("result") ? match_report["result"] : match_report;
    std::string verdict = result.value("verdict", "");
    bool consistent = false;
    if (verdict == "found") {
        std::vector<std::int64_t> offset = result.value("offset", std::vector<std::int64_t>{});
        for (const auto& s : oracle.all_matches) {
            bool same = static_cast<size_t>(s.dims) == offset.size();
            for (int i = 0; i < s.dims && same; ++i) same = s[i] == offset[static_cast<size_t>(i)];
            consistent = consistent || same;
        }
    } else if (verdict == "not_found") {
        consistent = oracle.all_matches.empty();
    } else {
        fail(1, "report has no verdict field");
    }
    rep["verdict"] = verdict;
    rep["oracle_match_count"] = oracle.all_matches.size();
    rep["consistent"] = consistent;
    emit(rep, "");
    return consistent ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hidden-shift sieve pattern-matching laboratory"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    GenArgs g;
    auto* gen = app.add_subcommand("gen", "generate instance files");
    gen->add_option("--mode", g.mode, "planted|unplanted|adversarial|perm-d0|perm-d1");
    gen->add_option("--n", g.n);
    gen->add_option("--m", g.m);
    gen->add_option("--d", g.d);
    gen->add_option("--q", g.q);
    gen->add_option("--seed", g.seed);
    gen->add_option("--gamma", g.gamma, "adversarial mismatch fraction");
    gen->add_flag("--no-clean", g.no_clean, "adversarial: corrupt every block");
    gen->add_option("--noise", g.noise, "hidden-shift noise fraction");
    gen->add_option("--shift-n", g.shift_n, "generate a hidden-shift instance with this many bits");
    gen->add_option("--out", g.out, "output path prefix");
    gen->add_flag("--binary", g.binary, "write binary grid files");
    gen->add_option("--report", g.report, "write the command report to this file");

    SieveArgs s;
    auto* sieve = app.add_subcommand("sieve", "run the label-level sieve");
    sieve->add_option("--instance", s.instance, "hidden-shift instance file");
    sieve->add_option("--n", s.n);
    sieve->add_option("--d", s.d);
    sieve->add_option("--noise", s.noise);
    sieve->add_option("--instance-seed", s.instance_seed);
    sieve->add_option("--seed", s.seed);
    sieve->add_option("--pool-constant", s.pool_constant);
    sieve->add_option("--calibration", s.calibration, "calibration file with the pool constant");
    sieve->add_option("--k-target", s.k_target);
    sieve->add_flag("--recover", s.recover, "run full shift recovery");
    sieve->add_option("--votes", s.votes, "majority votes for recovery");
    sieve->add_flag("--test-mode", s.test_mode, "compare the recovered shift to the sealed one");
    sieve->add_flag("--random-a", s.random_a, "randomize the recursion offset");
    sieve->add_option("--stage-csv", s.stage_csv, "per-stage CSV output");
    sieve->add_option("--report", s.report);

    MatchArgs m;
    auto* match = app.add_subcommand("match", "run the offset search");
    match->add_option("--text", m.text)->required();
    match->add_option("--pattern", m.pattern)->required();
    match->add_option("--gamma", m.gamma);
    match->add_option("--nu", m.nu, "0 computes it from injectivity lengths");
    match->add_flag("--auto-nu", m.auto_nu, "doubling search over nu");
    match->add_option("--eps", m.eps);
    match->add_option("--budget", m.budget);
    match->add_option("--pool-constant", m.pool_constant);
    match->add_option("--calibration", m.calibration);
    match->add_option("--seed", m.seed);
    match->add_option("--confirm-reps", m.confirm_reps);
    match->add_flag("--full-verify", m.full_verify, "exhaustively recount before reporting found");
    match->add_flag("--baseline", m.baseline, "add classical and brute-force columns");
    match->add_option("--report", m.report);

    CalibrateArgs c;
    auto* calibrate = app.add_subcommand("calibrate", "bisect the pool constant");
    calibrate->add_option("--sizes", c.sizes, "top sizes, e.g. 16x1,8x2");
    calibrate->add_flag("--no-chain", c.no_chain, "probe only the listed sizes");
    calibrate->add_option("--trials", c.trials);
    calibrate->add_option("--target", c.target);
    calibrate->add_option("--seed", c.seed);
    calibrate->add_option("--workers", c.workers);
    calibrate->add_option("--out", c.out);
    calibrate->add_option("--report", c.report);

    BenchArgs b;
    auto* bench = app.add_subcommand("bench", "sweeps emitting one CSV row per trial");
    bench->add_option("--suite", b.suite, "match|baseline|sieve");
    bench->add_option("--n-list", b.n_list);
    bench->add_option("--m-list", b.m_list, "per-n pattern sides; default fixed --m");
    bench->add_option("--m", b.m);
    bench->add_option("--d", b.d);
    bench->add_option("--q", b.q);
    bench->add_option("--gamma", b.gamma);
    bench->add_option("--nu", b.nu);
    bench->add_option("--seeds", b.seeds, "trials per point");
    bench->add_option("--seed", b.seed, "master seed");
    bench->add_option("--pool-constant", b.pool_constant);
    bench->add_option("--calibration", b.calibration);
    bench->add_option("--workers", b.workers);
    bench->add_flag("--resume", b.resume, "continue an interrupted sweep");
    bench->add_option("--out", b.out);

    VerifyArgs v;
    auto* verify = app.add_subcommand("verify", "recount a match report with the brute-force oracle");
    verify->add_option("--report", v.report)->required();
    verify->add_option("--text", v.text)->required();
    verify->add_option("--pattern", v.pattern)->required();

    auto args = inject_config(argc, argv);
    std::vector<const char*> cargs{argv[0]};
    for (auto& x : args) cargs.push_back(x.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        Json err;
        err["error"] = e.what();
        err["code"] = 1;
        std::cerr << err.dump() << "\n";
        return 1;
    }

    try {
        if (gen->parsed()) return cmd_gen(g);
        if (sieve->parsed()) return cmd_sieve(s);
        if (match->parsed()) return cmd_match(m);
        if (calibrate->parsed()) return cmd_calibrate(c);
        if (bench->parsed()) return cmd_bench(b);
        if (verify->parsed()) return cmd_verify(v);
    } catch (const std::exception& e) {
        fail(2, e.what());
    }
    return 1;
}
