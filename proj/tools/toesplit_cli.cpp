// Command-line driver for verification, benchmarking, and model prediction.
// Talks to the library exclusively through the public C API; emits
// machine-readable CSV/JSON for external plotting (no interactive UI).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "toesplit.h"

namespace {

constexpr const char* kCsvHeader =
    "run_id,d,n,method,policy,symmetry,seed,rep,wall_ns,fft_fwd,fft_inv,mults,peak_elems,"
    "phase_mults,kernel_elems,precompute_ns,status";

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct Options {
    std::vector<int> dims{1, 2, 3};
    std::vector<std::int64_t> sizes{4, 8};
    std::uint64_t seed = 42;
    double variance = 1.0;
    int reps = 1;
    std::string policy = "lazy";
    int tasks = 4;
    std::string symmetry = "general";
    std::string format = "csv";
    std::string out;
    std::int64_t oracle_cap = 4096;
    std::string generator_file;
};

struct GeneratorHandle {
    ts_generator* ptr = nullptr;
    ~GeneratorHandle() { ts_generator_destroy(ptr); }
};

struct OperatorHandle {
    ts_operator* ptr = nullptr;
    ~OperatorHandle() { ts_operator_destroy(ptr); }
};

[[noreturn]] void die(ts_status status, const std::string& context)
{
    std::cerr << "error: " << context << ": " << ts_status_name(status) << " (" << ts_last_error()
              << ")\n";
    std::exit(status == TS_ERR_RESOURCE ? kExitResource : kExitVerifyFailure);
}

void check(ts_status status, const std::string& context)
{
    if (status != TS_OK)
        die(status, context);
}

ts_symmetry parse_symmetry(const std::string& name)
{
    if (name == "general")
        return TS_SYM_GENERAL;
    if (name == "symmetric")
        return TS_SYM_SYMMETRIC;
    if (name == "skew")
        return TS_SYM_SKEW;
    throw CLI::ValidationError("--symmetry must be general|symmetric|skew");
}

ts_policy make_policy(const Options& opt)
{
    ts_policy policy;
    policy.mode = opt.policy == "parallel" ? TS_POLICY_PARALLEL : TS_POLICY_LAZY;
    policy.task_budget = opt.tasks;
    return policy;
}

std::int64_t volume(const std::vector<std::int64_t>& levels)
{
    std::int64_t v = 1;
    for (auto n : levels)
        v *= n;
    return v;
}

// max_i |a_i - b_i| / max_i |b_i| over interleaved complex buffers.
double max_rel_error(const std::vector<double>& a, const std::vector<double>& b)
{
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); i += 2) {
        diff = std::max(diff, std::hypot(a[i] - b[i], a[i + 1] - b[i + 1]));
        scale = std::max(scale, std::hypot(b[i], b[i + 1]));
    }
    return scale == 0.0 ? diff : diff / scale;
}

double round2(double v)
{
    return std::round(v * 100.0) / 100.0;
}

std::string format2(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", round2(v));
    return buf;
}

struct BenchRow {
    std::uint64_t run_id = 0;
    int d = 0;
    std::int64_t n = 0;
    std::string method;
    std::string policy;
    std::string symmetry;
    std::uint64_t seed = 0;
    int rep = 0;
    ts_metrics metrics{};
    bool failed = false;

    std::string to_csv() const
    {
        std::ostringstream os;
        os << run_id << ',' << d << ',' << n << ',' << method << ',' << policy << ',' << symmetry
           << ',' << seed << ',' << rep << ',' << metrics.apply_ns << ',' << metrics.fft_forward
           << ',' << metrics.fft_inverse << ',' << metrics.diag_mults << ','
           << metrics.peak_live_elems << ',' << metrics.phase_mults << ',' << metrics.kernel_elems
           << ',' << metrics.precompute_ns << ',' << (failed ? "failed" : "ok");
        return os.str();
    }

    nlohmann::json to_json() const
    {
        return {{"run_id", run_id},
                {"d", d},
                {"n", n},
                {"method", method},
                {"policy", policy},
                {"symmetry", symmetry},
                {"seed", seed},
                {"rep", rep},
                {"wall_ns", metrics.apply_ns},
                {"fft_fwd", metrics.fft_forward},
                {"fft_inv", metrics.fft_inverse},
                {"mults", metrics.diag_mults},
                {"peak_elems", metrics.peak_live_elems},
                {"phase_mults", metrics.phase_mults},
                {"kernel_elems", metrics.kernel_elems},
                {"precompute_ns", metrics.precompute_ns},
                {"status", failed ? "failed" : "ok"}};
    }
};

struct Summary {
    int d = 0;
    std::int64_t n = 0;
    std::string method;
    double wall_min = 0.0, wall_median = 0.0, wall_mean = 0.0, wall_variance = 0.0;

    nlohmann::json to_json() const
    {
        return {{"d", d},         {"n", n},
                {"method", method}, {"wall_ns_min", wall_min},
                {"wall_ns_median", wall_median}, {"wall_ns_mean", wall_mean},
                {"wall_ns_variance", wall_variance}};
    }
};

Summary summarize(int d, std::int64_t n, const std::string& method, std::vector<double> walls)
{
    Summary s;
    s.d = d;
    s.n = n;
    s.method = method;
    if (walls.empty())
        return s;
    std::sort(walls.begin(), walls.end());
    s.wall_min = walls.front();
    const std::size_t mid = walls.size() / 2;
    s.wall_median = walls.size() % 2 ? walls[mid] : 0.5 * (walls[mid - 1] + walls[mid]);
    s.wall_mean = std::accumulate(walls.begin(), walls.end(), 0.0) / static_cast<double>(walls.size());
    if (walls.size() > 1) {
        double acc = 0.0;
        for (double w : walls)
            acc += (w - s.wall_mean) * (w - s.wall_mean);
        s.wall_variance = acc / static_cast<double>(walls.size() - 1);
    }
    return s;
}

std::ostream& open_output(const Options& opt, std::ofstream& file)
{
    if (opt.out.empty())
        return std::cout;
    file.open(opt.out);
    if (!file) {
        std::cerr << "error: cannot open output file " << opt.out << "\n";
        std::exit(kExitResource);
    }
    return file;
}

// Counter invariants that must hold on every split row (the model terms).
bool row_counters_consistent(const BenchRow& row, std::int64_t s)
{
    if (row.failed)
        return true;
    const std::uint64_t p = std::uint64_t{1} << row.d;
    if (row.method == "split") {
        const std::uint64_t expect_fft = 2 * p - 2;
        return row.metrics.fft_forward == expect_fft && row.metrics.fft_inverse == expect_fft &&
               row.metrics.diag_mults == p * static_cast<std::uint64_t>(s) &&
               row.metrics.phase_mults == 2 * (p - 1) * static_cast<std::uint64_t>(s) &&
               row.metrics.peak_live_elems <= static_cast<std::int64_t>(row.d + 1) * s;
    }
    return row.metrics.diag_mults == p * static_cast<std::uint64_t>(s) &&
           row.metrics.peak_live_elems >= static_cast<std::int64_t>(p) * s;
}

int run_verify(const Options& opt)
{
    const ts_policy policy = make_policy(opt);
    bool all_ok = true;
    nlohmann::json report = nlohmann::json::array();

    struct Case {
        int d;
        std::vector<std::int64_t> levels;
    };
    std::vector<Case> cases;
    if (!opt.generator_file.empty()) {
        cases.push_back({0, {}}); // placeholder; the fixture fixes the shape
    } else {
        for (int d : opt.dims)
            for (auto n : opt.sizes)
                cases.push_back({d, std::vector<std::int64_t>(static_cast<std::size_t>(d), n)});
    }

    for (const auto& c : cases)
        for (int rep = 0; rep < opt.reps; ++rep) {
            const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(rep);

            GeneratorHandle gen;
            std::vector<std::int64_t> levels = c.levels;
            if (!opt.generator_file.empty()) {
                const ts_status st = ts_generator_from_json_file(opt.generator_file.c_str(), &gen.ptr);
                if (st != TS_OK) {
                    std::cerr << "FAIL generator fixture " << opt.generator_file << ": "
                              << ts_status_name(st) << " (" << ts_last_error() << ")\n";
                    return st == TS_ERR_RESOURCE ? kExitResource : kExitVerifyFailure;
                }
                levels.assign(static_cast<std::size_t>(ts_generator_dims(gen.ptr)), 0);
                check(ts_generator_levels(gen.ptr, levels.data()), "query fixture levels");
            } else {
                const ts_status st = ts_generator_random(c.d, levels.data(), seed, opt.variance,
                                                         parse_symmetry(opt.symmetry), &gen.ptr);
                if (st != TS_OK) {
                    std::cerr << "FAIL instance d=" << c.d << ": " << ts_status_name(st) << " ("
                              << ts_last_error() << ")\n";
                    return st == TS_ERR_RESOURCE ? kExitResource : kExitVerifyFailure;
                }
            }

            const std::int64_t s = volume(levels);
            std::vector<double> v(static_cast<std::size_t>(2 * s));
            check(ts_random_vector(static_cast<int32_t>(levels.size()), levels.data(), seed,
                                   opt.variance, v.data()),
                  "draw input vector");

            OperatorHandle split_op, embed_op;
            check(ts_operator_create_split(gen.ptr, 0.0, 0.0, TS_STORAGE_AUTO, &split_op.ptr),
                  "precompute split operator");
            check(ts_operator_create_embed(gen.ptr, 0.0, 0.0, TS_STORAGE_AUTO, &embed_op.ptr),
                  "precompute embed operator");

            std::vector<double> y_split(v.size()), y_embed(v.size()), y_naive(v.size());
            check(ts_operator_apply(split_op.ptr, v.data(), y_split.data(), &policy, nullptr),
                  "split matvec");
            check(ts_operator_apply(embed_op.ptr, v.data(), y_embed.data(), nullptr, nullptr),
                  "embed matvec");

            bool have_naive = true;
            const ts_status naive_status =
                ts_naive_matvec(gen.ptr, v.data(), y_naive.data(), opt.oracle_cap);
            if (naive_status == TS_ERR_CAP_EXCEEDED) {
                std::cerr << "warning: oracle cap exceeded (s=" << s << "), instance checked "
                             "against embed only\n";
                have_naive = false;
            } else {
                check(naive_status, "dense oracle");
            }

            const double err_embed = max_rel_error(y_split, y_embed);
            const double err_naive = have_naive ? max_rel_error(y_split, y_naive) : 0.0;
            const bool ok = err_embed <= 1e-10 && (!have_naive || err_naive <= 1e-10);
            all_ok = all_ok && ok;

            std::ostringstream line;
            line << (ok ? "PASS" : "FAIL") << " d=" << levels.size() << " levels=[";
            for (std::size_t i = 0; i < levels.size(); ++i)
                line << (i ? "," : "") << levels[i];
            line << "] seed=" << seed << " symmetry=" << opt.symmetry;
            if (have_naive)
                line << " max_rel_err_naive=" << err_naive;
            line << " max_rel_err_embed=" << err_embed;
            std::cout << line.str() << "\n";

            report.push_back({{"d", levels.size()},
                              {"levels", levels},
                              {"seed", seed},
                              {"symmetry", opt.symmetry},
                              {"rel_err_naive", have_naive ? nlohmann::json(err_naive) : nlohmann::json()},
                              {"rel_err_embed", err_embed},
                              {"pass", ok}});
        }

    if (!opt.out.empty()) {
        std::ofstream file;
        std::ostream& os = open_output(opt, file);
        if (opt.format == "json")
            os << report.dump(2) << "\n";
        else
            for (const auto& r : report)
                os << r["d"] << ',' << r["seed"] << ',' << r["symmetry"].get<std::string>() << ','
                   << r["rel_err_embed"] << ',' << (r["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    }
    return all_ok ? kExitOk : kExitVerifyFailure;
}

int run_bench(const Options& opt)
{
    const ts_policy policy = make_policy(opt);
    const ts_symmetry symmetry = parse_symmetry(opt.symmetry);
    std::vector<BenchRow> rows;
    std::vector<Summary> summaries;
    nlohmann::json ratio_summaries = nlohmann::json::array();
    std::uint64_t run_id = 0;
    bool counters_ok = true;

    for (int d : opt.dims)
        for (auto n : opt.sizes) {
            std::vector<std::int64_t> levels(static_cast<std::size_t>(d), n);
            const std::int64_t s = volume(levels);

            GeneratorHandle gen;
            ts_status st = ts_generator_random(d, levels.data(), opt.seed, opt.variance, symmetry,
                                               &gen.ptr);
            if (st != TS_OK)
                die(st, "draw benchmark generator");

            std::vector<double> v(static_cast<std::size_t>(2 * s));
            check(ts_random_vector(d, levels.data(), opt.seed, opt.variance, v.data()),
                  "draw benchmark vector");
            std::vector<double> y(v.size());

            struct MethodRun {
                const char* name;
                OperatorHandle op;
                ts_status create_status = TS_OK;
                std::vector<double> walls;
            };
            MethodRun methods[2];
            methods[0].name = "split";
            methods[0].create_status =
                ts_operator_create_split(gen.ptr, 0.0, 0.0, TS_STORAGE_AUTO, &methods[0].op.ptr);
            methods[1].name = "embed";
            methods[1].create_status =
                ts_operator_create_embed(gen.ptr, 0.0, 0.0, TS_STORAGE_AUTO, &methods[1].op.ptr);

            for (auto& m : methods) {
                const bool is_split = std::string(m.name) == "split";
                const ts_policy* applied_policy = is_split ? &policy : nullptr;

                if (m.create_status == TS_OK) // untimed warmup; plans get cached
                    ts_operator_apply(m.op.ptr, v.data(), y.data(), applied_policy, nullptr);

                for (int rep = 0; rep < opt.reps; ++rep) {
                    BenchRow row;
                    row.run_id = run_id++;
                    row.d = d;
                    row.n = n;
                    row.method = m.name;
                    row.policy = is_split ? opt.policy : "-";
                    row.symmetry = opt.symmetry;
                    row.seed = opt.seed;
                    row.rep = rep;

                    if (m.create_status != TS_OK) {
                        row.failed = true;
                        std::cerr << "warning: " << m.name << " d=" << d << " n=" << n
                                  << " failed: " << ts_status_name(m.create_status) << "\n";
                        rows.push_back(row);
                        continue;
                    }
                    st = ts_operator_apply(m.op.ptr, v.data(), y.data(), applied_policy, &row.metrics);
                    if (st != TS_OK) {
                        row.failed = true;
                        std::cerr << "warning: " << m.name << " apply d=" << d << " n=" << n
                                  << " failed: " << ts_status_name(st) << "\n";
                    } else {
                        m.walls.push_back(static_cast<double>(row.metrics.apply_ns));
                        counters_ok = counters_ok && row_counters_consistent(row, s);
                    }
                    rows.push_back(row);
                }
                summaries.push_back(summarize(d, n, m.name, m.walls));
            }

            if (!methods[0].walls.empty() && !methods[1].walls.empty()) {
                const Summary& ss = summaries[summaries.size() - 2];
                const Summary& se = summaries[summaries.size() - 1];
                const double ratio = ss.wall_median > 0.0 ? se.wall_median / ss.wall_median : 0.0;
                std::cerr << "bench d=" << d << " n=" << n << " median embed/split time ratio = "
                          << ratio << "\n";
                ratio_summaries.push_back(
                    {{"d", d}, {"n", n}, {"wall_ratio_embed_over_split", ratio}});
            }
        }

    std::ofstream file;
    std::ostream& os = open_output(opt, file);
    if (opt.format == "json") {
        nlohmann::json doc;
        doc["rows"] = nlohmann::json::array();
        for (const auto& r : rows)
            doc["rows"].push_back(r.to_json());
        doc["summaries"] = nlohmann::json::array();
        for (const auto& s : summaries)
            doc["summaries"].push_back(s.to_json());
        doc["ratios"] = ratio_summaries;
        os << doc.dump(2) << "\n";
    } else {
        os << kCsvHeader << "\n";
        for (const auto& r : rows)
            os << r.to_csv() << "\n";
        if (!opt.out.empty()) {
            std::ofstream sf(opt.out + ".summary.csv");
            sf << "d,n,method,wall_ns_min,wall_ns_median,wall_ns_mean,wall_ns_variance\n";
            for (const auto& s : summaries)
                sf << s.d << ',' << s.n << ',' << s.method << ',' << s.wall_min << ','
                   << s.wall_median << ',' << s.wall_mean << ',' << s.wall_variance << "\n";
        }
    }

    if (!counters_ok) {
        std::cerr << "error: instrumented counters violated the model terms on some row\n";
        return kExitVerifyFailure;
    }
    return kExitOk;
}

int run_predict(const Options& opt, const std::string& preset)
{
    if (preset == "table1") {
        std::ostringstream rc, rm, rmsym;
        rc << "R_c:";
        rm << "R_m:";
        rmsym << "R_m,sym:";
        std::cout << "d: 2 3 4 5 6\n";
        for (int d = 2; d <= 6; ++d) {
            ts_complexity c;
            check(ts_predict(d, 1024.0, &c), "predict");
            rc << ' ' << format2(c.r_c_asymptote);
            rm << ' ' << format2(c.r_m);
            rmsym << ' ' << format2(c.r_m_sym);
        }
        std::cout << rc.str() << "\n" << rm.str() << "\n" << rmsym.str() << "\n";
        return kExitOk;
    }
    if (!preset.empty())
        throw CLI::ValidationError("unknown predict preset: " + preset);

    std::ofstream file;
    std::ostream& os = open_output(opt, file);
    nlohmann::json doc = nlohmann::json::array();
    if (opt.format != "json")
        os << "d,n,s,c_embed,c_split,r_c,r_c_asymptote,r_m,r_m_sym\n";
    for (int d : opt.dims)
        for (auto n : opt.sizes) {
            ts_complexity c;
            const ts_status st = ts_predict(d, static_cast<double>(n), &c);
            if (st != TS_OK)
                die(st, "predict");
            if (opt.format == "json")
                doc.push_back({{"d", c.d},
                               {"n", c.n},
                               {"s", c.s},
                               {"c_embed", c.c_embed},
                               {"c_split", c.c_split},
                               {"r_c", c.r_c},
                               {"r_c_asymptote", c.r_c_asymptote},
                               {"r_m", c.r_m},
                               {"r_m_sym", c.r_m_sym}});
            else
                os << c.d << ',' << c.n << ',' << c.s << ',' << c.c_embed << ',' << c.c_split
                   << ',' << c.r_c << ',' << c.r_c_asymptote << ',' << c.r_m << ',' << c.r_m_sym
                   << "\n";
        }
    if (opt.format == "json")
        os << doc.dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    Options opt;
    std::string predict_preset;

    CLI::App app{"block Toeplitz matvec: split-FFT engine, embedding baseline, model predictions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ts_version()));

    auto add_common = [&](CLI::App* cmd, bool with_oracle) {
        cmd->add_option("--dims", opt.dims, "level counts d to run")->delimiter(',');
        cmd->add_option("--sizes", opt.sizes, "per-level sizes n (uniform per instance)")
            ->delimiter(',');
        cmd->add_option("--seed", opt.seed, "base RNG seed");
        cmd->add_option("--variance", opt.variance, "coefficient variance (0 gives the degenerate zero instance)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--reps", opt.reps, "repetitions per case (>= 1)")
            ->check(CLI::Range(1, 1 << 20));
        cmd->add_option("--policy", opt.policy, "split execution policy")
            ->check(CLI::IsMember({"lazy", "parallel"}));
        cmd->add_option("--tasks", opt.tasks, "task budget for parallel policy")
            ->check(CLI::Range(1, 1 << 16));
        cmd->add_option("--symmetry", opt.symmetry, "generator symmetry mode")
            ->check(CLI::IsMember({"general", "symmetric", "skew"}));
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", opt.out, "output path (default stdout)");
        if (with_oracle)
            cmd->add_option("--oracle-cap", opt.oracle_cap, "dense oracle size cap");
    };

    CLI::App* verify = app.add_subcommand("verify", "check split vs embed vs dense oracle");
    add_common(verify, true);
    verify->add_option("--generator", opt.generator_file,
                       "verify a JSON generator fixture instead of random instances");

    CLI::App* bench = app.add_subcommand("bench", "timed split vs embed comparison rows");
    add_common(bench, false);

    CLI::App* predict = app.add_subcommand("predict", "closed-form cost/memory model");
    add_common(predict, false);
    predict->add_option("preset", predict_preset, "named preset (table1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    for (auto n : opt.sizes)
        if (n < 2) {
            std::cerr << "error: all sizes must be >= 2\n";
            return kExitUsage;
        }
    for (auto d : opt.dims)
        if (d < 1) {
            std::cerr << "error: all dims must be >= 1\n";
            return kExitUsage;
        }

    try {
        if (*verify)
            return run_verify(opt);
        if (*bench)
            return run_bench(opt);
        return run_predict(opt, predict_preset);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerifyFailure;
    }
}
