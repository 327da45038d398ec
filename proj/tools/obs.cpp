// obs: command-line front end.
//
// Exit codes: 0 success / proved, 1 not proved, 2 invalid input,
// 3 verification failure, 4 budget exceeded.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "obs/cache.hpp"
#include "obs/certificate.hpp"
#include "obs/error.hpp"
#include "obs/game_tree.hpp"
#include "obs/m2_search.hpp"
#include "obs/seqform.hpp"
#include "obs/solver.hpp"
#include "obs/verify.hpp"

namespace {

using namespace obs;

enum Exit { kOk = 0, kNotProved = 1, kInvalid = 2, kVerifyFailed = 3, kBudget = 4 };

struct RunConfig {
    std::string command;
    int m = 2;
    int g = 1;
    std::string p;
    std::string target;
    int n = 12;
    bool no_merge = false;
    bool all_instances = false;
    std::uint64_t budget = 0;  // 0 = module default
    int threads = 0;           // 0 = OBS_THREADS or 1
    std::string cache_dir;
    std::string cert;
    std::string lp_dump;
    std::string dot;
    std::string input;  // verify
    bool no_transposition = false;
    bool no_symmetry = false;
    bool no_partial_info = false;
};

Rational positive_rational(const std::string& text, const char* flag) {
    Rational r;
    try {
        r = Rational::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string(flag) + ": " + e.what());
    }
    if (r.sign() <= 0) throw InputError(std::string(flag) + " must be positive");
    return r;
}

void print_value(const char* label, const Rational& v) {
    std::cout << label << " " << v.to_string() << "  (~" << v.to_decimal(6) << ")\n";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

m2::SearchOptions search_options(const RunConfig& c) {
    m2::SearchOptions o;
    o.transposition = !c.no_transposition;
    o.symmetry = !c.no_symmetry;
    o.partial_info = !c.no_partial_info;
    o.threads = c.threads;
    if (c.budget) o.node_budget = c.budget;
    return o;
}

std::string config_key(const RunConfig& c, const std::string& extra = {}) {
    std::ostringstream k;
    k << c.command << " v" << kCertificateVersion << " m=" << c.m << " g=" << c.g;
    if (!extra.empty()) k << " " << extra;
    return k.str();
}

int cmd_lb_det(const RunConfig& c, const ResultCache& cache) {
    const std::string key = config_key(c, "merge=" + std::to_string(!c.no_merge));
    if (c.dot.empty())
        if (auto hit = cache.get(key)) {
            print_value("lb-det", Rational::parse(*hit));
            return kOk;
        }
    GameTree tree = build_tree(c.m, c.g, !c.no_merge, c.budget ? c.budget : 50'000'000);
    Rational v = minmax_det(tree);
    cache.put(key, v.to_fraction());
    if (!c.dot.empty()) write_file(c.dot, export_dot(tree));
    print_value("lb-det", v);
    std::cout << "tree nodes " << tree.size() << "\n";
    return kOk;
}

int cmd_lb_rand(const RunConfig& c, const ResultCache& cache) {
    const std::string key = config_key(c, "merge=" + std::to_string(!c.no_merge) + " all=" + std::to_string(c.all_instances));
    const bool plain = c.dot.empty() && c.lp_dump.empty();
    std::string cert_text;
    if (plain)
        if (auto hit = cache.get(key)) cert_text = *hit;
    if (cert_text.empty()) {
        LbRandOptions o;
        o.merge = !c.no_merge;
        o.all_instances = c.all_instances;
        if (c.budget) o.node_budget = c.budget;
        LbRandResult r = lb_rand(c.m, c.g, o);
        std::cout << "program: " << r.variables << " move variables, " << r.rows << " information sets, " << r.columns
                  << " instance columns, " << r.pivots << " pivots\n";
        cert_text = emit_certificate(LowerBoundCertificate{c.m, c.g, r.value, r.adversary});
        cache.put(key, cert_text);
        if (!c.lp_dump.empty()) {
            GameTree tree = build_tree(c.m, c.g, o.merge, o.node_budget);
            write_file(c.lp_dump, dump_lp_json(build_lp(tree, BuildOptions{c.all_instances})));
        }
        if (!c.dot.empty()) {
            GameTree tree = build_tree(c.m, c.g, o.merge, o.node_budget);
            write_file(c.dot, export_dot(tree, strategy_annotations(tree, r.algorithm)));
        }
    }
    const auto cert = std::get<LowerBoundCertificate>(load_certificate(cert_text));
    print_value("lb-rand", cert.value);
    std::cout << "adversary support " << cert.adversary.support.size() << " instances\n";
    if (!c.cert.empty()) write_file(c.cert, cert_text);
    return kOk;
}

int cmd_ub_m2(const RunConfig& c, const ResultCache& cache) {
    if (c.p.empty()) throw InputError("--p is required");
    Rational p = positive_rational(c.p, "--p");
    auto opts = search_options(c);
    Rational target;
    if (c.target.empty()) {
        const std::string key = config_key(c, "p=" + p.to_fraction() + " best");
        if (auto hit = cache.get(key)) {
            target = Rational::parse(*hit);
        } else {
            target = m2::best_guarantee(c.m, c.g, p, opts);
            cache.put(key, target.to_fraction());
        }
        print_value("best guarantee", target);
        if (c.cert.empty()) return kOk;
    } else {
        target = positive_rational(c.target, "--target");
    }
    m2::SearchStats stats;
    auto cert = m2::search_pair(c.m, c.g, p, target, opts, &stats);
    if (!cert) {
        std::cout << "no strategy pair keeps every instance at or below " << target.to_string() << " (searched "
                  << stats.nodes << " states)\n";
        return kNotProved;
    }
    print_value("guarantee", target);
    std::cout << "strategy pair found: " << cert->table.size() << " table entries, " << stats.nodes << " states searched\n";
    if (!c.cert.empty()) write_file(c.cert, emit_certificate(*cert));
    return kOk;
}

int cmd_lb_m2(const RunConfig& c, const ResultCache& cache) {
    if (c.target.empty()) throw InputError("--target is required");
    Rational target = positive_rational(c.target, "--target");
    auto opts = search_options(c);
    if (!c.p.empty()) {
        Rational p = positive_rational(c.p, "--p");
        auto r = m2::minmax_threshold(c.m, c.g, p, target, opts);
        std::cout << (r.proved ? "proved" : "not proved") << ": every strategy pair at p = " << p.to_string()
                  << " admits an instance scoring >= " << target.to_string() << " (" << r.stats.nodes << " states)\n";
        return r.proved ? kOk : kNotProved;
    }
    m2::SweepHooks hooks;
    const Rational threshold = target + Rational(c.m, 4L * c.n);
    auto point_key = [&](const Rational& p) {
        return config_key(c, "point p=" + p.to_fraction() + " threshold=" + threshold.to_fraction());
    };
    if (cache.enabled()) {
        hooks.load = [&](std::size_t, const Rational& p) -> std::optional<m2::ThresholdResult> {
            auto hit = cache.get(point_key(p));
            if (!hit) return std::nullopt;
            m2::ThresholdResult r;
            if (*hit == "not-proved\n") return r;
            auto one = std::get<m2::SweepCertificate>(load_certificate(*hit));
            r.proved = true;
            r.proof = std::move(one.entries.at(0).proof);
            return r;
        };
        hooks.store = [&](std::size_t, const Rational& p, const m2::ThresholdResult& r) {
            if (!r.proved) {
                cache.put(point_key(p), "not-proved\n");
                return;
            }
            m2::SweepCertificate one{c.m, c.g, c.n, target, {m2::SweepEntry{p, threshold, *r.proof}}};
            cache.put(point_key(p), emit_certificate(one));
        };
    }
    auto res = m2::sweep(c.m, c.g, c.n, target, opts, &hooks);
    auto grid = m2::sweep_grid(c.n);
    if (!res.proved) {
        std::cout << "not proved: grid point " << res.failed_index << " (p = " << grid[static_cast<std::size_t>(res.failed_index)].to_string()
                  << ") has a strategy pair holding every instance below " << threshold.to_string() << "\n";
        return kNotProved;
    }
    print_value("proved lower bound", target);
    std::cout << "N = " << c.n << ", per-point threshold " << threshold.to_string() << ", proof nodes";
    for (const auto& e : res.certificate->entries) std::cout << " " << e.proof.nodes.size();
    std::cout << "\n";
    if (!c.cert.empty()) write_file(c.cert, emit_certificate(*res.certificate));
    return kOk;
}

int cmd_instances(const RunConfig& c) {
    auto list = enumerate_instances(c.m, c.g, !c.all_instances);
    std::cout << "# item sizes in units of 1/" << c.g << (c.all_instances ? "" : ", maximal instances only") << "\n";
    for (const auto& inst : list) {
        for (std::size_t i = 0; i < inst.items.size(); ++i) std::cout << (i ? " " : "") << inst.items[i];
        std::cout << "\n";
    }
    std::cout << "# " << list.size() << " instances\n";
    return kOk;
}

int cmd_verify(const RunConfig& c) {
    std::string text = read_file(c.input);
    VerifyReport r = verify_certificate_text(text);
    for (const auto& check : r.checks) std::cout << "  ok: " << check << "\n";
    if (!r.ok) {
        std::cout << "REJECTED: " << r.reason << "\n";
        return kVerifyFailed;
    }
    std::cout << "ACCEPTED\n";
    return kOk;
}

int cmd_export_dot(const RunConfig& c) {
    GameTree tree = build_tree(c.m, c.g, !c.no_merge, c.budget ? c.budget : 50'000'000);
    std::string dot = export_dot(tree);
    if (c.dot.empty())
        std::cout << dot;
    else
        write_file(c.dot, dot);
    return kOk;
}

int run(RunConfig c) {
    if (c.threads <= 0) {
        const char* env = std::getenv("OBS_THREADS");
        c.threads = env ? std::atoi(env) : 1;
        if (c.threads <= 0) throw InputError("OBS_THREADS must be a positive integer");
    }
    if (c.cache_dir.empty())
        if (const char* env = std::getenv("OBS_CACHE_DIR")) c.cache_dir = env;
    if (c.command != "verify") check_dimensions(c.m, c.g);
    ResultCache cache(c.cache_dir);
    if (c.command == "lb-det") return cmd_lb_det(c, cache);
    if (c.command == "lb-rand") return cmd_lb_rand(c, cache);
    if (c.command == "ub-m2") return cmd_ub_m2(c, cache);
    if (c.command == "lb-m2") return cmd_lb_m2(c, cache);
    if (c.command == "instances") return cmd_instances(c);
    if (c.command == "verify") return cmd_verify(c);
    if (c.command == "export-dot") return cmd_export_dot(c);
    throw InputError("unknown command " + c.command);
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Exact computer search for online bin stretching bounds.\n"
                 "Exit codes: 0 success, 1 not proved, 2 invalid input, 3 verification failure, 4 budget exceeded."};
    app.require_subcommand(1);
    app.set_config("--config", "", "read the command and its options from a TOML file (see recipes/)");
    app.set_version_flag("--version", "obs " + std::to_string(kCertificateVersion));

    auto dims = [&cfg](CLI::App* sub) {
        sub->add_option("--m", cfg.m, "number of bins")->check(CLI::PositiveNumber);
        sub->add_option("--g", cfg.g, "granularity: item sizes are multiples of 1/g")->check(CLI::PositiveNumber);
        sub->add_option("--budget", cfg.budget, "node budget (game tree nodes or search states)");
        sub->add_option("--threads", cfg.threads, "worker threads (default: OBS_THREADS or 1)")->check(CLI::PositiveNumber);
        sub->add_option("--cache-dir", cfg.cache_dir, "result cache directory (default: OBS_CACHE_DIR, none)");
    };
    auto search_flags = [&cfg](CLI::App* sub) {
        sub->add_flag("--no-transposition", cfg.no_transposition, "disable the transposition table");
        sub->add_flag("--no-symmetry", cfg.no_symmetry, "disable pair symmetry reduction at p = 1/2");
        sub->add_flag("--no-partial-info", cfg.no_partial_info, "disable load-only pruning");
    };

    auto* lb_det = app.add_subcommand("lb-det", "deterministic lower bound (min-max value of the game tree)");
    dims(lb_det);
    lb_det->add_flag("--no-merge", cfg.no_merge, "do not merge equivalent states");
    lb_det->add_option("--dot", cfg.dot, "write the game tree as DOT");

    auto* lb_rand = app.add_subcommand("lb-rand", "randomized lower bound via the sequence-form LP");
    dims(lb_rand);
    lb_rand->add_flag("--no-merge", cfg.no_merge, "do not merge equivalent states");
    lb_rand->add_flag("--all-instances", cfg.all_instances, "use every instance as an LP column, not only maximal ones");
    lb_rand->add_option("--cert", cfg.cert, "write a randomized-lower-bound certificate");
    lb_rand->add_option("--lp-dump", cfg.lp_dump, "write the LP matrices as JSON");
    lb_rand->add_option("--dot", cfg.dot, "write the game tree with strategy probabilities as DOT");

    auto* ub = app.add_subcommand("ub-m2", "search a pair of deterministic algorithms mixed with weight p");
    dims(ub);
    search_flags(ub);
    ub->add_option("--p", cfg.p, "mixing weight a/b in (0,1)")->required();
    ub->add_option("--target", cfg.target, "guarantee to certify a/b (default: report the best guarantee)");
    ub->add_option("--cert", cfg.cert, "write a strategy-pair certificate");

    auto* lb = app.add_subcommand("lb-m2", "prove a lower bound for all two-algorithm mixtures");
    dims(lb);
    search_flags(lb);
    lb->add_option("--target", cfg.target, "bound t to prove, a/b")->required();
    lb->add_option("--N", cfg.n, "number of grid points on (0, 1/2]")->check(CLI::PositiveNumber);
    lb->add_option("--p", cfg.p, "check a single mixing weight instead of the sweep");
    lb->add_option("--cert", cfg.cert, "write a sweep certificate");

    auto* inst = app.add_subcommand("instances", "list the instances of the discretized game");
    dims(inst);
    inst->add_flag("--all-instances", cfg.all_instances, "include non-maximal instances");

    auto* ver = app.add_subcommand("verify", "check a certificate file");
    ver->add_option("certificate", cfg.input, "certificate path")->required();

    auto* dot = app.add_subcommand("export-dot", "write the game tree as DOT");
    dims(dot);
    dot->add_flag("--no-merge", cfg.no_merge, "do not merge equivalent states");
    dot->add_option("--dot", cfg.dot, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        return run(cfg);
    } catch (const InputError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const CertificateError& e) {
        std::cerr << "certificate error: " << e.what() << "\n";
        return kVerifyFailed;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
}
