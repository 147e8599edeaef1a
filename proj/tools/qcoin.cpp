// Command-line workbench: solve / sweep / bounds / check / classical /
// calibrate. Exit codes: 0 ok, 2 usage, 3 domain, 4 resource cap. Output is
// fully buffered and emitted once, so a failing run never prints a partial
// table; bytes are independent of the worker-thread count.

#include "qcoin/bounds.hpp"
#include "qcoin/classical.hpp"
#include "qcoin/json_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

using namespace qcoin;

namespace {

uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// deterministic weight-k configuration for (n, k, seed); shared by solve and
// sweep so a single-point sweep reproduces cmd_solve exactly
coin_config pick_config(int n, int k, uint64_t seed) {
    std::mt19937_64 eng(mix64(seed) ^ mix64(((uint64_t)n << 20) | (uint64_t)k));
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + (int)(eng() % (uint64_t)(n - i))]);
    std::vector<uint8_t> bits(n, 0);
    for (int i = 0; i < k; ++i) bits[idx[i]] = 1;
    return coin_config{n, bits};
}

coin_config parse_bits(const std::string& flag, const std::string& s, int n) {
    if ((int)s.size() != n)
        throw std::invalid_argument(flag + ": bit string must have length n");
    for (char ch : s)
        if (ch != '0' && ch != '1')
            throw std::invalid_argument(flag + ": bit string may contain only 0 and 1");
    return coin_config::from_string(s);
}

void require_cfg(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// comma-separated integers; blank tokens dropped, a blank list rejected
std::vector<int> parse_klist(const std::vector<std::string>& raw) {
    std::vector<int> ks;
    for (const auto& tok : raw) {
        if (tok.empty()) continue;
        size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &pos);
        } catch (...) {
            pos = 0;
        }
        require_cfg(pos == tok.size(), "k-list: entries must be integers");
        ks.push_back(v);
    }
    require_cfg(!ks.empty(), "k-list: must be non-empty");
    return ks;
}

enum class engine { star, exact, quasi, k1 };

engine pick_engine(bool f_star, bool f_exact, bool f_quasi, bool f_k1) {
    const int chosen = (int)f_star + (int)f_exact + (int)f_quasi + (int)f_k1;
    require_cfg(chosen <= 1, "engine: choose at most one of --star/--exact/--quasi/--k1");
    if (f_exact) return engine::exact;
    if (f_quasi) return engine::quasi;
    if (f_k1) return engine::k1;
    return engine::star;
}

solve_report run_engine(engine e, int n, int k, const coin_config& x, solve_mode mode,
                        rng64& rng, query_ledger& led) {
    switch (e) {
    case engine::k1: {
        require_cfg(k == 1, "k: --k1 requires k = 1");
        b_oracle oracle(x, led);
        return solve_k1(n, oracle, rng);
    }
    case engine::exact: {
        b_oracle oracle(x, led);
        return find_exact(n, k, oracle, mode, rng);
    }
    case engine::quasi: {
        q_oracle oracle(x, led);
        return quasi_solve(n, k, oracle, mode, rng);
    }
    default: {
        b_oracle oracle(x, led);
        return find_star(n, k, oracle, mode, rng);
    }
    }
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("out: cannot open " + out_path);
    f << payload;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterfeit-coin workbench: balance-oracle solvers and lower-bound tables"};
    app.require_subcommand(1);

    int n = 0, k = 0, c_div = 0, l_par = -1, d_par = -1;
    uint64_t seed = 0;
    long trials = 1;
    std::string xs, ys, mode_s = "full", scheme, format, out_path;
    std::vector<std::string> klist_raw;
    bool f_star = false, f_exact = false, f_quasi = false, f_k1 = false, f_simple = false;

    const auto add_common = [&](CLI::App* cmd, const char* fmt_default) {
        format = fmt_default;
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({std::string(fmt_default)}));
        cmd->add_option("--out", out_path, "write output to this path instead of stdout");
    };
    const auto add_engines = [&](CLI::App* cmd, bool with_k1) {
        cmd->add_flag("--star", f_star, "bounded-error search (default)");
        cmd->add_flag("--exact", f_exact, "exact amplification on top of the search");
        cmd->add_flag("--quasi", f_quasi, "rotation-oracle search");
        if (with_k1) cmd->add_flag("--k1", f_k1, "single-weighing pipeline (k = 1 only)");
    };

    auto* cmd_solve = app.add_subcommand("solve", "run one solver instance");
    cmd_solve->add_option("--n", n, "coin count")->required();
    cmd_solve->add_option("--k", k, "false-coin count")->required();
    cmd_solve->add_option("--x", xs, "hidden configuration (default: drawn from seed)");
    cmd_solve->add_option("--mode", mode_s, "engine mode")->check(CLI::IsMember({"full", "class"}));
    cmd_solve->add_option("--seed", seed, "measurement and configuration seed");
    cmd_solve->add_option("--trials", trials, "repetitions; success requires all to succeed")
        ->check(CLI::PositiveNumber);
    add_engines(cmd_solve, true);
    add_common(cmd_solve, "json");

    auto* cmd_sweep = app.add_subcommand("sweep", "query-count table over a k grid");
    cmd_sweep->add_option("--k-list", klist_raw, "comma-separated k values")
        ->required()
        ->delimiter(',');
    auto* sweep_n = cmd_sweep->add_option("--n", n, "coin count (default per row: 4k+1)");
    std::string sweep_mode = "class";
    cmd_sweep->add_option("--mode", sweep_mode, "engine mode")
        ->check(CLI::IsMember({"full", "class"}));
    cmd_sweep->add_option("--seed", seed, "measurement and configuration seed");
    add_engines(cmd_sweep, false);
    add_common(cmd_sweep, "csv");

    auto* cmd_bounds = app.add_subcommand("bounds", "lower-bound evaluations");
    cmd_bounds->require_subcommand(1);
    auto* cmd_gamma = cmd_bounds->add_subcommand("gamma", "balanced-configuration count");
    cmd_gamma->add_option("--n", n, "coin count")->required();
    cmd_gamma->add_option("--k", k, "false-coin count")->required();
    cmd_gamma->add_option("--c", c_div, "pan divisor (pans of size n/c)")->required();
    add_common(cmd_gamma, "csv");
    auto* cmd_adv = cmd_bounds->add_subcommand("adversary", "weight-scheme bound");
    cmd_adv->add_option("--scheme", scheme, "weight scheme preset")
        ->required()
        ->check(CLI::IsMember({"bigpan", "smallpan", "quasi"}));
    cmd_adv->add_option("--n", n, "coin count")->required();
    cmd_adv->add_option("--k", k, "false-coin count")->required();
    cmd_adv->add_option("--l", l_par, "pan or mask size (smallpan, quasi)");
    cmd_adv->add_option("--d", d_par, "pan divisor (bigpan)");
    add_common(cmd_adv, "csv");

    auto* cmd_check = app.add_subcommand("check", "verify a candidate configuration");
    cmd_check->add_option("--n", n, "coin count")->required();
    cmd_check->add_option("--x", xs, "hidden configuration")->required();
    cmd_check->add_option("--y", ys, "candidate configuration")->required();
    cmd_check->add_flag("--simple", f_simple, "force the small-pan verifier");
    cmd_check->add_option("--seed", seed, "recorded in the report");
    add_common(cmd_check, "json");

    auto* cmd_classical = app.add_subcommand("classical", "deterministic weighing strategy");
    cmd_classical->add_option("--n", n, "coin count")->required();
    cmd_classical->add_option("--k", k, "false-coin count")->required();
    cmd_classical->add_option("--x", xs, "hidden configuration (default: drawn from seed)");
    cmd_classical->add_option("--seed", seed, "configuration seed");
    add_common(cmd_classical, "json");

    auto* cmd_cal = app.add_subcommand("calibrate", "emit the search-schedule table");
    cmd_cal->add_option("--k-list", klist_raw, "comma-separated k values")
        ->required()
        ->delimiter(',');
    add_common(cmd_cal, "json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::string payload;
        if (*cmd_solve) {
            require_cfg(n >= 1, "n: must be at least 1");
            require_cfg(k >= 0 && k <= n, "k: must lie in [0, n]");
            const engine e = pick_engine(f_star, f_exact, f_quasi, f_k1);
            const solve_mode mode = mode_s == "class" ? solve_mode::classes : solve_mode::full;
            const coin_config x = xs.empty() ? pick_config(n, k, seed) : parse_bits("x", xs, n);
            require_cfg(x.weight() == k, "x: weight must equal k");
            rng64 rng(seed);
            query_ledger led;
            solve_report rep;
            bool all_ok = true;
            for (long t = 0; t < trials; ++t) {
                rep = run_engine(e, n, k, x, mode, rng, led);
                all_ok = all_ok && rep.success;
            }
            rep.success = all_ok;
            rep.ledger = led;
            payload = report_json(rep, x, seed).dump(2) + "\n";
        } else if (*cmd_sweep) {
            const std::vector<int> klist = parse_klist(klist_raw);
            const engine e = pick_engine(f_star, f_exact, f_quasi, false);
            const solve_mode mode = sweep_mode == "class" ? solve_mode::classes : solve_mode::full;
            payload = "n,k,success_probability,queries,queries/k^0.25\n";
            for (int kk : klist) {
                const int nn = sweep_n->count() ? n : 4 * kk + 1;
                require_cfg(kk >= 0 && kk <= nn, "k-list: entries must lie in [0, n]");
                const coin_config x = pick_config(nn, kk, seed);
                rng64 rng(seed);
                query_ledger led;
                const solve_report rep = run_engine(e, nn, kk, x, mode, rng, led);
                const long queries = led.balance + led.quasi;
                payload += std::to_string(nn) + "," + std::to_string(kk) + "," +
                           fmt12(rep.success_probability) + "," + std::to_string(queries) +
                           "," + fmt12((double)queries / std::pow((double)kk, 0.25)) + "\n";
            }
        } else if (*cmd_gamma) {
            require_cfg(n >= 1, "n: must be at least 1");
            require_cfg(c_div >= 2, "c: must be at least 2");
            require_cfg(n % c_div == 0, "c: must divide n");
            const bigint g = gamma_balanced(n, k, c_div);
            const bigint bc = binomial_exact(n, k);
            const double ratio = bigrat(g, bc).convert_to<double>();
            payload = "n,k,c,gamma,binom,ratio\n" + std::to_string(n) + "," +
                      std::to_string(k) + "," + std::to_string(c_div) + "," + g.str() + "," +
                      bc.str() + "," + fmt12(ratio) + "\n";
        } else if (*cmd_adv) {
            int param;
            if (scheme == "bigpan") {
                require_cfg(d_par >= 0, "d: required for scheme bigpan");
                param = d_par;
            } else {
                require_cfg(l_par >= 0, "l: required for scheme " + scheme);
                param = l_par;
            }
            const adversary_problem prob = preset_problem(scheme, n, k, param);
            const double bound = scheme == "quasi"
                                     ? stochastic_adversary_bound(prob.inst, prob.scheme)
                                     : adversary_bound(prob.inst, prob.scheme);
            payload = "scheme,n,k,l_or_d,bound,normalized\n" + scheme + "," +
                      std::to_string(n) + "," + std::to_string(k) + "," +
                      std::to_string(param) + "," + fmt12(bound) + "," +
                      fmt12(bound / std::pow((double)k, 0.25)) + "\n";
        } else if (*cmd_check) {
            require_cfg(n >= 1, "n: must be at least 1");
            const coin_config x = parse_bits("x", xs, n);
            const coin_config y = parse_bits("y", ys, n);
            require_cfg(y.weight() == x.weight(), "y: weight must equal the weight of x");
            const int kk = y.weight();
            std::vector<int> cand = fake_indices(y);
            query_ledger led;
            b_oracle oracle(x, led);
            solve_report rep;
            rep.success = (f_simple || !check_bigpan_admissible(n, kk))
                              ? simple_check(n, cand, oracle)
                              : check(n, cand, oracle);
            rep.x_found = y;
            rep.success_probability = 1.0; // the verifier is a deterministic predicate
            rep.ledger = led;
            rep.mode = solve_mode::classical;
            payload = report_json(rep, x, seed).dump(2) + "\n";
        } else if (*cmd_classical) {
            require_cfg(n >= 1, "n: must be at least 1");
            require_cfg(k >= 0 && k <= n, "k: must lie in [0, n]");
            const coin_config x = xs.empty() ? pick_config(n, k, seed) : parse_bits("x", xs, n);
            require_cfg(x.weight() == k, "x: weight must equal k");
            query_ledger led;
            b_oracle oracle(x, led);
            const solve_report rep = classical_general(n, k, oracle);
            payload = report_json(rep, x, seed).dump(2) + "\n";
        } else if (*cmd_cal) {
            const std::vector<int> klist = parse_klist(klist_raw);
            ordered_json table = ordered_json::array();
            for (int kk : klist) {
                require_cfg(kk >= 1, "k-list: entries must be positive");
                table.push_back(calibration_entry(kk));
            }
            payload = table.dump(2) + "\n";
        }
        emit(payload, out_path);
        return 0;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
