#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chaoscalc/algebra.hpp"
#include "chaoscalc/config.hpp"
#include "chaoscalc/errors.hpp"
#include "chaoscalc/harness.hpp"
#include "chaoscalc/rng.hpp"
#include "chaoscalc/tensor.hpp"

using namespace chaoscalc;

namespace {

// CSV goes to stdout (or --out); diagnostics and wall time go to stderr so
// repeated runs with one seed stay byte-identical on the data channel.
int emit(const RunResult& r, const std::string& out_path) {
    std::ostringstream csv;
    write_csv(csv, r.rows);
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file '" + out_path + "'");
        f << csv.str();
    }
    for (const auto& msg : r.failures) std::cerr << "check failed: " << msg << "\n";
    std::fprintf(stderr, "%zu rows, %zu failed checks, wall %.2f s\n", r.rows.size(),
                 r.failures.size(), r.wall_seconds);
    return r.ok ? 0 : 1;
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) {
    Rng c = Rng(seed).child(index);
    return c.next_u64();
}

// The three reference pairs of the second-chaos scenario: proportional
// (singular covariance), disjoint squares, and square vs off-diagonal
// product.
RunResult run_second_chaos_examples(const ScenarioConfig& cfg) {
    SymmetricKernel f(2, 2);
    f.set({0, 0}, 1.0);
    SymmetricKernel prop(2, 2);
    prop.set({0, 0}, 2.0);
    SymmetricKernel disjoint(2, 2);
    disjoint.set({1, 1}, 1.0);
    SymmetricKernel offdiag(2, 2);
    offdiag.set({0, 1}, 0.5);
    std::vector<std::pair<SymmetricKernel, SymmetricKernel>> pairs = {
        {f, prop}, {f, disjoint}, {f, offdiag}};

    RunResult out;
    out.seed = cfg.seed;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        RunResult one = scenario_second_chaos_pair(pairs[i].first, pairs[i].second,
                                                   cfg.samples, derived_seed(cfg.seed, i));
        for (ResultRow& row : one.rows) {
            row.t = static_cast<int>(i + 1);
            out.rows.push_back(std::move(row));
        }
        for (auto& msg : one.failures) out.failures.push_back(std::move(msg));
        out.wall_seconds += one.wall_seconds;
    }
    out.ok = out.failures.empty();
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional Wiener chaos toolkit: identities, density verdicts, "
                 "convergence scenarios"};
    app.require_subcommand(1);

    std::uint64_t vi_samples = 100000, vi_seed = 42;
    std::string vi_out;
    CLI::App* vi = app.add_subcommand(
        "verify-identities", "run the closed-form vs Monte Carlo invariant suite");
    vi->add_option("--samples", vi_samples, "Monte Carlo sample count (>= 1000)");
    vi->add_option("--seed", vi_seed, "random seed");
    vi->add_option("--out", vi_out, "write CSV to this file instead of stdout");

    std::string av_path;
    std::uint64_t av_samples = 0, av_seed = 0;
    CLI::App* av = app.add_subcommand(
        "ac-verdict", "decide absolute continuity of a chaos vector from a config file");
    av->add_option("config", av_path, "chaos vector config file")->required();
    av->add_option("--samples", av_samples, "override the config's sample count");
    av->add_option("--seed", av_seed, "override the config's seed");

    std::string an_path;
    std::uint64_t an_seed = 0;
    CLI::App* an = app.add_subcommand(
        "annihilate", "search for an annihilating polynomial of a polynomial system");
    an->add_option("config", an_path, "polynomial system config file")->required();
    an->add_option("--seed", an_seed, "override the config's seed");

    std::string sc_name, sc_out;
    ScenarioConfig sc_cfg;
    CLI::App* sc = app.add_subcommand("scenario", "run a named scenario and emit CSV");
    sc->add_option("name", sc_name,
                   "peccati-tudor | pairwise-independent | second-chaos-pair")
        ->required();
    sc->add_option("--t-max", sc_cfg.t_max, "largest step of the geometric t grid");
    sc->add_option("--samples", sc_cfg.samples, "Monte Carlo sample count per step");
    sc->add_option("--seed", sc_cfg.seed, "random seed");
    sc->add_option("--gamma", sc_cfg.gamma, "exponent in the ratio tv / fm^gamma");
    sc->add_option("--bins", sc_cfg.bins, "histogram bins per axis (0 = by dimension)");
    sc->add_option("--support-cap", sc_cfg.support_cap,
                   "max support size per side of the transport estimate");
    sc->add_option("--out", sc_out, "write CSV to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (vi->parsed()) {
            return emit(verify_identities(vi_samples, vi_seed), vi_out);
        }
        if (av->parsed()) {
            ConfigBlock root = parse_config_file(av_path);
            ChaosVector F = load_chaos_vector(root);
            std::uint64_t m =
                av->count("--samples") ? av_samples : root.get_uint_or("samples", 20000);
            std::uint64_t seed =
                av->count("--seed") ? av_seed : root.get_uint_or("seed", 0);
            Verdict v = absolute_continuity_verdict(F, std::max<std::uint64_t>(m, 10000),
                                                    Rng(seed));
            std::cout << (v == Verdict::AC ? "AC" : "NOT_AC") << "\n";
            return 0;
        }
        if (an->parsed()) {
            ConfigBlock root = parse_config_file(an_path);
            PolynomialSystem sys = load_polynomial_system(root);
            std::uint64_t seed = an->count("--seed") ? an_seed : root.get_uint_or("seed", 7);
            auto witness = find_annihilator(sys.polys, sys.degree_cap, Rng(seed));
            if (witness) {
                std::cout << witness->to_string() << "\n";
                std::fprintf(stderr, "annihilator of degree %d found (cap %d)\n",
                             witness->degree(), sys.degree_cap);
            } else {
                std::cout << "none\n";
                std::fprintf(stderr, "no annihilator up to degree cap %d\n",
                             sys.degree_cap);
            }
            return 0;
        }
        if (sc->parsed()) {
            RunResult r;
            if (sc_name == "peccati-tudor") {
                r = scenario_peccati_tudor(sc_cfg);
            } else if (sc_name == "pairwise-independent") {
                r = scenario_pairwise_independent(sc_cfg);
            } else if (sc_name == "second-chaos-pair") {
                r = run_second_chaos_examples(sc_cfg);
            } else {
                throw ConfigError("unknown scenario '" + sc_name +
                                  "' (expected peccati-tudor, pairwise-independent, or "
                                  "second-chaos-pair)");
            }
            return emit(r, sc_out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const RangeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const OrderMismatchError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DimMismatchError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedDimError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CapTooLargeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
