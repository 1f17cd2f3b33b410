#include "chaoscalc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "chaoscalc/algebra.hpp"
#include "chaoscalc/errors.hpp"
#include "chaoscalc/malliavin.hpp"
#include "chaoscalc/parallel.hpp"

namespace chaoscalc {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Per-purpose seed stream: distinct (seed, index) pairs never collide.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    Rng r = Rng(seed).child(index);
    return r.next_u64();
}

std::vector<int> geometric_steps(int t_max) {
    if (t_max < 1) throw RangeError("t_max must be >= 1");
    std::vector<int> steps;
    for (int t = 1; t <= t_max; t *= 2) steps.push_back(t);
    return steps;
}

void check_samples(std::uint64_t m) {
    if (m < 1000) throw RangeError("scenarios need at least 1000 samples");
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

class Stopwatch {
  public:
    double seconds() const {
        auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(now - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ChaosElement first_chaos(const SymmetricKernel& f) {
    ChaosElement e(f.dim());
    e.set_kernel(f);
    return e;
}

// F_t of the central limit scenario, in its own (t+1)-dimensional space.
ChaosVector clt_step_vector(int t) {
    int n = t + 1;
    SymmetricKernel f(1, n);
    f.set({0}, 1.0);
    SymmetricKernel g(2, n);
    double w = 1.0 / std::sqrt(2.0 * t);
    for (int i = 1; i <= t; ++i) g.set({i, i}, w);
    ChaosVector F(2);
    F.set_component(0, first_chaos(f));
    F.set_component(1, first_chaos(g));
    return F;
}

// MC estimate of E||Gamma - target||_F^2 for a two-component vector.
MeanVar gamma_deviation_mc(const ChaosVector& F, const Eigen::MatrixXd& target,
                           std::uint64_t m, std::uint64_t seed) {
    MalliavinGradient grad(F);
    int n = F.dim();
    return mc_mean(m, Rng(seed), [&](Rng& r) {
        GaussianSample g;
        r.fill_normal(g, static_cast<std::size_t>(n));
        GammaSample gs = gamma_at(grad, g);
        return (gs.m - target).squaredNorm();
    });
}

void finish(RunResult& r, const Stopwatch& watch) {
    r.ok = r.failures.empty();
    r.wall_seconds = watch.seconds();
}

}  // namespace

EmpiricalLaw sample_law(const ChaosVector& F, std::uint64_t m, std::uint64_t seed) {
    if (m == 0) throw RangeError("sample_law needs m >= 1");
    int d = F.d();
    int n = F.dim();
    auto blocks = mc_blocks<Eigen::MatrixXd>(m, Rng(seed), [&](Rng& r, std::uint64_t count,
                                                               Eigen::MatrixXd& acc) {
        acc.resize(static_cast<Eigen::Index>(count), d);
        GaussianSample g;
        for (std::uint64_t s = 0; s < count; ++s) {
            r.fill_normal(g, static_cast<std::size_t>(n));
            std::vector<double> v = eval(F, g);
            for (int j = 0; j < d; ++j) acc(static_cast<Eigen::Index>(s), j) = v[j];
        }
    });
    EmpiricalLaw law;
    law.seed = seed;
    law.points.resize(static_cast<Eigen::Index>(m), d);
    Eigen::Index row = 0;
    for (const auto& b : blocks) {
        law.points.middleRows(row, b.rows()) = b;
        row += b.rows();
    }
    return law;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    auto cell = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    os << "scenario,t,m,tv,fm,gamma,ratio,settings\n";
    for (const ResultRow& r : rows) {
        os << r.scenario << ',' << r.t << ',' << r.m << ',' << cell(r.tv) << ','
           << cell(r.fm) << ',' << cell(r.gamma) << ',' << cell(r.ratio) << ','
           << r.settings << '\n';
    }
}

RunResult scenario_peccati_tudor(const ScenarioConfig& cfg) {
    Stopwatch watch;
    check_samples(cfg.samples);
    std::vector<int> steps = geometric_steps(cfg.t_max);
    int bins = cfg.bins > 0 ? cfg.bins : default_bins_for(2);

    RunResult out;
    out.seed = cfg.seed;

    // Limit law N_2(0, I), sampled through the same machinery as the steps.
    ChaosVector limit_vec(2);
    SymmetricKernel e0(1, 2), e1(1, 2);
    e0.set({0}, 1.0);
    e1.set({1}, 1.0);
    limit_vec.set_component(0, first_chaos(e0));
    limit_vec.set_component(1, first_chaos(e1));
    EmpiricalLaw limit = sample_law(limit_vec, cfg.samples, derive_seed(cfg.seed, 0));

    std::vector<ChaosVector> vectors;
    std::vector<EmpiricalLaw> seq;
    for (size_t i = 0; i < steps.size(); ++i) {
        vectors.push_back(clt_step_vector(steps[i]));
        seq.push_back(sample_law(vectors[i], cfg.samples, derive_seed(cfg.seed, 1 + i)));
    }
    ProbeResult probe = inequality_probe(seq, limit, cfg.gamma, bins, cfg.support_cap);

    Eigen::MatrixXd target(2, 2);
    target << 1.0, 0.0, 0.0, 2.0;
    std::uint64_t m_gamma = std::min<std::uint64_t>(cfg.samples, 20000);

    double first_dev = 0.0, last_dev = 0.0;
    for (size_t i = 0; i < steps.size(); ++i) {
        int t = steps[i];
        MeanVar dev = gamma_deviation_mc(vectors[i], target, m_gamma,
                                         derive_seed(cfg.seed, 100 + i));
        double expected = 8.0 / t;
        if (std::abs(dev.mean - expected) > 4.0 * dev.stderr_of_mean() + 1e-9) {
            std::ostringstream os;
            os << "gamma deviation at t=" << t << ": got " << dev.mean << " expected "
               << expected << " (stderr " << dev.stderr_of_mean() << ")";
            out.failures.push_back(os.str());
        }
        if (i == 0) first_dev = dev.mean;
        last_dev = dev.mean;

        const ProbeRow& p = probe.rows[i];
        ResultRow row;
        row.scenario = "peccati-tudor";
        row.t = t;
        row.m = cfg.samples;
        row.tv = p.tv;
        row.fm = p.fm;
        row.gamma = cfg.gamma;
        row.ratio = p.ratio;
        std::ostringstream st;
        st << "gamma_dev=" << fmt(dev.mean) << ";gamma_dev_expected=" << fmt(expected)
           << ";gamma_dev_sigma=" << fmt(dev.stderr_of_mean())
           << ";above_floor=" << (p.above_floor ? 1 : 0)
           << ";fm_spread=" << fmt(p.fm_spread) << ";fm_self=" << fmt(probe.fm_self)
           << ";bins=" << bins << ";support_cap=" << cfg.support_cap
           << ";seed=" << cfg.seed;
        row.settings = st.str();
        out.rows.push_back(row);
    }

    // Below ~2e4 samples the histogram floor swamps the decay signal, so the
    // shape checks would only measure estimator noise.
    if (cfg.samples >= 20000) {
        for (size_t i = 1; i < steps.size(); ++i) {
            double prev = *out.rows[i - 1].tv;
            double cur = *out.rows[i].tv;
            if (cur > prev + 0.01) {
                std::ostringstream os;
                os << "tv increases from t=" << steps[i - 1] << " (" << prev << ") to t="
                   << steps[i] << " (" << cur << ")";
                out.failures.push_back(os.str());
            }
        }
        double tv1 = *out.rows[0].tv;
        for (size_t i = 0; i < steps.size(); ++i) {
            double tvi = *out.rows[i].tv;
            if (steps[i] == 16 && tvi > tv1 / 2.0 + 0.01) {
                out.failures.push_back("tv at t=16 did not halve: " + fmt(tvi) + " vs " +
                                       fmt(tv1));
            }
            if (steps[i] == 64) {
                if (tvi > tv1 / 4.0 + 0.01) {
                    out.failures.push_back("tv at t=64 did not quarter: " + fmt(tvi) +
                                           " vs " + fmt(tv1));
                }
                if (!(tvi < tv1 / 2.0)) {
                    out.failures.push_back("tv at t=64 not below half of t=1: " +
                                           fmt(tvi) + " vs " + fmt(tv1));
                }
            }
        }
    }

    std::vector<double> ratios;
    for (size_t i = 0; i < steps.size(); ++i) {
        if (probe.rows[i].above_floor && probe.rows[i].ratio > 0.0) {
            ratios.push_back(probe.rows[i].ratio);
        }
    }
    if (ratios.size() >= 2) {
        double top = *std::max_element(ratios.begin(), ratios.end());
        double mid = median_of(ratios);
        if (top > 10.0 * mid) {
            out.failures.push_back("ratio max/median above 10: max " + fmt(top) +
                                   " median " + fmt(mid));
        }
    }
    if (steps.size() >= 2 && !(last_dev < first_dev)) {
        out.failures.push_back("gamma deviation did not shrink: first " + fmt(first_dev) +
                               " last " + fmt(last_dev));
    }

    finish(out, watch);
    return out;
}

RunResult scenario_second_chaos_pair(const SymmetricKernel& f, const SymmetricKernel& g,
                                     std::uint64_t m, std::uint64_t seed) {
    Stopwatch watch;
    if (f.order() != 2 || g.order() != 2) {
        throw OrderMismatchError("second chaos pair needs two order-2 kernels");
    }
    if (f.dim() != g.dim()) {
        throw DimMismatchError("second chaos pair kernels disagree on dimension");
    }
    RunResult out;
    out.seed = seed;

    ChaosVector F(2);
    F.set_component(0, first_chaos(f));
    F.set_component(1, first_chaos(g));
    Eigen::MatrixXd C = covariance_matrix(F);
    double det_c = C(0, 0) * C(1, 1) - C(0, 1) * C(1, 0);
    double tol = 1e-9 * (1.0 + std::abs(C(0, 0) * C(1, 1)));

    Verdict verdict = absolute_continuity_verdict(F, std::max<std::uint64_t>(m, 10000),
                                                  Rng(derive_seed(seed, 0)));
    bool det_says_ac = det_c > tol;
    bool verdict_says_ac = verdict == Verdict::AC;
    if (det_says_ac != verdict_says_ac) {
        std::ostringstream os;
        os << "det C = " << det_c << " disagrees with sampling verdict "
           << (verdict_says_ac ? "AC" : "NOT_AC");
        out.failures.push_back(os.str());
    }

    double e_det_gamma = expected_det_gamma_second_chaos_pair(f, g);
    if (e_det_gamma < 4.0 * det_c - tol) {
        out.failures.push_back("E[det Gamma] " + fmt(e_det_gamma) +
                               " falls below 4 det C " + fmt(4.0 * det_c));
    }

    ResultRow row;
    row.scenario = "second-chaos-pair";
    row.t = 0;
    row.m = std::max<std::uint64_t>(m, 10000);
    std::ostringstream st;
    st << "det_c=" << fmt(det_c) << ";verdict=" << (verdict_says_ac ? "AC" : "NOT_AC")
       << ";e_det_gamma=" << fmt(e_det_gamma) << ";dim=" << f.dim() << ";seed=" << seed;
    row.settings = st.str();
    out.rows.push_back(row);

    finish(out, watch);
    return out;
}

RunResult scenario_pairwise_independent(const ScenarioConfig& cfg) {
    Stopwatch watch;
    check_samples(cfg.samples);
    std::vector<int> steps = geometric_steps(cfg.t_max);
    int bins = cfg.bins > 0 ? cfg.bins : default_bins_for(2);

    RunResult out;
    out.seed = cfg.seed;

    SymmetricKernel sq(2, 2);
    sq.set({1, 1}, 1.0);

    // Limit (G, G'^2 - 1): disjoint coordinates, so the joint law equals the
    // product of the marginals.
    ChaosVector limit_vec(2);
    SymmetricKernel e0(1, 2);
    e0.set({0}, 1.0);
    limit_vec.set_component(0, first_chaos(e0));
    limit_vec.set_component(1, first_chaos(sq));
    EmpiricalLaw limit = sample_law(limit_vec, cfg.samples, derive_seed(cfg.seed, 0));

    double disjoint_cov = cov_of_squares(e0, sq);
    if (disjoint_cov != 0.0) {
        out.failures.push_back("disjoint-coordinate cov_of_squares is " +
                               fmt(disjoint_cov) + ", expected exact 0");
    }

    for (size_t i = 0; i < steps.size(); ++i) {
        int t = steps[i];
        double w = 1.0 / t;
        SymmetricKernel h(1, 2);
        h.set({0}, std::sqrt(1.0 - w * w));
        h.set({1}, w);
        ChaosVector F(2);
        F.set_component(0, first_chaos(h));
        F.set_component(1, first_chaos(sq));

        double cov = cov_of_squares(h, sq);
        double expected = 8.0 * w * w;
        if (std::abs(cov - expected) > 1e-12 * (1.0 + expected)) {
            std::ostringstream os;
            os << "cov_of_squares at t=" << t << ": got " << cov << " expected "
               << expected;
            out.failures.push_back(os.str());
        }

        EmpiricalLaw law = sample_law(F, cfg.samples, derive_seed(cfg.seed, 1 + i));
        double tv = estimate_tv(law, limit, bins);
        FmEstimate fm = estimate_fm_detailed(law, limit, cfg.support_cap);

        ResultRow row;
        row.scenario = "pairwise-independent";
        row.t = t;
        row.m = cfg.samples;
        row.tv = tv;
        row.fm = fm.value;
        std::ostringstream st;
        st << "w=" << fmt(w) << ";cov2=" << fmt(cov) << ";cov2_expected=" << fmt(expected)
           << ";fm_spread=" << fmt(fm.spread) << ";bins=" << bins
           << ";support_cap=" << cfg.support_cap << ";seed=" << cfg.seed;
        row.settings = st.str();
        out.rows.push_back(row);
    }

    if (cfg.samples >= 20000) {
        for (size_t i = 1; i < steps.size(); ++i) {
            double prev = *out.rows[i - 1].tv;
            double cur = *out.rows[i].tv;
            if (cur > prev + 0.02) {
                std::ostringstream os;
                os << "tv increases from t=" << steps[i - 1] << " (" << prev << ") to t="
                   << steps[i] << " (" << cur << ")";
                out.failures.push_back(os.str());
            }
        }
        if (!(*out.rows.back().tv <= *out.rows.front().tv)) {
            out.failures.push_back("tv at final step above the first step");
        }
    }
    if (cfg.t_max >= 64 && cfg.samples >= 1000000 && *out.rows.back().tv >= 0.05) {
        out.failures.push_back("tv vs product law at final step is " +
                               fmt(*out.rows.back().tv) + ", expected < 0.05");
    }

    finish(out, watch);
    return out;
}

RunResult verify_identities(std::uint64_t samples, std::uint64_t seed) {
    Stopwatch watch;
    check_samples(samples);
    RunResult out;
    out.seed = seed;
    int check_index = 0;

    auto record = [&](const std::string& name, double expected, double got,
                      double sigma) {
        bool pass = std::abs(got - expected) <= 4.0 * sigma + 1e-9;
        if (!pass) {
            std::ostringstream os;
            os << name << ": got " << got << " expected " << expected << " (stderr "
               << sigma << ")";
            out.failures.push_back(os.str());
        }
        ResultRow row;
        row.scenario = "verify-identities";
        row.t = check_index++;
        row.m = samples;
        std::ostringstream st;
        st << "check=" << name << ";expected=" << fmt(expected) << ";got=" << fmt(got)
           << ";sigma=" << fmt(sigma) << ";pass=" << (pass ? 1 : 0) << ";seed=" << seed;
        row.settings = st.str();
        out.rows.push_back(row);
    };

    // Order-2 isometry: E[I_2(f)^2] = 2 ||f||^2.
    SymmetricKernel f2(2, 2);
    f2.set({0, 0}, 1.0);
    f2.set({0, 1}, 0.5);
    f2.set({1, 1}, -0.25);
    ChaosElement i2f = first_chaos(f2);
    {
        MeanVar mv = mc_mean(samples, Rng(derive_seed(seed, 1)), [&](Rng& r) {
            GaussianSample g;
            r.fill_normal(g, 2);
            double v = eval(i2f, g);
            return v * v;
        });
        record("isometry_order2", 2.0 * norm2(f2), mv.mean, mv.stderr_of_mean());
    }

    // Orthogonality across orders: E[I_1(e_0) I_2(f)] = 0.
    {
        SymmetricKernel e0(1, 2);
        e0.set({0}, 1.0);
        ChaosElement i1 = first_chaos(e0);
        MeanVar mv = mc_mean(samples, Rng(derive_seed(seed, 2)), [&](Rng& r) {
            GaussianSample g;
            r.fill_normal(g, 2);
            return eval(i1, g) * eval(i2f, g);
        });
        record("cross_order_orthogonality", 0.0, mv.mean, mv.stderr_of_mean());
    }

    // First-chaos pair: E[det Gamma] = ||f||^2 ||g||^2 - <f,g>^2.
    {
        SymmetricKernel f(1, 2), g(1, 2);
        f.set({0}, 1.0);
        g.set({0}, 1.0);
        g.set({1}, 1.0);
        ChaosVector F(2);
        F.set_component(0, first_chaos(f));
        F.set_component(1, first_chaos(g));
        MeanVar mv = expected_det_gamma_mc(F, samples, Rng(derive_seed(seed, 3)));
        record("det_gamma_first_chaos_pair", expected_det_gamma_first_chaos_pair(f, g),
               mv.mean, mv.stderr_of_mean());
    }

    // Second-chaos pair: closed form for E[det Gamma] on disjoint squares.
    {
        SymmetricKernel f(2, 2), g(2, 2);
        f.set({0, 0}, 1.0);
        g.set({1, 1}, 1.0);
        ChaosVector F(2);
        F.set_component(0, first_chaos(f));
        F.set_component(1, first_chaos(g));
        MeanVar mv = expected_det_gamma_mc(F, samples, Rng(derive_seed(seed, 4)));
        record("det_gamma_second_chaos_pair", expected_det_gamma_second_chaos_pair(f, g),
               mv.mean, mv.stderr_of_mean());
    }

    // Covariance of squares across orders 1 and 2 with partial overlap.
    {
        double w = 0.5;
        SymmetricKernel h(1, 2);
        h.set({0}, std::sqrt(1.0 - w * w));
        h.set({1}, w);
        SymmetricKernel sq(2, 2);
        sq.set({1, 1}, 1.0);
        ChaosElement a = first_chaos(h), b = first_chaos(sq);
        struct Acc {
            KahanSum a2, b2, ab, ab_sq;
            std::uint64_t n = 0;
        };
        auto blocks = mc_blocks<Acc>(samples, Rng(derive_seed(seed, 5)),
                                     [&](Rng& r, std::uint64_t count, Acc& acc) {
                                         GaussianSample g;
                                         for (std::uint64_t s = 0; s < count; ++s) {
                                             r.fill_normal(g, 2);
                                             double x = eval(a, g), y = eval(b, g);
                                             double xx = x * x, yy = y * y;
                                             acc.a2.add(xx);
                                             acc.b2.add(yy);
                                             acc.ab.add(xx * yy);
                                             acc.ab_sq.add(xx * yy * xx * yy);
                                             acc.n += 1;
                                         }
                                     });
        KahanSum a2, b2, ab, ab_sq;
        std::uint64_t n = 0;
        for (const auto& acc : blocks) {
            a2.add(acc.a2.value());
            b2.add(acc.b2.value());
            ab.add(acc.ab.value());
            ab_sq.add(acc.ab_sq.value());
            n += acc.n;
        }
        double mean_ab = ab.value() / n;
        double cov = mean_ab - (a2.value() / n) * (b2.value() / n);
        double var_ab = ab_sq.value() / n - mean_ab * mean_ab;
        // stderr of the product term dominates; the means contribute at the
        // same order, so fold them in conservatively
        double sigma = 3.0 * std::sqrt(std::max(var_ab, 0.0) / n);
        record("cov_of_squares_overlap", cov_of_squares(h, sq), cov, sigma);
    }

    // Malliavin-matrix deviation of the central limit sequence at t = 4.
    {
        Eigen::MatrixXd target(2, 2);
        target << 1.0, 0.0, 0.0, 2.0;
        MeanVar mv = gamma_deviation_mc(clt_step_vector(4), target,
                                        std::min<std::uint64_t>(samples, 50000),
                                        derive_seed(seed, 6));
        record("clt_gamma_deviation_t4", 8.0 / 4.0, mv.mean, mv.stderr_of_mean());
    }

    finish(out, watch);
    return out;
}

}  // namespace chaoscalc
