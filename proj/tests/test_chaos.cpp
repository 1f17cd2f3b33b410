#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "chaoscalc/chaos.hpp"
#include "chaoscalc/errors.hpp"
#include "chaoscalc/parallel.hpp"
#include "chaoscalc/rng.hpp"
#include "chaoscalc/tensor.hpp"
#include "helpers.hpp"

using namespace chaoscalc;

namespace {

// Oracle: evaluate I_k(f) by enumerating every one of the n^k raw indices and
// multiplying per-variable Hermite factors. Independent of the canonical-orbit
// evaluation path in the library.
double oracle_multiple_integral(const SymmetricKernel& f, const std::vector<double>& g) {
    int n = f.dim(), k = f.order();
    std::vector<int> idx(k, 0);
    double total = 0.0;
    for (;;) {
        double a = f.at(idx);
        if (a != 0.0) {
            std::vector<int> counts(n, 0);
            for (int i : idx) counts[i] += 1;
            double prod = 1.0;
            for (int v = 0; v < n; ++v)
                if (counts[v] > 0) prod *= hermite(counts[v], g[v]);
            total += a * prod;
        }
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - 1) --pos;
        if (pos < 0) break;
        idx[pos] += 1;
        for (int i = pos + 1; i < k; ++i) idx[i] = 0;
    }
    return total;
}

ChaosElement random_element(Rng& rng, int dim, int max_order) {
    ChaosElement e(dim);
    e.set_constant(2.0 * rng.next_unit() - 1.0);
    for (int k = 1; k <= max_order; ++k)
        e.set_kernel(testutil::random_kernel(rng, k, dim, 0.8));
    return e;
}

}  // namespace

TEST_CASE("multiple integral frozen values") {
    SymmetricKernel d11(2, 2);
    d11.set({0, 0}, 1.0);
    CHECK(eval_multiple_integral(d11, {2.0, -1.0}) == doctest::Approx(3.0));  // H_2(2)

    SymmetricKernel s12 = symmetrize(raw_basis({0, 1}, 2));
    CHECK(eval_multiple_integral(s12, {3.0, -2.0}) == doctest::Approx(-6.0));  // g1*g2

    SymmetricKernel cubic(3, 1);
    cubic.set({0, 0, 0}, 1.0);
    CHECK(eval_multiple_integral(cubic, {1.0}) == doctest::Approx(-2.0));  // H_3(1)

    SymmetricKernel scalar(0, 2);
    scalar.set({}, 4.5);
    CHECK(eval_multiple_integral(scalar, {0.3, 0.4}) == doctest::Approx(4.5));
}

TEST_CASE("multiple integral matches the dense-enumeration oracle") {
    Rng rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        int dim = 2 + static_cast<int>(rng.next_u64() % 4);
        int order = 1 + static_cast<int>(rng.next_u64() % 3);
        auto f = testutil::random_kernel(rng, order, dim, 0.8);
        std::vector<double> g;
        Rng pt = rng.child(trial);
        pt.fill_normal(g, static_cast<std::size_t>(dim));
        CHECK(eval_multiple_integral(f, g) ==
              doctest::Approx(oracle_multiple_integral(f, g)).epsilon(1e-9));
    }
}

TEST_CASE("multiple integral rejects wrong sample dimension") {
    SymmetricKernel f(2, 3);
    f.set({0, 1}, 1.0);
    CHECK_THROWS_AS(eval_multiple_integral(f, {1.0, 2.0}), DimMismatchError);
}

TEST_CASE("chaos element evaluation sums the levels") {
    ChaosElement e(2);
    e.set_constant(5.0);
    SymmetricKernel f1(1, 2);
    f1.set({0}, 2.0);
    e.set_kernel(f1);
    SymmetricKernel f2(2, 2);
    f2.set({0, 0}, 1.0);
    e.set_kernel(f2);
    // 5 + 2*g1 + H2(g1)
    CHECK(eval(e, {1.5, 9.0}) == doctest::Approx(5.0 + 3.0 + (1.5 * 1.5 - 1.0)));
    CHECK(e.max_order() == 2);
}

TEST_CASE("to_polynomial agrees with eval at random points") {
    Rng rng(111);
    for (int trial = 0; trial < 40; ++trial) {
        int dim = 2 + static_cast<int>(rng.next_u64() % 3);
        int order = 1 + static_cast<int>(rng.next_u64() % 3);
        ChaosElement e = random_element(rng, dim, order);
        Polynomial p = to_polynomial(e);
        CHECK(p.degree() <= order);
        Rng pt = rng.child(1000 + trial);
        std::vector<double> g;
        pt.fill_normal(g, static_cast<std::size_t>(dim));
        double ve = eval(e, g);
        double vp = p.eval(g);
        CHECK(vp == doctest::Approx(ve).epsilon(1e-9));
    }
}

TEST_CASE("to_polynomial frozen example") {
    ChaosElement e(2);
    SymmetricKernel f2(2, 2);
    f2.set({0, 0}, 1.0);
    e.set_kernel(f2);
    Polynomial p = to_polynomial(e);  // x1^2 - 1
    CHECK(p.coefficient({2, 0}) == doctest::Approx(1.0));
    CHECK(p.coefficient({0, 0}) == doctest::Approx(-1.0));
    CHECK(p.terms().size() == 2);
}

TEST_CASE("from_polynomial inverts to_polynomial on chaos elements") {
    Rng rng(121);
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 2 + static_cast<int>(rng.next_u64() % 3);
        int order = 1 + static_cast<int>(rng.next_u64() % 3);
        ChaosElement e = random_element(rng, dim, order);
        ChaosElement back = from_polynomial(to_polynomial(e), dim);
        int top = std::max(back.max_order(), e.max_order());
        for (int k = 0; k <= top; ++k) {
            const SymmetricKernel* ka = k <= e.max_order() ? &e.kernel(k) : nullptr;
            const SymmetricKernel* kb = k <= back.max_order() ? &back.kernel(k) : nullptr;
            // compare coefficient maps entry by entry
            if (ka)
                for (const auto& [idx, v] : ka->coefficients())
                    CHECK((kb ? kb->at(idx) : 0.0) == doctest::Approx(v).epsilon(1e-11));
            if (kb)
                for (const auto& [idx, v] : kb->coefficients())
                    CHECK((ka ? ka->at(idx) : 0.0) == doctest::Approx(v).epsilon(1e-11));
        }
    }
}

TEST_CASE("to_polynomial inverts from_polynomial on polynomials") {
    Rng rng(131);
    for (int trial = 0; trial < 30; ++trial) {
        int nv = 2 + static_cast<int>(rng.next_u64() % 2);
        Polynomial p(nv);
        for (int t = 0; t < 6; ++t) {
            std::vector<int> e(nv, 0);
            int budget = static_cast<int>(rng.next_u64() % 4);
            for (int b = 0; b < budget; ++b)
                e[static_cast<std::size_t>(rng.next_u64() % static_cast<unsigned>(nv))] += 1;
            p.add_term(e, 2.0 * rng.next_unit() - 1.0);
        }
        Polynomial back = to_polynomial(from_polynomial(p, nv));
        Polynomial diff = back - p;
        for (const auto& [e, c] : diff.terms()) CHECK(std::abs(c) < 1e-10);
    }
}

TEST_CASE("ou generator scales each level by minus its order") {
    Rng rng(141);
    ChaosElement e = random_element(rng, 3, 3);
    ChaosElement le = ou_generator(e);
    CHECK(le.kernel(0).empty());  // constants are killed
    for (int k = 1; k <= 3; ++k) {
        for (const auto& [idx, v] : e.kernel(k).coefficients())
            CHECK(le.kernel(k).at(idx) == doctest::Approx(-static_cast<double>(k) * v));
    }
    // L(L e) has kernels k^2 f_k
    ChaosElement lle = ou_generator(le);
    for (int k = 1; k <= 3; ++k)
        for (const auto& [idx, v] : e.kernel(k).coefficients())
            CHECK(lle.kernel(k).at(idx) ==
                  doctest::Approx(static_cast<double>(k) * static_cast<double>(k) * v));
}

TEST_CASE("isometry and orthogonality under Monte Carlo") {
    Rng rng(151);
    for (int trial = 0; trial < 5; ++trial) {
        int dim = 2 + static_cast<int>(rng.next_u64() % 3);
        int order = 1 + static_cast<int>(rng.next_u64() % 3);
        auto f = testutil::random_kernel(rng, order, dim, 0.8);
        double fact = 1.0;
        for (int j = 2; j <= order; ++j) fact *= j;
        double expect = fact * norm2(f);
        auto mv = mc_mean(200000, rng.child(50 + trial), [&](Rng& r) {
            std::vector<double> g;
            r.fill_normal(g, static_cast<std::size_t>(dim));
            double v = eval_multiple_integral(f, g);
            return v * v;
        });
        CHECK(std::abs(mv.mean - expect) <= 3.0 * mv.stderr_of_mean() + 1e-12);
    }
    // distinct orders are orthogonal
    auto f2 = testutil::random_kernel(rng, 2, 3, 1.0);
    auto f3 = testutil::random_kernel(rng, 3, 3, 1.0);
    auto mv = mc_mean(200000, rng.child(99), [&](Rng& r) {
        std::vector<double> g;
        r.fill_normal(g, 3);
        return eval_multiple_integral(f2, g) * eval_multiple_integral(f3, g);
    });
    CHECK(std::abs(mv.mean) <= 3.0 * mv.stderr_of_mean());
}

TEST_CASE("sample moments") {
    Rng rng(161);
    ChaosElement c(2);
    c.set_constant(4.0);
    CHECK(sample_moments(c, 3, 1000, rng.child(0)) == doctest::Approx(64.0));

    ChaosElement g(2);
    SymmetricKernel f1(1, 2);
    f1.set({0}, 1.0);
    g.set_kernel(f1);
    double m2 = sample_moments(g, 2, 200000, rng.child(1));
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.03));
    double m4 = sample_moments(g, 4, 200000, rng.child(2));
    CHECK(m4 == doctest::Approx(3.0).epsilon(0.05));
    double m1abs = sample_moments(g, 1, 200000, rng.child(3), true);
    CHECK(m1abs == doctest::Approx(std::sqrt(2.0 / 3.14159265358979)).epsilon(0.03));
}

TEST_CASE("covariance matrix from kernels") {
    ChaosVector F(2);
    ChaosElement a(2), b(2);
    SymmetricKernel f2(2, 2);
    f2.set({0, 0}, 1.0);
    a.set_kernel(f2);
    b.set_kernel(symmetrize(raw_basis({0, 1}, 2)));
    F.set_component(0, a);
    F.set_component(1, b);
    Eigen::MatrixXd C = covariance_matrix(F);
    CHECK(C(0, 0) == doctest::Approx(2.0));   // 2 ||f||^2
    CHECK(C(1, 1) == doctest::Approx(1.0));   // 2 * 1/2
    CHECK(C(0, 1) == doctest::Approx(0.0));
    CHECK(C(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("linear recombination acts on kernels and evaluations alike") {
    Rng rng(171);
    ChaosVector F(2);
    F.set_component(0, random_element(rng, 3, 2));
    F.set_component(1, random_element(rng, 3, 2));
    Eigen::MatrixXd M(2, 2);
    M << 1.5, -0.5, 2.0, 0.25;
    ChaosVector G = linear_combine(F, M);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> g;
        Rng pt = rng.child(trial);
        pt.fill_normal(g, 3);
        for (int i = 0; i < 2; ++i) {
            double direct = eval(G.component(i), g);
            double expect = M(i, 0) * eval(F.component(0), g) + M(i, 1) * eval(F.component(1), g);
            CHECK(direct == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

TEST_CASE("rng streams are deterministic and substreams are independent") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(42);
    Rng c0 = c.child(0), c1 = c.child(1);
    CHECK(c0.next_u64() != c1.next_u64());

    // Gaussian moments against the known values
    auto mv = mc_mean(1000000, Rng(7), [](Rng& r) { return r.normal(); });
    CHECK(std::abs(mv.mean) <= 3.0 * mv.stderr_of_mean());
    auto mv2 = mc_mean(1000000, Rng(8), [](Rng& r) {
        double g = r.normal();
        return g * g;
    });
    CHECK(mv2.mean == doctest::Approx(1.0).epsilon(0.01));
    auto mv4 = mc_mean(1000000, Rng(9), [](Rng& r) {
        double g = r.normal();
        return g * g * g * g;
    });
    CHECK(mv4.mean == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("mc results do not depend on the worker count") {
    auto run = [](const char* threads) {
        setenv("CHAOSCALC_THREADS", threads, 1);
        auto mv = mc_mean(100000, Rng(55), [](Rng& r) { return r.normal() * r.normal(); });
        unsetenv("CHAOSCALC_THREADS");
        return mv.mean;
    };
    double m1 = run("1");
    double m3 = run("3");
    double m8 = run("8");
    CHECK(m1 == m3);  // bitwise: fixed block partition + ordered merge
    CHECK(m1 == m8);
}

TEST_CASE("chaos vector component dimensions must agree") {
    ChaosVector F(2);
    ChaosElement a(2), b(3);
    SymmetricKernel f1(1, 3);
    f1.set({0}, 1.0);
    b.set_kernel(f1);
    F.set_component(0, a);
    CHECK_THROWS_AS(F.set_component(1, b), DimMismatchError);
}
