#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "chaoscalc/algebra.hpp"
#include "chaoscalc/chaos.hpp"
#include "chaoscalc/errors.hpp"
#include "chaoscalc/rng.hpp"

using namespace chaoscalc;

namespace {

Polynomial mono(int nvars, std::vector<int> exps, double c = 1.0) {
    Polynomial p(nvars);
    p.add_term(exps, c);
    return p;
}

// max_s |H(P_1(x_s),...,P_d(x_s))| over fresh Gaussian points
double residual_at_fresh_points(const Polynomial& H, const std::vector<Polynomial>& P,
                                uint64_t seed, int npoints = 100) {
    Rng rng(seed);
    int nvars = P.front().nvars();
    double worst = 0.0;
    for (int s = 0; s < npoints; ++s) {
        std::vector<double> x;
        rng.fill_normal(x, static_cast<std::size_t>(nvars));
        std::vector<double> y;
        y.reserve(P.size());
        for (const auto& p : P) y.push_back(p.eval(x));
        worst = std::max(worst, std::abs(H.eval(y)));
    }
    return worst;
}

ChaosVector vector_of_polys(const std::vector<Polynomial>& P, BasisDim dim) {
    ChaosVector F(static_cast<int>(P.size()));
    for (std::size_t i = 0; i < P.size(); ++i)
        F.set_component(static_cast<int>(i), from_polynomial(P[i], dim));
    return F;
}

}  // namespace

TEST_CASE("jacobian rank on the reference systems") {
    Polynomial x1 = mono(2, {1, 0}), x2 = mono(2, {0, 1});
    Polynomial x1sq = mono(2, {2, 0});
    CHECK(jacobian_rank({x1, x2}, 8, Rng(1)) == 2);
    CHECK(jacobian_rank({x1, x1sq}, 8, Rng(2)) == 1);

    Polynomial s = x1 + x2;
    Polynomial p = mono(2, {1, 1});
    Polynomial q = mono(2, {2, 0}) + mono(2, {0, 2});
    // s^2 - 2p - q vanishes identically, so the three are dependent
    Polynomial relation = s * s + p * (-2.0) + q * (-1.0);
    CHECK(relation.is_zero());
    CHECK(jacobian_rank({s, p, q}, 8, Rng(3)) == 2);
}

TEST_CASE("annihilator search finds the quadratic relation of (x, x^2)") {
    Polynomial x1 = mono(1, {1}), x1sq = mono(1, {2});
    auto H = find_annihilator({x1, x1sq}, 4, Rng(11));
    REQUIRE(H.has_value());
    CHECK(H->degree() == 2);
    CHECK(residual_at_fresh_points(*H, {x1, x1sq}, 77) <=
          1e-6 * (1.0 + H->coefficient_norm()));
    // shape: proportional to t1^2 - t2
    double lead = H->coefficient({2, 0});
    REQUIRE(std::abs(lead) > 1e-3);
    CHECK(H->coefficient({0, 1}) / lead == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(H->coefficient({1, 0}) / lead) < 1e-6);
    CHECK(std::abs(H->coefficient({0, 0}) / lead) < 1e-6);
}

TEST_CASE("annihilator search returns nothing for independent pairs") {
    Polynomial x1 = mono(2, {1, 0}), x2 = mono(2, {0, 1});
    CHECK(!find_annihilator({x1, x2}, 4, Rng(12)).has_value());
}

TEST_CASE("annihilator of the symmetric triple") {
    Polynomial s = mono(2, {1, 0}) + mono(2, {0, 1});
    Polynomial p = mono(2, {1, 1});
    Polynomial q = mono(2, {2, 0}) + mono(2, {0, 2});
    auto H = find_annihilator({s, p, q}, 12, Rng(13));
    REQUIRE(H.has_value());
    CHECK(H->degree() == 2);
    CHECK(residual_at_fresh_points(*H, {s, p, q}, 78) <=
          1e-6 * (1.0 + H->coefficient_norm()));
    // shape: proportional to t1^2 - 2 t2 - t3
    double lead = H->coefficient({2, 0, 0});
    REQUIRE(std::abs(lead) > 1e-3);
    CHECK(H->coefficient({0, 1, 0}) / lead == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(H->coefficient({0, 0, 1}) / lead == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("constructed dependent triples always yield verified witnesses") {
    Rng rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        // P3 = a P1^2 + b P1 P2 + c P2 forces a degree-2 relation
        Polynomial p1(3), p2(3);
        for (int v = 0; v < 3; ++v) {
            std::vector<int> e(3, 0);
            e[static_cast<std::size_t>(v)] = 1;
            p1.add_term(e, 2.0 * rng.next_unit() - 1.0);
            e[static_cast<std::size_t>(v)] = 2;
            p2.add_term(e, 2.0 * rng.next_unit() - 1.0);
        }
        double a = 1.0 + rng.next_unit(), b = rng.next_unit(), c = 0.5 + rng.next_unit();
        Polynomial p3 = p1 * p1 * a + p1 * p2 * b + p2 * c;
        std::vector<Polynomial> P = {p1, p2, p3};
        CHECK(jacobian_rank(P, 8, rng.child(trial)) == 2);
        auto H = find_annihilator(P, 6, rng.child(100 + trial));
        REQUIRE(H.has_value());
        CHECK(H->degree() <= 6);
        CHECK(residual_at_fresh_points(*H, P, 900 + static_cast<uint64_t>(trial)) <=
              1e-6 * (1.0 + H->coefficient_norm()));
    }
}

TEST_CASE("dependence report is internally consistent") {
    Polynomial x1 = mono(2, {1, 0}), x2 = mono(2, {0, 1});
    DependenceVerdict indep = check_dependence({x1, x2}, 4, Rng(31));
    CHECK(indep.independent);
    CHECK(indep.jacobian_rank == 2);
    CHECK(!indep.witness.has_value());

    Polynomial x1sq = mono(2, {2, 0});
    DependenceVerdict dep = check_dependence({x1, x1sq}, 4, Rng(32));
    CHECK(!dep.independent);
    CHECK(dep.jacobian_rank == 1);
    REQUIRE(dep.witness.has_value());
    CHECK(dep.witness->degree() <= 4);
}

TEST_CASE("monomial budget guard") {
    std::vector<Polynomial> P = {mono(3, {1, 0, 0}), mono(3, {0, 1, 0}), mono(3, {0, 0, 1})};
    CHECK_THROWS_AS(find_annihilator(P, 48, Rng(41)), CapTooLargeError);
}

TEST_CASE("absolute continuity verdicts on the reference pairs") {
    // (G1, G1^2 - 1): second component is a function of the first
    {
        Polynomial p1 = mono(2, {1, 0});
        Polynomial p2 = mono(2, {2, 0}) + mono(2, {0, 0}, -1.0);
        CHECK(absolute_continuity_verdict(vector_of_polys({p1, p2}, 2), 10000, Rng(51)) ==
              Verdict::NOT_AC);
    }
    // (G1, G2^2 - 1): expected Gram determinant is 4
    {
        Polynomial p1 = mono(2, {1, 0});
        Polynomial p2 = mono(2, {0, 2}) + mono(2, {0, 0}, -1.0);
        CHECK(absolute_continuity_verdict(vector_of_polys({p1, p2}, 2), 10000, Rng(52)) ==
              Verdict::AC);
    }
    // pair of second-order integrals with nonsingular covariance
    {
        ChaosVector F(2);
        SymmetricKernel f(2, 2), g(2, 2);
        f.set({0, 0}, 1.0);
        f.set({1, 1}, 0.3);
        g.set({1, 1}, 1.0);
        ChaosElement ef(2), eg(2);
        ef.set_kernel(f);
        eg.set_kernel(g);
        F.set_component(0, ef);
        F.set_component(1, eg);
        Eigen::MatrixXd C = covariance_matrix(F);
        REQUIRE(C.determinant() > 0.1);
        CHECK(absolute_continuity_verdict(F, 10000, Rng(53)) == Verdict::AC);
    }
}

TEST_CASE("near-degenerate pair still resolves through the leakage test") {
    // second component differs from the first by a 1e-5 perturbation; the
    // determinant is 4e-10 * x2^2, so most samples sit below the loose zero
    // cutoff. Tightening the cutoff sheds those zeros (there is no atom at
    // zero), which identifies the law as continuous.
    Polynomial p1 = mono(2, {1, 0});
    Polynomial p2 = p1 + (mono(2, {0, 2}) + mono(2, {0, 0}, -1.0)) * 1e-5;
    CHECK(absolute_continuity_verdict(vector_of_polys({p1, p2}, 2), 10000, Rng(54)) ==
          Verdict::AC);
}

TEST_CASE("quartic tangency of the determinant does not block the verdict") {
    // (x^2 - 1, xy) has det Gamma = 4x^4: absolutely continuous, but the
    // zero fraction under the loose cutoff alone sits above the usual band
    Polynomial p1 = mono(2, {2, 0}) + mono(2, {0, 0}, -1.0);
    Polynomial p2 = mono(2, {1, 1});
    CHECK(absolute_continuity_verdict(vector_of_polys({p1, p2}, 2), 20000, Rng(57)) ==
          Verdict::AC);
}

TEST_CASE("verdict requires the minimum sample count") {
    Polynomial p1 = mono(2, {1, 0});
    Polynomial p2 = mono(2, {0, 1});
    CHECK_THROWS_AS(absolute_continuity_verdict(vector_of_polys({p1, p2}, 2), 5000, Rng(55)),
                    RangeError);
}

TEST_CASE("verdicts survive invertible recombination") {
    Rng rng(61);
    Polynomial dep1 = mono(2, {1, 0});
    Polynomial dep2 = mono(2, {2, 0}) + mono(2, {0, 0}, -1.0);
    ChaosVector D = vector_of_polys({dep1, dep2}, 2);
    Polynomial ind1 = mono(2, {1, 0});
    Polynomial ind2 = mono(2, {0, 2}) + mono(2, {0, 0}, -1.0);
    ChaosVector I = vector_of_polys({ind1, ind2}, 2);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd M(2, 2);
        do {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) M(i, j) = rng.normal();
        } while (std::abs(M.determinant()) < 0.1);
        CHECK(absolute_continuity_verdict(linear_combine(D, M), 10000,
                                          rng.child(trial)) == Verdict::NOT_AC);
        CHECK(absolute_continuity_verdict(linear_combine(I, M), 10000,
                                          rng.child(50 + trial)) == Verdict::AC);
    }
}

TEST_CASE("three-way equivalence report on small systems") {
    // dependent pair
    {
        Polynomial p1 = mono(2, {1, 0});
        Polynomial p2 = mono(2, {2, 0}) + mono(2, {0, 0}, -1.0);
        auto rep = cross_check_theorem31(vector_of_polys({p1, p2}, 2), 10000, Rng(71));
        CHECK(rep.verdict == Verdict::NOT_AC);
        CHECK(rep.rank == 1);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->degree() <= 2 * 2);
    }
    // independent pair via a product component
    {
        Polynomial p1 = mono(2, {1, 0});
        Polynomial p2 = mono(2, {1, 1});
        auto rep = cross_check_theorem31(vector_of_polys({p1, p2}, 2), 10000, Rng(72));
        CHECK(rep.verdict == Verdict::AC);
        CHECK(rep.rank == 2);
        CHECK(!rep.witness.has_value());
    }
    // dependent symmetric triple, shifted to mean zero
    {
        Polynomial s = mono(2, {1, 0}) + mono(2, {0, 1});
        Polynomial p = mono(2, {1, 1});
        Polynomial q = mono(2, {2, 0}) + mono(2, {0, 2}) + mono(2, {0, 0}, -2.0);
        auto rep = cross_check_theorem31(vector_of_polys({s, p, q}, 2), 10000, Rng(73));
        CHECK(rep.verdict == Verdict::NOT_AC);
        CHECK(rep.rank == 2);
        REQUIRE(rep.witness.has_value());
        CHECK(rep.witness->degree() == 2);
    }
    // precondition: component count is capped
    {
        std::vector<Polynomial> P;
        for (int i = 0; i < 4; ++i) {
            std::vector<int> e(4, 0);
            e[static_cast<std::size_t>(i)] = 1;
            P.push_back(mono(4, e));
        }
        CHECK_THROWS_AS(cross_check_theorem31(vector_of_polys(P, 4), 10000, Rng(74)),
                        RangeError);
    }
}

TEST_CASE("small-ball exponents recover the reference slopes") {
    auto grid = geometric_grid(1e-5, 1.0, 26);
    double s1 = small_ball_exponent([](Rng& r) { return r.normal(); }, grid, 1000000, Rng(81));
    CHECK(s1 == doctest::Approx(1.0).epsilon(0.1));
    double s2 = small_ball_exponent(
        [](Rng& r) {
            double g = r.normal();
            return g * g;
        },
        grid, 1000000, Rng(82));
    CHECK(s2 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("small-ball exponent of a chaos element") {
    ChaosElement e(1);
    SymmetricKernel f1(1, 1);
    f1.set({0}, 1.0);
    e.set_kernel(f1);
    double s = small_ball_exponent(e, geometric_grid(1e-5, 1.0, 26), 500000, Rng(83));
    CHECK(s == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("small-ball guards") {
    CHECK_THROWS_AS(small_ball_exponent([](Rng&) { return 0.0; },
                                        geometric_grid(1e-5, 1.0, 26), 20000, Rng(84)),
                    DegenerateError);
    CHECK_THROWS_AS(small_ball_exponent([](Rng& r) { return r.normal(); },
                                        geometric_grid(0.1, 1.0, 5), 20000, Rng(85)),
                    RangeError);
}
