#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "chaoscalc/errors.hpp"
#include "chaoscalc/polynomial.hpp"
#include "chaoscalc/rng.hpp"

using namespace chaoscalc;

namespace {

Polynomial random_poly(Rng& rng, int nvars, int maxdeg, int nterms) {
    Polynomial p(nvars);
    for (int t = 0; t < nterms; ++t) {
        std::vector<int> e(nvars, 0);
        int budget = static_cast<int>(rng.next_u64() % static_cast<unsigned>(maxdeg + 1));
        for (int b = 0; b < budget; ++b)
            e[static_cast<std::size_t>(rng.next_u64() % static_cast<unsigned>(nvars))] += 1;
        p.add_term(e, 2.0 * rng.next_unit() - 1.0);
    }
    return p;
}

std::vector<double> random_point(Rng& rng, int nvars) {
    std::vector<double> x(nvars);
    for (auto& v : x) v = 2.0 * rng.next_unit() - 1.0;
    return x;
}

}  // namespace

TEST_CASE("evaluation of hand-built polynomials") {
    // p = x0^2 x1 - 3 x1 + 7
    Polynomial p(2);
    p.add_term({2, 1}, 1.0);
    p.add_term({0, 1}, -3.0);
    p.add_term({0, 0}, 7.0);
    CHECK(p.eval({2.0, 5.0}) == doctest::Approx(20.0 - 15.0 + 7.0));
    CHECK(p.eval({0.0, 0.0}) == doctest::Approx(7.0));
    CHECK(p.degree() == 3);
    CHECK(p.nvars() == 2);

    Polynomial zero(3);
    CHECK(zero.eval({1.0, 2.0, 3.0}) == 0.0);
    CHECK(zero.degree() == -1);
    CHECK(zero.is_zero());
}

TEST_CASE("terms with zero coefficients are not stored") {
    Polynomial p(1);
    p.add_term({2}, 1.5);
    p.add_term({2}, -1.5);
    CHECK(p.is_zero());
    CHECK(p.terms().empty());
}

TEST_CASE("derivative of hand-built polynomials") {
    Polynomial p(2);
    p.add_term({2, 1}, 1.0);  // x0^2 x1
    p.add_term({0, 3}, 2.0);  // 2 x1^3
    Polynomial d0 = p.derivative(0);
    CHECK(d0.coefficient({1, 1}) == doctest::Approx(2.0));
    CHECK(d0.terms().size() == 1);
    Polynomial d1 = p.derivative(1);
    CHECK(d1.coefficient({2, 0}) == doctest::Approx(1.0));
    CHECK(d1.coefficient({0, 2}) == doctest::Approx(6.0));
}

TEST_CASE("derivative matches central differences at random points") {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        int nv = 1 + static_cast<int>(rng.next_u64() % 3);
        Polynomial p = random_poly(rng, nv, 4, 6);
        auto x = random_point(rng, nv);
        for (int v = 0; v < nv; ++v) {
            Polynomial d = p.derivative(v);
            const double h = 1e-5;
            auto xp = x, xm = x;
            xp[v] += h;
            xm[v] -= h;
            double fd = (p.eval(xp) - p.eval(xm)) / (2 * h);
            CHECK(d.eval(x) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
}

TEST_CASE("product frozen example: (x+y)(x-y) = x^2 - y^2") {
    Polynomial a(2), b(2);
    a.add_term({1, 0}, 1.0);
    a.add_term({0, 1}, 1.0);
    b.add_term({1, 0}, 1.0);
    b.add_term({0, 1}, -1.0);
    Polynomial c = a * b;
    CHECK(c.coefficient({2, 0}) == doctest::Approx(1.0));
    CHECK(c.coefficient({0, 2}) == doctest::Approx(-1.0));
    CHECK(c.coefficient({1, 1}) == doctest::Approx(0.0));
    CHECK(c.terms().size() == 2);
}

TEST_CASE("ring identities at random points") {
    Rng rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        int nv = 1 + static_cast<int>(rng.next_u64() % 3);
        Polynomial a = random_poly(rng, nv, 3, 5);
        Polynomial b = random_poly(rng, nv, 3, 5);
        Polynomial c = random_poly(rng, nv, 2, 4);
        auto x = random_point(rng, nv);
        double va = a.eval(x), vb = b.eval(x), vc = c.eval(x);
        CHECK((a * b).eval(x) == doctest::Approx(va * vb).epsilon(1e-9));
        CHECK((a + b).eval(x) == doctest::Approx(va + vb).epsilon(1e-9));
        CHECK(((a + b) * c).eval(x) == doctest::Approx((va + vb) * vc).epsilon(1e-9));
        Polynomial scaled = a;
        scaled *= -2.5;
        CHECK(scaled.eval(x) == doctest::Approx(-2.5 * va).epsilon(1e-9));
    }
}

TEST_CASE("product rule for derivatives") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        int nv = 2;
        Polynomial a = random_poly(rng, nv, 3, 4);
        Polynomial b = random_poly(rng, nv, 3, 4);
        for (int v = 0; v < nv; ++v) {
            Polynomial lhs = (a * b).derivative(v);
            Polynomial rhs = a.derivative(v) * b + a * b.derivative(v);
            auto x = random_point(rng, nv);
            CHECK(lhs.eval(x) == doctest::Approx(rhs.eval(x)).epsilon(1e-9));
        }
    }
}

TEST_CASE("mismatched variable counts are rejected") {
    Polynomial a(2), b(3);
    a.add_term({1, 0}, 1.0);
    b.add_term({1, 0, 0}, 1.0);
    CHECK_THROWS_AS(a * b, DimMismatchError);
    CHECK_THROWS_AS(a + b, DimMismatchError);
    CHECK_THROWS_AS(a.add_term({1}, 1.0), OrderMismatchError);
    CHECK_THROWS_AS(a.eval({1.0}), DimMismatchError);
}
