#include "chaoscalc/malliavin.hpp"

#include <cmath>

#include "chaoscalc/errors.hpp"

namespace chaoscalc {

namespace {

// Kernel with one slot pinned to coordinate j: g(v) = f(v + [j]).
// Each canonical index of the result comes from exactly one index of f.
SymmetricKernel pin_slot(const SymmetricKernel& f, int j) {
    SymmetricKernel out(f.order() - 1, f.dim());
    for (const auto& [idx, a] : f.coefficients()) {
        auto pos = std::find(idx.begin(), idx.end(), j);
        if (pos == idx.end()) continue;
        MultiIndex rest;
        rest.reserve(idx.size() - 1);
        for (auto it = idx.begin(); it != idx.end(); ++it)
            if (it != pos) rest.push_back(*it);
        out.set(rest, a);
    }
    return out;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double binom(int n, int r) {
    double b = 1.0;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
}

}  // namespace

MalliavinGradient::MalliavinGradient(const ChaosVector& F) : d_(F.d()), dim_(F.dim()) {
    polys_.reserve(static_cast<std::size_t>(d_) * static_cast<std::size_t>(dim_));
    elements_.reserve(polys_.capacity());
    for (int i = 0; i < d_; ++i) {
        const ChaosElement& e = F.component(i);
        Polynomial p = to_polynomial(e);
        for (int j = 0; j < dim_; ++j) {
            polys_.push_back(p.derivative(j));
            // each level k of F_i lands at the distinct order k-1, so the
            // pinned kernels can be installed directly
            ChaosElement de(dim_);
            for (int k = 1; k <= e.max_order(); ++k) {
                SymmetricKernel pinned = pin_slot(e.kernel(k), j);
                pinned *= static_cast<double>(k);
                de.set_kernel(pinned);
            }
            elements_.push_back(de);
        }
    }
}

const Polynomial& MalliavinGradient::partial_poly(int i, int j) const {
    if (i < 0 || i >= d_ || j < 0 || j >= dim_)
        throw RangeError("partial derivative index out of range");
    return polys_[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
                  static_cast<std::size_t>(j)];
}

const ChaosElement& MalliavinGradient::partial_chaos(int i, int j) const {
    if (i < 0 || i >= d_ || j < 0 || j >= dim_)
        throw RangeError("partial derivative index out of range");
    return elements_[static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) +
                     static_cast<std::size_t>(j)];
}

Eigen::MatrixXd MalliavinGradient::jacobian_at(const GaussianSample& g) const {
    Eigen::MatrixXd A(d_, dim_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < dim_; ++j) A(i, j) = partial_poly(i, j).eval(g);
    return A;
}

Eigen::MatrixXd MalliavinGradient::jacobian_at_chaos(const GaussianSample& g) const {
    Eigen::MatrixXd A(d_, dim_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < dim_; ++j) A(i, j) = eval(partial_chaos(i, j), g);
    return A;
}

double GammaSample::det() const { return m.determinant(); }

double GammaSample::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double GammaSample::max_abs() const { return m.cwiseAbs().maxCoeff(); }

GammaSample gamma_at(const MalliavinGradient& grad, const GaussianSample& g) {
    Eigen::MatrixXd A = grad.jacobian_at(g);
    return GammaSample{A * A.transpose()};
}

double truncated_gamma_det(const MalliavinGradient& grad, const GaussianSample& g,
                           int n_trunc) {
    if (n_trunc < 1 || n_trunc > grad.dim())
        throw RangeError("truncation level out of range");
    Eigen::MatrixXd A = grad.jacobian_at(g).leftCols(n_trunc);
    return (A * A.transpose()).determinant();
}

bool det_is_zero(const GammaSample& gs) {
    double scale = std::pow(gs.max_abs(), gs.m.rows());
    return std::abs(gs.det()) <= 1e-9 * (1.0 + scale);
}

MeanVar expected_det_gamma_mc(const ChaosVector& F, std::uint64_t m, Rng rng) {
    MalliavinGradient grad(F);
    BasisDim dim = F.dim();
    return mc_mean(m, rng, [&](Rng& r) {
        GaussianSample g;
        r.fill_normal(g, static_cast<std::size_t>(dim));
        return gamma_at(grad, g).det();
    });
}

double expected_det_gamma_first_chaos_pair(const SymmetricKernel& f,
                                           const SymmetricKernel& g) {
    if (f.order() != 1)
        throw OrderMismatchError("first component must have order 1, got " +
                                 std::to_string(f.order()));
    if (g.order() < 1)
        throw OrderMismatchError("second component must have order at least 1");
    int k = g.order();
    return k * factorial(k) * (norm2(f) * norm2(g) - raw_norm2(contract(f, g, 1)));
}

double expected_det_gamma_second_chaos_pair(const SymmetricKernel& f,
                                            const SymmetricKernel& g) {
    if (f.order() != 2)
        throw OrderMismatchError("first component must have order 2, got " +
                                 std::to_string(f.order()));
    if (g.order() < 2)
        throw OrderMismatchError("second component must have order at least 2, got " +
                                 std::to_string(g.order()));
    int k = g.order();
    double kf = factorial(k);
    double c1 = raw_norm2(contract(f, g, 1));
    double s1 = norm2(contract_sym(f, g, 1));
    double c2 = raw_norm2(contract(f, g, 2));
    return 4.0 * k * kf * norm2(f) * norm2(g) + 8.0 * (k - 1) * k * kf * c1 -
           4.0 * k * k * kf * s1 - 4.0 * k * (k - 1) * kf * c2;
}

double cov_of_squares(const SymmetricKernel& fi, const SymmetricKernel& fj) {
    if (fi.order() < 1 || fj.order() < 1)
        throw OrderMismatchError("covariance of squares needs orders at least 1");
    int ki = fi.order(), kj = fj.order();
    int top = std::min(ki, kj);
    double total = 0.0;
    for (int r = 1; r <= top; ++r) {
        double plain = raw_norm2(contract(fi, fj, r));
        double sym = norm2(contract_sym(fi, fj, r));
        total += factorial(ki) * factorial(kj) * binom(ki, r) * binom(kj, r) * plain;
        total += factorial(r) * factorial(r) * binom(ki, r) * binom(ki, r) * binom(kj, r) *
                 binom(kj, r) * factorial(ki + kj - 2 * r) * sym;
    }
    return total;
}

}  // namespace chaoscalc
