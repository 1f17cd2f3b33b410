#include "chaoscalc/chaos.hpp"

#include <cmath>
#include <cstdlib>

#include "chaoscalc/errors.hpp"
#include "chaoscalc/parallel.hpp"

namespace chaoscalc {

double eval_multiple_integral(const SymmetricKernel& f, const GaussianSample& g) {
    if (static_cast<BasisDim>(g.size()) != f.dim())
        throw DimMismatchError("sample has " + std::to_string(g.size()) +
                               " coordinates, kernel lives in dimension " +
                               std::to_string(f.dim()));
    double total = 0.0;
    for (const auto& [idx, a] : f.coefficients()) {
        double prod = 1.0;
        std::size_t i = 0;
        // canonical indices are sorted, so equal coordinates sit in runs
        while (i < idx.size()) {
            std::size_t j = i;
            while (j < idx.size() && idx[j] == idx[i]) ++j;
            prod *= hermite(static_cast<int>(j - i), g[static_cast<std::size_t>(idx[i])]);
            i = j;
        }
        total += a * static_cast<double>(orbit_size(idx)) * prod;
    }
    return total;
}

ChaosElement::ChaosElement(BasisDim dim) : dim_(dim) {
    if (dim < 1) throw RangeError("chaos element needs a positive dimension");
    kernels_.emplace_back(0, dim);
}

const SymmetricKernel& ChaosElement::kernel(int k) const {
    if (k < 0 || k > max_order())
        throw RangeError("no kernel stored at order " + std::to_string(k));
    return kernels_[static_cast<std::size_t>(k)];
}

void ChaosElement::set_kernel(const SymmetricKernel& f) {
    if (f.dim() != dim_)
        throw DimMismatchError("kernel dimension " + std::to_string(f.dim()) +
                               " does not match element dimension " + std::to_string(dim_));
    while (max_order() < f.order()) kernels_.emplace_back(max_order() + 1, dim_);
    kernels_[static_cast<std::size_t>(f.order())] = f;
}

void ChaosElement::set_constant(double c) {
    SymmetricKernel k0(0, dim_);
    k0.set({}, c);
    kernels_[0] = k0;
}

double ChaosElement::constant() const { return kernels_[0].at({}); }

void ChaosElement::add_scaled(const ChaosElement& other, double s) {
    if (other.dim_ != dim_)
        throw DimMismatchError("cannot combine chaos elements of different dimension");
    while (max_order() < other.max_order()) kernels_.emplace_back(max_order() + 1, dim_);
    for (int k = 0; k <= other.max_order(); ++k) {
        SymmetricKernel scaled = other.kernels_[static_cast<std::size_t>(k)];
        scaled *= s;
        kernels_[static_cast<std::size_t>(k)] += scaled;
    }
}

void ChaosElement::scale(double s) {
    for (auto& k : kernels_) k *= s;
}

double eval(const ChaosElement& e, const GaussianSample& g) {
    double total = 0.0;
    for (int k = 0; k <= e.max_order(); ++k) total += eval_multiple_integral(e.kernel(k), g);
    return total;
}

Polynomial to_polynomial(const ChaosElement& e) {
    Polynomial out(e.dim());
    for (int k = 0; k <= e.max_order(); ++k) {
        for (const auto& [idx, a] : e.kernel(k).coefficients()) {
            Polynomial term(e.dim());
            term.add_term(std::vector<int>(static_cast<std::size_t>(e.dim()), 0),
                          a * static_cast<double>(orbit_size(idx)));
            std::size_t i = 0;
            while (i < idx.size()) {
                std::size_t j = i;
                while (j < idx.size() && idx[j] == idx[i]) ++j;
                int mult = static_cast<int>(j - i);
                int var = idx[i];
                Polynomial herm(e.dim());
                std::vector<double> cs = hermite_coefficients(mult);
                for (int p = 0; p <= mult; ++p) {
                    if (cs[static_cast<std::size_t>(p)] == 0.0) continue;
                    std::vector<int> exps(static_cast<std::size_t>(e.dim()), 0);
                    exps[static_cast<std::size_t>(var)] = p;
                    herm.add_term(exps, cs[static_cast<std::size_t>(p)]);
                }
                term = term * herm;
                i = j;
            }
            out = out + term;
        }
    }
    return out;
}

namespace {

// Distribute one monomial c * prod_v x_v^{e_v} over Hermite levels. Each
// variable's power expands as x^p = sum_j d_j H_j(x); a choice of j per
// variable lands in the chaos of order sum_j with a sorted multi-index.
void distribute_monomial(const std::vector<int>& exps, double c, BasisDim dim,
                         std::vector<SymmetricKernel>& levels) {
    std::vector<std::vector<double>> expansions;
    std::vector<int> vars;
    for (int v = 0; v < dim; ++v) {
        if (exps[static_cast<std::size_t>(v)] > 0) {
            vars.push_back(v);
            expansions.push_back(monomial_in_hermite(exps[static_cast<std::size_t>(v)]));
        }
    }
    std::vector<int> pick(vars.size(), 0);
    for (;;) {
        double w = c;
        MultiIndex idx;
        for (std::size_t t = 0; t < vars.size(); ++t) {
            w *= expansions[t][static_cast<std::size_t>(pick[t])];
            for (int rep = 0; rep < pick[t]; ++rep) idx.push_back(vars[t]);
        }
        if (w != 0.0) {
            int order = static_cast<int>(idx.size());
            while (static_cast<int>(levels.size()) <= order)
                levels.emplace_back(static_cast<int>(levels.size()), dim);
            // vars ascend, so idx is already canonical
            levels[static_cast<std::size_t>(order)].add(
                idx, w / static_cast<double>(orbit_size(idx)));
        }
        std::size_t pos = 0;
        while (pos < vars.size()) {
            pick[pos] += 1;
            if (pick[pos] < static_cast<int>(expansions[pos].size())) break;
            pick[pos] = 0;
            ++pos;
        }
        if (pos == vars.size()) break;
    }
}

}  // namespace

ChaosElement from_polynomial(const Polynomial& p, BasisDim dim) {
    if (p.nvars() != dim)
        throw DimMismatchError("polynomial has " + std::to_string(p.nvars()) +
                               " variables, requested dimension " + std::to_string(dim));
    std::vector<SymmetricKernel> levels;
    levels.emplace_back(0, dim);
    for (const auto& [exps, c] : p.terms()) distribute_monomial(exps, c, dim, levels);
    ChaosElement out(dim);
    for (const auto& lvl : levels)
        if (lvl.order() == 0)
            out.set_constant(lvl.empty() ? 0.0 : lvl.at({}));
        else
            out.set_kernel(lvl);
    return out;
}

ChaosElement ou_generator(const ChaosElement& e) {
    ChaosElement out(e.dim());
    for (int k = 1; k <= e.max_order(); ++k) {
        SymmetricKernel f = e.kernel(k);
        f *= -static_cast<double>(k);
        out.set_kernel(f);
    }
    return out;
}

double sample_moments(const ChaosElement& e, int p, std::uint64_t m, Rng rng, bool absolute) {
    if (p < 1) throw RangeError("moment order must be at least 1");
    auto mv = mc_mean(m, rng, [&](Rng& r) {
        GaussianSample g;
        r.fill_normal(g, static_cast<std::size_t>(e.dim()));
        double v = eval(e, g);
        if (absolute) v = std::abs(v);
        double out = 1.0;
        for (int i = 0; i < p; ++i) out *= v;
        return out;
    });
    return mv.mean;
}

ChaosVector::ChaosVector(int d) {
    if (d < 1) throw RangeError("chaos vector needs at least one component");
    components_.assign(static_cast<std::size_t>(d), ChaosElement(1));
}

BasisDim ChaosVector::dim() const {
    if (dim_ < 0) throw RangeError("no component has been set yet");
    return dim_;
}

const ChaosElement& ChaosVector::component(int i) const {
    if (i < 0 || i >= d()) throw RangeError("component index out of range");
    return components_[static_cast<std::size_t>(i)];
}

void ChaosVector::set_component(int i, const ChaosElement& e) {
    if (i < 0 || i >= d()) throw RangeError("component index out of range");
    if (dim_ >= 0 && e.dim() != dim_)
        throw DimMismatchError("component dimension " + std::to_string(e.dim()) +
                               " does not match vector dimension " + std::to_string(dim_));
    dim_ = e.dim();
    components_[static_cast<std::size_t>(i)] = e;
}

std::vector<double> eval(const ChaosVector& F, const GaussianSample& g) {
    std::vector<double> out(static_cast<std::size_t>(F.d()));
    for (int i = 0; i < F.d(); ++i) out[static_cast<std::size_t>(i)] = eval(F.component(i), g);
    return out;
}

Eigen::MatrixXd covariance_matrix(const ChaosVector& F) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(F.d(), F.d());
    for (int i = 0; i < F.d(); ++i) {
        for (int j = i; j < F.d(); ++j) {
            double cij = 0.0;
            int top = std::min(F.component(i).max_order(), F.component(j).max_order());
            double fact = 1.0;
            for (int k = 1; k <= top; ++k) {
                fact *= k;
                cij += fact * inner(F.component(i).kernel(k), F.component(j).kernel(k));
            }
            C(i, j) = cij;
            C(j, i) = cij;
        }
    }
    return C;
}

ChaosVector linear_combine(const ChaosVector& F, const Eigen::MatrixXd& M) {
    if (M.cols() != F.d())
        throw DimMismatchError("matrix has " + std::to_string(M.cols()) +
                               " columns, vector has " + std::to_string(F.d()) +
                               " components");
    ChaosVector out(static_cast<int>(M.rows()));
    for (int i = 0; i < M.rows(); ++i) {
        ChaosElement acc(F.dim());
        for (int j = 0; j < F.d(); ++j) acc.add_scaled(F.component(j), M(i, j));
        out.set_component(i, acc);
    }
    return out;
}

}  // namespace chaoscalc
