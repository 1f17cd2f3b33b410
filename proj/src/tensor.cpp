#include "chaoscalc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "chaoscalc/errors.hpp"

namespace chaoscalc {

double hermite(int k, double x) {
    if (k < 0) throw RangeError("hermite: negative degree");
    if (k == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int j = 1; j < k; ++j) {
        double next = x * cur - static_cast<double>(j) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

std::vector<double> hermite_coefficients(int k) {
    if (k < 0) throw RangeError("hermite_coefficients: negative degree");
    std::vector<double> prev = {1.0};
    if (k == 0) return prev;
    std::vector<double> cur = {0.0, 1.0};
    for (int j = 1; j < k; ++j) {
        std::vector<double> next(j + 2, 0.0);
        for (int p = 0; p <= j; ++p) next[p + 1] += cur[p];           // x * H_j
        for (int p = 0; p < j; ++p) next[p] -= static_cast<double>(j) * prev[p];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> monomial_in_hermite(int m) {
    if (m < 0) throw RangeError("monomial_in_hermite: negative degree");
    // x^0 = H_0; multiply by x repeatedly using x H_j = H_{j+1} + j H_{j-1}.
    std::vector<double> d = {1.0};
    for (int step = 0; step < m; ++step) {
        std::vector<double> next(d.size() + 1, 0.0);
        for (std::size_t j = 0; j < d.size(); ++j) {
            next[j + 1] += d[j];
            if (j >= 1) next[j - 1] += static_cast<double>(j) * d[j];
        }
        d = std::move(next);
    }
    return d;
}

std::uint64_t orbit_size(const MultiIndex& sorted_idx) {
    std::uint64_t fact = 1;
    for (std::size_t i = 2; i <= sorted_idx.size(); ++i) fact *= i;
    std::uint64_t denom = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted_idx.size(); ++i) {
        if (i < sorted_idx.size() && sorted_idx[i] == sorted_idx[i - 1]) {
            ++run;
        } else {
            for (std::size_t r = 2; r <= run; ++r) denom *= r;
            run = 1;
        }
    }
    return fact / denom;
}

std::map<int, int> index_multiplicities(const MultiIndex& idx) {
    std::map<int, int> mult;
    for (int i : idx) mult[i] += 1;
    return mult;
}

SymmetricKernel::SymmetricKernel(int order, BasisDim dim) : order_(order), dim_(dim) {
    if (order < 0) throw RangeError("kernel order must be >= 0");
    if (dim <= 0) throw RangeError("kernel dimension must be positive");
}

void SymmetricKernel::check_index(const MultiIndex& idx) const {
    if (static_cast<int>(idx.size()) != order_)
        throw OrderMismatchError("multi-index length does not match kernel order");
    for (int i : idx)
        if (i < 0 || i >= dim_) throw RangeError("multi-index entry out of range");
}

double SymmetricKernel::at(MultiIndex idx) const {
    check_index(idx);
    std::sort(idx.begin(), idx.end());
    auto it = coeff_.find(idx);
    return it == coeff_.end() ? 0.0 : it->second;
}

void SymmetricKernel::set(MultiIndex idx, double value) {
    check_index(idx);
    std::sort(idx.begin(), idx.end());
    if (value == 0.0) {
        coeff_.erase(idx);
    } else {
        coeff_[idx] = value;
    }
}

void SymmetricKernel::add(MultiIndex idx, double value) {
    check_index(idx);
    std::sort(idx.begin(), idx.end());
    double v = coeff_[idx] + value;
    if (v == 0.0) {
        coeff_.erase(idx);
    } else {
        coeff_[idx] = v;
    }
}

SymmetricKernel& SymmetricKernel::operator*=(double s) {
    if (s == 0.0) {
        coeff_.clear();
        return *this;
    }
    for (auto& [idx, v] : coeff_) v *= s;
    return *this;
}

SymmetricKernel& SymmetricKernel::operator+=(const SymmetricKernel& other) {
    if (other.dim_ != dim_) throw DimMismatchError("kernel += dimension mismatch");
    if (other.order_ != order_) throw OrderMismatchError("kernel += order mismatch");
    for (const auto& [idx, v] : other.coeff_) add(idx, v);
    return *this;
}

RawTensor::RawTensor(int order, BasisDim dim) : order_(order), dim_(dim) {
    if (order < 0) throw RangeError("tensor order must be >= 0");
    if (dim <= 0) throw RangeError("tensor dimension must be positive");
}

double RawTensor::at(const MultiIndex& idx) const {
    auto it = entries_.find(idx);
    return it == entries_.end() ? 0.0 : it->second;
}

void RawTensor::add(const MultiIndex& idx, double value) {
    if (static_cast<int>(idx.size()) != order_)
        throw OrderMismatchError("multi-index length does not match tensor order");
    for (int i : idx)
        if (i < 0 || i >= dim_) throw RangeError("multi-index entry out of range");
    double v = entries_[idx] + value;
    if (v == 0.0) {
        entries_.erase(idx);
    } else {
        entries_[idx] = v;
    }
}

static void check_pair(int dim_a, int dim_b, int order_a, int order_b, bool same_order) {
    if (dim_a != dim_b) throw DimMismatchError("operands live on different Gaussian spaces");
    if (same_order && order_a != order_b) throw OrderMismatchError("operands have different orders");
}

double inner(const SymmetricKernel& f, const SymmetricKernel& g) {
    check_pair(f.dim(), g.dim(), f.order(), g.order(), true);
    // one term per shared canonical index, weighted by its orbit size
    double s = 0.0;
    auto itf = f.coefficients().begin();
    auto itg = g.coefficients().begin();
    while (itf != f.coefficients().end() && itg != g.coefficients().end()) {
        if (itf->first < itg->first) {
            ++itf;
        } else if (itg->first < itf->first) {
            ++itg;
        } else {
            s += static_cast<double>(orbit_size(itf->first)) * itf->second * itg->second;
            ++itf;
            ++itg;
        }
    }
    return s;
}

double norm2(const SymmetricKernel& f) { return inner(f, f); }

double raw_inner(const RawTensor& a, const RawTensor& b) {
    check_pair(a.dim(), b.dim(), a.order(), b.order(), true);
    double s = 0.0;
    auto ita = a.entries().begin();
    auto itb = b.entries().begin();
    while (ita != a.entries().end() && itb != b.entries().end()) {
        if (ita->first < itb->first) {
            ++ita;
        } else if (itb->first < ita->first) {
            ++itb;
        } else {
            s += ita->second * itb->second;
            ++ita;
            ++itb;
        }
    }
    return s;
}

double raw_norm2(const RawTensor& a) { return raw_inner(a, a); }

RawTensor expand(const SymmetricKernel& f) {
    RawTensor out(f.order(), f.dim());
    for (const auto& [idx, v] : f.coefficients()) {
        MultiIndex p = idx;
        do {
            out.add(p, v);
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return out;
}

RawTensor raw_basis(const MultiIndex& idx, BasisDim dim) {
    RawTensor t(static_cast<int>(idx.size()), dim);
    t.add(idx, 1.0);
    return t;
}

SymmetricKernel symmetrize(const RawTensor& t) {
    // Group entries by sorted index. If all entries of an orbit carry the same
    // value, keep it verbatim (exact idempotence); otherwise average the orbit
    // sum over the full orbit size (missing permutations count as zero).
    struct OrbitAcc {
        double sum = 0.0;
        double first = 0.0;
        std::uint64_t seen = 0;
        bool all_equal = true;
    };
    std::map<MultiIndex, OrbitAcc> groups;
    for (const auto& [idx, v] : t.entries()) {
        MultiIndex s = idx;
        std::sort(s.begin(), s.end());
        auto& g = groups[s];
        if (g.seen == 0) {
            g.first = v;
        } else if (v != g.first) {
            g.all_equal = false;
        }
        g.sum += v;
        g.seen += 1;
    }
    SymmetricKernel out(t.order(), t.dim());
    for (const auto& [idx, g] : groups) {
        std::uint64_t orbit = orbit_size(idx);
        double v = (g.all_equal && g.seen == orbit) ? g.first
                                                    : g.sum / static_cast<double>(orbit);
        if (v != 0.0) out.set(idx, v);
    }
    return out;
}

RawTensor contract(const RawTensor& a, const RawTensor& b, int r) {
    if (a.dim() != b.dim()) throw DimMismatchError("contract: dimension mismatch");
    if (r < 0 || r > std::min(a.order(), b.order()))
        throw RangeError("contract: r out of range");

    // Split each entry's index into (first r slots, remainder) and join on the
    // shared prefix. Ordered maps keep the accumulation order deterministic.
    using Suffixes = std::map<MultiIndex, std::vector<std::pair<MultiIndex, double>>>;
    auto split = [r](const RawTensor& t) {
        Suffixes by_prefix;
        for (const auto& [idx, v] : t.entries()) {
            MultiIndex pre(idx.begin(), idx.begin() + r);
            MultiIndex post(idx.begin() + r, idx.end());
            by_prefix[pre].emplace_back(post, v);
        }
        return by_prefix;
    };
    Suffixes fa = split(a), fb = split(b);

    RawTensor out(a.order() + b.order() - 2 * r, a.dim());
    auto ita = fa.begin();
    auto itb = fb.begin();
    while (ita != fa.end() && itb != fb.end()) {
        if (ita->first < itb->first) {
            ++ita;
        } else if (itb->first < ita->first) {
            ++itb;
        } else {
            for (const auto& [ia, va] : ita->second) {
                for (const auto& [ib, vb] : itb->second) {
                    MultiIndex joined = ia;
                    joined.insert(joined.end(), ib.begin(), ib.end());
                    out.add(joined, va * vb);
                }
            }
            ++ita;
            ++itb;
        }
    }
    return out;
}

RawTensor contract(const SymmetricKernel& f, const SymmetricKernel& g, int r) {
    if (f.dim() != g.dim()) throw DimMismatchError("contract: dimension mismatch");
    if (r < 0 || r > std::min(f.order(), g.order()))
        throw RangeError("contract: r out of range");
    return contract(expand(f), expand(g), r);
}

SymmetricKernel contract_sym(const SymmetricKernel& f, const SymmetricKernel& g, int r) {
    return symmetrize(contract(f, g, r));
}

}  // namespace chaoscalc
