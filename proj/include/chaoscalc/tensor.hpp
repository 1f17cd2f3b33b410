#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace chaoscalc {

/// Explicit finite dimension of the underlying Gaussian space. Every kernel
/// carries one; operations on kernels of different dimension are rejected.
using BasisDim = int;

/// Multi-index into the orthonormal basis e_0..e_{n-1}; length == tensor order.
using MultiIndex = std::vector<int>;

/// Probabilists' Hermite polynomial H_k(x) (H_2 = x^2 - 1, E[H_j H_k] = k! delta_jk).
double hermite(int k, double x);

/// Monomial coefficients of H_k: H_k(x) = sum_j c[j] x^j, c.size() == k+1.
std::vector<double> hermite_coefficients(int k);

/// Inverse transform: x^m = sum_j d[j] H_j(x), d.size() == m+1.
std::vector<double> monomial_in_hermite(int m);

/// Number of distinct permutations of a multi-index: k! / prod(multiplicity!).
std::uint64_t orbit_size(const MultiIndex& sorted_idx);

/// Multiplicity of each basis index appearing in a multi-index.
std::map<int, int> index_multiplicities(const MultiIndex& idx);

class RawTensor;

/// Symmetric tensor of a fixed order over R^n, stored canonically: one
/// coefficient per sorted multi-index, equal to the full tensor's value at
/// every permutation of that index.
class SymmetricKernel {
  public:
    SymmetricKernel() = default;
    SymmetricKernel(int order, BasisDim dim);

    int order() const { return order_; }
    BasisDim dim() const { return dim_; }
    const std::map<MultiIndex, double>& coefficients() const { return coeff_; }
    bool empty() const { return coeff_.empty(); }

    /// Value of the full tensor at idx (any index order).
    double at(MultiIndex idx) const;

    /// Sets the full-tensor value at idx and all its permutations.
    void set(MultiIndex idx, double value);
    void add(MultiIndex idx, double value);

    SymmetricKernel& operator*=(double s);
    SymmetricKernel& operator+=(const SymmetricKernel& other);

  private:
    int order_ = 0;
    BasisDim dim_ = 0;
    std::map<MultiIndex, double> coeff_;

    void check_index(const MultiIndex& idx) const;
};

/// Not-necessarily-symmetric tensor, sparse over arbitrary multi-indices.
/// This is what contractions produce before symmetrization.
class RawTensor {
  public:
    RawTensor() = default;
    RawTensor(int order, BasisDim dim);

    int order() const { return order_; }
    BasisDim dim() const { return dim_; }
    const std::map<MultiIndex, double>& entries() const { return entries_; }

    double at(const MultiIndex& idx) const;
    void add(const MultiIndex& idx, double value);

  private:
    int order_ = 0;
    BasisDim dim_ = 0;
    std::map<MultiIndex, double> entries_;
};

/// Full tensor scalar product <f, g> = sum over all n^k indices.
double inner(const SymmetricKernel& f, const SymmetricKernel& g);
double norm2(const SymmetricKernel& f);

double raw_inner(const RawTensor& a, const RawTensor& b);
double raw_norm2(const RawTensor& a);

/// Expands canonical storage into one entry per distinct permutation.
RawTensor expand(const SymmetricKernel& f);

/// Raw basis tensor e_{idx[0]} x ... x e_{idx[k-1]} (single entry 1).
RawTensor raw_basis(const MultiIndex& idx, BasisDim dim);

/// Symmetrization (1/k!) sum over permutations, in canonical storage.
/// When all entries over an orbit are bitwise equal the common value is kept
/// as-is, which makes symmetrizing an already-symmetric tensor exact.
SymmetricKernel symmetrize(const RawTensor& t);

/// A symmetric kernel is its own symmetrization.
inline SymmetricKernel symmetrize(const SymmetricKernel& f) { return f; }

/// Contraction a (x)_r b: sums the first r slots of each factor, yielding a
/// raw tensor of order (a.order - r) + (b.order - r). r = 0 is the tensor
/// product. For symmetric arguments any choice of slots is equivalent.
RawTensor contract(const RawTensor& a, const RawTensor& b, int r);
RawTensor contract(const SymmetricKernel& f, const SymmetricKernel& g, int r);

/// Symmetrized contraction f (~x)_r g.
SymmetricKernel contract_sym(const SymmetricKernel& f, const SymmetricKernel& g, int r);

}  // namespace chaoscalc
