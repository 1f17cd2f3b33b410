#pragma once

// Malliavin derivatives of chaos vectors and the associated Gram matrix
// Gamma = (<DF_i, DF_j>)_ij, computed pathwise from the Jacobian of the
// polynomial representation.

#include <Eigen/Dense>
#include <vector>

#include "chaoscalc/chaos.hpp"
#include "chaoscalc/parallel.hpp"
#include "chaoscalc/polynomial.hpp"
#include "chaoscalc/rng.hpp"
#include "chaoscalc/tensor.hpp"

namespace chaoscalc {

// All partial derivatives of a chaos vector, held in two equivalent forms:
// as polynomials (differentiated termwise) and as chaos elements (each level
// k contributes k times the kernel with one slot pinned to a coordinate).
// The two routes are computed independently and must evaluate identically.
class MalliavinGradient {
  public:
    explicit MalliavinGradient(const ChaosVector& F);

    int d() const { return d_; }
    BasisDim dim() const { return dim_; }

    const Polynomial& partial_poly(int i, int j) const;
    const ChaosElement& partial_chaos(int i, int j) const;

    // d x dim Jacobian at a sample, through the polynomial view.
    Eigen::MatrixXd jacobian_at(const GaussianSample& g) const;
    // Same matrix through the chaos view; used for cross-checks.
    Eigen::MatrixXd jacobian_at_chaos(const GaussianSample& g) const;

  private:
    int d_;
    BasisDim dim_;
    std::vector<Polynomial> polys_;       // row-major, d_ * dim_
    std::vector<ChaosElement> elements_;  // same layout
};

// One pathwise Malliavin matrix A A^T.
struct GammaSample {
    Eigen::MatrixXd m;

    double det() const;
    double min_eigenvalue() const;
    double max_abs() const;
};

GammaSample gamma_at(const MalliavinGradient& grad, const GaussianSample& g);

// Determinant of the Gram matrix restricted to the first n_trunc coordinates.
// Nondecreasing in n_trunc, since it is a sum of squared maximal minors.
double truncated_gamma_det(const MalliavinGradient& grad, const GaussianSample& g,
                           int n_trunc);

// Whether the determinant vanishes relative to the matrix's own entry scale.
bool det_is_zero(const GammaSample& gs);

// Monte Carlo estimate of E[det Gamma].
MeanVar expected_det_gamma_mc(const ChaosVector& F, std::uint64_t m, Rng rng);

// Closed form of E[det Gamma] for the pair (I_1(f), I_k(g)), k >= 1:
// k k! (|f|^2 |g|^2 - |f x_1 g|^2).
double expected_det_gamma_first_chaos_pair(const SymmetricKernel& f,
                                           const SymmetricKernel& g);

// Closed form of E[det Gamma] for the pair (I_2(f), I_k(g)), k >= 2:
// 4kk! |f|^2 |g|^2 + 8(k-1)kk! |f x_1 g|^2 - 4k^2 k! |f sx_1 g|^2
//   - 4k(k-1)k! |f x_2 g|^2,
// where x_r is the r-fold contraction and sx_r its symmetrization.
double expected_det_gamma_second_chaos_pair(const SymmetricKernel& f,
                                            const SymmetricKernel& g);

// Cov(I_{k_i}(f_i)^2, I_{k_j}(f_j)^2) from the kernels:
//   k_i! k_j! sum_r C(k_i,r) C(k_j,r) |f_i x_r f_j|^2
//   + sum_r r!^2 C(k_i,r)^2 C(k_j,r)^2 (k_i+k_j-2r)! |f_i sx_r f_j|^2.
double cov_of_squares(const SymmetricKernel& fi, const SymmetricKernel& fj);

}  // namespace chaoscalc
