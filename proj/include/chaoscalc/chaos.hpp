#pragma once

// Finite-dimensional Wiener chaos elements: finite sums F = sum_k I_k(f_k)
// of multiple integrals with symmetric kernels over an n-dimensional
// Gaussian space, evaluated pathwise through Hermite polynomials.

#include <Eigen/Dense>
#include <vector>

#include "chaoscalc/polynomial.hpp"
#include "chaoscalc/rng.hpp"
#include "chaoscalc/tensor.hpp"

namespace chaoscalc {

// One draw of the underlying i.i.d. standard Gaussian coordinates.
using GaussianSample = std::vector<double>;

// Pathwise value of I_k(f) at the sample g: for each canonical index the
// product of Hermite factors H_m(g_l), m the multiplicity of coordinate l,
// weighted by the orbit size of the index.
double eval_multiple_integral(const SymmetricKernel& f, const GaussianSample& g);

// A single chaos-decomposed random variable, stored level by level.
// Level 0 is the constant term; level k holds an order-k symmetric kernel.
class ChaosElement {
  public:
    explicit ChaosElement(BasisDim dim);

    BasisDim dim() const { return dim_; }
    int max_order() const { return static_cast<int>(kernels_.size()) - 1; }

    const SymmetricKernel& kernel(int k) const;
    void set_kernel(const SymmetricKernel& f);
    void set_constant(double c);
    double constant() const;

    // F += s * G, level by level.
    void add_scaled(const ChaosElement& other, double s);
    void scale(double s);

  private:
    BasisDim dim_;
    std::vector<SymmetricKernel> kernels_;  // kernels_[k] has order k
};

double eval(const ChaosElement& e, const GaussianSample& g);

// Exact polynomial form of the element in the Gaussian coordinates.
Polynomial to_polynomial(const ChaosElement& e);

// Chaos decomposition of a polynomial in nvars Gaussian coordinates.
// Inverse of to_polynomial.
ChaosElement from_polynomial(const Polynomial& p, BasisDim dim);

// Ornstein-Uhlenbeck generator: multiplies level k by -k (constants vanish).
ChaosElement ou_generator(const ChaosElement& e);

// Monte Carlo estimate of E[F^p] (or E[|F|^p] when absolute is set).
double sample_moments(const ChaosElement& e, int p, std::uint64_t m, Rng rng,
                      bool absolute = false);

// A vector of chaos elements sharing one Gaussian space.
class ChaosVector {
  public:
    explicit ChaosVector(int d);

    int d() const { return static_cast<int>(components_.size()); }
    BasisDim dim() const;

    const ChaosElement& component(int i) const;
    void set_component(int i, const ChaosElement& e);

  private:
    std::vector<ChaosElement> components_;
    BasisDim dim_ = -1;  // fixed by the first component that is set
};

std::vector<double> eval(const ChaosVector& F, const GaussianSample& g);

// Componentwise covariance from the kernels: C_ij = sum_k k! <f_ik, f_jk>.
Eigen::MatrixXd covariance_matrix(const ChaosVector& F);

// Componentwise image M F of the vector under a matrix with d columns.
ChaosVector linear_combine(const ChaosVector& F, const Eigen::MatrixXd& M);

}  // namespace chaoscalc
