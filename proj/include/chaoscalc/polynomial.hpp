#pragma once

#include <map>
#include <string>
#include <vector>

namespace chaoscalc {

/// Sparse multivariate polynomial over a fixed number of variables.
/// Terms are keyed by exponent vectors (length == nvars); zero coefficients
/// are never stored, so is_zero() is a structural test.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(int nvars);

    int nvars() const { return nvars_; }
    const std::map<std::vector<int>, double>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Max total degree; -1 for the zero polynomial.
    int degree() const;

    double coefficient(const std::vector<int>& exps) const;
    void add_term(const std::vector<int>& exps, double coeff);

    double eval(const std::vector<double>& x) const;

    Polynomial derivative(int var) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial& operator*=(double s);

    /// L2 norm of the coefficient vector.
    double coefficient_norm() const;

    /// Human-readable rendering, e.g. "1.5*x1^2*x2 - 3*x2".
    std::string to_string() const;

  private:
    int nvars_ = 0;
    std::map<std::vector<int>, double> terms_;

    void check_exponents(const std::vector<int>& exps) const;
};

inline Polynomial operator*(Polynomial p, double s) {
    p *= s;
    return p;
}
inline Polynomial operator*(double s, Polynomial p) {
    p *= s;
    return p;
}

}  // namespace chaoscalc
