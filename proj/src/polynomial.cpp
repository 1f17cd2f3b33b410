#include "chaoscalc/polynomial.hpp"

#include <cmath>
#include <sstream>

#include "chaoscalc/errors.hpp"

namespace chaoscalc {

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
    if (nvars < 0) throw RangeError("polynomial variable count must be >= 0");
}

void Polynomial::check_exponents(const std::vector<int>& exps) const {
    if (static_cast<int>(exps.size()) != nvars_)
        throw OrderMismatchError("exponent vector length does not match variable count");
    for (int e : exps)
        if (e < 0) throw RangeError("negative exponent");
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int total = 0;
        for (int v : e) total += v;
        if (total > d) d = total;
    }
    return d;
}

double Polynomial::coefficient(const std::vector<int>& exps) const {
    check_exponents(exps);
    auto it = terms_.find(exps);
    return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const std::vector<int>& exps, double coeff) {
    check_exponents(exps);
    double v = terms_[exps] + coeff;
    if (v == 0.0) {
        terms_.erase(exps);
    } else {
        terms_[exps] = v;
    }
}

double Polynomial::eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != nvars_)
        throw DimMismatchError("evaluation point has wrong dimension");
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c;
        for (int v = 0; v < nvars_; ++v) {
            for (int rep = 0; rep < e[v]; ++rep) t *= x[v];
        }
        s += t;
    }
    return s;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw RangeError("derivative variable out of range");
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        std::vector<int> d = e;
        d[var] -= 1;
        out.add_term(d, c * static_cast<double>(e[var]));
    }
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    if (other.nvars_ != nvars_) throw DimMismatchError("polynomial addition: variable mismatch");
    Polynomial out = *this;
    for (const auto& [e, c] : other.terms_) out.add_term(e, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    if (other.nvars_ != nvars_) throw DimMismatchError("polynomial subtraction: variable mismatch");
    Polynomial out = *this;
    for (const auto& [e, c] : other.terms_) out.add_term(e, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    if (other.nvars_ != nvars_)
        throw DimMismatchError("polynomial multiplication: variable mismatch");
    Polynomial out(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : other.terms_) {
            std::vector<int> e(nvars_);
            for (int v = 0; v < nvars_; ++v) e[v] = ea[v] + eb[v];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Polynomial& Polynomial::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

double Polynomial::coefficient_norm() const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) s += c * c;
    return std::sqrt(s);
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << (c >= 0 ? " + " : " - ");
        if (first && c < 0) os << "-";
        os << std::abs(c);
        for (int v = 0; v < nvars_; ++v) {
            if (e[v] == 0) continue;
            os << "*x" << (v + 1);
            if (e[v] > 1) os << "^" << e[v];
        }
        first = false;
    }
    return os.str();
}

}  // namespace chaoscalc
