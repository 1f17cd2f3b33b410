#pragma once

#include <string>
#include <vector>

#include "chaoscalc/chaos.hpp"
#include "chaoscalc/polynomial.hpp"

namespace chaoscalc {

/// One tuple line inside a block: `tag i j ... : value`, e.g. `term 2 0 : 1.0`.
struct TupleLine {
    std::string tag;
    std::vector<int> indices;
    double value = 0.0;
    int line = 0;
};

/// Parsed form of the line-oriented config grammar:
///   - `#` starts a comment, blank lines are skipped
///   - `key = value` (scalar entry, duplicate keys in one block rejected)
///   - `tag ints... : real` (tuple line)
///   - `name {` opens a nested block, `}` closes it
/// Values stay strings until a typed getter is called, so the parser never
/// guesses what a field means.
struct ConfigBlock {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<TupleLine> tuples;
    std::vector<ConfigBlock> children;
    std::string source;
    int line = 0;

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key) const;
    double get_double(const std::string& key) const;

    int get_int_or(const std::string& key, int fallback) const;
    std::uint64_t get_uint_or(const std::string& key, std::uint64_t fallback) const;
    double get_double_or(const std::string& key, double fallback) const;

    /// Children with the given block name, in file order.
    std::vector<const ConfigBlock*> blocks(const std::string& name) const;
};

/// Parses config text. `source` names the input (file path or "inline") and
/// is included in error messages along with the 1-based line number.
ConfigBlock parse_config(const std::string& text, const std::string& source);
ConfigBlock parse_config_file(const std::string& path);

/// Builds a chaos vector from a config with a `dim` key and one `component`
/// block per coordinate. Each component is a polynomial in the Gaussian
/// coordinates, given by `term e1 ... en : coeff` lines (one exponent per
/// variable).
ChaosVector load_chaos_vector(const ConfigBlock& root);

struct PolynomialSystem {
    std::vector<Polynomial> polys;
    int degree_cap = 0;
};

/// Builds a polynomial system from a config with an `nvars` key and one
/// `polynomial` block per entry. `degree_cap` defaults to d * q^(d-1) where
/// d is the number of polynomials and q their max degree.
PolynomialSystem load_polynomial_system(const ConfigBlock& root);

}  // namespace chaoscalc
