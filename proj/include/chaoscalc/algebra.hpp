#pragma once

// Algebraic dependence testing and the three-way absolute-continuity
// decision: expected Gram determinant, generic Jacobian rank, and
// annihilating-polynomial search, each computed by its own route.

#include <functional>
#include <optional>
#include <vector>

#include "chaoscalc/chaos.hpp"
#include "chaoscalc/polynomial.hpp"
#include "chaoscalc/rng.hpp"

namespace chaoscalc {

enum class Verdict { AC, NOT_AC };

// Generic rank of the d x n Jacobian of the system, as the maximum numerical
// rank over `trials` random Gaussian points. Singular values below 1e-8 of
// the largest are treated as zero.
int jacobian_rank(const std::vector<Polynomial>& P, int trials, Rng rng);

// Searches for a polynomial H with H(P_1,...,P_d) identically zero and
// degree at most degree_cap. Caps are escalated from 1 so that low-degree
// relations are found cheaply; at each cap the candidate is the smallest
// singular direction of the column-scaled evaluation matrix over all
// monomials up to the cap, accepted only when the smallest singular value is
// below 1e-8 of the largest and the candidate reproduces zero at 100 fresh
// Gaussian points within 1e-6 (1 + coefficient norm). Returns the verified
// candidate (unit coefficient norm), or nothing.
//
// Throws CapTooLargeError when the monomial count C(degree_cap + d, d)
// exceeds 20,000.
std::optional<Polynomial> find_annihilator(const std::vector<Polynomial>& P,
                                           int degree_cap, Rng rng);

struct DependenceVerdict {
    bool independent;
    int jacobian_rank;
    std::optional<Polynomial> witness;
};

// Runs the rank and annihilator routes together and checks they agree.
// Throws ContradictionError if rank says dependent but no witness verifies,
// or the other way round.
DependenceVerdict check_dependence(const std::vector<Polynomial>& P, int degree_cap,
                                   Rng rng);

// Samples det Gamma m times (m >= 10^4). NOT_AC when at least 99.9% of the
// determinants vanish under the scale-aware zero test, AC when at most 0.1%
// vanish and the mean clears 3 standard errors. A zero fraction in between
// is re-examined at a 10^4-times tighter threshold: a continuous determinant
// law sheds most of its near-zeros when the cutoff shrinks (the zeros are
// threshold leakage near a tangency of det Gamma, e.g. det = 4x^4 for the
// pair (x^2 - 1, xy)), while a degenerate law keeps them all. Leakage plus a
// significant mean resolves to AC; anything else throws MixedEvidenceError,
// since a genuine law admits no probabilistic middle ground.
Verdict absolute_continuity_verdict(const ChaosVector& F, std::uint64_t m, Rng rng);

struct Theorem31Report {
    Verdict verdict;
    int rank;
    int degree_cap;
    std::optional<Polynomial> witness;
};

// Runs all three criteria (determinant verdict, Jacobian rank, annihilator
// search with cap d * q^(d-1)) and asserts their agreement:
// NOT_AC <=> rank < d <=> witness found. Requires d <= 3, component orders
// <= 3 and at most 6 Gaussian coordinates to keep the search tractable.
// Throws ContradictionError when any pair of criteria disagrees.
Theorem31Report cross_check_theorem31(const ChaosVector& F, std::uint64_t m, Rng rng);

// Geometric grid from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, int npoints);

// Fits the slope of log P(|Q| <= alpha) against log alpha over the grid
// entries whose estimated probability lies in [10/m, 0.5]. The grid must
// span at least three decades. Throws DegenerateError when fewer than two
// grid entries are usable (in particular when Q is almost surely zero).
double small_ball_exponent(const std::function<double(Rng&)>& sampler,
                           const std::vector<double>& alphas, std::uint64_t m, Rng rng);
double small_ball_exponent(const ChaosElement& Q, const std::vector<double>& alphas,
                           std::uint64_t m, Rng rng);
// Small-ball slope of det Gamma(F).
double small_ball_exponent(const ChaosVector& F, const std::vector<double>& alphas,
                           std::uint64_t m, Rng rng);

}  // namespace chaoscalc
