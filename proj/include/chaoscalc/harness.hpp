#pragma once

// Scenario library and result emission: each scenario builds a concrete
// sequence of chaos vectors, samples it, estimates distances to the limit
// law, and checks the closed-form identities that the construction makes
// exact. Results serialize to CSV with a fixed column set.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chaoscalc/chaos.hpp"
#include "chaoscalc/distances.hpp"
#include "chaoscalc/tensor.hpp"

namespace chaoscalc {

struct ScenarioConfig {
    int t_max = 64;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    double gamma = 1.0 / 35.0;
    int bins = 0;  // 0 means pick by dimension
    int support_cap = 400;
};

// One CSV row. Optional fields serialize as empty cells; `settings` is a
// semicolon-separated key=value list carrying everything needed to re-run
// and re-check the step (seed, exact reference values, floor flags).
struct ResultRow {
    std::string scenario;
    int t = 0;
    std::uint64_t m = 0;
    std::optional<double> tv;
    std::optional<double> fm;
    std::optional<double> gamma;
    std::optional<double> ratio;
    std::string settings;
};

struct RunResult {
    std::vector<ResultRow> rows;
    std::vector<std::string> failures;  // one entry per violated scenario check
    bool ok = true;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;  // reported to stderr by the CLI, never in CSV
};

// m rows of eval(F, g) under the seeded stream. The row layout uses the same
// fixed block partition as the Monte Carlo loops, so the matrix is identical
// for any worker count.
EmpiricalLaw sample_law(const ChaosVector& F, std::uint64_t m, std::uint64_t seed);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);

// Bivariate central limit sequence: F_t = (I_1(e_0), I_2(g_t)) with
// g_t = (2t)^{-1/2} sum_{i=1}^{t} e_i (x) e_i, limit law N_2(0, I).
// Emits one row per t in {1, 2, 4, ..., t_max} with distances to the limit
// and the ratio tv / fm^gamma, and checks (tv shape checks need
// samples >= 2e4; below that the histogram floor drowns the signal):
//   - tv nonincreasing along the grid (slack 0.01),
//   - tv halves from t=1 to t=16 and quarters to t=64 when those steps exist,
//   - ratio max/median <= 10 over steps with fm above the noise floor,
//   - the Malliavin matrix converges: E||Gamma_t - diag(1,2)||_F^2 equals
//     8/t exactly, and the MC estimate matches within 4 standard errors.
RunResult scenario_peccati_tudor(const ScenarioConfig& cfg);

// Pair (I_2(f), I_2(g)) of second-chaos components: computes the covariance
// determinant exactly from the kernels, runs the sampling verdict, and checks
// they agree in both directions (det C > 0 iff AC). Also checks the expected
// Malliavin determinant bound E[det Gamma] >= 4 det C.
RunResult scenario_second_chaos_pair(const SymmetricKernel& f, const SymmetricKernel& g,
                                     std::uint64_t m, std::uint64_t seed);

// Vanishing-overlap sequence: F_t = (I_1(h_t), I_2(e_1 (x) e_1)) with
// h_t = sqrt(1 - w^2) e_0 + w e_1 and w = 1/t, limit (G, G'^2 - 1) with
// independent components (which is also the product of the marginals).
// Checks cov_of_squares(h_t, .) == 8/t^2 exactly, the disjoint variant == 0
// exactly, tv to the limit nonincreasing, and tv < 0.05 at the final step
// when t_max >= 64 and m >= 10^6.
RunResult scenario_pairwise_independent(const ScenarioConfig& cfg);

// Closed-form vs Monte Carlo invariant suite: isometry, cross-order
// orthogonality, both expected-det-Gamma closed forms, covariance of squares,
// and the Malliavin-matrix deviation of the central limit sequence. One row
// per check; a check passes when |mc - exact| <= 4 stderr + 1e-9.
RunResult verify_identities(std::uint64_t samples, std::uint64_t seed);

}  // namespace chaoscalc
