#pragma once

// Distance estimators between sampled laws: a histogram total-variation
// estimator and an exact-LP Fortet-Mourier estimator on subsampled supports,
// plus the ratio probe for the tv <= c * fm^gamma inequality.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace chaoscalc {

// A matrix of i.i.d. draws (one row per draw) with seed provenance. The seed
// identifies the sampling stream and keys subsample selection, so estimator
// calls are reproducible and symmetric in their arguments.
struct EmpiricalLaw {
    Eigen::MatrixXd points;
    std::uint64_t seed = 0;

    int dim() const { return static_cast<int>(points.cols()); }
    std::uint64_t size() const { return static_cast<std::uint64_t>(points.rows()); }
};

// Default histogram resolution per axis for each supported dimension.
int default_bins_for(int d);

// Half the L1 distance between histogram estimates on a shared grid covering
// the 0.5%-99.5% quantile box of the pooled sample, bins_per_dim cells per
// axis. Points outside the box land in the nearest edge cell, which keeps the
// cells a partition of the whole space; the estimate is a lower-bound-biased
// estimate of the true total variation and lies in [0, 1].
// Dimensions above 3 are refused (UnsupportedDimError).
double estimate_tv(const EmpiricalLaw& A, const EmpiricalLaw& B, int bins_per_dim);

struct FmEstimate {
    double value = 0.0;   // mean over repetitions
    double spread = 0.0;  // max minus min across repetitions
    int support = 0;      // points kept per law and repetition
    int reps = 0;
};

// Fortet-Mourier distance (sup over 1-Lipschitz functions bounded by 1) via
// the capped-metric transport dual, solved exactly as an assignment problem
// on equal-size subsampled supports and averaged over 5 repetitions.
// Subsample selection is keyed by each law's own seed, so the estimate is
// symmetric in its arguments. Values lie in [0, 2].
FmEstimate estimate_fm_detailed(const EmpiricalLaw& A, const EmpiricalLaw& B,
                                int support_cap);
double estimate_fm(const EmpiricalLaw& A, const EmpiricalLaw& B, int support_cap);

// Optimality certificate for one support pair: the assignment value is
// matched by an explicit feasible test function phi built from the dual
// potentials (a c-transform, recentered into [-1, 1]). Weak duality then
// pins the LP optimum from both sides.
struct FmCertificate {
    double primal_cost = 0.0;          // assignment value / s
    double dual_objective = 0.0;       // mean phi over A minus mean phi over B
    double lipschitz_violation = 0.0;  // max over pooled pairs of |dphi| - |dx|
    double box_violation = 0.0;        // max of |phi| - 1
};
FmCertificate certify_fm_on_supports(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

struct ProbeRow {
    int t = 0;
    double tv = 0.0;
    double fm = 0.0;
    double fm_spread = 0.0;
    double ratio = 0.0;  // tv / fm^gamma, 0 when fm is 0
    bool above_floor = false;
};

struct ProbeResult {
    std::vector<ProbeRow> rows;
    double fm_self = 0.0;         // fm between two halves of the limit sample
    double fm_self_spread = 0.0;  // its repetition spread
    int bins = 0;
    int support_cap = 0;
    double gamma = 0.0;
};

// Distances of each sequence element to the limit law, with the ratio
// tv_t / fm_t^gamma. A step counts as above the noise floor when its fm
// clears the self-distance of the limit sample (two halves against each
// other) by twice the combined repetition spread.
ProbeResult inequality_probe(const std::vector<EmpiricalLaw>& seq,
                             const EmpiricalLaw& limit, double gamma, int bins_per_dim,
                             int support_cap);

}  // namespace chaoscalc
