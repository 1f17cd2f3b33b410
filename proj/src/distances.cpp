#include "chaoscalc/distances.hpp"

#include <algorithm>
#include <cmath>

#include "chaoscalc/assignment.hpp"
#include "chaoscalc/errors.hpp"
#include "chaoscalc/rng.hpp"

namespace chaoscalc {

namespace {

void validate_pair(const EmpiricalLaw& A, const EmpiricalLaw& B) {
    if (A.dim() != B.dim())
        throw DimMismatchError("laws live in dimensions " + std::to_string(A.dim()) +
                               " and " + std::to_string(B.dim()));
    if (A.dim() > 3)
        throw UnsupportedDimError("distance estimators support dimensions 1 to 3, got " +
                                  std::to_string(A.dim()));
    if (A.size() == 0 || B.size() == 0) throw RangeError("law has no points");
}

// First s of a deterministic partial shuffle of 0..n-1.
std::vector<Eigen::Index> subsample_indices(Eigen::Index n, Eigen::Index s, Rng rng) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (s >= n) return idx;
    for (Eigen::Index i = 0; i < s; ++i) {
        auto j = i + static_cast<Eigen::Index>(rng.next_u64() %
                                               static_cast<std::uint64_t>(n - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(s));
    return idx;
}

double capped_distance(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return std::min((a - b).norm(), 2.0);
}

double fm_on_supports(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    auto s = A.rows();
    Eigen::MatrixXd cost(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = 0; j < s; ++j)
            cost(i, j) = capped_distance(A.row(i), B.row(j));
    return solve_assignment(cost).cost / static_cast<double>(s);
}

}  // namespace

int default_bins_for(int d) {
    switch (d) {
        case 1: return 200;
        case 2: return 60;
        case 3: return 24;
        default:
            throw UnsupportedDimError("no default grid beyond dimension 3, got " +
                                      std::to_string(d));
    }
}

double estimate_tv(const EmpiricalLaw& A, const EmpiricalLaw& B, int bins_per_dim) {
    validate_pair(A, B);
    if (bins_per_dim < 2) throw RangeError("need at least two bins per axis");
    int d = A.dim();

    // pooled quantile box per axis
    std::vector<double> lo(static_cast<std::size_t>(d)), wid(static_cast<std::size_t>(d));
    std::vector<double> pool(static_cast<std::size_t>(A.size() + B.size()));
    for (int j = 0; j < d; ++j) {
        std::size_t k = 0;
        for (Eigen::Index i = 0; i < A.points.rows(); ++i) pool[k++] = A.points(i, j);
        for (Eigen::Index i = 0; i < B.points.rows(); ++i) pool[k++] = B.points(i, j);
        std::sort(pool.begin(), pool.end());
        double n1 = static_cast<double>(pool.size() - 1);
        double qlo = pool[static_cast<std::size_t>(0.005 * n1)];
        double qhi = pool[static_cast<std::size_t>(std::ceil(0.995 * n1))];
        if (!(qhi > qlo)) {
            qlo -= 0.5;
            qhi += 0.5;
        }
        lo[static_cast<std::size_t>(j)] = qlo;
        wid[static_cast<std::size_t>(j)] = qhi - qlo;
    }

    std::size_t cells = 1;
    for (int j = 0; j < d; ++j) cells *= static_cast<std::size_t>(bins_per_dim);
    std::vector<double> pa(cells, 0.0), pb(cells, 0.0);
    auto deposit = [&](const Eigen::MatrixXd& pts, std::vector<double>& h) {
        double w = 1.0 / static_cast<double>(pts.rows());
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            std::size_t cell = 0;
            for (int j = 0; j < d; ++j) {
                double rel = (pts(i, j) - lo[static_cast<std::size_t>(j)]) /
                             wid[static_cast<std::size_t>(j)];
                auto b = static_cast<long>(std::floor(rel * bins_per_dim));
                b = std::clamp(b, 0L, static_cast<long>(bins_per_dim - 1));
                cell = cell * static_cast<std::size_t>(bins_per_dim) +
                       static_cast<std::size_t>(b);
            }
            h[cell] += w;
        }
    };
    deposit(A.points, pa);
    deposit(B.points, pb);
    double tv = 0.0;
    for (std::size_t c = 0; c < cells; ++c) tv += std::abs(pa[c] - pb[c]);
    return std::clamp(0.5 * tv, 0.0, 1.0);
}

FmEstimate estimate_fm_detailed(const EmpiricalLaw& A, const EmpiricalLaw& B,
                                int support_cap) {
    validate_pair(A, B);
    if (support_cap < 2) throw RangeError("support cap must be at least 2");
    auto s = std::min({static_cast<Eigen::Index>(support_cap), A.points.rows(),
                       B.points.rows()});
    const int reps = 5;
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int rep = 0; rep < reps; ++rep) {
        auto ia = subsample_indices(A.points.rows(), s,
                                    Rng(A.seed).child(static_cast<std::uint64_t>(rep)));
        auto ib = subsample_indices(B.points.rows(), s,
                                    Rng(B.seed).child(static_cast<std::uint64_t>(rep)));
        Eigen::MatrixXd sa(s, A.dim()), sb(s, B.dim());
        for (Eigen::Index i = 0; i < s; ++i) {
            sa.row(i) = A.points.row(ia[static_cast<std::size_t>(i)]);
            sb.row(i) = B.points.row(ib[static_cast<std::size_t>(i)]);
        }
        double v = fm_on_supports(sa, sb);
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    FmEstimate out;
    out.value = sum / reps;
    out.spread = hi - lo;
    out.support = static_cast<int>(s);
    out.reps = reps;
    return out;
}

double estimate_fm(const EmpiricalLaw& A, const EmpiricalLaw& B, int support_cap) {
    return estimate_fm_detailed(A, B, support_cap).value;
}

FmCertificate certify_fm_on_supports(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.cols() != B.cols()) throw DimMismatchError("supports live in different dimensions");
    if (A.rows() != B.rows() || A.rows() == 0)
        throw RangeError("supports must be nonempty and of equal size");
    auto s = A.rows();
    Eigen::MatrixXd cost(s, s);
    for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = 0; j < s; ++j)
            cost(i, j) = capped_distance(A.row(i), B.row(j));
    AssignmentResult res = solve_assignment(cost);

    // c-transform of the column potentials, then recenter into the box
    Eigen::VectorXd phiA(s), phiB(s);
    for (Eigen::Index i = 0; i < s; ++i) {
        double m = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < s; ++j)
            m = std::min(m, cost(i, j) - res.v[static_cast<std::size_t>(j)]);
        phiA(i) = m;
    }
    for (Eigen::Index l = 0; l < s; ++l) {
        double m = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < s; ++j)
            m = std::min(m, capped_distance(B.row(l), B.row(j)) -
                                res.v[static_cast<std::size_t>(j)]);
        phiB(l) = m;
    }
    double top = std::max(phiA.maxCoeff(), phiB.maxCoeff());
    double bot = std::min(phiA.minCoeff(), phiB.minCoeff());
    double center = 0.5 * (top + bot);
    phiA.array() -= center;
    phiB.array() -= center;

    FmCertificate cert;
    cert.primal_cost = res.cost / static_cast<double>(s);
    cert.dual_objective = (phiA.mean() - phiB.mean());
    cert.box_violation = std::max(0.0, std::max(phiA.cwiseAbs().maxCoeff(),
                                                phiB.cwiseAbs().maxCoeff()) - 1.0);
    double lip = 0.0;
    auto pair_violation = [&](const Eigen::RowVectorXd& x, double px,
                              const Eigen::RowVectorXd& y, double py) {
        lip = std::max(lip, std::abs(px - py) - (x - y).norm());
    };
    for (Eigen::Index i = 0; i < s; ++i) {
        for (Eigen::Index j = i + 1; j < s; ++j) {
            pair_violation(A.row(i), phiA(i), A.row(j), phiA(j));
            pair_violation(B.row(i), phiB(i), B.row(j), phiB(j));
        }
        for (Eigen::Index j = 0; j < s; ++j)
            pair_violation(A.row(i), phiA(i), B.row(j), phiB(j));
    }
    cert.lipschitz_violation = std::max(0.0, lip);
    return cert;
}

ProbeResult inequality_probe(const std::vector<EmpiricalLaw>& seq,
                             const EmpiricalLaw& limit, double gamma, int bins_per_dim,
                             int support_cap) {
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw RangeError("gamma must lie in (0, 1)");
    if (seq.empty()) throw RangeError("empty sequence");

    // noise floor: the limit sample split into halves against itself
    auto half = limit.points.rows() / 2;
    if (half < 2) throw RangeError("limit sample too small to split");
    Eigen::MatrixXd even(half, limit.dim()), odd(half, limit.dim());
    for (Eigen::Index i = 0; i < half; ++i) {
        even.row(i) = limit.points.row(2 * i);
        odd.row(i) = limit.points.row(2 * i + 1);
    }
    EmpiricalLaw le{std::move(even), limit.seed ^ 0x5555555555555555ull};
    EmpiricalLaw lo{std::move(odd), limit.seed ^ 0xAAAAAAAAAAAAAAAAull};
    FmEstimate self = estimate_fm_detailed(le, lo, support_cap);

    ProbeResult out;
    out.fm_self = self.value;
    out.fm_self_spread = self.spread;
    out.bins = bins_per_dim;
    out.support_cap = support_cap;
    out.gamma = gamma;
    int t = 1;
    for (const auto& law : seq) {
        ProbeRow row;
        row.t = t++;
        row.tv = estimate_tv(law, limit, bins_per_dim);
        FmEstimate fm = estimate_fm_detailed(law, limit, support_cap);
        row.fm = fm.value;
        row.fm_spread = fm.spread;
        row.above_floor =
            fm.value - self.value > 2.0 * (fm.spread + self.spread) && fm.value > 0.0;
        row.ratio = fm.value > 0.0 ? row.tv / std::pow(fm.value, gamma) : 0.0;
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace chaoscalc
