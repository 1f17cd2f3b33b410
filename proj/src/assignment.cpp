#include "chaoscalc/assignment.hpp"

#include <limits>

#include "chaoscalc/errors.hpp"

namespace chaoscalc {

AssignmentResult solve_assignment(const Eigen::MatrixXd& cost) {
    if (cost.rows() != cost.cols()) throw DimMismatchError("cost matrix must be square");
    int s = static_cast<int>(cost.rows());
    if (s < 1) throw RangeError("cost matrix must be nonempty");

    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; index 0 is the virtual unmatched column
    std::vector<double> u(static_cast<std::size_t>(s) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(s) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(s) + 1, 0);  // column -> row
    std::vector<int> way(static_cast<std::size_t>(s) + 1, 0);

    for (int i = 1; i <= s; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(s) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(s) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            int i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= s; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                             v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= s; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    AssignmentResult res;
    res.row_to_col.assign(static_cast<std::size_t>(s), -1);
    res.u.assign(static_cast<std::size_t>(s), 0.0);
    res.v.assign(static_cast<std::size_t>(s), 0.0);
    res.cost = 0.0;
    for (int j = 1; j <= s; ++j) {
        int i = match[static_cast<std::size_t>(j)];
        res.row_to_col[static_cast<std::size_t>(i - 1)] = j - 1;
        res.cost += cost(i - 1, j - 1);
        res.v[static_cast<std::size_t>(j - 1)] = v[static_cast<std::size_t>(j)];
    }
    for (int i = 1; i <= s; ++i) res.u[static_cast<std::size_t>(i - 1)] = u[static_cast<std::size_t>(i)];
    return res;
}

}  // namespace chaoscalc
