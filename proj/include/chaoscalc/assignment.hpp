#pragma once

// Exact minimum-cost assignment on a square cost matrix, with the dual
// potentials exposed so callers can build optimality certificates.

#include <Eigen/Dense>
#include <vector>

namespace chaoscalc {

struct AssignmentResult {
    double cost;
    std::vector<int> row_to_col;
    // feasible potentials: u[i] + v[j] <= cost(i,j), tight on the matching,
    // so sum(u) + sum(v) certifies optimality by weak duality
    std::vector<double> u;
    std::vector<double> v;
};

// Shortest-augmenting-path solver (Jonker-Volgenant style), O(s^3).
AssignmentResult solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace chaoscalc
