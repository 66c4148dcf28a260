#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qnehari {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [a, b] (Newton iteration on P_n).
QuadratureRule gauss_legendre(std::size_t n, double a = -1.0, double b = 1.0);

/// Pairwise (cascade) summation; fixed reduction order.
double pairwise_sum(std::span<const double> values);

}  // namespace qnehari
