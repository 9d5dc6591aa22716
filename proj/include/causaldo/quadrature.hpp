#pragma once

#include <cstddef>
#include <vector>

namespace causaldo {

/// Gauss-Hermite rule for expectations under the standard normal:
///   E[f(Z)] ~= sum_i weights[i] * f(nodes[i]),  Z ~ N(0, 1).
/// Weights sum to 1; nodes ascend. Exact for polynomials of degree < 2n.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Newton iteration on the orthonormal Hermite recurrence in long double.
/// Throws InvalidArgument for n == 0 or n > 512.
GaussHermiteRule gauss_hermite(std::size_t n);

}  // namespace causaldo
