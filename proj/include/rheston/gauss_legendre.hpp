#pragma once

#include <cstddef>
#include <vector>

namespace rheston {

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on P_n,
/// converged to ~1e-15 and cached per order.
const Quadrature& gauss_legendre(std::size_t n);

/// Same rule mapped to (a, b).
Quadrature gauss_legendre(std::size_t n, double a, double b);

}  // namespace rheston
