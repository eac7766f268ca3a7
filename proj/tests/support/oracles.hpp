#pragma once

// Test-only reference implementations, kept independent of the library's
// solution paths: a classical RK4 integrator for the alpha = 1 Riccati ODE,
// dense trapezoid quadrature for payoff integrals, and frozen constants
// evaluated with an independent high-precision tool.

#include <complex>
#include <functional>
#include <vector>

#include "rheston/model.hpp"

namespace testsupport {

using Complex = std::complex<double>;

inline Complex riccati_rhs_ref(const rheston::ModelParams& p, Complex xi, Complex h) {
    const Complex i{0.0, 1.0};
    return -0.5 * (xi * xi + i * xi) + p.gamma * (i * xi * p.rho * p.nu - 1.0) * h +
           0.5 * (p.gamma * p.nu) * (p.gamma * p.nu) * h * h;
}

/// RK4 for h' = F(xi, h), h(0) = 0 (the alpha = 1 specialization).
inline Complex rk4_riccati(const rheston::ModelParams& p, Complex xi, double T,
                           std::size_t steps) {
    Complex h{0.0, 0.0};
    const double dt = T / double(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const Complex k1 = riccati_rhs_ref(p, xi, h);
        const Complex k2 = riccati_rhs_ref(p, xi, h + 0.5 * dt * k1);
        const Complex k3 = riccati_rhs_ref(p, xi, h + 0.5 * dt * k2);
        const Complex k4 = riccati_rhs_ref(p, xi, h + dt * k3);
        h += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return h;
}

/// Dense-trapezoid reference for int_a^b f, for small test integrals only.
inline double trapezoid_ref(const std::function<double(double)>& f, double a, double b,
                            std::size_t n) {
    double acc = 0.5 * (f(a) + f(b));
    for (std::size_t k = 1; k < n; ++k) acc += f(a + (b - a) * double(k) / double(n));
    return acc * (b - a) / double(n);
}

// Frozen reference values (30-digit arithmetic, independent implementation).
namespace frozen {
// -0.5 (xi^2 + i xi) t^alpha / Gamma(alpha+1) at alpha=0.62, xi=2, t=0.1
inline constexpr double kAsymptoticRe = -0.535499396502222168;
inline constexpr double kAsymptoticIm = -0.267749698251111084;
inline constexpr double kGamma162 = 0.8959236685188444;          // Gamma(1.62)
inline constexpr double kKappaInf = 22.1233660144761879;         // sqrt(1-rho^2)/(gamma nu), calibrated set
inline constexpr double kAtmTwoNMinusOne = 0.0796556745540580;   // 2 N(0.1) - 1
inline constexpr double kFlatStep = 0.103144939452022309;        // 2*0.475/ln(1e4)
inline constexpr double kTable3Zeta = 0.482210407120630168;      // 2 pi (0.9 pi/4)/ln(1e4)
inline constexpr double kTable3B = 0.769884521611183154;         // 1/(2 sin(0.9 pi/4))
inline constexpr double kHardyTwoE = 5.43656365691809047;        // 2e
}  // namespace frozen

}  // namespace testsupport
