#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>

#include "rheston/model.hpp"

namespace rheston {

/// Region where the characteristic function is assumed analytic: a horizontal
/// strip Im xi in (mu_minus, mu_plus) joined with a cone of half-angles
/// (gamma_minus, gamma_plus) around the real axis. Not proven for this model;
/// admissibility is checked at runtime (see bootstrap).
struct AnalyticityDomain {
    double mu_minus = -2.5;
    double mu_plus = 1.5;
    double gamma_minus = -0.4;
    double gamma_plus = 0.4;
};

void validate(const AnalyticityDomain& d);

enum class Leg { put, call, covered_call };

/// One leg of the sinh-deformed inversion: the contour
///   xi(y) = i omega1 + b sinh(i omega + y)
/// plus the trapezoid step zeta and the truncation index n_terms.
struct SinhContour {
    double omega1 = 0.0;
    double b = 1.0;
    double omega = 0.0;
    double zeta = 0.1;
    std::size_t n_terms = 0;
    Leg leg = Leg::put;

    std::complex<double> point(double y) const {
        return std::complex<double>(0.0, omega1) +
               b * std::sinh(std::complex<double>(0.0, omega) + y);
    }
    std::complex<double> dpoint(double y) const {
        return b * std::cosh(std::complex<double>(0.0, omega) + y);
    }
};

/// Step recommendation for a flat contour inside a strip of half-width d:
/// zeta = 2 d / ln(100/epsilon).
double choose_flat_step(double d, double epsilon);

/// Deformation parameters for one leg. The target strip is (0, mu_plus) for
/// puts, (mu_minus, -1) for calls, (-1, 0) for covered calls; the tilt omega
/// defaults to the leg's half-cone angle (moneyness_sign: -1 OTM put side,
/// +1 OTM call side, 0 ATM) and can be pinned explicitly. d = k_d * d0 with
/// d0 the angular margin to the cone boundary, and zeta = 2 pi d / ln(100/eps).
/// n_terms is left at 0; fill it with truncation_lambda.
SinhContour choose_sinh_params(const AnalyticityDomain& domain, Leg leg, int moneyness_sign,
                               double epsilon, double k_d = 0.9,
                               std::optional<double> omega_override = std::nullopt);

/// Truncation of the inversion sum from the decay bound
///   Re phi(xi, t) <= -min{ (G1(t)/2) cos(omega) y, G2(t) cos(2 omega) y^2 }.
struct TruncationBound {
    double kappa_inf = 0.0;
    double G1 = 0.0, G2 = 0.0;
    double E = 0.0;  // ln(C K / (pi epsilon)), C = 10
    double lambda01 = 0.0, lambda02 = 0.0;
    double lambda0 = 0.0;
    double lambda = 0.0;
    std::size_t n_terms = 0;
};

double decay_G1(const ModelParams& p, double t);
double decay_G2(const ModelParams& p, double t);

/// Solves the two truncation equations by damped Newton from 1 and converts
/// Lambda0 into a term count: n = ceil(ln(2 Lambda0/(K b)) / zeta) on a sinh
/// leg, n = ceil(Lambda0 / zeta) on a flat one.
TruncationBound truncation_lambda(const ModelParams& p, double t, double omega, double epsilon,
                                  double strike, double b, double zeta, bool sinh_leg = true);

/// Crude Hardy-norm estimate |f(i(omega+d))| + |f(i(omega-d))| used to sanity
/// check the "norm <= 100" assumption behind the step recommendation.
double hardy_proxy(const std::function<std::complex<double>(std::complex<double>)>& f,
                   double omega, double d);

struct NewtonFailure : std::runtime_error {
    double last_iterate;
    explicit NewtonFailure(double last)
        : std::runtime_error("truncation: Newton failed to converge"), last_iterate(last) {}
};

}  // namespace rheston
