#pragma once

#include <complex>

#include "rheston/model.hpp"

namespace rheston {

/// Closed-form solution of the alpha = 1 (classical Heston) Riccati equation
///   h' = F(xi, h), h(0) = 0,
/// in the same parameterization as the fractional solver, together with the
/// log-characteristic function phi = gamma theta int_0^tau h + v0 h(tau).
/// Serves as the exact reference the alpha -> 1 limit of the time-stepped
/// solvers must reproduce.
namespace heston_closed_form {

std::complex<double> h(const ModelParams& p, std::complex<double> xi, double t);
std::complex<double> h_integral(const ModelParams& p, std::complex<double> xi, double t);
std::complex<double> log_charfn(const ModelParams& p, std::complex<double> xi, double tau);

}  // namespace heston_closed_form

}  // namespace rheston
