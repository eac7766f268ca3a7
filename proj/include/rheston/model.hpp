#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace rheston {

/// Rough Heston model parameters. The variance process mean-reverts at speed
/// `gamma` towards `theta`, driven by a power-law kernel with exponent `alpha`;
/// `nu` is the vol-of-vol, `rho` the spot/variance correlation, `v0` the spot
/// variance. `r` is the (annualized) riskless rate; the log-price itself is a
/// martingale, so `r` enters pricing only through discounting.
struct ModelParams {
    double alpha = 0.62;
    double gamma = 0.1;
    double rho = -0.681;
    double theta = 0.3156;
    double nu = 0.331;
    double v0 = 0.0392;
    double r = 0.0;
};

inline void validate(const ModelParams& p) {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("model: " + msg); };
    if (!(p.alpha > 0.0 && p.alpha < 1.0)) fail("alpha must be in (0,1)");
    if (!(p.gamma > 0.0)) fail("gamma must be positive");
    if (!(p.rho > -1.0 && p.rho < 1.0)) fail("rho must be in (-1,1)");
    if (!(p.theta > 0.0)) fail("theta must be positive");
    if (!(p.nu > 0.0)) fail("nu must be positive");
    if (!(p.v0 > 0.0)) fail("v0 must be positive");
    if (!(p.r >= 0.0)) fail("r must be non-negative");
    for (double x : {p.alpha, p.gamma, p.rho, p.theta, p.nu, p.v0, p.r})
        if (!std::isfinite(x)) fail("non-finite parameter");
}

inline bool is_valid(const ModelParams& p) {
    try {
        validate(p);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

}  // namespace rheston
