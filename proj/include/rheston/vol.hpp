#pragma once

#include <optional>
#include <vector>

#include "rheston/bootstrap.hpp"
#include "rheston/inversion.hpp"

namespace rheston {

double bs_price(double spot, double strike, double T, double r, double sigma, OptionKind kind);
double bs_vega(double spot, double strike, double T, double r, double sigma);

struct IVPoint {
    enum class Reason { ok, out_of_bounds, price_too_small };
    double log_moneyness = 0.0;
    double maturity = 0.0;
    std::optional<double> sigma;
    Reason reason = Reason::ok;

    bool available() const { return sigma.has_value(); }
};

/// Newton from sigma = 0.25 with a bisection fallback on [1e-6, 5];
/// residual target 1e-12 * spot. Prices outside the no-arbitrage bounds and
/// OTM prices below 1e-12 * spot get reason codes instead of a value.
IVPoint implied_vol(double price, double spot, double strike, double T, double r,
                    OptionKind kind);

/// Automatic sinh pricing of one OTM leg: contour from the domain defaults,
/// term count from the decay bound, characteristic function from the
/// configured solver.
struct AutoPricer {
    AnalyticityDomain domain{};
    double epsilon = 1e-6;
    double k_d = 0.9;
    std::optional<double> tilt;  // |omega|; sign follows the leg
    PricerGrid grid{};
};

PriceEstimate price_auto(const ModelParams& p, const OptionSpec& spec, const AutoPricer& cfg);

/// ATM implied-volatility slope in log-moneyness by central difference;
/// both bumped strikes are priced off one shared table so that the
/// quadrature bias cancels in the difference.
double atm_skew(const ModelParams& p, double spot, double T, double bump, const AutoPricer& cfg);

struct SurfacePoint {
    double strike = 0.0;
    double maturity = 0.0;
    PriceEstimate price;
    IVPoint iv;
};

/// Price/IV grid with the OTM leg split: one characteristic-function table
/// per leg spanning the whole maturity grid. Every maturity must be a node of
/// the uniform time grid with m_total steps.
std::vector<SurfacePoint> iv_surface(const ModelParams& p, double spot,
                                     const std::vector<double>& strikes,
                                     const std::vector<double>& maturities, std::size_t m_total,
                                     const AutoPricer& cfg);

}  // namespace rheston
