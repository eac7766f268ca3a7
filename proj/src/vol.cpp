#include "rheston/vol.hpp"

#include <algorithm>
#include <cmath>

namespace rheston {

namespace {

double ncdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double npdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::acos(-1.0)); }

}  // namespace

double bs_price(double spot, double strike, double T, double r, double sigma, OptionKind kind) {
    const double df = std::exp(-r * T);
    const double sq = sigma * std::sqrt(T);
    double call;
    if (sq <= 0.0) {
        call = std::max(spot - strike * df, 0.0);
    } else {
        const double d1 = (std::log(spot / strike) + (r + 0.5 * sigma * sigma) * T) / sq;
        const double d2 = d1 - sq;
        call = spot * ncdf(d1) - strike * df * ncdf(d2);
    }
    switch (kind) {
        case OptionKind::call: return call;
        case OptionKind::put: return call - spot + strike * df;
        case OptionKind::covered_call: return spot - call;
    }
    return call;
}

double bs_vega(double spot, double strike, double T, double r, double sigma) {
    const double sq = sigma * std::sqrt(T);
    if (sq <= 0.0) return 0.0;
    const double d1 = (std::log(spot / strike) + (r + 0.5 * sigma * sigma) * T) / sq;
    return spot * npdf(d1) * std::sqrt(T);
}

IVPoint implied_vol(double price, double spot, double strike, double T, double r,
                    OptionKind kind) {
    IVPoint pt;
    pt.log_moneyness = std::log(strike / spot);
    pt.maturity = T;

    // normalize to a call
    const double df = std::exp(-r * T);
    double call;
    switch (kind) {
        case OptionKind::call: call = price; break;
        case OptionKind::put: call = price + spot - strike * df; break;
        case OptionKind::covered_call: call = spot - price; break;
        default: call = price;
    }
    const double lo = std::max(spot - strike * df, 0.0);
    const double hi = spot;
    if (!(std::isfinite(call)) || call <= lo || call >= hi) {
        pt.reason = IVPoint::Reason::out_of_bounds;
        return pt;
    }
    const double otm = strike >= spot ? call : call - (spot - strike * df);  // OTM side value
    if (otm < 1e-12 * spot) {
        pt.reason = IVPoint::Reason::price_too_small;
        return pt;
    }

    const double tol = 1e-13 * spot;
    double sigma = 0.25;
    double a = 1e-6, b = 5.0;
    for (int it = 0; it < 100; ++it) {
        const double f = bs_price(spot, strike, T, r, sigma, OptionKind::call) - call;
        if (std::abs(f) < tol) break;
        if (f > 0.0)
            b = std::min(b, sigma);
        else
            a = std::max(a, sigma);
        const double v = bs_vega(spot, strike, T, r, sigma);
        double next = v > 1e-14 ? sigma - f / v : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - sigma) < 1e-16) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    pt.sigma = sigma;
    return pt;
}

PriceEstimate price_auto(const ModelParams& p, const OptionSpec& spec, const AutoPricer& cfg) {
    const LegChoice lc = select_leg(spec);
    std::optional<double> omega;
    if (cfg.tilt) omega = (lc.leg == Leg::call) ? -std::abs(*cfg.tilt) : std::abs(*cfg.tilt);
    SinhContour contour =
        choose_sinh_params(cfg.domain, lc.leg, lc.moneyness_sign, cfg.epsilon, cfg.k_d, omega);
    const TruncationBound tb = truncation_lambda(p, spec.maturity, contour.omega, cfg.epsilon,
                                                 spec.strike, contour.b, contour.zeta, true);
    contour.n_terms = std::max<std::size_t>(tb.n_terms, 4);
    return price_sinh(p, spec, contour, cfg.grid);
}

double atm_skew(const ModelParams& p, double spot, double T, double bump, const AutoPricer& cfg) {
    if (!(bump > 0.0)) throw std::invalid_argument("skew: bump must be positive");
    // ATM contour on the put strip serves both bumped strikes
    SinhContour contour = choose_sinh_params(cfg.domain, Leg::put, 0, cfg.epsilon, cfg.k_d,
                                             cfg.tilt ? std::optional<double>(std::abs(*cfg.tilt))
                                                      : std::nullopt);
    const TruncationBound tb =
        truncation_lambda(p, T, contour.omega, cfg.epsilon, spot, contour.b, contour.zeta, true);
    contour.n_terms = std::max<std::size_t>(tb.n_terms, 4);

    CharFnTable table(p, sinh_nodes(contour), TimeGrid::uniform(T, cfg.grid.m_steps),
                      cfg.grid.solver, cfg.grid.threads);
    const std::size_t t_idx = table.t_nodes().size() - 1;

    double sig[2];
    const double bumps[2] = {bump, -bump};
    for (int i = 0; i < 2; ++i) {
        OptionSpec s;
        s.spot = spot;
        s.strike = spot * std::exp(bumps[i]);
        s.maturity = T;
        s.kind = OptionKind::put;
        const PriceEstimate est = price_sinh_from_table(table, t_idx, s, contour);
        const IVPoint iv = implied_vol(est.value, spot, s.strike, T, p.r, OptionKind::put);
        if (!iv.available()) throw std::runtime_error("skew: implied vol unavailable at bump");
        sig[i] = *iv.sigma;
    }
    return (sig[0] - sig[1]) / (2.0 * bump);
}

std::vector<SurfacePoint> iv_surface(const ModelParams& p, double spot,
                                     const std::vector<double>& strikes,
                                     const std::vector<double>& maturities, std::size_t m_total,
                                     const AutoPricer& cfg) {
    if (strikes.empty() || maturities.empty())
        throw std::invalid_argument("surface: empty strike or maturity grid");
    const double t_max = *std::max_element(maturities.begin(), maturities.end());
    const TimeGrid grid = TimeGrid::uniform(t_max, m_total);

    // term counts are driven by the shortest maturity
    const double t_min = *std::min_element(maturities.begin(), maturities.end());

    struct LegTable {
        SinhContour contour;
        std::optional<CharFnTable> table;
    };
    LegTable put_leg, call_leg;
    bool need_put = false, need_call = false;
    for (double k : strikes) (k <= spot ? need_put : need_call) = true;

    auto build = [&](Leg leg, double sign) {
        std::optional<double> omega;
        if (cfg.tilt) omega = sign * std::abs(*cfg.tilt);
        SinhContour c = choose_sinh_params(cfg.domain, leg, leg == Leg::put ? -1 : +1, cfg.epsilon,
                                           cfg.k_d, omega);
        std::size_t n = 4;
        for (double k : strikes) {
            const TruncationBound tb =
                truncation_lambda(p, t_min, c.omega, cfg.epsilon, k, c.b, c.zeta, true);
            n = std::max(n, tb.n_terms);
        }
        c.n_terms = n;
        LegTable lt;
        lt.contour = c;
        lt.table.emplace(p, sinh_nodes(c), grid, cfg.grid.solver, cfg.grid.threads);
        return lt;
    };
    if (need_put) put_leg = build(Leg::put, +1.0);
    if (need_call) call_leg = build(Leg::call, -1.0);

    std::vector<SurfacePoint> out;
    out.reserve(strikes.size() * maturities.size());
    for (double T : maturities) {
        const std::size_t t_idx = put_leg.table ? put_leg.table->maturity_index(T)
                                                : call_leg.table->maturity_index(T);
        for (double k : strikes) {
            const bool put_side = k <= spot;
            const LegTable& lt = put_side ? put_leg : call_leg;
            OptionSpec s;
            s.spot = spot;
            s.strike = k;
            s.maturity = T;
            s.kind = put_side ? OptionKind::put : OptionKind::call;
            SurfacePoint pt;
            pt.strike = k;
            pt.maturity = T;
            pt.price = price_sinh_from_table(*lt.table, t_idx, s, lt.contour);
            pt.iv = implied_vol(pt.price.value, spot, k, T, p.r, s.kind);
            if (pt.price.flags.outside_no_arbitrage)
                pt.iv.reason = IVPoint::Reason::out_of_bounds;
            out.push_back(std::move(pt));
        }
    }
    return out;
}

}  // namespace rheston
