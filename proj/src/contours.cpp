#include "rheston/contours.hpp"

#include <algorithm>
#include <cmath>

#include "rheston/charfn.hpp"

namespace rheston {

void validate(const AnalyticityDomain& d) {
    if (!(d.mu_minus < -1.0 && d.mu_plus > 0.0))
        throw std::invalid_argument("domain: need mu_minus < -1 < 0 < mu_plus");
    if (!(d.gamma_minus < 0.0 && d.gamma_minus > -std::acos(-1.0) / 2.0) ||
        !(d.gamma_plus > 0.0 && d.gamma_plus < std::acos(-1.0) / 2.0))
        throw std::invalid_argument("domain: cone angles must satisfy -pi/2 < gamma- < 0 < gamma+ < pi/2");
}

double choose_flat_step(double d, double epsilon) {
    if (!(d > 0.0)) throw std::invalid_argument("flat step: d must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("flat step: epsilon must be in (0,1)");
    return 2.0 * d / std::log(100.0 / epsilon);
}

SinhContour choose_sinh_params(const AnalyticityDomain& domain, Leg leg, int moneyness_sign,
                               double epsilon, double k_d, std::optional<double> omega_override) {
    validate(domain);
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("sinh params: epsilon must be in (0,1)");
    if (!(k_d > 0.0 && k_d < 1.0)) throw std::invalid_argument("sinh params: k_d must be in (0,1)");
    if (leg == Leg::put && moneyness_sign > 0)
        throw std::invalid_argument("sinh params: put leg prices the K <= S0 side");
    if (leg == Leg::call && moneyness_sign < 0)
        throw std::invalid_argument("sinh params: call leg prices the K >= S0 side");

    double lam_minus, lam_plus, omega;
    switch (leg) {
        case Leg::put:
            lam_minus = 0.0;
            lam_plus = domain.mu_plus;
            omega = domain.gamma_plus / 2.0;
            break;
        case Leg::call:
            lam_minus = domain.mu_minus;
            lam_plus = -1.0;
            omega = domain.gamma_minus / 2.0;
            break;
        case Leg::covered_call:
            lam_minus = -1.0;
            lam_plus = 0.0;
            omega = (moneyness_sign > 0 ? domain.gamma_minus : domain.gamma_plus) / 2.0;
            break;
    }
    if (moneyness_sign == 0) omega = (domain.gamma_minus + domain.gamma_plus) / 2.0;
    if (omega_override) omega = *omega_override;
    if (!(omega > domain.gamma_minus && omega < domain.gamma_plus))
        throw std::invalid_argument("sinh params: omega outside the cone");

    const double d0 = std::min(domain.gamma_plus - omega, omega - domain.gamma_minus);
    if (!(d0 > 0.0)) throw std::invalid_argument("sinh params: degenerate cone margin");
    const double d = k_d * d0;
    const double pi = std::acos(-1.0);

    SinhContour c;
    c.leg = leg;
    c.omega = omega;
    c.zeta = 2.0 * pi * d / std::log(100.0 / epsilon);
    const double denom = std::sin(omega + d) - std::sin(omega - d);
    c.b = (lam_plus - lam_minus) / denom;
    c.omega1 = (lam_minus * std::sin(omega + d) - lam_plus * std::sin(omega - d)) / denom;
    c.n_terms = 0;
    return c;
}

double decay_G1(const ModelParams& p, double t) {
    return kappa_infinity(p) *
           (p.theta * p.gamma * t + p.v0 * std::pow(t, 1.0 - p.alpha) / (1.0 - p.alpha));
}

double decay_G2(const ModelParams& p, double t) {
    return p.theta * p.gamma * std::pow(t, 1.0 + p.alpha) / (2.0 * std::tgamma(2.0 + p.alpha)) +
           p.v0 * t;
}

namespace {

// root of A y + s ln y - E on (0, inf), Newton from 1 with step damping
double newton_log_linear(double A, double s, double E) {
    double y = 1.0;
    for (int it = 0; it < 100; ++it) {
        const double f = A * y + s * std::log(y) - E;
        const double fp = A + s / y;
        double step = f / fp;
        double next = y - step;
        while (next <= 0.0) {
            step *= 0.5;
            next = y - step;
        }
        if (std::abs(next - y) <= 1e-14 * std::max(1.0, std::abs(next))) return next;
        y = next;
    }
    throw NewtonFailure(y);
}

}  // namespace

TruncationBound truncation_lambda(const ModelParams& p, double t, double omega, double epsilon,
                                  double strike, double b, double zeta, bool sinh_leg) {
    if (!(t > 0.0)) throw std::invalid_argument("truncation: t must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("truncation: epsilon must be positive");
    const double pi = std::acos(-1.0);

    TruncationBound tb;
    tb.kappa_inf = kappa_infinity(p);
    tb.G1 = decay_G1(p, t);
    tb.G2 = decay_G2(p, t);
    tb.E = std::log(10.0 * strike / (pi * epsilon));

    const double A = 0.5 * tb.G1 * std::cos(omega);
    tb.lambda01 = newton_log_linear(A, 1.0, tb.E);
    // quadratic branch solved in y1 = y^2
    const double B = tb.G2 * std::cos(2.0 * omega);
    tb.lambda02 = std::sqrt(newton_log_linear(B, 0.5, tb.E));
    tb.lambda0 = std::max(tb.lambda01, tb.lambda02);
    tb.lambda = sinh_leg ? std::log(2.0 * tb.lambda0 / (strike * b)) : tb.lambda0;
    tb.n_terms = static_cast<std::size_t>(std::max(1.0, std::ceil(tb.lambda / zeta)));
    return tb;
}

double hardy_proxy(const std::function<std::complex<double>(std::complex<double>)>& f,
                   double omega, double d) {
    const std::complex<double> up{0.0, omega + d};
    const std::complex<double> dn{0.0, omega - d};
    return std::abs(f(up)) + std::abs(f(dn));
}

}  // namespace rheston
