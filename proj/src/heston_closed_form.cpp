#include "rheston/heston_closed_form.hpp"

#include <cmath>

namespace rheston {
namespace heston_closed_form {

namespace {

using Complex = std::complex<double>;

struct Coeffs {
    Complex b;      // gamma (i xi rho nu - 1)
    double a;       // (gamma nu)^2 / 2
    Complex d;      // sqrt(b^2 - 4 a c), Re d >= 0
    Complex r2;     // attracting root (-b - d) / (2a)
    Complex ratio;  // (b + d) / (b - d)
};

Coeffs coeffs(const ModelParams& p, Complex xi) {
    const Complex kI{0.0, 1.0};
    Coeffs c;
    c.b = p.gamma * (kI * xi * p.rho * p.nu - 1.0);
    c.a = 0.5 * (p.gamma * p.nu) * (p.gamma * p.nu);
    const Complex cc = -0.5 * (xi * xi + kI * xi);
    c.d = std::sqrt(c.b * c.b - 4.0 * c.a * cc);
    if (c.d.real() < 0.0) c.d = -c.d;
    c.r2 = (-c.b - c.d) / (2.0 * c.a);
    c.ratio = (c.b + c.d) / (c.b - c.d);
    return c;
}

}  // namespace

Complex h(const ModelParams& p, Complex xi, double t) {
    const Coeffs c = coeffs(p, xi);
    const Complex e = std::exp(-c.d * t);
    return c.r2 * (1.0 - e) / (1.0 - c.ratio * e);
}

Complex h_integral(const ModelParams& p, Complex xi, double t) {
    const Coeffs c = coeffs(p, xi);
    const Complex e = std::exp(-c.d * t);
    const Complex L = std::log(1.0 - c.ratio * e) - std::log(1.0 - c.ratio);
    return c.r2 * t - L / c.a;
}

Complex log_charfn(const ModelParams& p, Complex xi, double tau) {
    return p.gamma * p.theta * h_integral(p, xi, tau) + p.v0 * h(p, xi, tau);
}

}  // namespace heston_closed_form
}  // namespace rheston
