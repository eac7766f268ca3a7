#include "rheston/inversion.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "rheston/gauss_legendre.hpp"

namespace rheston {

namespace {

constexpr Complex kI{0.0, 1.0};

Leg strip_class(double base_im) {
    // the contour crosses the imaginary axis once, at i * base_im; its class
    // is fixed by which side of the poles 0 and -i that crossing lies on
    const double tol = 1e-8;
    if (base_im > tol) return Leg::put;
    if (base_im < -1.0 - tol) return Leg::call;
    if (base_im < -tol && base_im > -1.0 + tol) return Leg::covered_call;
    throw std::invalid_argument("contour: integration line passes through a payoff pole");
}

double discounted(double r, double T) { return std::exp(-r * T); }

// characteristic function values at the node set for one maturity
struct NodeValues {
    std::vector<Complex> phi_exp;  // exp(phi) per node; unset where blown
    std::vector<char> ok;
    std::size_t blown = 0;
};

NodeValues eval_nodes(const ModelParams& p, const std::vector<Complex>& nodes, double T,
                      const PricerGrid& grid) {
    CharFnTable table(p, nodes, TimeGrid::uniform(T, grid.m_steps), grid.solver, grid.threads);
    NodeValues out;
    out.phi_exp.resize(nodes.size());
    out.ok.resize(nodes.size());
    const std::size_t t_idx = table.t_nodes().size() - 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out.ok[i] = table.node_ok(i) ? 1 : 0;
        if (out.ok[i])
            out.phi_exp[i] = std::exp(table.phi(i, t_idx));
        else
            ++out.blown;
    }
    return out;
}

NodeValues table_nodes(const CharFnTable& table, std::size_t t_idx) {
    NodeValues out;
    const std::size_t n = table.xi_nodes().size();
    out.phi_exp.resize(n);
    out.ok.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.ok[i] = table.node_ok(i) ? 1 : 0;
        if (out.ok[i])
            out.phi_exp[i] = std::exp(table.phi(i, t_idx));
        else
            ++out.blown;
    }
    return out;
}

void apply_bounds_flag(PriceEstimate& est, const OptionSpec& spec, double r) {
    if (!within_no_arbitrage(est.value, spec, r)) est.flags.outside_no_arbitrage = true;
}

}  // namespace

void validate(const OptionSpec& s) {
    if (!(s.spot > 0.0 && s.strike > 0.0 && s.maturity > 0.0))
        throw std::invalid_argument("option: spot, strike, maturity must be positive");
}

Complex payoff_transform(const OptionSpec& spec, Complex xi) {
    if (std::abs(xi) < 1e-8 || std::abs(xi + kI) < 1e-8)
        throw std::invalid_argument("payoff transform: xi too close to a pole");
    const double x = std::log(spec.spot / spec.strike);
    return -spec.strike * std::exp(kI * xi * x) / (xi * (xi + kI));
}

LegChoice select_leg(const OptionSpec& spec) {
    if (spec.strike < spec.spot) return {Leg::put, -1};
    if (spec.strike > spec.spot) return {Leg::call, +1};
    return {Leg::put, 0};
}

double lognormal_control_value(const OptionSpec& spec, double r, double sigma) {
    const double df = discounted(r, spec.maturity);
    const double sq = sigma * std::sqrt(spec.maturity);
    auto ncdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
    double call;
    if (sq <= 0.0) {
        call = df * std::max(spec.spot - spec.strike, 0.0);
    } else {
        const double d1 = (std::log(spec.spot / spec.strike) + 0.5 * sq * sq) / sq;
        const double d2 = d1 - sq;
        call = df * (spec.spot * ncdf(d1) - spec.strike * ncdf(d2));
    }
    switch (spec.kind) {
        case OptionKind::call: return call;
        case OptionKind::put: return call - df * (spec.spot - spec.strike);
        case OptionKind::covered_call: return df * spec.spot - call;
    }
    return call;
}

double strip_value_to_kind(double strip_value, Leg strip_leg, const OptionSpec& spec, double r) {
    const double df = discounted(r, spec.maturity);
    double call;
    switch (strip_leg) {
        case Leg::call: call = strip_value; break;
        case Leg::covered_call: call = strip_value + df * spec.spot; break;
        case Leg::put: call = strip_value + df * (spec.spot - spec.strike); break;
        default: throw std::logic_error("strip");
    }
    switch (spec.kind) {
        case OptionKind::call: return call;
        case OptionKind::put: return call - df * (spec.spot - spec.strike);
        case OptionKind::covered_call: return df * spec.spot - call;
    }
    return call;
}

bool within_no_arbitrage(double value, const OptionSpec& spec, double r) {
    if (!std::isfinite(value)) return false;
    const double df = discounted(r, spec.maturity);
    double lo = 0.0, hi = 0.0;
    switch (spec.kind) {
        case OptionKind::call:
            lo = std::max(df * (spec.spot - spec.strike), 0.0);
            hi = df * spec.spot;
            break;
        case OptionKind::put:
            lo = std::max(df * (spec.strike - spec.spot), 0.0);
            hi = df * spec.strike;
            break;
        case OptionKind::covered_call:
            lo = 0.0;
            hi = df * std::min(spec.spot, spec.strike);
            break;
    }
    return value >= lo && value <= hi;
}

std::vector<Complex> flat_nodes(double omega1, double zeta, std::size_t n_terms) {
    std::vector<Complex> nodes(n_terms + 1);
    for (std::size_t j = 0; j <= n_terms; ++j) nodes[j] = Complex(double(j) * zeta, omega1);
    return nodes;
}

std::vector<Complex> sinh_nodes(const SinhContour& contour) {
    std::vector<Complex> nodes(contour.n_terms + 1);
    for (std::size_t j = 0; j <= contour.n_terms; ++j)
        nodes[j] = contour.point(double(j) * contour.zeta);
    return nodes;
}

namespace {

PriceEstimate flat_sum(const NodeValues& vals, const std::vector<Complex>& nodes,
                       const OptionSpec& spec, double r, double omega1, double zeta,
                       std::size_t n_terms) {
    const Leg strip = strip_class(omega1);
    const double pi = std::acos(-1.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!vals.ok[j]) continue;
        const double w = (j == 0) ? 0.5 : 1.0;
        acc += w * (payoff_transform(spec, nodes[j]) * vals.phi_exp[j]).real();
    }
    const double strip_value = discounted(r, spec.maturity) * zeta / pi * acc;

    PriceEstimate est;
    est.method = "flat_ift";
    est.omega1 = omega1;
    est.zeta = zeta;
    est.n_terms = n_terms;
    est.n_evaluations = nodes.size();
    est.flags.blown_nodes = vals.blown;
    est.value = strip_value_to_kind(strip_value, strip, spec, r);
    apply_bounds_flag(est, spec, r);
    return est;
}

PriceEstimate sinh_sum(const NodeValues& vals, const SinhContour& c, const OptionSpec& spec,
                       double r) {
    const double base_im = c.omega1 + c.b * std::sin(c.omega);
    const Leg strip = strip_class(base_im);
    const double pi = std::acos(-1.0);
    double acc = 0.0;
    for (std::size_t j = 0; j <= c.n_terms; ++j) {
        if (!vals.ok[j]) continue;
        const double y = double(j) * c.zeta;
        const double w = (j == 0) ? 0.5 : 1.0;
        const Complex term = payoff_transform(spec, c.point(y)) * vals.phi_exp[j] * c.dpoint(y);
        acc += w * term.real();
    }
    const double strip_value = discounted(r, spec.maturity) * c.zeta / pi * acc;

    PriceEstimate est;
    est.method = "sinh";
    est.omega1 = c.omega1;
    est.b = c.b;
    est.omega = c.omega;
    est.zeta = c.zeta;
    est.n_terms = c.n_terms;
    est.n_evaluations = c.n_terms + 1;
    est.flags.blown_nodes = vals.blown;
    est.flags.rejected = vals.blown > 0;
    est.value = strip_value_to_kind(strip_value, strip, spec, r);
    apply_bounds_flag(est, spec, r);
    return est;
}

}  // namespace

PriceEstimate price_flat_ift(const ModelParams& p, const OptionSpec& spec, double omega1,
                             double zeta, std::size_t n_terms, const PricerGrid& grid) {
    validate(spec);
    const auto nodes = flat_nodes(omega1, zeta, n_terms);
    const NodeValues vals = eval_nodes(p, nodes, spec.maturity, grid);
    return flat_sum(vals, nodes, spec, p.r, omega1, zeta, n_terms);
}

PriceEstimate price_flat_from_table(const CharFnTable& table, std::size_t t_idx,
                                    const OptionSpec& spec, double omega1, double zeta,
                                    std::size_t n_terms) {
    const NodeValues vals = table_nodes(table, t_idx);
    OptionSpec s = spec;
    s.maturity = table.t_nodes()[t_idx];
    return flat_sum(vals, table.xi_nodes(), s, table.params().r, omega1, zeta, n_terms);
}

PriceEstimate price_sinh(const ModelParams& p, const OptionSpec& spec, const SinhContour& contour,
                         const PricerGrid& grid) {
    validate(spec);
    if (contour.n_terms < 1) throw std::invalid_argument("sinh: n_terms must be >= 1");
    // pole-distance admissibility: xi = 0 and xi = -i must stay off the curve
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= 4 * contour.n_terms; ++j) {
        const double y = double(j) * 0.25 * contour.zeta;
        for (double s : {-1.0, 1.0}) {
            const Complex z = contour.point(s * y);
            dist = std::min({dist, std::abs(z), std::abs(z + kI)});
        }
    }
    if (dist < 1e-3) throw std::invalid_argument("sinh: contour passes too close to a payoff pole");

    const auto nodes = sinh_nodes(contour);
    const NodeValues vals = eval_nodes(p, nodes, spec.maturity, grid);
    return sinh_sum(vals, contour, spec, p.r);
}

PriceEstimate price_sinh_from_table(const CharFnTable& table, std::size_t t_idx,
                                    const OptionSpec& spec, const SinhContour& contour) {
    const NodeValues vals = table_nodes(table, t_idx);
    OptionSpec s = spec;
    s.maturity = table.t_nodes()[t_idx];
    return sinh_sum(vals, contour, s, table.params().r);
}

PriceEstimate price_flat_ift_bm(const ModelParams& p, const OptionSpec& spec, double sigma0,
                                double omega1, double zeta, std::size_t n_terms,
                                const PricerGrid& grid) {
    validate(spec);
    if (std::abs(omega1) < 1e-6 || std::abs(omega1 + 1.0) < 1e-6)
        throw std::invalid_argument("flat bm: omega1 must avoid the removable singularities");
    const auto nodes = flat_nodes(omega1, zeta, n_terms);
    const NodeValues vals = eval_nodes(p, nodes, spec.maturity, grid);

    // martingale lognormal control: exponent vanishes at xi = 0 and xi = -i
    const double half_var = 0.5 * sigma0 * sigma0 * spec.maturity;
    auto phi_bm = [&](Complex xi) { return std::exp(-half_var * (xi * xi + kI * xi)); };

    const double pi = std::acos(-1.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!vals.ok[j]) continue;
        const double w = (j == 0) ? 0.5 : 1.0;
        const Complex diff = vals.phi_exp[j] - phi_bm(nodes[j]);
        acc += w * (payoff_transform(spec, nodes[j]) * diff).real();
    }
    const double correction = discounted(p.r, spec.maturity) * zeta / pi * acc;

    PriceEstimate est;
    est.method = "flat_ift_bm";
    est.omega1 = omega1;
    est.zeta = zeta;
    est.n_terms = n_terms;
    est.n_evaluations = nodes.size();
    est.flags.blown_nodes = vals.blown;
    est.value = lognormal_control_value(spec, p.r, sigma0) + correction;
    apply_bounds_flag(est, spec, p.r);
    return est;
}

PriceEstimate price_lewis(const ModelParams& p, const OptionSpec& spec, std::size_t n_gl,
                          const PricerGrid& grid) {
    validate(spec);
    if (n_gl < 2) throw std::invalid_argument("lewis: need at least 2 quadrature points");
    const Quadrature q = gauss_legendre(n_gl, 0.0, 1.0);
    std::vector<Complex> nodes(n_gl);
    std::vector<double> y(n_gl), jac(n_gl);
    for (std::size_t i = 0; i < n_gl; ++i) {
        y[i] = q.nodes[i] / (1.0 - q.nodes[i]);
        jac[i] = 1.0 / ((1.0 - q.nodes[i]) * (1.0 - q.nodes[i]));
        nodes[i] = Complex(y[i], -0.5);
    }
    const NodeValues vals = eval_nodes(p, nodes, spec.maturity, grid);

    const double pi = std::acos(-1.0);
    const double x = std::log(spec.spot / spec.strike);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_gl; ++i) {
        if (!vals.ok[i]) continue;
        const Complex num = std::exp(kI * y[i] * x) * vals.phi_exp[i];
        acc += q.weights[i] * jac[i] * num.real() / (y[i] * y[i] + 0.25);
    }
    const double strip_value = -std::sqrt(spec.spot * spec.strike) *
                               discounted(p.r, spec.maturity) / pi * acc;

    PriceEstimate est;
    est.method = "lewis";
    est.omega1 = -0.5;
    est.n_terms = n_gl;
    est.n_evaluations = n_gl;
    est.flags.blown_nodes = vals.blown;
    est.value = strip_value_to_kind(strip_value, Leg::covered_call, spec, p.r);
    apply_bounds_flag(est, spec, p.r);
    return est;
}

PriceEstimate price_cos(const ModelParams& p, const OptionSpec& spec, double L,
                        std::size_t n_terms, const PricerGrid& grid, bool direct_call) {
    validate(spec);
    if (!(L > 0.0)) throw std::invalid_argument("cos: L must be positive");
    if (n_terms < 2) throw std::invalid_argument("cos: need at least 2 terms");

    const double a = -L * std::sqrt(spec.maturity);
    const double b = +L * std::sqrt(spec.maturity);
    const double width = b - a;
    const double pi = std::acos(-1.0);

    std::vector<Complex> nodes(n_terms);
    for (std::size_t k = 0; k < n_terms; ++k) nodes[k] = Complex(double(k) * pi / width, 0.0);
    const NodeValues vals = eval_nodes(p, nodes, spec.maturity, grid);

    const double kappa = std::log(spec.strike / spec.spot);
    auto chi = [&](double uk, double c, double d) {
        const double s = 1.0 + uk * uk;
        return (std::cos(uk * (d - a)) * std::exp(d) - std::cos(uk * (c - a)) * std::exp(c) +
                uk * (std::sin(uk * (d - a)) * std::exp(d) - std::sin(uk * (c - a)) * std::exp(c))) /
               s;
    };
    auto psi = [&](double uk, double c, double d) {
        if (uk == 0.0) return d - c;
        return (std::sin(uk * (d - a)) - std::sin(uk * (c - a))) / uk;
    };

    double acc = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k) {
        if (!vals.ok[k]) continue;
        const double uk = nodes[k].real();
        double coeff;
        if (direct_call) {
            const double c = std::min(std::max(kappa, a), b);
            coeff = (2.0 / width) * (spec.spot * chi(uk, c, b) - spec.strike * psi(uk, c, b));
        } else {
            const double d = std::max(std::min(kappa, b), a);
            coeff = (2.0 / width) * (spec.strike * psi(uk, a, d) - spec.spot * chi(uk, a, d));
        }
        const double w = (k == 0) ? 0.5 : 1.0;
        acc += w * (vals.phi_exp[k] * std::exp(-kI * uk * a)).real() * coeff;
    }
    const double df = discounted(p.r, spec.maturity);
    const double expanded = df * acc;  // put value unless direct_call
    const double call = direct_call ? expanded
                                    : expanded + df * (spec.spot - spec.strike);

    PriceEstimate est;
    est.method = "cos";
    est.zeta = pi / width;
    est.n_terms = n_terms;
    est.n_evaluations = n_terms;
    est.flags.blown_nodes = vals.blown;
    switch (spec.kind) {
        case OptionKind::call: est.value = call; break;
        case OptionKind::put: est.value = call - df * (spec.spot - spec.strike); break;
        case OptionKind::covered_call: est.value = df * spec.spot - call; break;
    }
    apply_bounds_flag(est, spec, p.r);
    return est;
}

std::vector<PriceEstimate> price_cm_fft(const ModelParams& p, std::vector<OptionSpec> specs,
                                        double omega1, double zeta, std::size_t m_fft,
                                        StrikeInterp interp, const PricerGrid& grid) {
    if (specs.empty()) return {};
    for (const auto& s : specs) validate(s);
    const double T = specs.front().maturity;
    const double S0 = specs.front().spot;
    for (const auto& s : specs)
        if (s.maturity != T || s.spot != S0)
            throw std::invalid_argument("fft batch: one maturity and spot per batch");
    if (m_fft < 4) throw std::invalid_argument("fft batch: grid too small");

    const Leg strip = strip_class(omega1);
    const double pi = std::acos(-1.0);
    const double dx = 2.0 * pi / (double(m_fft) * zeta);  // Nyquist relation

    const auto nodes = flat_nodes(omega1, zeta, m_fft - 1);
    const NodeValues vals = eval_nodes(p, nodes, T, grid);

    OptionSpec probe = specs.front();  // payoff transform at unit strike, x folded in below
    probe.strike = 1.0;
    probe.spot = 1.0;

    std::vector<Complex> in(m_fft, Complex{0.0, 0.0}), out(m_fft);
    const double x_min = -0.5 * double(m_fft) * dx;
    for (std::size_t j = 0; j < m_fft; ++j) {
        if (!vals.ok[j]) continue;
        const double w = (j == 0) ? 0.5 : 1.0;
        const Complex xi = nodes[j];
        // -1/(xi(xi+i)) * Phi, with the e^{i xi x} phase split into the FFT
        // kernel e^{i j zeta m dx} and the residual e^{i j zeta x_min}
        in[j] = w * (-1.0) / (xi * (xi + kI)) * vals.phi_exp[j] *
                std::exp(kI * (double(j) * zeta) * x_min);
    }
    fftw_plan plan = fftw_plan_dft_1d(int(m_fft), reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    const double df = discounted(p.r, T);
    std::vector<double> grid_value(m_fft);  // strip value at x_m = ln(S0/K_m)
    for (std::size_t m = 0; m < m_fft; ++m) {
        const double x = x_min + double(m) * dx;
        const double strike = S0 * std::exp(-x);
        grid_value[m] = df * zeta / pi * strike * std::exp(-omega1 * x) * out[m].real();
    }

    auto interpolate = [&](double x) {
        const double pos = (x - x_min) / dx;
        const std::ptrdiff_t i0 = std::ptrdiff_t(std::floor(pos));
        if (i0 < 1 || std::size_t(i0) + 2 >= m_fft)
            throw std::invalid_argument("fft batch: strike outside the log-strike grid");
        const double f = pos - double(i0);
        if (interp == StrikeInterp::linear)
            return (1.0 - f) * grid_value[i0] + f * grid_value[i0 + 1];
        // Catmull-Rom through the four surrounding grid values
        const double m0 = grid_value[i0 - 1], m1 = grid_value[i0], m2 = grid_value[i0 + 1],
                     m3 = grid_value[i0 + 2];
        return m1 + 0.5 * f *
                        (m2 - m0 +
                         f * (2.0 * m0 - 5.0 * m1 + 4.0 * m2 - m3 +
                              f * (3.0 * (m1 - m2) + m3 - m0)));
    };

    std::vector<PriceEstimate> result;
    result.reserve(specs.size());
    for (const auto& s : specs) {
        PriceEstimate est;
        est.method = "cm_fft";
        est.omega1 = omega1;
        est.zeta = zeta;
        est.n_terms = m_fft;
        est.n_evaluations = m_fft;
        est.flags.blown_nodes = vals.blown;
        const double x = std::log(S0 / s.strike);
        est.value = strip_value_to_kind(interpolate(x), strip, s, p.r);
        apply_bounds_flag(est, s, p.r);
        result.push_back(est);
    }
    return result;
}

}  // namespace rheston
