#include "rheston/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rheston {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Rhs {
    Complex c0;  // -(xi^2 + i xi)/2
    Complex c1;  // gamma (i xi rho nu - 1)
    double c2;   // (gamma nu)^2 / 2

    Complex operator()(Complex h) const { return c0 + (c1 + c2 * h) * h; }

    static Rhs make(const ModelParams& p, Complex xi) {
        Rhs f;
        f.c0 = -0.5 * (xi * xi + kI * xi);
        f.c1 = p.gamma * (kI * xi * p.rho * p.nu - 1.0);
        f.c2 = 0.5 * (p.gamma * p.nu) * (p.gamma * p.nu);
        return f;
    }
};

bool diverged(Complex h, double xi_abs, double scale) {
    const double m = std::abs(h);
    return !std::isfinite(m) || m > scale * (1.0 + xi_abs);
}

RiccatiTrajectory::Status classify(Complex h) {
    // a trajectory diving to Re h -> -inf "blows down"; anything else "blows up"
    return (std::isfinite(h.real()) && h.real() < 0.0) ? RiccatiTrajectory::Status::blow_down
                                                       : RiccatiTrajectory::Status::blow_up;
}

}  // namespace

Complex riccati_rhs(const ModelParams& p, Complex xi, Complex h) {
    return Rhs::make(p, xi)(h);
}

Complex asymptotic_h(const ModelParams& p, Complex xi, double t) {
    if (t <= 0.0) return {0.0, 0.0};
    return -0.5 * (xi * xi + kI * xi) * std::pow(t, p.alpha) / std::tgamma(p.alpha + 1.0);
}

AdamsWeights::AdamsWeights(double alpha, const TimeGrid& grid) : alpha_(alpha), nodes_(grid.nodes) {
    validate(grid);
    for (std::size_t j = 1; j < nodes_.size(); ++j)
        if (nodes_[j] == nodes_[j - 1]) throw std::invalid_argument("weights: duplicate grid nodes");
    uniform_ = grid.is_uniform();
    if (uniform_) {
        const std::size_t m = steps();
        dt_ = nodes_[1];
        const double w = std::pow(dt_, alpha_) / std::tgamma(alpha_ + 2.0);
        last_ = w;
        interior_.resize(m);
        first_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double d = double(i);
            interior_[i] = w * (std::pow(d + 2.0, alpha_ + 1.0) + std::pow(d, alpha_ + 1.0) -
                                2.0 * std::pow(d + 1.0, alpha_ + 1.0));
            first_[i] = w * (std::pow(d, alpha_ + 1.0) - (d - alpha_) * std::pow(d + 1.0, alpha_));
        }
    }
}

double AdamsWeights::last(std::size_t k) const {
    if (uniform_) return last_;
    return std::pow(nodes_[k + 1] - nodes_[k], alpha_) / std::tgamma(alpha_ + 2.0);
}

void AdamsWeights::corrector_row(std::size_t k, std::vector<double>& out) const {
    out.resize(k + 1);
    if (uniform_) {
        out[0] = first_[k];
        for (std::size_t j = 1; j <= k; ++j) out[j] = interior_[k - j];
        return;
    }
    const double g2 = std::tgamma(alpha_ + 2.0);
    const double tk1 = nodes_[k + 1];
    {
        // hat function at t_0 supported on [t_0, t_1]
        const double u = tk1 - nodes_[1];
        out[0] = (alpha_ * std::pow(tk1, alpha_ + 1.0) - (alpha_ + 1.0) * u * std::pow(tk1, alpha_) +
                  std::pow(u, alpha_ + 1.0)) /
                 (g2 * nodes_[1]);
    }
    for (std::size_t j = 1; j <= k; ++j) {
        const double dl = nodes_[j] - nodes_[j - 1];
        const double dr = nodes_[j + 1] - nodes_[j];
        out[j] = (std::pow(tk1 - nodes_[j - 1], alpha_ + 1.0) / dl +
                  std::pow(tk1 - nodes_[j + 1], alpha_ + 1.0) / dr -
                  std::pow(tk1 - nodes_[j], alpha_ + 1.0) * (1.0 / dl + 1.0 / dr)) /
                 g2;
    }
}

void AdamsWeights::predictor_row(std::size_t k, std::vector<double>& out) const {
    out.resize(k + 1);
    const double g1 = std::tgamma(alpha_ + 1.0);
    const double tk1 = nodes_[k + 1];
    for (std::size_t j = 0; j <= k; ++j)
        out[j] = (std::pow(tk1 - nodes_[j], alpha_) - std::pow(tk1 - nodes_[j + 1], alpha_)) / g1;
}

double AdamsWeights::predictor_first() const {
    return std::pow(nodes_[1] - nodes_[0], alpha_) / std::tgamma(alpha_ + 1.0);
}

Complex AdamsWeights::history_dot(std::size_t k, const Complex* vals,
                                  std::vector<double>& scratch) const {
    if (uniform_) {
        double re = first_[k] * vals[0].real();
        double im = first_[k] * vals[0].imag();
        const double* ker = interior_.data();
        for (std::size_t j = 1; j <= k; ++j) {
            const double a = ker[k - j];
            re += a * vals[j].real();
            im += a * vals[j].imag();
        }
        return {re, im};
    }
    corrector_row(k, scratch);
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
        re += scratch[j] * vals[j].real();
        im += scratch[j] * vals[j].imag();
    }
    return {re, im};
}

namespace {

RiccatiTrajectory solve_standard_impl(const ModelParams& p, Complex xi, const TimeGrid& grid,
                                      const SolverConfig& cfg) {
    const std::size_t m = grid.steps();
    const Rhs F = Rhs::make(p, xi);
    const AdamsWeights w(p.alpha, grid);
    const double xi_abs = std::abs(xi);

    RiccatiTrajectory tr;
    tr.xi = xi;
    tr.values.assign(m + 1, {0.0, 0.0});
    tr.rhs_values.assign(m + 1, {0.0, 0.0});
    tr.rhs_values[0] = F(0.0);

    std::vector<double> scratch, brow;
    for (std::size_t k = 0; k < m; ++k) {
        w.predictor_row(k, brow);
        Complex pred{0.0, 0.0};
        for (std::size_t j = 0; j <= k; ++j) pred += brow[j] * tr.rhs_values[j];
        const Complex h0 = w.history_dot(k, tr.rhs_values.data(), scratch);
        const double a_end = w.last(k);
        Complex h = h0 + a_end * F(pred);
        for (std::size_t it = 1; it < cfg.n_iter; ++it) h = h0 + a_end * F(h);
        if (diverged(h, xi_abs, cfg.blowup_scale)) {
            tr.status = classify(h);
            tr.fail_node = k + 1;
            tr.values.resize(k + 1);
            tr.rhs_values.resize(k + 1);
            return tr;
        }
        tr.values[k + 1] = h;
        tr.rhs_values[k + 1] = F(h);
    }
    return tr;
}

RiccatiTrajectory solve_mod1_impl(const ModelParams& p, Complex xi, const TimeGrid& grid,
                                  const SolverConfig& cfg) {
    const std::size_t m = grid.steps();
    const Rhs F = Rhs::make(p, xi);
    const AdamsWeights w(p.alpha, grid);
    const double xi_abs = std::abs(xi);

    RiccatiTrajectory tr;
    tr.xi = xi;
    tr.values.assign(m + 1, {0.0, 0.0});
    tr.rhs_values.assign(m + 1, {0.0, 0.0});
    tr.rhs_values[0] = F(0.0);

    std::vector<double> scratch;
    bool asymptotic_phase = true;
    for (std::size_t k = 0; k < m; ++k) {
        if (asymptotic_phase && std::abs(tr.values[k]) > cfg.switch_c * xi_abs)
            asymptotic_phase = false;
        const Complex seed =
            asymptotic_phase ? asymptotic_h(p, xi, grid.nodes[k + 1]) : tr.values[k];
        const Complex h0 = w.history_dot(k, tr.rhs_values.data(), scratch);
        const double a_end = w.last(k);
        Complex h = h0 + a_end * F(seed);
        for (std::size_t it = 0; it < cfg.n_iter; ++it) h = h0 + a_end * F(h);
        if (diverged(h, xi_abs, cfg.blowup_scale)) {
            tr.status = classify(h);
            tr.fail_node = k + 1;
            tr.values.resize(k + 1);
            tr.rhs_values.resize(k + 1);
            return tr;
        }
        tr.values[k + 1] = h;
        tr.rhs_values[k + 1] = F(h);
    }
    return tr;
}

// mod2 evolves the remainder h1 = h - h_as with the forcing term removed:
//   F_as1(h_as, h1) = c1 (h_as + h1) + c2 (h_as + h1)^2.
// mod3 runs the same recursion on the (1+|xi|)-rescaled unknown, which turns
// c2 into (1+|xi|) c2 in the rescaled variables.
RiccatiTrajectory solve_remainder_impl(const ModelParams& p, Complex xi, const TimeGrid& grid,
                                       const SolverConfig& cfg, bool rescale) {
    const std::size_t m = grid.steps();
    const Rhs F = Rhs::make(p, xi);
    const AdamsWeights w(p.alpha, grid);
    const double xi_abs = std::abs(xi);
    const double scale = rescale ? 1.0 + xi_abs : 1.0;

    const Complex q1 = F.c1;
    const double q2 = F.c2 * scale;  // acts on rescaled totals
    auto F_res = [&](Complex total) { return (q1 + q2 * total) * total; };

    RiccatiTrajectory tr;
    tr.xi = xi;
    tr.values.assign(m + 1, {0.0, 0.0});
    tr.rhs_values.assign(m + 1, {0.0, 0.0});
    tr.rhs_values[0] = F(0.0);

    std::vector<Complex> h1(m + 1, Complex{0.0, 0.0});   // rescaled remainder
    std::vector<Complex> fres(m + 1, Complex{0.0, 0.0});  // F_res at rescaled totals
    std::vector<Complex> has(m + 1, Complex{0.0, 0.0});   // rescaled asymptote
    std::vector<double> scratch;

    for (std::size_t k = 0; k < m; ++k) {
        has[k + 1] = asymptotic_h(p, xi, grid.nodes[k + 1]) / scale;
        const Complex h0 = w.history_dot(k, fres.data(), scratch);
        const double a_end = w.last(k);
        // seed with the previous node, then fixed-point sweeps at the new one
        Complex next = h0 + a_end * F_res(has[k] + h1[k]);
        for (std::size_t it = 0; it < cfg.n_iter; ++it)
            next = h0 + a_end * F_res(has[k + 1] + next);
        h1[k + 1] = next;
        fres[k + 1] = F_res(has[k + 1] + next);
        const Complex h = scale * (has[k + 1] + next);
        if (diverged(h, xi_abs, cfg.blowup_scale)) {
            tr.status = classify(h);
            tr.fail_node = k + 1;
            tr.values.resize(k + 1);
            tr.rhs_values.resize(k + 1);
            return tr;
        }
        tr.values[k + 1] = h;
        tr.rhs_values[k + 1] = F(h);
    }
    return tr;
}

}  // namespace

RiccatiTrajectory solve_riccati(const ModelParams& p, Complex xi, const TimeGrid& grid,
                                const SolverConfig& cfg) {
    validate(grid);
    if (cfg.n_iter < 1) throw std::invalid_argument("solver: n_iter must be >= 1");
    switch (cfg.scheme) {
        case RiccatiScheme::standard: return solve_standard_impl(p, xi, grid, cfg);
        case RiccatiScheme::mod1: return solve_mod1_impl(p, xi, grid, cfg);
        case RiccatiScheme::mod2: return solve_remainder_impl(p, xi, grid, cfg, false);
        case RiccatiScheme::mod3: return solve_remainder_impl(p, xi, grid, cfg, true);
    }
    throw std::logic_error("solver: unknown scheme");
}

RiccatiTrajectory solve_standard(const ModelParams& p, Complex xi, const TimeGrid& grid,
                                 std::size_t n_corrector) {
    SolverConfig cfg;
    cfg.scheme = RiccatiScheme::standard;
    cfg.n_iter = n_corrector;
    return solve_riccati(p, xi, grid, cfg);
}

RiccatiTrajectory solve_mod1(const ModelParams& p, Complex xi, const TimeGrid& grid,
                             std::size_t n_iter, double c) {
    SolverConfig cfg;
    cfg.scheme = RiccatiScheme::mod1;
    cfg.n_iter = n_iter;
    cfg.switch_c = c;
    return solve_riccati(p, xi, grid, cfg);
}

RiccatiTrajectory solve_mod2(const ModelParams& p, Complex xi, const TimeGrid& grid,
                             std::size_t n_iter) {
    SolverConfig cfg;
    cfg.scheme = RiccatiScheme::mod2;
    cfg.n_iter = n_iter;
    return solve_riccati(p, xi, grid, cfg);
}

RiccatiTrajectory solve_mod3(const ModelParams& p, Complex xi, const TimeGrid& grid,
                             std::size_t n_iter) {
    SolverConfig cfg;
    cfg.scheme = RiccatiScheme::mod3;
    cfg.n_iter = n_iter;
    return solve_riccati(p, xi, grid, cfg);
}

}  // namespace rheston
