#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "rheston/model.hpp"
#include "rheston/time_grid.hpp"

namespace rheston {

using Complex = std::complex<double>;

/// Right-hand side of the fractional Riccati equation,
///   F(xi, h) = -(xi^2 + i xi)/2 + gamma (i xi rho nu - 1) h + (gamma nu)^2 h^2 / 2.
Complex riccati_rhs(const ModelParams& p, Complex xi, Complex h);

/// Leading small-time behaviour h(xi,t) ~ -(xi^2 + i xi)/2 * t^alpha / Gamma(alpha+1).
Complex asymptotic_h(const ModelParams& p, Complex xi, double t);

/// Predictor-corrector variants for the fractional Volterra equation.
///   standard: rectangle-rule predictor, product-trapezoid corrector.
///   mod1:     predictor seeded with the t^alpha asymptote while |h| <= c |xi|.
///   mod2:     evolves the remainder h - h_as, absorbing the forcing term exactly.
///   mod3:     mod2 on the (1+|xi|)-rescaled unknown; more robust at large |xi|
///             and non-analytic in xi, which error control relies on.
enum class RiccatiScheme { standard, mod1, mod2, mod3 };

struct SolverConfig {
    RiccatiScheme scheme = RiccatiScheme::mod3;
    std::size_t n_iter = 2;     // fixed-point sweeps per time step after the seed
    double switch_c = 0.1;      // mod1 stays on the asymptotic seed while |h| <= c |xi|
    double blowup_scale = 1e8;  // divergence guard: |h| > scale * (1 + |xi|)
};

struct RiccatiTrajectory {
    enum class Status { ok, blow_up, blow_down };

    Complex xi;
    std::vector<Complex> values;      // h(xi, t_k), k = 0..M
    std::vector<Complex> rhs_values;  // F(xi, h(xi, t_k))
    Status status = Status::ok;
    std::size_t fail_node = 0;  // first bad node when status != ok

    bool ok() const { return status == Status::ok; }
};

/// Product-integration weights shared by all schemes. Uniform grids are served
/// from O(M) kernels; general grids fill rows from the node positions.
class AdamsWeights {
public:
    AdamsWeights(double alpha, const TimeGrid& grid);

    double alpha() const { return alpha_; }
    std::size_t steps() const { return nodes_.size() - 1; }

    /// a_{k+1,k+1}, the weight of the implicit node.
    double last(std::size_t k) const;

    /// Corrector weights a_{j,k+1} for the history nodes j = 0..k.
    void corrector_row(std::size_t k, std::vector<double>& out) const;

    /// sum_{j=0..k} a_{j,k+1} vals[j]; `scratch` avoids reallocation on
    /// non-uniform grids. This is the solver's hot path.
    Complex history_dot(std::size_t k, const Complex* vals, std::vector<double>& scratch) const;

    /// Rectangle-rule predictor weights b_{j,k+1}, j = 0..k.
    void predictor_row(std::size_t k, std::vector<double>& out) const;

    /// b_{0,1} = dt^alpha / Gamma(alpha+1) on a uniform grid.
    double predictor_first() const;

private:
    double alpha_;
    std::vector<double> nodes_;
    bool uniform_;
    double dt_ = 0.0;
    // uniform-grid kernels, indexed by k - j
    std::vector<double> interior_;  // ((m+2)^(a+1) + m^(a+1) - 2 (m+1)^(a+1)) * dt^a / Gamma(a+2)
    std::vector<double> first_;     // a_{0,k+1} per k
    double last_ = 0.0;
};

RiccatiTrajectory solve_riccati(const ModelParams& p, Complex xi, const TimeGrid& grid,
                                const SolverConfig& cfg);

RiccatiTrajectory solve_standard(const ModelParams& p, Complex xi, const TimeGrid& grid,
                                 std::size_t n_corrector = 2);
RiccatiTrajectory solve_mod1(const ModelParams& p, Complex xi, const TimeGrid& grid,
                             std::size_t n_iter = 2, double c = 0.1);
RiccatiTrajectory solve_mod2(const ModelParams& p, Complex xi, const TimeGrid& grid,
                             std::size_t n_iter = 2);
RiccatiTrajectory solve_mod3(const ModelParams& p, Complex xi, const TimeGrid& grid,
                             std::size_t n_iter = 2);

}  // namespace rheston
