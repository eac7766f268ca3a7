#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rheston/riccati.hpp"

namespace rheston {

/// The characteristic function is unavailable at a spectral node whose
/// Riccati trajectory leaves the domain of existence at the working
/// resolution; inversion layers must reject the contour point.
struct CharFnUnavailable : std::runtime_error {
    Complex xi;
    RiccatiTrajectory::Status status;
    std::size_t node;
    CharFnUnavailable(Complex xi_, RiccatiTrajectory::Status st, std::size_t node_)
        : std::runtime_error("char fn unavailable at xi=(" + std::to_string(xi_.real()) + "," +
                             std::to_string(xi_.imag()) + ")"),
          xi(xi_),
          status(st),
          node(node_) {}
};

/// log Phi(xi, tau) = integral_0^tau (gamma theta h + v0 F(xi,h)) ds,
/// trapezoid rule on the solver grid; tau is the last grid node.
Complex log_charfn(const ModelParams& p, Complex xi, const TimeGrid& grid,
                   const SolverConfig& cfg);

Complex charfn(const ModelParams& p, Complex xi, const TimeGrid& grid, const SolverConfig& cfg);

/// Cached log-characteristic values phi(xi_j, t_k) on a node set times a
/// maturity grid. One Riccati sweep per node serves every maturity; this is
/// the shared expensive artifact behind surface pricing.
class CharFnTable {
public:
    CharFnTable(ModelParams params, std::vector<Complex> xi_nodes, TimeGrid grid,
                SolverConfig solver, std::size_t n_threads = 0);

    const std::vector<Complex>& xi_nodes() const { return xi_nodes_; }
    const std::vector<double>& t_nodes() const { return grid_.nodes; }
    const ModelParams& params() const { return params_; }
    const SolverConfig& solver() const { return solver_; }

    bool node_ok(std::size_t node_idx) const { return node_ok_[node_idx]; }
    std::size_t blown_nodes() const;

    /// phi(xi_j, t_k); throws CharFnUnavailable on a blown node.
    Complex phi(std::size_t node_idx, std::size_t t_idx) const;

    /// index of the grid node equal to tau (within 1e-12 relative), or throw.
    std::size_t maturity_index(double tau) const;

    struct Row {
        double re_xi, im_xi, t, re_phi, im_phi;
    };
    std::vector<Row> dump() const;

private:
    ModelParams params_;
    std::vector<Complex> xi_nodes_;
    TimeGrid grid_;
    SolverConfig solver_;
    std::vector<Complex> phi_;  // column-major: one trajectory writes contiguously
    std::vector<char> node_ok_;
    std::vector<RiccatiTrajectory::Status> node_status_;
    std::vector<std::size_t> node_fail_;
};

/// Large-time limit of h: the mean-reverting branch of F(xi, h) = 0, with the
/// square-root branch chosen so that Re h_inf <= 0.
Complex h_infinity(const ModelParams& p, Complex xi);

inline double kappa_infinity(const ModelParams& p) {
    return std::sqrt(1.0 - p.rho * p.rho) / (p.gamma * p.nu);
}

}  // namespace rheston
