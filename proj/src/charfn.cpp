#include "rheston/charfn.hpp"

#include <atomic>
#include <cmath>

#include "rheston/parallel.hpp"

namespace rheston {

namespace {

// a log-characteristic value this large means the trajectory left the domain
// where the representation is meaningful, even if |h| stayed under the guard
constexpr double kMaxRePhi = 200.0;

// running trapezoid of gamma theta h + v0 F along the trajectory;
// returns false if phi degenerates
bool accumulate_phi(const ModelParams& p, const RiccatiTrajectory& tr,
                    const std::vector<double>& t, Complex* out) {
    Complex acc{0.0, 0.0};
    Complex f_prev = p.gamma * p.theta * tr.values[0] + p.v0 * tr.rhs_values[0];
    out[0] = acc;
    for (std::size_t k = 1; k < tr.values.size(); ++k) {
        const Complex f = p.gamma * p.theta * tr.values[k] + p.v0 * tr.rhs_values[k];
        acc += 0.5 * (t[k] - t[k - 1]) * (f_prev + f);
        f_prev = f;
        out[k] = acc;
        if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()) || acc.real() > kMaxRePhi)
            return false;
    }
    return true;
}

}  // namespace

Complex log_charfn(const ModelParams& p, Complex xi, const TimeGrid& grid,
                   const SolverConfig& cfg) {
    const RiccatiTrajectory tr = solve_riccati(p, xi, grid, cfg);
    if (!tr.ok()) throw CharFnUnavailable(xi, tr.status, tr.fail_node);
    std::vector<Complex> phi(tr.values.size());
    if (!accumulate_phi(p, tr, grid.nodes, phi.data()))
        throw CharFnUnavailable(xi, RiccatiTrajectory::Status::blow_up, tr.values.size() - 1);
    return phi.back();
}

Complex charfn(const ModelParams& p, Complex xi, const TimeGrid& grid, const SolverConfig& cfg) {
    return std::exp(log_charfn(p, xi, grid, cfg));
}

CharFnTable::CharFnTable(ModelParams params, std::vector<Complex> xi_nodes, TimeGrid grid,
                         SolverConfig solver, std::size_t n_threads)
    : params_(std::move(params)),
      xi_nodes_(std::move(xi_nodes)),
      grid_(std::move(grid)),
      solver_(solver) {
    validate(grid_);
    const std::size_t nt = grid_.nodes.size();
    const std::size_t nx = xi_nodes_.size();
    phi_.assign(nx * nt, Complex{0.0, 0.0});
    node_ok_.assign(nx, 1);
    node_status_.assign(nx, RiccatiTrajectory::Status::ok);
    node_fail_.assign(nx, 0);

    parallel_for(
        nx,
        [&](std::size_t i) {
            const RiccatiTrajectory tr = solve_riccati(params_, xi_nodes_[i], grid_, solver_);
            if (!tr.ok()) {
                node_ok_[i] = 0;
                node_status_[i] = tr.status;
                node_fail_[i] = tr.fail_node;
                return;
            }
            if (!accumulate_phi(params_, tr, grid_.nodes, phi_.data() + i * nt)) {
                node_ok_[i] = 0;
                node_status_[i] = RiccatiTrajectory::Status::blow_up;
                node_fail_[i] = nt - 1;
            }
        },
        n_threads);
}

std::size_t CharFnTable::blown_nodes() const {
    std::size_t n = 0;
    for (char ok : node_ok_)
        if (!ok) ++n;
    return n;
}

Complex CharFnTable::phi(std::size_t node_idx, std::size_t t_idx) const {
    if (!node_ok_[node_idx])
        throw CharFnUnavailable(xi_nodes_[node_idx], node_status_[node_idx], node_fail_[node_idx]);
    return phi_[node_idx * grid_.nodes.size() + t_idx];
}

std::size_t CharFnTable::maturity_index(double tau) const {
    for (std::size_t k = 0; k < grid_.nodes.size(); ++k)
        if (std::abs(grid_.nodes[k] - tau) <= 1e-12 * std::max(1.0, tau)) return k;
    throw std::invalid_argument("table: maturity is not a grid node");
}

std::vector<CharFnTable::Row> CharFnTable::dump() const {
    std::vector<Row> rows;
    rows.reserve(xi_nodes_.size() * grid_.nodes.size());
    for (std::size_t i = 0; i < xi_nodes_.size(); ++i) {
        if (!node_ok_[i]) continue;
        for (std::size_t k = 0; k < grid_.nodes.size(); ++k) {
            const Complex ph = phi_[i * grid_.nodes.size() + k];
            rows.push_back({xi_nodes_[i].real(), xi_nodes_[i].imag(), grid_.nodes[k], ph.real(),
                            ph.imag()});
        }
    }
    return rows;
}

Complex h_infinity(const ModelParams& p, Complex xi) {
    const Complex kI{0.0, 1.0};
    const Complex b = p.gamma * (kI * xi * p.rho * p.nu - 1.0);
    const double gn = p.gamma * p.nu;
    const Complex disc = (xi * xi + kI * xi) * gn * gn + b * b;
    Complex root = std::sqrt(disc);
    if ((-b - root).real() > 0.0) root = -root;
    return (-b - root) / (gn * gn);
}

}  // namespace rheston
