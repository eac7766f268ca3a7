#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rheston {

/// Time grid for the Volterra solver: t_0 = 0 < t_1 < ... < t_M.
/// Either uniform or a two-part grid with a fine step near 0 (where the
/// solution behaves like t^alpha) and a coarser uniform step up to T.
struct TimeGrid {
    enum class Kind { uniform, two_part };

    std::vector<double> nodes;
    Kind kind = Kind::uniform;
    std::size_t split_index = 0;  // first node of the coarse part (two_part only)

    std::size_t steps() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    double horizon() const { return nodes.empty() ? 0.0 : nodes.back(); }
    bool is_uniform() const { return kind == Kind::uniform; }
    double uniform_step() const { return nodes.size() > 1 ? nodes[1] : 0.0; }

    static TimeGrid uniform(double T, std::size_t m) {
        if (!(T > 0.0) || m == 0) throw std::invalid_argument("grid: need T > 0 and m >= 1");
        TimeGrid g;
        g.nodes.resize(m + 1);
        for (std::size_t j = 0; j <= m; ++j) g.nodes[j] = T * double(j) / double(m);
        g.nodes[0] = 0.0;
        g.nodes[m] = T;
        return g;
    }

    /// Two uniform pieces: m_fine steps on [0, t_split] and m_coarse on [t_split, T].
    /// The fine step must be at most a quarter of the coarse one.
    static TimeGrid two_part(double T, double t_split, std::size_t m_fine, std::size_t m_coarse) {
        if (!(T > 0.0) || !(t_split > 0.0) || !(t_split < T) || m_fine == 0 || m_coarse == 0)
            throw std::invalid_argument("grid: need 0 < t_split < T and positive step counts");
        const double fine_step = t_split / double(m_fine);
        const double coarse_step = (T - t_split) / double(m_coarse);
        if (fine_step > coarse_step / 4.0)
            throw std::invalid_argument("grid: fine step must be <= coarse step / 4");
        TimeGrid g;
        g.kind = Kind::two_part;
        g.split_index = m_fine;
        g.nodes.reserve(m_fine + m_coarse + 1);
        for (std::size_t j = 0; j <= m_fine; ++j) g.nodes.push_back(t_split * double(j) / double(m_fine));
        for (std::size_t j = 1; j <= m_coarse; ++j)
            g.nodes.push_back(t_split + (T - t_split) * double(j) / double(m_coarse));
        g.nodes.back() = T;
        return g;
    }

    /// Two-part grid adapted to a spectral parameter: the fine region is
    /// [0, A |xi|^{-1/alpha}] (capped at T/2), as the solution varies on the
    /// |xi|^{-1/alpha} scale there.
    static TimeGrid for_xi(double T, double xi_abs, double alpha, double A, std::size_t m_fine,
                           std::size_t m_coarse) {
        const double t_split = A * std::pow(std::max(xi_abs, 1.0), -1.0 / alpha);
        if (!(t_split > 0.0) || t_split >= T / 2.0) return uniform(T, m_fine + m_coarse);
        // widen the coarse step if the caller's counts violate the 4x ratio
        std::size_t mc = m_coarse;
        while (mc > 1 && t_split / double(m_fine) > (T - t_split) / double(mc) / 4.0) --mc;
        return two_part(T, t_split, m_fine, mc);
    }
};

inline void validate(const TimeGrid& g) {
    if (g.nodes.size() < 2) throw std::invalid_argument("grid: need at least one step");
    if (g.nodes.front() != 0.0) throw std::invalid_argument("grid: t_0 must be 0");
    for (std::size_t j = 1; j < g.nodes.size(); ++j)
        if (!(g.nodes[j] > g.nodes[j - 1])) throw std::invalid_argument("grid: nodes must increase");
}

}  // namespace rheston
