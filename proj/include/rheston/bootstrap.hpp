#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rheston/inversion.hpp"

namespace rheston {

/// One bootstrap leg: price the same instrument on its own contour with its
/// own solver. Certification needs at least two legs whose contours diverge;
/// trusting the agreement further requires solvers that do not share an
/// analytic-in-xi error (at least one rescaled-remainder leg), since any
/// analytic approximation yields contour-independent prices to quadrature
/// precision no matter how wrong it is.
struct BootstrapLeg {
    enum class Shape { sinh, flat };
    Shape shape = Shape::sinh;
    SinhContour contour{};   // sinh legs
    double omega1 = -0.5;    // flat legs
    double zeta = 0.1;
    std::size_t n_terms = 0;
    PricerGrid grid{};
    std::string label;
};

struct BootstrapReport {
    struct Entry {
        std::string label;
        PriceEstimate estimate;
    };
    std::vector<Entry> estimates;
    double max_pairwise_diff = 0.0;
    double certified_error = 0.0;  // 100 x max pairwise diff
    int agreement_digits = 0;
    bool divergent_contours = false;
    bool principle_two = false;  // solvers include a non-analytic approximation
    enum class Verdict { certified, rejected } verdict = Verdict::rejected;
    std::string reason;
};

/// Conformal-bootstrap certification: price `spec` on every leg, reduce to a
/// certified error bound when all legs are clean, divergent and in agreement.
BootstrapReport bootstrap_price(const ModelParams& p, const OptionSpec& spec,
                                const std::vector<BootstrapLeg>& legs, double threshold);

/// Default three-leg configuration: mirrored-tilt sinh legs on the put/call
/// strips (rescaled-remainder solver) plus a flat mid-strip contrast leg.
std::vector<BootstrapLeg> default_bootstrap_legs(const OptionSpec& spec, double epsilon,
                                                 std::size_t m_steps,
                                                 const AnalyticityDomain& domain = {
                                                     -2.0, 1.0, -0.785398163397448279,
                                                     0.785398163397448279});

struct ProbeResult {
    bool clean = true;
    std::size_t blown_node = 0;
    Complex blown_xi{};
};

/// Cheap pre-check: solve the Riccati equation at a stratified sample of
/// contour nodes and reject the contour on any blow-up.
ProbeResult admissibility_probe(const ModelParams& p, const SinhContour& contour, double T,
                                std::size_t sample_count, const SolverConfig& solver,
                                std::size_t m_steps);

}  // namespace rheston
