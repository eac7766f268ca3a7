#include "rheston/bootstrap.hpp"

#include <algorithm>
#include <cmath>

namespace rheston {

namespace {

std::vector<Complex> leg_nodes_at(const BootstrapLeg& leg, double y) {
    if (leg.shape == BootstrapLeg::Shape::sinh) return {leg.contour.point(y)};
    return {Complex(y, leg.omega1)};
}

double leg_span(const BootstrapLeg& leg) {
    if (leg.shape == BootstrapLeg::Shape::sinh)
        return double(leg.contour.n_terms) * leg.contour.zeta;
    return double(leg.n_terms) * leg.zeta;
}

double leg_spacing_scale(const BootstrapLeg& leg) {
    if (leg.shape == BootstrapLeg::Shape::sinh) return leg.contour.zeta * leg.contour.b;
    return leg.zeta;
}

// maximum separation of two contours over the shared parameter range; the
// parametrization by arc position y makes the measure invariant under
// refining (zeta, n_terms) on a fixed curve
double contour_separation(const BootstrapLeg& a, const BootstrapLeg& b) {
    const double span = std::min(leg_span(a), leg_span(b));
    double sep = 0.0;
    const int samples = 64;
    for (int i = 0; i <= samples; ++i) {
        const double y = span * double(i) / double(samples);
        sep = std::max(sep, std::abs(leg_nodes_at(a, y)[0] - leg_nodes_at(b, y)[0]));
    }
    return sep;
}

PriceEstimate price_leg(const ModelParams& p, const OptionSpec& spec, const BootstrapLeg& leg) {
    if (leg.shape == BootstrapLeg::Shape::sinh) return price_sinh(p, spec, leg.contour, leg.grid);
    return price_flat_ift(p, spec, leg.omega1, leg.zeta, leg.n_terms, leg.grid);
}

}  // namespace

BootstrapReport bootstrap_price(const ModelParams& p, const OptionSpec& spec,
                                const std::vector<BootstrapLeg>& legs, double threshold) {
    BootstrapReport report;
    if (legs.size() < 2) {
        report.reason = "need at least two legs";
        return report;
    }

    bool has_rescaled = false, has_plain = false;
    for (const auto& leg : legs) {
        BootstrapReport::Entry entry;
        entry.label = leg.label;
        try {
            entry.estimate = price_leg(p, spec, leg);
        } catch (const std::exception& e) {
            entry.estimate.flags.rejected = true;
            entry.label += std::string(" [") + e.what() + "]";
        }
        report.estimates.push_back(std::move(entry));
        if (leg.grid.solver.scheme == RiccatiScheme::mod3)
            has_rescaled = true;
        else
            has_plain = true;
    }
    report.principle_two = has_rescaled && has_plain;

    std::vector<std::size_t> clean;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        const auto& f = report.estimates[i].estimate.flags;
        if (!f.rejected && f.blown_nodes == 0 && std::isfinite(report.estimates[i].estimate.value))
            clean.push_back(i);
    }
    if (clean.size() < 2) {
        report.reason = "fewer than two clean legs";
        return report;
    }

    report.divergent_contours = true;
    double maxdiff = 0.0;
    for (std::size_t a = 0; a < clean.size(); ++a)
        for (std::size_t b = a + 1; b < clean.size(); ++b) {
            const auto& la = legs[clean[a]];
            const auto& lb = legs[clean[b]];
            const double sep = contour_separation(la, lb);
            const double scale = 10.0 * std::max(leg_spacing_scale(la), leg_spacing_scale(lb));
            if (sep <= scale) report.divergent_contours = false;
            maxdiff = std::max(maxdiff, std::abs(report.estimates[clean[a]].estimate.value -
                                                 report.estimates[clean[b]].estimate.value));
        }
    report.max_pairwise_diff = maxdiff;
    report.certified_error = 100.0 * maxdiff;
    report.agreement_digits =
        maxdiff > 0.0 ? int(std::floor(-std::log10(maxdiff))) : 16;

    if (!report.divergent_contours) {
        report.reason = "contours do not diverge";
        return report;
    }
    if (clean.size() < legs.size()) {
        report.reason = "a leg was rejected or hit blown nodes";
        return report;
    }
    if (maxdiff >= threshold) {
        report.reason = "pairwise disagreement exceeds threshold";
        return report;
    }
    report.verdict = BootstrapReport::Verdict::certified;
    return report;
}

std::vector<BootstrapLeg> default_bootstrap_legs(const OptionSpec& spec, double epsilon,
                                                 std::size_t m_steps,
                                                 const AnalyticityDomain& domain) {
    const double tilt = 0.2;
    const ModelParams ref;  // truncation uses the operating model at run time; keep legs generic

    std::vector<BootstrapLeg> legs;
    auto make_sinh = [&](Leg leg, double omega, const char* label) {
        BootstrapLeg bl;
        bl.shape = BootstrapLeg::Shape::sinh;
        bl.contour = choose_sinh_params(domain, leg, leg == Leg::put ? -1 : +1, epsilon, 0.9, omega);
        bl.contour.n_terms = 0;  // filled by the caller via truncation_lambda
        bl.grid.solver.scheme = RiccatiScheme::mod3;
        bl.grid.m_steps = m_steps;
        bl.label = label;
        return bl;
    };
    legs.push_back(make_sinh(Leg::put, tilt, "sinh put-strip +tilt / rescaled"));
    legs.push_back(make_sinh(Leg::call, -tilt, "sinh call-strip -tilt / rescaled"));

    // contrast leg: different contour family, plain-remainder solver, and a
    // coarser time grid, so a resolution-systematic error in the shared
    // characteristic function cannot cancel out of every pairwise difference
    BootstrapLeg flat;
    flat.shape = BootstrapLeg::Shape::flat;
    flat.omega1 = -0.5;
    flat.zeta = choose_flat_step(0.95 * 0.5, epsilon);
    flat.n_terms = 0;
    flat.grid.solver.scheme = RiccatiScheme::mod2;
    flat.grid.m_steps = std::max<std::size_t>(16, m_steps / 2);
    flat.label = "flat mid-strip / remainder (coarse grid)";
    legs.push_back(flat);
    (void)spec;
    (void)ref;
    return legs;
}

ProbeResult admissibility_probe(const ModelParams& p, const SinhContour& contour, double T,
                                std::size_t sample_count, const SolverConfig& solver,
                                std::size_t m_steps) {
    ProbeResult result;
    if (sample_count < 2) sample_count = 2;
    const TimeGrid grid = TimeGrid::uniform(T, m_steps);
    for (std::size_t i = 0; i < sample_count; ++i) {
        const double y =
            double(contour.n_terms) * contour.zeta * double(i) / double(sample_count - 1);
        const Complex xi = contour.point(y);
        if (std::abs(xi) < 1e-8 || std::abs(xi + Complex(0.0, 1.0)) < 1e-8) continue;  // pole
        const RiccatiTrajectory tr = solve_riccati(p, xi, grid, solver);
        if (!tr.ok()) {
            result.clean = false;
            result.blown_node = i;
            result.blown_xi = xi;
            return result;
        }
    }
    return result;
}

}  // namespace rheston
