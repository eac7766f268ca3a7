#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rheston/bootstrap.hpp"

using namespace rheston;

namespace {
const ModelParams kCalibrated{};
const double kPi = std::acos(-1.0);
const AnalyticityDomain kTableDomain{-2.0, 1.0, -kPi / 4.0, kPi / 4.0};

BootstrapLeg sinh_leg(double omega1, double b, double omega, double zeta, std::size_t n,
                      RiccatiScheme scheme, std::size_t m, const char* label) {
    BootstrapLeg leg;
    leg.shape = BootstrapLeg::Shape::sinh;
    leg.contour.omega1 = omega1;
    leg.contour.b = b;
    leg.contour.omega = omega;
    leg.contour.zeta = zeta;
    leg.contour.n_terms = n;
    leg.grid.solver.scheme = scheme;
    leg.grid.m_steps = m;
    leg.grid.threads = 2;
    leg.label = label;
    return leg;
}
}  // namespace

TEST_CASE("identical legs are flagged as non-divergent") {
    OptionSpec s{1.0, 1.0, 2.0, OptionKind::call};
    const auto leg = sinh_leg(-0.5, 0.769884522, 0.0, 0.285754315, 12, RiccatiScheme::mod2, 100,
                              "same");
    const BootstrapReport rep = bootstrap_price(kCalibrated, s, {leg, leg}, 1e-3);
    CHECK(rep.max_pairwise_diff == 0.0);
    CHECK_FALSE(rep.divergent_contours);
    CHECK(rep.verdict == BootstrapReport::Verdict::rejected);
    CHECK(rep.reason == "contours do not diverge");
}

TEST_CASE("fewer than two legs is rejected") {
    OptionSpec s{1.0, 1.0, 2.0, OptionKind::call};
    const BootstrapReport rep = bootstrap_price(kCalibrated, s, {}, 1e-3);
    CHECK(rep.verdict == BootstrapReport::Verdict::rejected);
}

TEST_CASE("mirrored-strip pair certifies a production price") {
    // two-year at-the-money: opposite-strip contours, values reconciled
    // through parity, against the twelve-digit reference
    OptionSpec s{1.0, 1.0, 2.0, OptionKind::call};
    const double bench = 0.143318830614;
    auto legs = std::vector<BootstrapLeg>{
        sinh_leg(0.5, 0.769884522, 0.2, 0.22, 30, RiccatiScheme::mod3, 317, "put strip"),
        sinh_leg(-1.5, 0.769884522, -0.2, 0.22, 30, RiccatiScheme::mod3, 317, "call strip"),
        sinh_leg(-0.5, 0.769884522, 0.0, 0.285754315, 12, RiccatiScheme::mod2, 158, "flat-ish")};
    const BootstrapReport rep = bootstrap_price(kCalibrated, s, legs, 1e-3);
    CHECK(rep.verdict == BootstrapReport::Verdict::certified);
    CHECK(rep.divergent_contours);
    CHECK(rep.principle_two);
    CHECK(rep.certified_error == doctest::Approx(100.0 * rep.max_pairwise_diff));
    for (const auto& e : rep.estimates)
        CHECK(std::abs(e.estimate.value - bench) <= rep.certified_error);
}

TEST_CASE("divergence verdict is invariant under step refinement on a fixed curve") {
    OptionSpec s{1.0, 1.0, 0.5, OptionKind::call};
    auto a = sinh_leg(0.5, 0.77, 0.2, 0.3, 20, RiccatiScheme::mod3, 40, "a");
    auto b = sinh_leg(-1.5, 0.77, -0.2, 0.3, 20, RiccatiScheme::mod3, 40, "b");
    const BootstrapReport coarse = bootstrap_price(kCalibrated, s, {a, b}, 1e-2);
    a.contour.zeta = 0.15;
    a.contour.n_terms = 40;  // same node span, finer sampling
    b.contour.zeta = 0.15;
    b.contour.n_terms = 40;
    const BootstrapReport fine = bootstrap_price(kCalibrated, s, {a, b}, 1e-2);
    CHECK(coarse.divergent_contours == fine.divergent_contours);
}

TEST_CASE("a blown leg rejects the certificate") {
    ModelParams p = kCalibrated;
    p.nu = 1.2;
    OptionSpec s{1.0, 1.0, 0.5, OptionKind::call};
    // the second contour is pushed far up the cone at a resolution where the
    // remainder solver cannot follow it
    auto ok_leg = sinh_leg(0.5, 0.77, 0.1, 0.3, 20, RiccatiScheme::mod2, 48, "tame");
    auto hot_leg = sinh_leg(0.5, 0.77, 0.72, 0.3, 40, RiccatiScheme::mod2, 48, "steep");
    const BootstrapReport rep = bootstrap_price(p, s, {ok_leg, hot_leg}, 1e-2);
    CHECK(rep.verdict == BootstrapReport::Verdict::rejected);
}

TEST_CASE("default legs certify and bound the true error") {
    OptionSpec s{1.0, 0.9, 2.0, OptionKind::call};
    const double bench = 0.192897881619;
    auto legs = default_bootstrap_legs(s, 1e-6, 317, kTableDomain);
    REQUIRE(legs.size() == 3);
    for (auto& leg : legs) {
        if (leg.shape == BootstrapLeg::Shape::sinh) {
            const auto tb = truncation_lambda(kCalibrated, s.maturity, leg.contour.omega, 1e-6,
                                              s.strike, leg.contour.b, leg.contour.zeta, true);
            leg.contour.n_terms = std::max<std::size_t>(tb.n_terms, 24);
        } else {
            const auto tb =
                truncation_lambda(kCalibrated, s.maturity, 0.0, 1e-6, s.strike, 1.0, leg.zeta, false);
            leg.n_terms = std::min<std::size_t>(tb.n_terms, 2000);
        }
        leg.grid.threads = 2;
    }
    const BootstrapReport rep = bootstrap_price(kCalibrated, s, legs, 1e-3);
    CHECK(rep.verdict == BootstrapReport::Verdict::certified);
    CHECK(rep.principle_two);
    for (const auto& e : rep.estimates)
        CHECK(std::abs(e.estimate.value - bench) <= rep.certified_error);
}

TEST_CASE("admissibility probe") {
    SinhContour c;
    c.omega1 = 0.5;
    c.b = 0.77;
    c.omega = 0.1;
    c.zeta = 0.3;
    c.n_terms = 20;
    SolverConfig solver;
    solver.scheme = RiccatiScheme::mod2;
    // tame contour: clean for the calibrated set out to five years
    CHECK(admissibility_probe(kCalibrated, c, 5.0, 8, solver, 60).clean);
    // a steep contour at coarse resolution blows
    ModelParams p = kCalibrated;
    p.nu = 1.2;
    SinhContour hot = c;
    hot.omega = 0.72;
    hot.n_terms = 40;
    const ProbeResult r = admissibility_probe(p, hot, 0.5, 8, solver, 48);
    CHECK_FALSE(r.clean);
    CHECK(std::abs(r.blown_xi) > 0.0);
}
