#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rheston/charfn.hpp"
#include "rheston/contours.hpp"
#include "rheston/model.hpp"

namespace rheston {

enum class OptionKind { call, put, covered_call };

struct OptionSpec {
    double spot = 1.0;
    double strike = 1.0;
    double maturity = 1.0;
    OptionKind kind = OptionKind::call;
};

void validate(const OptionSpec& s);

struct PriceFlags {
    std::size_t blown_nodes = 0;
    bool outside_no_arbitrage = false;
    bool rejected = false;  // contour hit the non-existence region
};

struct PriceEstimate {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string method;
    // contour echo, sufficient to re-run with explicit parameters
    double omega1 = 0.0, b = 0.0, omega = 0.0, zeta = 0.0;
    std::size_t n_terms = 0;
    std::size_t n_evaluations = 0;
    std::optional<double> error_estimate;
    PriceFlags flags;
};

/// Fourier transform of the call payoff (S0 e^x - K)_+ in x = ln(S_T/S0):
///   -K e^{i xi ln(S0/K)} / (xi (xi + i)), defined away from the poles 0, -i.
Complex payoff_transform(const OptionSpec& spec, Complex xi);

/// Time grid + solver used to evaluate the characteristic function inside a
/// pricer. The grid is uniform with m_steps steps up to the option maturity.
struct PricerGrid {
    SolverConfig solver{};
    std::size_t m_steps = 100;
    std::size_t threads = 0;
};

/// OTM leg routing: puts for K <= S0, calls for K > S0; the requested kind is
/// recovered through put-call parity afterwards.
struct LegChoice {
    Leg leg;
    int moneyness_sign;  // -1 put side, 0 ATM, +1 call side
};
LegChoice select_leg(const OptionSpec& spec);

/// Flat inverse-transform along Im xi = omega1 with the symmetrized
/// (half-weight at j = 0) trapezoid sum over xi_j = i omega1 + j zeta.
PriceEstimate price_flat_ift(const ModelParams& p, const OptionSpec& spec, double omega1,
                             double zeta, std::size_t n_terms, const PricerGrid& grid);

/// Flat transform of Phi - Phi_bm plus the lognormal control value; the
/// integrand's zeros at 0 and -i let omega1 sit anywhere in the strip.
PriceEstimate price_flat_ift_bm(const ModelParams& p, const OptionSpec& spec, double sigma0,
                                double omega1, double zeta, std::size_t n_terms,
                                const PricerGrid& grid);

/// Simplified trapezoid rule along the deformed contour xi(y).
PriceEstimate price_sinh(const ModelParams& p, const OptionSpec& spec, const SinhContour& contour,
                         const PricerGrid& grid);

/// Gauss-Legendre on (0,1) after y = u/(1-u) for the Im xi = -1/2 line.
PriceEstimate price_lewis(const ModelParams& p, const OptionSpec& spec, std::size_t n_gl,
                          const PricerGrid& grid);

/// Cosine-expansion price on [-L sqrt(T), L sqrt(T)] with real-line nodes.
/// Prices the put by default (calls through parity); `direct_call` expands the
/// call payoff instead.
PriceEstimate price_cos(const ModelParams& p, const OptionSpec& spec, double L,
                        std::size_t n_terms, const PricerGrid& grid, bool direct_call = false);

enum class StrikeInterp { linear, cubic };

/// FFT batch pricer on a uniform log-strike grid (step fixed by the Nyquist
/// relation), interpolated to the requested strikes.
std::vector<PriceEstimate> price_cm_fft(const ModelParams& p, std::vector<OptionSpec> specs,
                                        double omega1, double zeta, std::size_t m_fft,
                                        StrikeInterp interp, const PricerGrid& grid);

// ---- table-reuse entry points (one characteristic-function table, many strikes)

std::vector<Complex> flat_nodes(double omega1, double zeta, std::size_t n_terms);
std::vector<Complex> sinh_nodes(const SinhContour& contour);

PriceEstimate price_flat_from_table(const CharFnTable& table, std::size_t t_idx,
                                    const OptionSpec& spec, double omega1, double zeta,
                                    std::size_t n_terms);
PriceEstimate price_sinh_from_table(const CharFnTable& table, std::size_t t_idx,
                                    const OptionSpec& spec, const SinhContour& contour);

/// Driftless lognormal control: Black formula on the forward F = S0 with
/// discounting by e^{-rT} (the engine's log-price is a martingale).
double lognormal_control_value(const OptionSpec& spec, double r, double sigma);

/// Parity conversion of a clean strip value to the requested kind, and the
/// no-arbitrage bounds check. Exposed for tests.
double strip_value_to_kind(double strip_value, Leg strip_leg, const OptionSpec& spec, double r);
bool within_no_arbitrage(double value, const OptionSpec& spec, double r);

}  // namespace rheston
