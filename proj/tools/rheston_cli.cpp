// Command-line front end: single prices, surfaces, skew term structures,
// method comparisons, bootstrap certification, reference-table checks and
// characteristic-function dumps, with CSV/JSON output.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rheston/bootstrap.hpp"
#include "rheston/inversion.hpp"
#include "rheston/vol.hpp"

using nlohmann::json;
using namespace rheston;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

double need_num(const json& j, const std::string& key, const std::string& ctx) {
    if (!j.contains(key) || !j[key].is_number())
        throw ConfigError(ctx + ": missing numeric field '" + key + "'");
    return j[key].get<double>();
}

ModelParams parse_model(const json& j) {
    if (!j.contains("model")) throw ConfigError("config: missing 'model'");
    const json& m = j["model"];
    ModelParams p;
    p.alpha = need_num(m, "alpha", "model");
    p.gamma = need_num(m, "gamma", "model");
    p.rho = need_num(m, "rho", "model");
    p.theta = need_num(m, "theta", "model");
    p.nu = need_num(m, "nu", "model");
    p.v0 = need_num(m, "v0", "model");
    p.r = m.value("r", 0.0);
    try {
        validate(p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return p;
}

RiccatiScheme parse_scheme(const std::string& name) {
    if (name == "standard") return RiccatiScheme::standard;
    if (name == "mod1") return RiccatiScheme::mod1;
    if (name == "mod2") return RiccatiScheme::mod2;
    if (name == "mod3") return RiccatiScheme::mod3;
    throw ConfigError("solver: unknown scheme '" + name + "' (standard|mod1|mod2|mod3)");
}

const char* scheme_name(RiccatiScheme s) {
    switch (s) {
        case RiccatiScheme::standard: return "standard";
        case RiccatiScheme::mod1: return "mod1";
        case RiccatiScheme::mod2: return "mod2";
        case RiccatiScheme::mod3: return "mod3";
    }
    return "?";
}

PricerGrid parse_grid(const json& j, const std::string& solver_override, int threads) {
    PricerGrid g;
    if (j.contains("solver")) {
        const json& s = j["solver"];
        g.solver.scheme = parse_scheme(s.value("scheme", std::string("mod3")));
        g.m_steps = std::size_t(s.value("m_steps", 100));
        g.solver.n_iter = std::size_t(s.value("n_iter", 2));
        g.solver.switch_c = s.value("c", 0.1);
    }
    if (!solver_override.empty()) g.solver.scheme = parse_scheme(solver_override);
    g.threads = std::size_t(threads);
    return g;
}

SinhContour parse_contour(const json& c) {
    SinhContour out;
    out.omega1 = need_num(c, "omega1", "contour");
    out.b = c.value("b", 1.0);
    out.omega = c.value("omega", 0.0);
    out.zeta = need_num(c, "zeta", "contour");
    out.n_terms = std::size_t(c.value("n_terms", 0));
    return out;
}

OptionKind parse_kind(const std::string& k) {
    if (k == "call") return OptionKind::call;
    if (k == "put") return OptionKind::put;
    if (k == "covered_call") return OptionKind::covered_call;
    throw ConfigError("unknown option kind '" + k + "'");
}

const char* kind_name(OptionKind k) {
    switch (k) {
        case OptionKind::call: return "call";
        case OptionKind::put: return "put";
        case OptionKind::covered_call: return "covered_call";
    }
    return "?";
}

std::vector<double> parse_strikes(const json& j) {
    std::vector<double> out;
    if (j.contains("strikes")) {
        for (const auto& v : j["strikes"]) out.push_back(v.get<double>());
    } else if (j.contains("strike")) {
        out.push_back(j["strike"].get<double>());
    }
    if (out.empty()) throw ConfigError("config: empty strike list");
    return out;
}

struct OutputRow {
    double strike = 0, maturity = 0;
    std::string kind, method;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> err_estimate;
    double omega1 = 0, b = 0, omega = 0, zeta = 0;
    std::size_t n_terms = 0, m_steps = 0;
    std::string scheme;
    std::size_t blown = 0;
    bool outside = false;
    double cpu_ms = 0;
    std::optional<double> iv;
    std::string iv_reason;
    bool failed = false;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

void write_rows(const std::vector<OutputRow>& rows, const std::string& out_path,
                const std::string& format, bool with_iv) {
    std::ostringstream os;
    if (format == "csv") {
        os << "strike,maturity,kind,method,value,err_estimate,omega1,b,omega,zeta,n_terms,"
              "m_steps,scheme,blown_nodes,outside_bounds";
        if (with_iv) os << ",iv,iv_reason";
        os << ",cpu_ms\n";
        for (const auto& r : rows) {
            os << fmt(r.strike) << ',' << fmt(r.maturity) << ',' << r.kind << ',' << r.method
               << ',' << fmt(r.value) << ',' << (r.err_estimate ? fmt(*r.err_estimate) : "")
               << ',' << fmt(r.omega1) << ',' << fmt(r.b) << ',' << fmt(r.omega) << ','
               << fmt(r.zeta) << ',' << r.n_terms << ',' << r.m_steps << ',' << r.scheme << ','
               << r.blown << ',' << (r.outside ? 1 : 0);
            if (with_iv) os << ',' << (r.iv ? fmt(*r.iv) : "") << ',' << r.iv_reason;
            os << ',' << fmt(r.cpu_ms) << '\n';
        }
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            json o{{"strike", r.strike},   {"maturity", r.maturity}, {"kind", r.kind},
                   {"method", r.method},   {"value", r.value},       {"omega1", r.omega1},
                   {"b", r.b},             {"omega", r.omega},       {"zeta", r.zeta},
                   {"n_terms", r.n_terms}, {"m_steps", r.m_steps},   {"scheme", r.scheme},
                   {"blown_nodes", r.blown}, {"outside_bounds", r.outside}, {"cpu_ms", r.cpu_ms}};
            if (r.err_estimate) o["err_estimate"] = *r.err_estimate;
            if (with_iv) {
                if (r.iv) o["iv"] = *r.iv;
                if (!r.iv_reason.empty()) o["iv_reason"] = r.iv_reason;
            }
            arr.push_back(std::move(o));
        }
        os << arr.dump(2) << '\n';
    }
    if (out_path == "-" || out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw ConfigError("cannot write " + out_path);
        f << os.str();
    }
}

struct MethodOpts {
    double sigma0 = 0.5;
    std::size_t n_gl = 20;
    double cos_L = 10.0;
    std::size_t cos_n = 160;
    bool cos_direct_call = false;
    std::size_t fft_m = 4096;
    StrikeInterp interp = StrikeInterp::linear;
};

MethodOpts parse_method_opts(const json& j) {
    MethodOpts o;
    if (!j.contains("method_opts")) return o;
    const json& m = j["method_opts"];
    o.sigma0 = m.value("sigma0", o.sigma0);
    o.n_gl = std::size_t(m.value("n_gl", int(o.n_gl)));
    o.cos_L = m.value("cos_L", o.cos_L);
    o.cos_n = std::size_t(m.value("cos_n", int(o.cos_n)));
    o.cos_direct_call = m.value("cos_direct_call", false);
    o.fft_m = std::size_t(m.value("fft_m", int(o.fft_m)));
    if (m.value("interp", std::string("linear")) == std::string("cubic"))
        o.interp = StrikeInterp::cubic;
    return o;
}

AutoPricer parse_auto(const json& j, double epsilon_override, const PricerGrid& grid) {
    AutoPricer cfg;
    cfg.grid = grid;
    if (j.contains("auto_contour")) {
        const json& a = j["auto_contour"];
        cfg.epsilon = a.value("epsilon", 1e-6);
        cfg.k_d = a.value("k_d", 0.9);
        if (a.contains("tilt")) cfg.tilt = a["tilt"].get<double>();
        if (a.contains("domain")) {
            const json& d = a["domain"];
            cfg.domain.mu_minus = d.value("mu_minus", cfg.domain.mu_minus);
            cfg.domain.mu_plus = d.value("mu_plus", cfg.domain.mu_plus);
            cfg.domain.gamma_minus = d.value("gamma_minus", cfg.domain.gamma_minus);
            cfg.domain.gamma_plus = d.value("gamma_plus", cfg.domain.gamma_plus);
        }
    }
    if (epsilon_override > 0.0) cfg.epsilon = epsilon_override;
    return cfg;
}

// timed run: one warm-up excluded, then the mean over `repeat` evaluations
template <typename F>
double timed_ms(int repeat, F&& f) {
    f();
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < std::max(1, repeat); ++i) f();
    const auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double, std::milli>(dt).count() / std::max(1, repeat);
}

OutputRow estimate_to_row(const PriceEstimate& est, const OptionSpec& spec,
                          const PricerGrid& grid) {
    OutputRow r;
    r.strike = spec.strike;
    r.maturity = spec.maturity;
    r.kind = kind_name(spec.kind);
    r.method = est.method;
    r.value = est.value;
    r.err_estimate = est.error_estimate;
    r.omega1 = est.omega1;
    r.b = est.b;
    r.omega = est.omega;
    r.zeta = est.zeta;
    r.n_terms = est.n_terms;
    r.m_steps = grid.m_steps;
    r.scheme = scheme_name(grid.solver.scheme);
    r.blown = est.flags.blown_nodes;
    r.outside = est.flags.outside_no_arbitrage;
    return r;
}

int run_price(const json& cfg, const std::string& out, const std::string& format, int repeat,
              int threads, const std::string& method_override,
              const std::string& solver_override, double eps_override) {
    const ModelParams p = parse_model(cfg);
    const double spot = cfg.value("spot", 1.0);
    const double T = need_num(cfg, "maturity", "config");
    const std::vector<double> strikes = parse_strikes(cfg);
    const std::string kind_str = cfg.value("kind", std::string("otm"));
    const std::string method = !method_override.empty()
                                   ? method_override
                                   : cfg.value("method", std::string("sinh"));
    const PricerGrid grid = parse_grid(cfg, solver_override, threads);
    const MethodOpts opts = parse_method_opts(cfg);

    auto spec_for = [&](double K) {
        OptionSpec s;
        s.spot = spot;
        s.strike = K;
        s.maturity = T;
        s.kind = kind_str == "otm" ? (K <= spot ? OptionKind::put : OptionKind::call)
                                   : parse_kind(kind_str);
        return s;
    };

    std::vector<OutputRow> rows;
    if (method == "cm_fft") {
        std::vector<OptionSpec> specs;
        for (double K : strikes) specs.push_back(spec_for(K));
        const double omega1 = cfg.contains("contour") ? need_num(cfg["contour"], "omega1", "contour")
                                                      : -0.5;
        const double zeta = cfg.contains("contour") ? need_num(cfg["contour"], "zeta", "contour")
                                                    : 0.25;
        std::vector<PriceEstimate> ests;
        const double ms = timed_ms(repeat, [&] {
            ests = price_cm_fft(p, specs, omega1, zeta, opts.fft_m, opts.interp, grid);
        });
        for (std::size_t i = 0; i < specs.size(); ++i) {
            OutputRow r = estimate_to_row(ests[i], specs[i], grid);
            r.cpu_ms = ms / double(specs.size());
            rows.push_back(std::move(r));
        }
    } else {
        for (double K : strikes) {
            const OptionSpec s = spec_for(K);
            PriceEstimate est;
            auto run = [&] {
                if (method == "sinh") {
                    if (cfg.contains("contour")) {
                        SinhContour c = parse_contour(cfg["contour"]);
                        if (cfg.contains("call_contour") && s.kind == OptionKind::call)
                            c = parse_contour(cfg["call_contour"]);
                        est = price_sinh(p, s, c, grid);
                    } else {
                        est = price_auto(p, s, parse_auto(cfg, eps_override, grid));
                    }
                } else if (method == "flat_ift") {
                    const json& c = cfg.at("contour");
                    est = price_flat_ift(p, s, need_num(c, "omega1", "contour"),
                                         need_num(c, "zeta", "contour"),
                                         std::size_t(c.value("n_terms", 0)), grid);
                } else if (method == "flat_ift_bm") {
                    const json& c = cfg.at("contour");
                    est = price_flat_ift_bm(p, s, opts.sigma0, need_num(c, "omega1", "contour"),
                                            need_num(c, "zeta", "contour"),
                                            std::size_t(c.value("n_terms", 0)), grid);
                } else if (method == "lewis") {
                    est = price_lewis(p, s, opts.n_gl, grid);
                } else if (method == "cos") {
                    est = price_cos(p, s, opts.cos_L, opts.cos_n, grid, opts.cos_direct_call);
                } else {
                    throw ConfigError("unknown method '" + method + "'");
                }
            };
            OutputRow r;
            try {
                const double ms = timed_ms(repeat, run);
                r = estimate_to_row(est, s, grid);
                r.cpu_ms = ms;
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                r.strike = K;
                r.maturity = T;
                r.kind = kind_name(s.kind);
                r.method = method;
                r.failed = true;
                std::cerr << "row K=" << K << " failed: " << e.what() << "\n";
            }
            rows.push_back(std::move(r));
        }
    }
    write_rows(rows, out, format, false);
    const bool all_failed =
        std::all_of(rows.begin(), rows.end(), [](const OutputRow& r) { return r.failed; });
    return all_failed ? 3 : 0;
}

int run_surface(const json& cfg, const std::string& out, const std::string& format, int repeat,
                int threads, double eps_override, const std::string& phi_dump) {
    const ModelParams p = parse_model(cfg);
    const double spot = cfg.value("spot", 1.0);
    const std::vector<double> strikes = parse_strikes(cfg);
    if (!cfg.contains("maturities")) throw ConfigError("surface: missing 'maturities'");
    std::vector<double> mats;
    for (const auto& v : cfg["maturities"]) mats.push_back(v.get<double>());
    const std::size_t m_total =
        std::size_t(cfg.contains("surface") ? cfg["surface"].value("m_total", 80) : 80);
    const PricerGrid grid = parse_grid(cfg, "", threads);
    const AutoPricer auto_cfg = parse_auto(cfg, eps_override, grid);

    std::vector<SurfacePoint> surf;
    const double total_ms =
        timed_ms(repeat, [&] { surf = iv_surface(p, spot, strikes, mats, m_total, auto_cfg); });

    std::vector<OutputRow> rows;
    for (const auto& pt : surf) {
        OutputRow r = estimate_to_row(pt.price, {spot, pt.strike, pt.maturity,
                                                 pt.strike <= spot ? OptionKind::put
                                                                   : OptionKind::call},
                                      grid);
        r.iv = pt.iv.sigma;
        switch (pt.iv.reason) {
            case IVPoint::Reason::ok: r.iv_reason = "ok"; break;
            case IVPoint::Reason::out_of_bounds: r.iv_reason = "out_of_bounds"; break;
            case IVPoint::Reason::price_too_small: r.iv_reason = "price_too_small"; break;
        }
        rows.push_back(std::move(r));
    }
    write_rows(rows, out, format, true);
    std::cerr << "surface: " << surf.size() << " points in " << total_ms << " ms total\n";

    if (!phi_dump.empty()) {
        // rebuild one table for diagnostics output
        const double t_max = *std::max_element(mats.begin(), mats.end());
        SinhContour c = choose_sinh_params(auto_cfg.domain, Leg::put, -1, auto_cfg.epsilon,
                                           auto_cfg.k_d, auto_cfg.tilt);
        const TruncationBound tb = truncation_lambda(
            p, *std::min_element(mats.begin(), mats.end()), c.omega, auto_cfg.epsilon,
            strikes.front() / spot, c.b, c.zeta, true);
        c.n_terms = std::max<std::size_t>(tb.n_terms, 4);
        CharFnTable table(p, sinh_nodes(c), TimeGrid::uniform(t_max, m_total), grid.solver,
                          grid.threads);
        std::ofstream f(phi_dump);
        if (!f) throw ConfigError("cannot write " + phi_dump);
        f << "re_xi,im_xi,t,re_phi,im_phi\n";
        for (const auto& row : table.dump())
            f << fmt(row.re_xi) << ',' << fmt(row.im_xi) << ',' << fmt(row.t) << ','
              << fmt(row.re_phi) << ',' << fmt(row.im_phi) << '\n';
    }
    return 0;
}

int run_skew(const json& cfg, const std::string& out, const std::string& format, int threads,
             double eps_override) {
    const ModelParams p = parse_model(cfg);
    const double spot = cfg.value("spot", 1.0);
    const double bump = cfg.contains("skew") ? cfg["skew"].value("bump", 1e-3) : 1e-3;
    std::vector<double> mats;
    if (cfg.contains("maturities"))
        for (const auto& v : cfg["maturities"]) mats.push_back(v.get<double>());
    else if (cfg.contains("maturity"))
        mats.push_back(cfg["maturity"].get<double>());
    if (mats.empty()) throw ConfigError("skew: no maturities");
    const PricerGrid grid = parse_grid(cfg, "", threads);
    const AutoPricer auto_cfg = parse_auto(cfg, eps_override, grid);

    std::ostringstream os;
    if (format == "csv") os << "maturity,atm_skew\n";
    json arr = json::array();
    for (double T : mats) {
        const double s = atm_skew(p, spot, T, bump, auto_cfg);
        if (format == "csv")
            os << fmt(T) << ',' << fmt(s) << '\n';
        else
            arr.push_back(json{{"maturity", T}, {"atm_skew", s}});
    }
    if (format != "csv") os << arr.dump(2) << '\n';
    if (out == "-" || out.empty())
        std::cout << os.str();
    else
        std::ofstream(out) << os.str();
    return 0;
}

int run_compare(const json& cfg, const std::string& out, const std::string& format, int threads) {
    const ModelParams p = parse_model(cfg);
    const double spot = cfg.value("spot", 1.0);
    const double T = need_num(cfg, "maturity", "config");
    const std::vector<double> strikes = parse_strikes(cfg);
    if (!cfg.contains("compare")) throw ConfigError("compare: missing 'compare' section");
    const json& cc = cfg["compare"];
    const MethodOpts opts = parse_method_opts(cfg);

    // fine benchmark first; any failure aborts
    const json& bj = cc.at("benchmark");
    const PricerGrid bench_grid = parse_grid(bj, "", threads);
    std::vector<double> bench;
    for (double K : strikes) {
        OptionSpec s{spot, K, T, K <= spot ? OptionKind::put : OptionKind::call};
        SinhContour c = parse_contour(bj.at("contour"));
        if (bj.contains("call_contour") && s.kind == OptionKind::call)
            c = parse_contour(bj["call_contour"]);
        const PriceEstimate est = price_sinh(p, s, c, bench_grid);
        if (est.flags.blown_nodes > 0 || !std::isfinite(est.value)) {
            std::cerr << "benchmark failed at K=" << K << "\n";
            return 3;
        }
        bench.push_back(est.value);
    }

    std::ostringstream os;
    os << "method";
    for (double K : strikes) os << ',' << fmt(K);
    os << '\n';
    for (const auto& mj : cc.at("methods")) {
        const std::string name = mj.at("method").get<std::string>();
        const PricerGrid grid = parse_grid(mj, "", threads);
        os << name;
        for (std::size_t i = 0; i < strikes.size(); ++i) {
            const double K = strikes[i];
            OptionSpec s{spot, K, T, K <= spot ? OptionKind::put : OptionKind::call};
            std::string cell;
            try {
                PriceEstimate est;
                if (name == "sinh") {
                    SinhContour c = parse_contour(mj.at("contour"));
                    if (mj.contains("call_contour") && s.kind == OptionKind::call)
                        c = parse_contour(mj["call_contour"]);
                    est = price_sinh(p, s, c, grid);
                } else if (name == "flat_ift") {
                    const json& c = mj.at("contour");
                    est = price_flat_ift(p, s, need_num(c, "omega1", "contour"),
                                         need_num(c, "zeta", "contour"),
                                         std::size_t(c.value("n_terms", 0)), grid);
                } else if (name == "flat_ift_bm") {
                    const json& c = mj.at("contour");
                    est = price_flat_ift_bm(p, s, mj.value("sigma0", opts.sigma0),
                                            need_num(c, "omega1", "contour"),
                                            need_num(c, "zeta", "contour"),
                                            std::size_t(c.value("n_terms", 0)), grid);
                } else if (name == "lewis") {
                    est = price_lewis(p, s, std::size_t(mj.value("n_gl", int(opts.n_gl))), grid);
                } else if (name == "cos") {
                    est = price_cos(p, s, mj.value("L", opts.cos_L),
                                    std::size_t(mj.value("n_terms", int(opts.cos_n))), grid);
                } else if (name == "cm_fft") {
                    const json& c = mj.at("contour");
                    auto ests = price_cm_fft(p, {s}, need_num(c, "omega1", "contour"),
                                             need_num(c, "zeta", "contour"),
                                             std::size_t(mj.value("m_fft", int(opts.fft_m))),
                                             opts.interp, grid);
                    est = ests.at(0);
                } else {
                    throw ConfigError("compare: unknown method '" + name + "'");
                }
                double rel = est.value / bench[i] - 1.0;
                cell = fmt(rel);
                if (est.flags.blown_nodes > 0) cell += "(blown)";
                if (est.flags.outside_no_arbitrage) cell += "(*)";
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception&) {
                cell = "failed";
            }
            os << ',' << cell;
        }
        os << '\n';
    }
    (void)format;
    if (out == "-" || out.empty())
        std::cout << os.str();
    else
        std::ofstream(out) << os.str();
    return 0;
}

int run_bootstrap(const json& cfg, const std::string& out, const std::string& format,
                  int threads, double eps_override) {
    const ModelParams p = parse_model(cfg);
    const double spot = cfg.value("spot", 1.0);
    const double T = need_num(cfg, "maturity", "config");
    const std::vector<double> strikes = parse_strikes(cfg);
    const json bs = cfg.value("bootstrap", json::object());
    const double threshold = bs.value("threshold", 1e-3);
    double epsilon = bs.value("epsilon", 1e-6);
    if (eps_override > 0.0) epsilon = eps_override;
    const PricerGrid grid = parse_grid(cfg, "", threads);
    AnalyticityDomain domain{-2.0, 1.0, -std::acos(-1.0) / 4.0, std::acos(-1.0) / 4.0};
    if (bs.contains("domain")) {
        const json& d = bs["domain"];
        domain.mu_minus = d.value("mu_minus", domain.mu_minus);
        domain.mu_plus = d.value("mu_plus", domain.mu_plus);
        domain.gamma_minus = d.value("gamma_minus", domain.gamma_minus);
        domain.gamma_plus = d.value("gamma_plus", domain.gamma_plus);
    }

    std::ostringstream os;
    if (format == "csv")
        os << "strike,maturity,verdict,certified_error,max_pairwise_diff,agreement_digits,"
              "principle_two,reason\n";
    json arr = json::array();
    bool any_ok = false;
    for (double K : strikes) {
        OptionSpec s{spot, K, T, parse_kind(cfg.value("kind", std::string("call")))};
        auto legs = default_bootstrap_legs(s, epsilon, grid.m_steps, domain);
        for (auto& leg : legs) {
            if (leg.shape == BootstrapLeg::Shape::sinh) {
                const auto tb = truncation_lambda(p, T, leg.contour.omega, epsilon, K / spot,
                                                  leg.contour.b, leg.contour.zeta, true);
                leg.contour.n_terms = std::max<std::size_t>(tb.n_terms, 24);
            } else {
                const auto tb =
                    truncation_lambda(p, T, 0.0, epsilon, K / spot, 1.0, leg.zeta, false);
                leg.n_terms = std::min<std::size_t>(std::max<std::size_t>(tb.n_terms, 24), 4000);
            }
            leg.grid.solver.n_iter = grid.solver.n_iter;
            leg.grid.threads = grid.threads;
        }
        const BootstrapReport rep = bootstrap_price(p, s, legs, threshold);
        const bool certified = rep.verdict == BootstrapReport::Verdict::certified;
        any_ok = any_ok || certified;
        if (format == "csv") {
            os << fmt(K) << ',' << fmt(T) << ',' << (certified ? "certified" : "rejected") << ','
               << fmt(rep.certified_error) << ',' << fmt(rep.max_pairwise_diff) << ','
               << rep.agreement_digits << ',' << (rep.principle_two ? 1 : 0) << ',' << rep.reason
               << '\n';
            for (const auto& e : rep.estimates)
                os << "#leg," << e.label << ',' << fmt(e.estimate.value) << ",blown="
                   << e.estimate.flags.blown_nodes << '\n';
        } else {
            json legs_j = json::array();
            for (const auto& e : rep.estimates)
                legs_j.push_back(json{{"label", e.label},
                                      {"value", e.estimate.value},
                                      {"blown_nodes", e.estimate.flags.blown_nodes}});
            arr.push_back(json{{"strike", K},
                               {"maturity", T},
                               {"verdict", certified ? "certified" : "rejected"},
                               {"certified_error", rep.certified_error},
                               {"max_pairwise_diff", rep.max_pairwise_diff},
                               {"agreement_digits", rep.agreement_digits},
                               {"principle_two", rep.principle_two},
                               {"reason", rep.reason},
                               {"legs", legs_j}});
        }
    }
    if (format != "csv") os << arr.dump(2) << '\n';
    if (out == "-" || out.empty())
        std::cout << os.str();
    else
        std::ofstream(out) << os.str();
    return any_ok ? 0 : 3;
}

int run_bench(const std::string& fixture_path, int threads) {
    json j;
    try {
        j = load_json(fixture_path);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    const ModelParams p = parse_model(j);
    const double spot = j.value("spot", 1.0);
    const double T = need_num(j, "maturity", "fixture");
    const PricerGrid grid = parse_grid(j, "", threads);
    const SinhContour put_c = parse_contour(j.at("contour"));
    const SinhContour call_c =
        j.contains("call_contour") ? parse_contour(j["call_contour"]) : put_c;

    std::size_t passed = 0, failed = 0;
    for (const auto& row : j.at("rows")) {
        const double K = row.at("strike").get<double>();
        const OptionKind kind = parse_kind(row.value("kind", std::string("call")));
        const double ref = row.at("reference").get<double>();
        const double tol = row.at("tolerance").get<double>();
        OptionSpec s{spot, K, T, kind};
        const SinhContour& c = (K > spot && j.contains("call_contour")) ? call_c : put_c;
        const PriceEstimate est = price_sinh(p, s, c, grid);
        const double diff = est.value - ref;
        const bool ok = std::isfinite(est.value) && std::abs(diff) <= tol;
        std::printf("[%s] %s K=%-7g value=%.12g reference=%.12g diff=%+.3g tol=%g\n",
                    ok ? "PASS" : "FAIL", j.value("label", std::string("fixture")).c_str(), K,
                    est.value, ref, diff, tol);
        (ok ? passed : failed)++;
    }
    std::printf("%zu passed, %zu failed\n", passed, failed);
    if (failed == 0) return 0;
    return passed == 0 ? 3 : 1;
}

int run_dump_phi(const json& cfg, const std::string& out, int threads) {
    const ModelParams p = parse_model(cfg);
    const double T = need_num(cfg, "maturity", "config");
    const PricerGrid grid = parse_grid(cfg, "", threads);
    std::vector<Complex> nodes;
    if (cfg.contains("contour")) {
        SinhContour c = parse_contour(cfg["contour"]);
        if (c.n_terms == 0) throw ConfigError("dump-phi: contour needs n_terms");
        nodes = sinh_nodes(c);
    } else if (cfg.contains("flat_nodes")) {
        const json& f = cfg["flat_nodes"];
        nodes = flat_nodes(need_num(f, "omega1", "flat_nodes"), need_num(f, "zeta", "flat_nodes"),
                           std::size_t(f.value("n_terms", 64)));
    } else {
        throw ConfigError("dump-phi: need 'contour' or 'flat_nodes'");
    }
    CharFnTable table(p, nodes, TimeGrid::uniform(T, grid.m_steps), grid.solver, grid.threads);
    std::ostringstream os;
    os << "re_xi,im_xi,t,re_phi,im_phi\n";
    for (const auto& row : table.dump())
        os << fmt(row.re_xi) << ',' << fmt(row.im_xi) << ',' << fmt(row.t) << ','
           << fmt(row.re_phi) << ',' << fmt(row.im_phi) << '\n';
    if (out == "-" || out.empty())
        std::cout << os.str();
    else
        std::ofstream(out) << os.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rough Heston Fourier pricing engine"};
    app.require_subcommand(1);

    std::string config_path, out_path = "-", format = "csv", fixture_path, phi_dump;
    std::string method_override, solver_override;
    int repeat = 1, threads = 0;
    double epsilon = 0.0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "output path ('-' for stdout)");
        sub->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--repeat", repeat, "timing repeats")->check(CLI::PositiveNumber);
        sub->add_option("--threads", threads, "worker threads (0 = hardware)");
        sub->add_option("--epsilon", epsilon, "override quadrature error tolerance");
    };

    auto* price = app.add_subcommand("price", "price one or more strikes");
    add_common(price, true);
    price->add_option("--method", method_override, "pricing method override");
    price->add_option("--solver", solver_override, "solver scheme override");

    auto* surface = app.add_subcommand("surface", "price/implied-vol grid");
    add_common(surface, true);
    surface->add_option("--dump-phi", phi_dump, "also write the table diagnostics CSV here");

    auto* skew = app.add_subcommand("skew", "at-the-money implied-vol slope");
    add_common(skew, true);

    auto* compare = app.add_subcommand("compare", "method x strike error matrix");
    add_common(compare, true);

    auto* bootstrap = app.add_subcommand("bootstrap", "bootstrap error certification");
    add_common(bootstrap, true);

    auto* bench = app.add_subcommand("bench", "check reference-table fixtures");
    bench->add_option("--fixture", fixture_path, "fixture JSON file")->required();
    bench->add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* dump = app.add_subcommand("dump-phi", "dump the characteristic-function table");
    add_common(dump, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) return run_bench(fixture_path, threads);
        const json cfg = load_json(config_path);
        if (price->parsed())
            return run_price(cfg, out_path, format, repeat, threads, method_override,
                             solver_override, epsilon);
        if (surface->parsed())
            return run_surface(cfg, out_path, format, repeat, threads, epsilon, phi_dump);
        if (skew->parsed()) return run_skew(cfg, out_path, format, threads, epsilon);
        if (compare->parsed()) return run_compare(cfg, out_path, format, threads);
        if (bootstrap->parsed()) return run_bootstrap(cfg, out_path, format, threads, epsilon);
        if (dump->parsed()) return run_dump_phi(cfg, out_path, threads);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
