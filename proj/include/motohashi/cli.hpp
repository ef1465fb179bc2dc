#pragma once

// Command-line front end. run_cli() parses, dispatches and maps failures
// to exit codes (0 ok, 2 precondition/usage, 3 numerically inconclusive)
// with a JSON error object on stderr. Kept in a header so tests can drive
// it in-process.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "arithmetic.hpp"
#include "cache.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "explicit_formula.hpp"
#include "io.hpp"
#include "k_structure.hpp"
#include "product.hpp"
#include "zero_table.hpp"
#include "zeta.hpp"

#ifndef MOTOHASHI_DEFAULT_ZEROS
#define MOTOHASHI_DEFAULT_ZEROS "data/zeta_zeros_1000.txt"
#endif

namespace motohashi::cli {

inline constexpr const char* kCacheEnv = "MOTOHASHI_CACHE_DIR";

struct RunConfig {
    std::string subcommand;
    std::optional<std::string> help_text;

    // shared
    std::optional<double> t1, t2, z;
    std::string zeros_path = MOTOHASHI_DEFAULT_ZEROS;
    std::optional<std::string> cache_dir;
    std::optional<std::string> out_path;
    unsigned threads = 1;
    std::string output = "json";

    // eval, verify-ef
    std::string s_text;
    // verify-ef, singularities
    double x = 10.0;
    double gamma_max = 200.0;
    int q_max = 50;
    int k_max = 200;
    std::string rect_text;
    bool flip_signs = false;
    // coeffs
    std::size_t nmax = 100;
    // scan-zeros
    std::string target = "zeta";
    std::string t_range = "0,50";
    double step = 0.05;
    // nk
    std::vector<double> sigmas{0.5};
    double T = 50.0;
    // moments / fx-integral
    std::vector<double> ks{1.0};
    std::vector<double> kappas{0.6};
    std::vector<double> sigma_lines;
    double quad_step = 0.05;
    bool strict = false;
    // largevalue-scan
    std::string E_range = "0,1";
    std::string grid = "1,1";
    double scale = 1.0;
    // probe
    std::string kind = "zeta";
    int m = 3;
    int samples = 200;

    /// The spectral configuration; --z is required, shifts default to 0.
    SpectralParams spectral() const {
        if (!z) fail(ErrorKind::usage, "this subcommand needs --z", "--z");
        return SpectralParams(t1.value_or(0.0), t2.value_or(0.0), *z);
    }
};

namespace detail {

inline std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& flag) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        try {
            out.push_back(parse_number(cell));
        } catch (const Error&) {
            fail(ErrorKind::usage, flag + ": '" + text + "' is not a comma-separated list of numbers", flag);
        }
    }
    if (out.size() != expected)
        fail(ErrorKind::usage, flag + " expects " + std::to_string(expected) + " comma-separated numbers", flag);
    for (const double v : out)
        if (!std::isfinite(v)) fail(ErrorKind::usage, flag + " values must be finite", flag);
    return out;
}

inline Complex parse_point(const std::string& text, const std::string& flag) {
    if (text.empty()) fail(ErrorKind::usage, "missing " + flag + " re,im", flag);
    const auto v = parse_list(text, 2, flag);
    return {v[0], v[1]};
}

inline Rect parse_rect(const std::string& text, const std::string& flag) {
    const auto v = parse_list(text, 4, flag);
    try {
        return Rect(v[0], v[1], v[2], v[3]);
    } catch (const Error& e) {
        fail(ErrorKind::usage, flag + ": " + e.what(), flag);
    }
}

inline Json params_json(const SpectralParams& p) { return Json{{"t1", p.t1}, {"t2", p.t2}, {"z", p.z}}; }

inline Json rect_json(const Rect& r) { return Json::array({r.x0, r.x1, r.y0, r.y1}); }

inline void warn(std::ostream& err, const std::string& what, Json detail = Json::object()) {
    Json j{{"warning", what}};
    for (auto it = detail.begin(); it != detail.end(); ++it) j[it.key()] = it.value();
    err << j.dump() << '\n';
}

class Context {
public:
    Context(const RunConfig& cfg, std::ostream& err)
        : cfg_(cfg), err_(err), cache_(cfg.cache_dir ? std::optional<std::filesystem::path>(*cfg.cache_dir) : std::nullopt, &err) {}

    const RunConfig& cfg() const { return cfg_; }
    std::ostream& err() const { return err_; }
    const Cache& cache() const { return cache_; }

    const ZeroTable& zeros() {
        if (!zeros_) {
            if (!std::filesystem::exists(cfg_.zeros_path))
                fail(ErrorKind::io, "zeros file not found: " + cfg_.zeros_path, "--zeros-file");
            zeros_ = ZeroTable::from_file(cfg_.zeros_path);
        }
        return *zeros_;
    }

    CoefficientTable z_table(const SpectralParams& p, std::size_t nmax) {
        const std::string key = params_key(p) + ",nmax=" + std::to_string(nmax);
        if (auto hit = cache_.load_table("z-coefficients", key)) return *hit;
        auto t = z_coefficients(p, nmax);
        cache_.store_table("z-coefficients", key, t);
        return t;
    }

    CoefficientTable sigma_table(const SpectralParams& p, std::size_t nmax, const CoefficientTable* c = nullptr) {
        const std::string key = params_key(p) + ",nmax=" + std::to_string(nmax);
        if (auto hit = cache_.load_table("log-deriv", key)) return *hit;
        auto t = log_deriv_coefficients(c ? *c : z_table(p, nmax));
        cache_.store_table("log-deriv", key, t);
        return t;
    }

    KSingularities k_part(const MotohashiProduct& product, const TruncationPolicy& policy) {
        const std::string key = params_key(product.params()) + ",kmax=" + std::to_string(policy.k_max) + ",rect=" +
                                hexfloat(policy.rect.x0) + ":" + hexfloat(policy.rect.x1) + ":" + hexfloat(policy.rect.y0) +
                                ":" + hexfloat(policy.rect.y1);
        if (auto hit = cache_.load_k_part(key, policy)) return *hit;
        auto k = enumerate_K_singularities(product, policy, cfg_.threads);
        cache_.store_k_part(key, k);
        return k;
    }

    SingularityInventory inventory(const MotohashiProduct& product, const TruncationPolicy& policy) {
        const KSingularities k = k_part(product, policy);
        auto inv = enumerate_singularities(product, policy, zeros(), cfg_.threads, &k);
        for (const auto& c : inv.collisions)
            warn(err_, "singularity collision",
                 {{"first", std::string(to_string(c.first.cls))},
                  {"second", std::string(to_string(c.second.cls))},
                  {"re", c.first.location.real()},
                  {"im", c.first.location.imag()}});
        return inv;
    }

private:
    const RunConfig& cfg_;
    std::ostream& err_;
    Cache cache_;
    std::optional<ZeroTable> zeros_;
};

inline TruncationPolicy policy_from(const RunConfig& cfg, std::optional<Complex> s) {
    TruncationPolicy p = s ? TruncationPolicy::defaults_for(*s) : TruncationPolicy{};
    p.gamma_max = cfg.gamma_max;
    p.q_max = cfg.q_max;
    p.k_max = cfg.k_max;
    if (!cfg.rect_text.empty()) p.rect = parse_rect(cfg.rect_text, "--rect");
    p.validate();
    return p;
}

template <class F>
Json optional_value(F&& f, Json& notes, const char* name) {
    try {
        return complex_json(f());
    } catch (const Error& e) {
        notes[name] = std::string(to_string(e.kind())) + (e.tag().empty() ? "" : ":" + e.tag());
        return nullptr;
    }
}

inline std::string cmd_eval(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const Complex s = parse_point(cfg.s_text, "--s");
    const SpectralParams p = cfg.spectral();
    const ZeroTable* zeros = std::filesystem::exists(cfg.zeros_path) ? &ctx.zeros() : nullptr;
    const MotohashiProduct product(p, zeros);
    const Complex J = product.J(s);
    const Complex K = product.K(s);
    Json notes = Json::object();
    Json j{{"s", complex_json(s)}, {"params", params_json(p)}};
    j["zeta"] = optional_value([&] { return zeta(s); }, notes, "zeta");
    j["J"] = complex_json(J);
    j["K"] = complex_json(K);
    j["Z"] = complex_json(J * K);
    j["f_X"] = complex_json(J * K - 1.0);
    j["zeta_log_deriv"] = optional_value([&] { return zeta_log_deriv(s, zeros); }, notes, "zeta_log_deriv");
    j["Z_log_deriv"] = optional_value([&] { return product.Z_log_deriv(s); }, notes, "Z_log_deriv");
    j["excluded"] = notes;
    return dump_json(j);
}

inline std::string cmd_coeffs(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const SpectralParams p = cfg.spectral();
    require(cfg.nmax >= 1 && cfg.nmax <= kCoefficientLimit, "--nmax must lie in [1, 1e6]");
    require(std::isfinite(cfg.x) && cfg.x > 1.0, "--x must exceed 1");
    const auto c = ctx.z_table(p, cfg.nmax);
    const auto sigma = cfg.nmax >= 2 ? ctx.sigma_table(p, cfg.nmax, &c) : CoefficientTable{};
    std::ostringstream out;
    write_coefficients_csv(out, c, sigma, cfg.x);
    return out.str();
}

inline std::string cmd_singularities(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const SpectralParams p = cfg.spectral();
    const TruncationPolicy policy = policy_from(cfg, std::nullopt);
    const MotohashiProduct product(p, &ctx.zeros());
    const auto inv = ctx.inventory(product, policy);
    Json arr = Json::array();
    for (const auto& pt : inv.points)
        arr.push_back({{"class", std::string(to_string(pt.cls))},
                       {"re", pt.location.real()},
                       {"im", pt.location.imag()},
                       {"sign", pt.sign},
                       {"multiplicity", pt.multiplicity}});
    return dump_json(arr);
}

inline std::string cmd_verify_ef(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const SpectralParams p = cfg.spectral();
    ExplicitFormulaParams ep;
    ep.s = parse_point(cfg.s_text, "--s");
    ep.x = cfg.x;
    ep.policy = policy_from(cfg, ep.s);
    ep.validate();
    const MotohashiProduct product(p, &ctx.zeros());
    const auto inv = ctx.inventory(product, ep.policy);
    const std::size_t top = std::max<std::size_t>(smoothing_range(ep.x), 2);
    const auto table = selberg_smooth(ctx.sigma_table(p, top), ep.x);
    const auto r = rhs_assemble(ep, product, inv, table, {cfg.threads, cfg.flip_signs});

    Json per = Json::object();
    for (const auto c : kAllClasses) {
        Json e = complex_json(r.per_class.at(c));
        e["points"] = r.per_class_points.count(c) ? r.per_class_points.at(c) : 0;
        e["sign"] = class_sign(c);
        per[std::string(to_string(c))] = e;
    }
    Json j{{"s", complex_json(r.s)},
           {"x", r.x},
           {"params", params_json(p)},
           {"policy",
            {{"gamma_max", ep.policy.gamma_max}, {"q_max", ep.policy.q_max}, {"k_max", ep.policy.k_max}, {"rect", rect_json(ep.policy.rect)}}},
           {"zeros_used", ctx.zeros().up_to(ep.policy.gamma_max).size()},
           {"flip_signs", cfg.flip_signs},
           {"lhs", complex_json(r.lhs)},
           {"dirichlet_sum", complex_json(r.dirichlet_sum)},
           {"kernel_sum_plus", complex_json(r.kernel_sum_plus)},
           {"kernel_sum_minus", complex_json(r.kernel_sum_minus)},
           {"rhs", complex_json(r.rhs())},
           {"residual", complex_json(r.residual)},
           {"residual_abs", std::abs(r.residual)},
           {"kernel_tail_bound", kernel_tail_bound(ep, p, ctx.zeros())},
           {"collisions", r.collisions},
           {"per_class", per}};
    return dump_json(j);
}

inline std::string cmd_scan_zeros(Context& ctx) {
    const auto& cfg = ctx.cfg();
    std::ostringstream out;
    if (cfg.target == "zeta") {
        const auto range = parse_list(cfg.t_range, 2, "--t-range");
        const auto zs = scan_critical_zeros(range[0], range[1], cfg.step);
        CsvWriter csv(out, {"index", "ordinate"});
        for (std::size_t i = 0; i < zs.size(); ++i) csv.row({std::to_string(i + 1), format_number(zs[i])});
    } else if (cfg.target == "K") {
        const SpectralParams p = cfg.spectral();
        const Rect rect = cfg.rect_text.empty() ? Rect(-1.0, 3.0, -50.0, 50.0) : parse_rect(cfg.rect_text, "--rect");
        ZeroSearchOptions opt;
        opt.threads = cfg.threads;
        const auto res = find_K_zeros(MotohashiProduct(p), rect, opt);
        CsvWriter csv(out, {"re", "im", "multiplicity"});
        for (const auto& z : res.zeros)
            csv.row({format_number(z.location.real()), format_number(z.location.imag()), std::to_string(z.multiplicity)});
    } else {
        fail(ErrorKind::usage, "--target must be zeta or K", "--target");
    }
    return out.str();
}

inline std::string cmd_nk(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const SpectralParams p = cfg.spectral();
    std::ostringstream out;
    CsvWriter csv(out, {"sigma", "T", "count", "sigma_right", "certificate"});
    ZeroSearchOptions opt;
    opt.threads = cfg.threads;
    for (const double sigma : cfg.sigmas) {
        const auto r = count_K_zeros({sigma, cfg.T, p}, opt);
        csv.row({format_number(sigma), format_number(cfg.T), std::to_string(r.count), format_number(r.sigma_right),
                 format_number(r.certificate)});
    }
    return out.str();
}

inline std::string cmd_moments(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const double line = cfg.sigma_lines.empty() ? 0.5 : cfg.sigma_lines.front();
    std::ostringstream out;
    CsvWriter csv(out, {"k", "T", "quad_step", "sigma_line", "value", "halved_value", "relative_change", "ratio", "step_warning"});
    for (const double k : cfg.ks) {
        const auto r = zeta_moment({k, cfg.T, cfg.quad_step, line, cfg.threads});
        if (r.quadrature.step_warning)
            warn(ctx.err(), "step too coarse", {{"k", k}, {"relative_change", r.quadrature.relative_change}});
        csv.row({format_number(k), format_number(cfg.T), format_number(cfg.quad_step), format_number(line),
                 format_number(r.quadrature.value), format_number(r.quadrature.halved_value),
                 format_number(r.quadrature.relative_change), r.ratio ? format_number(*r.ratio) : "",
                 r.quadrature.step_warning ? "1" : "0"});
    }
    return out.str();
}

inline std::string cmd_fx_integral(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const SpectralParams p = cfg.spectral();
    const std::vector<double> lines = cfg.sigma_lines.empty() ? std::vector<double>{2.0} : cfg.sigma_lines;
    std::ostringstream out;
    CsvWriter csv(out, {"kappa", "sigma_line", "T", "X", "value", "halved_value", "relative_change", "excluded_windows"});
    for (const double line : lines) {
        for (const double kappa : cfg.kappas) {
            const auto r = fX_moment({kappa, cfg.T, line, cfg.quad_step, cfg.strict, cfg.threads}, p);
            for (const auto& w : r.excluded)
                warn(ctx.err(), "pole window excluded", {{"class", w.cls}, {"lo", w.lo}, {"hi", w.hi}, {"sigma_line", line}});
            if (r.quadrature.step_warning)
                warn(ctx.err(), "step too coarse", {{"kappa", kappa}, {"relative_change", r.quadrature.relative_change}});
            csv.row({format_number(kappa), format_number(line), format_number(cfg.T), format_number(p.z),
                     format_number(r.quadrature.value), format_number(r.quadrature.halved_value),
                     format_number(r.quadrature.relative_change), std::to_string(r.excluded.size())});
        }
    }
    return out.str();
}

inline std::string cmd_largevalue_scan(Context& ctx) {
    const auto& cfg = ctx.cfg();
    const SpectralParams p = cfg.spectral();
    const auto tr = parse_list(cfg.t_range, 2, "--t-range");
    const auto er = parse_list(cfg.E_range, 2, "--E-range");
    const auto g = parse_list(cfg.grid, 2, "--grid");
    LargeValueQuery q;
    q.t_lo = tr[0], q.t_hi = tr[1], q.E_lo = er[0], q.E_hi = er[1];
    q.t_points = static_cast<int>(g[0]), q.E_points = static_cast<int>(g[1]);
    if (q.t_points != g[0] || q.E_points != g[1]) fail(ErrorKind::usage, "--grid needs two integers", "--grid");
    q.scale = cfg.scale;
    q.threads = cfg.threads;
    const auto rows = largevalue_scan(p, q);
    std::ostringstream out;
    CsvWriter csv(out, {"t0", "E0", "sigma0", "abs_jk", "skip"});
    for (const auto& r : rows)
        csv.row({format_number(r.t0), format_number(r.E0), format_number(r.sigma0), r.abs_JK ? format_number(*r.abs_JK) : "", r.skip});
    return out.str();
}

inline std::string cmd_probe(Context& ctx) {
    const auto& cfg = ctx.cfg();
    Json j{{"kind", cfg.kind}, {"m", cfg.m}, {"samples", cfg.samples}};
    if (cfg.kind == "zeta") {
        j["T_m"] = select_contour_ordinate(cfg.m, ctx.zeros());
        j["ratio"] = probe_contour_bound(cfg.m, cfg.samples, ctx.zeros());
    } else if (cfg.kind == "K") {
        const SpectralParams p = cfg.spectral();
        j["params"] = params_json(p);
        j["ratio"] = probe_K_contour_bound(MotohashiProduct(p), cfg.m, cfg.samples);
    } else {
        fail(ErrorKind::usage, "--kind must be zeta or K", "--kind");
    }
    return dump_json(j);
}

inline void add_spectral(CLI::App& app, RunConfig& cfg) {
    app.add_option("--t1", cfg.t1, "first shift T1 (default 0)");
    app.add_option("--t2", cfg.t2, "second shift T2 (default 0)");
    app.add_option("--z", cfg.z, "mollifier length z (> 1)");
}

inline void add_truncation(CLI::App& app, RunConfig& cfg) {
    app.add_option("--gamma-max", cfg.gamma_max, "largest zero ordinate used")->capture_default_str();
    app.add_option("--qmax", cfg.q_max, "number of trivial zeros used")->capture_default_str();
    app.add_option("--kmax", cfg.k_max, "largest |k| on the pole grid of K")->capture_default_str();
    app.add_option("--rect", cfg.rect_text, "S_r search rectangle x0,x1,y0,y1");
}

}  // namespace detail

/// Builds the parser bound to `cfg`. Flags override config-file values;
/// MOTOHASHI_CACHE_DIR sits between the two.
inline std::unique_ptr<CLI::App> make_app(RunConfig& cfg) {
    auto app = std::make_unique<CLI::App>("Motohashi product explicit-formula engine", "motohashi");
    app->allow_config_extras(false);
    app->set_config("--config", "", "TOML/INI configuration file");
    app->require_subcommand(1);
    app->fallthrough();
    app->add_option("--threads", cfg.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 256u));
    app->add_option("--out", cfg.out_path, "write output to this file instead of stdout");
    app->add_option("--cache-dir", cfg.cache_dir, "coefficient/inventory cache directory")->envname(kCacheEnv);
    app->add_option("--zeros-file", cfg.zeros_path, "zeta zero ordinates file")->capture_default_str();
    detail::add_spectral(*app, cfg);

    auto* eval = app->add_subcommand("eval", "zeta, J, K, Z, f_X and log-derivatives at one point");
    eval->add_option("--s", cfg.s_text, "evaluation point re,im")->required();

    auto* coeffs = app->add_subcommand("coeffs", "c_n, Sigma(n) and smoothing weights as CSV");
    coeffs->add_option("--nmax", cfg.nmax, "largest n")->capture_default_str();
    coeffs->add_option("--x", cfg.x, "smoothing length for the weight column")->capture_default_str();

    auto* sing = app->add_subcommand("singularities", "singularity inventory as JSON");
    detail::add_truncation(*sing, cfg);

    auto* ef = app->add_subcommand("verify-ef", "explicit-formula residual report as JSON");
    ef->add_option("--s", cfg.s_text, "evaluation point re,im")->required();
    ef->add_option("--x", cfg.x, "smoothing length x > 1")->capture_default_str();
    ef->add_flag("--flip-signs", cfg.flip_signs, "swap the two kernel sums (audit)");
    detail::add_truncation(*ef, cfg);

    auto* scan = app->add_subcommand("scan-zeros", "critical zeros of zeta or zeros of K as CSV");
    scan->add_option("--target", cfg.target, "zeta or K")->capture_default_str();
    scan->add_option("--t-range", cfg.t_range, "ordinate range lo,hi (zeta)")->capture_default_str();
    scan->add_option("--step", cfg.step, "sign-change scan step (zeta)")->capture_default_str();
    scan->add_option("--rect", cfg.rect_text, "search rectangle x0,x1,y0,y1 (K)");

    auto* nk = app->add_subcommand("nk", "zero counts N_K(sigma, T) as CSV");
    nk->add_option("--sigma", cfg.sigmas, "one or more sigma >= 1/2")->delimiter(',');
    nk->add_option("--T", cfg.T, "height T")->capture_default_str();

    auto* mom = app->add_subcommand("moments", "moments of |zeta| on a vertical line as CSV");
    mom->add_option("--k", cfg.ks, "one or more exponents k")->delimiter(',');
    mom->add_option("--T", cfg.T, "upper limit T <= 500")->capture_default_str();
    mom->add_option("--quad-step", cfg.quad_step, "Simpson step <= 0.05")->capture_default_str();
    mom->add_option("--sigma-line", cfg.sigma_lines, "line Re s (default 1/2)")->delimiter(',');

    auto* fx = app->add_subcommand("fx-integral", "integral of |f_X|^{1/kappa} on vertical lines as CSV");
    fx->add_option("--kappa", cfg.kappas, "one or more kappa in (1/2, 3/4)")->delimiter(',');
    fx->add_option("--sigma-line", cfg.sigma_lines, "one or more lines Re s > 1/2 (default 2)")->delimiter(',');
    fx->add_option("--T", cfg.T, "upper limit T")->capture_default_str();
    fx->add_option("--quad-step", cfg.quad_step, "Simpson step <= 0.05")->capture_default_str();
    fx->add_flag("--strict", cfg.strict, "fail instead of excluding pole windows");

    auto* lv = app->add_subcommand("largevalue-scan", "|J K| on a (t0, E0) grid as CSV");
    lv->add_option("--t-range", cfg.t_range, "t0 range lo,hi")->capture_default_str();
    lv->add_option("--E-range", cfg.E_range, "E0 range lo,hi")->capture_default_str();
    lv->add_option("--grid", cfg.grid, "grid sizes nt,nE")->capture_default_str();
    lv->add_option("--scale", cfg.scale, "L in sigma0 = 1 - E0/L")->capture_default_str();

    auto* probe = app->add_subcommand("probe", "empirical contour bounds for zeta'/zeta or K'/K");
    probe->add_option("--kind", cfg.kind, "zeta or K")->capture_default_str();
    probe->add_option("--m", cfg.m, "contour index m")->capture_default_str();
    probe->add_option("--samples", cfg.samples, "samples per segment")->capture_default_str();
    return app;
}

/// Parses argv-style arguments (without the program name).
inline RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig cfg;
    auto app = make_app(cfg);
    if (args.empty()) {
        cfg.help_text = app->help();
        fail(ErrorKind::usage, "no subcommand given\n" + *cfg.help_text, "");
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app->parse(reversed);
    } catch (const CLI::CallForHelp&) {
        cfg.help_text = app->help();
        return cfg;
    } catch (const CLI::CallForAllHelp&) {
        cfg.help_text = app->help("", CLI::AppFormatMode::All);
        return cfg;
    } catch (const CLI::ParseError& e) {
        fail(ErrorKind::usage, e.what(), e.get_name());
    }
    for (const auto* sub : app->get_subcommands()) cfg.subcommand = sub->get_name();
    for (const auto* sub : app->get_subcommands())
        if (sub->get_help_ptr() && sub->get_help_ptr()->count() > 0) cfg.help_text = sub->help();
    const std::string& c = cfg.subcommand;
    cfg.output = (c == "eval" || c == "singularities" || c == "verify-ef" || c == "probe") ? "json" : "csv";
    return cfg;
}

/// Runs the subcommand and returns the emitted artifact text.
inline std::string dispatch(const RunConfig& cfg, std::ostream& err) {
    detail::Context ctx(cfg, err);
    const std::string& c = cfg.subcommand;
    if (c == "eval") return detail::cmd_eval(ctx);
    if (c == "coeffs") return detail::cmd_coeffs(ctx);
    if (c == "singularities") return detail::cmd_singularities(ctx);
    if (c == "verify-ef") return detail::cmd_verify_ef(ctx);
    if (c == "scan-zeros") return detail::cmd_scan_zeros(ctx);
    if (c == "nk") return detail::cmd_nk(ctx);
    if (c == "moments") return detail::cmd_moments(ctx);
    if (c == "fx-integral") return detail::cmd_fx_integral(ctx);
    if (c == "largevalue-scan") return detail::cmd_largevalue_scan(ctx);
    if (c == "probe") return detail::cmd_probe(ctx);
    fail(ErrorKind::usage, "unknown subcommand '" + c + "'", c);
}

inline int exit_code(ErrorKind kind) noexcept { return is_numerical(kind) ? 3 : 2; }

inline void report_error(std::ostream& err, ErrorKind kind, const std::string& message, const std::string& tag) {
    Json j{{"error", std::string(to_string(kind))}, {"message", message}, {"exit_code", exit_code(kind)}};
    if (!tag.empty()) j["tag"] = tag;
    err << j.dump() << '\n';
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const RunConfig cfg = parse_config(args);
        if (cfg.help_text) {
            out << *cfg.help_text;
            return 0;
        }
        const std::string text = dispatch(cfg, err);
        if (cfg.out_path) {
            std::ofstream file(*cfg.out_path, std::ios::binary | std::ios::trunc);
            if (!file) fail(ErrorKind::io, "cannot open output file " + *cfg.out_path, "--out");
            file << text;
            if (!file) fail(ErrorKind::io, "failed writing " + *cfg.out_path, "--out");
        } else {
            out << text;
        }
        return 0;
    } catch (const Error& e) {
        report_error(err, e.kind(), e.what(), e.tag());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        report_error(err, ErrorKind::precondition, e.what(), "");
        return 2;
    }
}

}  // namespace motohashi::cli
