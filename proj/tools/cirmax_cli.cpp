#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cirmax/asymptotics.hpp"
#include "cirmax/eigen.hpp"
#include "cirmax/inversion.hpp"
#include "cirmax/mc.hpp"
#include "cirmax/positivity.hpp"
#include "cirmax/types.hpp"

using nlohmann::json;
using namespace cirmax;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    std::ofstream f(path);
    f << text;
    if (!f.good()) {
        std::fprintf(stderr, "cannot write %s\n", path.c_str());
        return 1;
    }
    return 0;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

CdfMethod parse_method(const std::string& name) {
    if (name == "bromwich") return CdfMethod::bromwich;
    if (name == "eigen") return CdfMethod::eigen;
    if (name == "asymp_small_y") return CdfMethod::asymp_small_y;
    if (name == "asymp_fixed_y") return CdfMethod::asymp_fixed_y;
    throw std::invalid_argument("unknown method '" + name +
                                "' (bromwich|eigen|asymp_small_y|asymp_fixed_y)");
}

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    try {
        q = mpq_class(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "' (use p or p/q)");
    }
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

json params_json(const CirParams& p) {
    return json{{"alpha", p.alpha}, {"beta", p.beta}, {"sigma", p.sigma},
                {"x0", p.x0},       {"t", p.t},       {"z", p.z}};
}

struct TailCli {
    CirParams p{};
    std::string methods = "bromwich";
};

int run_tail(const TailCli& c, bool as_json, const std::string& out) {
    c.p.validate();
    const auto names = split_list(c.methods);
    if (names.empty()) throw std::invalid_argument("--method list is empty");
    std::string csv = "method,value\n";
    json results = json::array();
    for (const auto& name : names) {
        const double v = cir_running_max_cdf(c.p, parse_method(name));
        csv += name + "," + fmt17(v) + "\n";
        results.push_back({{"method", name}, {"value", v}});
    }
    if (!as_json) return emit(out, csv);
    json j{{"schema", 1}, {"command", "tail"}, {"params", params_json(c.p)},
           {"results", results}};
    return emit(out, j.dump(2) + "\n");
}

struct ZerosCli {
    double b = 1, x = 10;
    int count = 5;
    double refine_tol = 1e-12;
};

int run_zeros(const ZerosCli& c, bool as_json, const std::string& out) {
    const ZeroTable t = find_zeros(c.b, c.x, c.count, c.refine_tol);
    if (!as_json) return emit(out, zero_table_csv(t));
    json j{{"schema", 1},     {"command", "zeros"},      {"b", t.b},
           {"x", t.x},        {"refine_tol", t.refine_tol}, {"zeros", t.zeros},
           {"residuals", t.residuals}};
    return emit(out, j.dump(2) + "\n");
}

struct AsympCli {
    DimensionlessArgs d{1, 1, 10, 0};
    bool no_truth = false;
};

int run_asymp(const AsympCli& c, bool as_json, const std::string& out) {
    c.d.validate();
    double log_truth = 0;
    if (!c.no_truth)
        log_truth = bromwich_I_full(c.d, ContourSpec::defaults(c.d)).log_value;

    struct Row {
        const char* mode;
        TailValue tv;
    };
    std::vector<Row> rows{{"small_y", tail_asymp_small_y(c.d.lambda, c.d.b, c.d.x)}};
    if (c.d.y > 0)
        rows.push_back({"fixed_y", tail_asymp_fixed_y(c.d.lambda, c.d.b, c.d.x, c.d.y)});

    std::string csv = "mode,value,log_value,log_bromwich,ratio\n";
    json jr = json::array();
    for (const auto& r : rows) {
        // ratio of the numeric inversion to the asymptotic form, taken in log
        // space so deep tails stay meaningful
        const double ratio = c.no_truth
                                 ? std::nan("")
                                 : std::exp(log_truth - r.tv.log_value);
        const double lb = c.no_truth ? std::nan("") : log_truth;
        csv += std::string(r.mode) + "," + fmt17(r.tv.value) + "," +
               fmt17(r.tv.log_value) + "," + fmt17(lb) + "," + fmt17(ratio) + "\n";
        jr.push_back({{"mode", r.mode},
                      {"value", r.tv.value},
                      {"log_value", r.tv.log_value},
                      {"log_bromwich", lb},
                      {"ratio", ratio}});
    }
    if (!as_json) return emit(out, csv);
    json j{{"schema", 1},
           {"command", "asymp"},
           {"params",
            {{"lambda", c.d.lambda}, {"b", c.d.b}, {"x", c.d.x}, {"y", c.d.y}}},
           {"results", jr}};
    return emit(out, j.dump(2) + "\n");
}

struct PositivityCli {
    std::string a = "1", b = "1";
    int depth = 40;
    int gmax = 60;
};

int run_positivity(const PositivityCli& c, bool as_json, const std::string& out) {
    const mpq_class a = parse_rational(c.a), b = parse_rational(c.b);
    const CoeffTable t = v_table_direct(a, b, c.depth);
    const RecReport ra = recA_check(t);
    const RecReport rg = recG_check(t);
    const NonnegReport nn = verify_nonneg(a, b, c.depth, c.depth);
    GPosReport gp;
    if (c.gmax > 1) {
        // the sign check only claims anything on a >= b > 0; outside that
        // region run just the built-in boundary samples
        std::vector<std::pair<mpq_class, mpq_class>> samples;
        if (a >= b && b > 0) samples.emplace_back(a, b);
        gp = g_positivity(c.gmax, samples);
    }
    const bool pass = ra.ok && rg.ok && nn.ok && (c.gmax <= 1 || gp.ok);

    json viol = json::array();
    for (const auto& v : nn.violations)
        viol.push_back({{"m", v.m},
                        {"n", v.n},
                        {"diff_order", v.diff_order},
                        {"value", v.value.get_str()}});
    json j{{"schema", 1},
           {"command", "verify-positivity"},
           {"a", a.get_str()},
           {"b", b.get_str()},
           {"depth", c.depth},
           {"recursion_a", {{"ok", ra.ok}, {"checked", ra.checked}}},
           {"recursion_g", {{"ok", rg.ok}, {"checked", rg.checked}}},
           {"nonneg",
            {{"ok", nn.ok},
             {"region_verified", nn.region_verified},
             {"base_cases_ok", nn.base_cases_ok},
             {"exemption_value", nn.exemption_value.get_str()},
             {"violations", viol}}},
           {"pass", pass}};
    if (c.gmax > 1)
        j["g_positivity"] = {{"ok", gp.ok},
                             {"n_max", gp.n_max},
                             {"evaluations", gp.evaluations},
                             {"violations", gp.violations.size()}};

    int rc;
    if (as_json) {
        rc = emit(out, j.dump(2) + "\n");
    } else {
        std::string csv = "key,value\n";
        csv += "a," + a.get_str() + "\n";
        csv += "b," + b.get_str() + "\n";
        csv += "depth," + std::to_string(c.depth) + "\n";
        csv += "recursion_a_ok," + std::to_string(int(ra.ok)) + "\n";
        csv += "recursion_a_checked," + std::to_string(ra.checked) + "\n";
        csv += "recursion_g_ok," + std::to_string(int(rg.ok)) + "\n";
        csv += "recursion_g_checked," + std::to_string(rg.checked) + "\n";
        csv += "nonneg_ok," + std::to_string(int(nn.ok)) + "\n";
        csv += "nonneg_region_verified," + std::to_string(int(nn.region_verified)) + "\n";
        csv += "nonneg_base_cases_ok," + std::to_string(int(nn.base_cases_ok)) + "\n";
        csv += "nonneg_exemption," + nn.exemption_value.get_str() + "\n";
        csv += "nonneg_violations," + std::to_string(nn.violations.size()) + "\n";
        if (c.gmax > 1) {
            csv += "g_positivity_ok," + std::to_string(int(gp.ok)) + "\n";
            csv += "g_positivity_evaluations," + std::to_string(gp.evaluations) + "\n";
        }
        csv += "pass," + std::to_string(int(pass)) + "\n";
        rc = emit(out, csv);
    }
    return rc != 0 ? rc : (pass ? 0 : 1);
}

struct McCli {
    CirParams p{};
    SimConfig cfg{};
    std::string scheme = "exact";
};

int run_mc(const McCli& c, bool as_json, const std::string& out) {
    McCli m = c;
    if (m.scheme == "exact" || m.scheme == "exact_transition")
        m.cfg.scheme = McScheme::exact_transition;
    else if (m.scheme == "euler" || m.scheme == "full_truncation_euler")
        m.cfg.scheme = McScheme::full_truncation_euler;
    else
        throw std::invalid_argument("unknown scheme '" + m.scheme + "' (exact|euler)");

    const auto t0 = std::chrono::steady_clock::now();
    const McEstimate e = mc_running_max_tail(m.p, m.cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!as_json) {
        std::string csv = "p_hat,stderr,n_hits\n";
        csv += fmt17(e.p_hat) + "," + fmt17(e.stderr) + "," +
               std::to_string(e.n_hits) + "\n";
        return emit(out, csv);
    }
    json j{{"schema", 1},
           {"command", "mc"},
           {"config",
            {{"alpha", m.p.alpha},
             {"beta", m.p.beta},
             {"sigma", m.p.sigma},
             {"x0", m.p.x0},
             {"t", m.p.t},
             {"z", m.p.z},
             {"n_paths", m.cfg.n_paths},
             {"n_steps", m.cfg.n_steps},
             {"seed", m.cfg.seed},
             {"scheme", m.cfg.scheme == McScheme::exact_transition
                            ? "exact_transition"
                            : "full_truncation_euler"}}},
           {"estimate",
            {{"p_hat", e.p_hat}, {"stderr", e.stderr}, {"n_hits", e.n_hits}}},
           {"wall_time_s", wall}};
    return emit(out, j.dump(2) + "\n");
}

struct CompareCli {
    CirParams p{};
    std::string z_grid;
    SimConfig cfg{20000, 1024, 0, McScheme::exact_transition};
    bool skip_mc = false;
    std::string asymp_mode = "fixed_y";
};

int run_compare(const CompareCli& c, bool as_json, const std::string& out) {
    std::vector<double> zs;
    for (const auto& s : split_list(c.z_grid)) {
        size_t pos = 0;
        double z;
        try {
            z = std::stod(s, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != s.size())
            throw std::invalid_argument("bad z value '" + s + "'");
        zs.push_back(z);
    }
    if (zs.empty()) throw std::invalid_argument("--z-grid is empty");
    const CdfMethod am = parse_method("asymp_" + c.asymp_mode);

    std::vector<McEstimate> mc;
    if (!c.skip_mc) {
        CirParams q = c.p;
        q.z = zs.front();
        mc = mc_running_max_tail_multi(q, zs, c.cfg);
    }

    std::string csv =
        "z,p_bromwich,p_eigen,p_asymp,p_mc,stderr,dev_bromwich_eigen,dev_bromwich_asymp,"
        "mc_sigmas\n";
    json jr = json::array();
    for (size_t i = 0; i < zs.size(); ++i) {
        CirParams q = c.p;
        q.z = zs[i];
        const double pb = cir_running_max_cdf(q, CdfMethod::bromwich);
        const double pe = cir_running_max_cdf(q, CdfMethod::eigen);
        const double pa = cir_running_max_cdf(q, am);
        const double pm = c.skip_mc ? std::nan("") : mc[i].p_hat;
        const double se = c.skip_mc ? std::nan("") : mc[i].stderr;
        const double dev_be = std::abs(pb - pe) / std::max(pb, 1e-12);
        const double dev_ba = std::abs(pb - pa) / std::max(pb, 1e-12);
        const double sig = c.skip_mc ? std::nan("")
                                     : (se > 0 ? std::abs(pb - pm) / se
                                               : (pb == pm ? 0.0 : INFINITY));
        csv += fmt17(zs[i]) + "," + fmt17(pb) + "," + fmt17(pe) + "," + fmt17(pa) +
               "," + fmt17(pm) + "," + fmt17(se) + "," + fmt17(dev_be) + "," +
               fmt17(dev_ba) + "," + fmt17(sig) + "\n";
        jr.push_back({{"z", zs[i]},
                      {"p_bromwich", pb},
                      {"p_eigen", pe},
                      {"p_asymp", pa},
                      {"p_mc", pm},
                      {"stderr", se},
                      {"dev_bromwich_eigen", dev_be},
                      {"dev_bromwich_asymp", dev_ba},
                      {"mc_sigmas", sig}});
    }
    if (!as_json) return emit(out, csv);
    json j{{"schema", 1}, {"command", "compare"}, {"params", params_json(c.p)},
           {"rows", jr}};
    return emit(out, j.dump(2) + "\n");
}

struct ConjectureCli {
    double u0 = 1, b = 1, x = 10, y = 1;
    double v_max = 10;
    int v_count = 41;
};

int run_conjecture(const ConjectureCli& c, bool as_json, const std::string& out) {
    if (c.v_count < 2) throw std::invalid_argument("--v-count must be >= 2");
    std::vector<double> grid(c.v_count);
    for (int i = 0; i < c.v_count; ++i)
        grid[i] = c.v_max * double(i) / double(c.v_count - 1);
    const ConjectureReport r = conjecture_scan(c.u0, c.b, c.x, c.y, grid);
    const bool pass = r.quotient_decreasing;

    int rc;
    if (as_json) {
        json j{{"schema", 1},
               {"command", "scan-conjecture"},
               {"params",
                {{"u0", c.u0},
                 {"b", c.b},
                 {"x", c.x},
                 {"y", c.y},
                 {"v_max", c.v_max},
                 {"v_count", c.v_count}}},
               {"quotient_decreasing", r.quotient_decreasing},
               {"worst_quotient_jump", r.worst_quotient_jump},
               {"worst_quotient_v", r.worst_quotient_v},
               {"denominator_increasing", r.denominator_increasing},
               {"worst_denominator_drop", r.worst_denominator_drop},
               {"worst_denominator_v", r.worst_denominator_v}};
        rc = emit(out, j.dump(2) + "\n");
    } else {
        std::string csv = "key,value\n";
        csv += "quotient_decreasing," + std::to_string(int(r.quotient_decreasing)) + "\n";
        csv += "worst_quotient_jump," + fmt17(r.worst_quotient_jump) + "\n";
        csv += "worst_quotient_v," + fmt17(r.worst_quotient_v) + "\n";
        csv += "denominator_increasing," + std::to_string(int(r.denominator_increasing)) + "\n";
        csv += "worst_denominator_drop," + fmt17(r.worst_denominator_drop) + "\n";
        csv += "worst_denominator_v," + fmt17(r.worst_denominator_v) + "\n";
        rc = emit(out, csv);
    }
    return rc != 0 ? rc : (pass ? 0 : 1);
}

void add_cir_flags(CLI::App* cmd, CirParams& p) {
    cmd->add_option("--alpha", p.alpha, "drift level alpha")->required();
    cmd->add_option("--beta", p.beta, "mean reversion beta")->required();
    cmd->add_option("--sigma", p.sigma, "volatility sigma")->required();
    cmd->add_option("--x0", p.x0, "initial state X0")->required();
    cmd->add_option("--t", p.t, "horizon t")->required();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "running-maximum tail of the CIR diffusion: transform inversion, spectral "
        "series, saddle-point asymptotics, exact positivity checks, Monte Carlo.\n"
        "CIRMAX_THREADS caps simulation threads."};
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "csv";
    app.add_option("--out", out_path, "write output to this path instead of stdout");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    TailCli tail;
    auto* cmd_tail = app.add_subcommand("tail", "hitting probability by selected methods");
    add_cir_flags(cmd_tail, tail.p);
    cmd_tail->add_option("--z", tail.p.z, "barrier level z")->required();
    cmd_tail->add_option("--method", tail.methods,
                         "comma list: bromwich,eigen,asymp_small_y,asymp_fixed_y");

    ZerosCli zeros;
    auto* cmd_zeros = app.add_subcommand("zeros", "a-zeros of M(-s,b,x) with residuals");
    cmd_zeros->add_option("--b", zeros.b, "second Kummer parameter")->required();
    cmd_zeros->add_option("--x", zeros.x, "argument x")->required();
    cmd_zeros->add_option("--count", zeros.count, "number of zeros")->required();
    cmd_zeros->add_option("--refine-tol", zeros.refine_tol, "refinement tolerance");

    AsympCli asymp;
    auto* cmd_asymp = app.add_subcommand(
        "asymp", "tail asymptotics against the numeric inversion");
    cmd_asymp->add_option("--lambda", asymp.d.lambda, "lambda = beta t")->required();
    cmd_asymp->add_option("--b", asymp.d.b, "b = 2 alpha / sigma^2")->required();
    cmd_asymp->add_option("--x", asymp.d.x, "x = 2 beta z / sigma^2")->required();
    cmd_asymp->add_option("--y", asymp.d.y, "y = 2 beta X0 / sigma^2");
    cmd_asymp->add_flag("--no-truth", asymp.no_truth,
                        "skip the Bromwich reference value");

    PositivityCli pos;
    auto* cmd_pos = app.add_subcommand(
        "verify-positivity", "exact recursion and nonnegativity checks of |M|^2 coefficients");
    cmd_pos->add_option("--a", pos.a, "rational a (e.g. 3/2)")->required();
    cmd_pos->add_option("--b", pos.b, "rational b")->required();
    cmd_pos->add_option("--depth", pos.depth, "table depth N");
    cmd_pos->add_option("--gmax", pos.gmax,
                        "check recursion coefficient signs up to this n (<=1 skips)");

    McCli mc;
    auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo estimate of the running-max tail");
    add_cir_flags(cmd_mc, mc.p);
    cmd_mc->add_option("--z", mc.p.z, "barrier level z")->required();
    cmd_mc->add_option("--paths", mc.cfg.n_paths, "number of paths");
    cmd_mc->add_option("--steps", mc.cfg.n_steps, "monitoring steps");
    cmd_mc->add_option("--seed", mc.cfg.seed, "RNG seed");
    cmd_mc->add_option("--scheme", mc.scheme, "exact or euler");

    CompareCli cmp;
    auto* cmd_cmp = app.add_subcommand("compare", "all methods side by side on a z grid");
    add_cir_flags(cmd_cmp, cmp.p);
    cmd_cmp->add_option("--z-grid", cmp.z_grid, "comma list of barrier levels")->required();
    cmd_cmp->add_option("--paths", cmp.cfg.n_paths, "Monte Carlo paths");
    cmd_cmp->add_option("--steps", cmp.cfg.n_steps, "Monte Carlo steps");
    cmd_cmp->add_option("--seed", cmp.cfg.seed, "RNG seed");
    cmd_cmp->add_flag("--skip-mc", cmp.skip_mc, "omit the Monte Carlo column");
    cmd_cmp->add_option("--asymp-mode", cmp.asymp_mode, "small_y or fixed_y")
        ->check(CLI::IsMember({"small_y", "fixed_y"}));

    ConjectureCli conj;
    auto* cmd_conj = app.add_subcommand(
        "scan-conjecture", "quotient-monotonicity scan along the vertical line u0 + iv");
    cmd_conj->add_option("--u0", conj.u0, "real part of the line")->required();
    cmd_conj->add_option("--b", conj.b, "second Kummer parameter")->required();
    cmd_conj->add_option("--x", conj.x, "denominator argument x")->required();
    cmd_conj->add_option("--y", conj.y, "numerator argument y (< x)")->required();
    cmd_conj->add_option("--v-max", conj.v_max, "grid endpoint");
    cmd_conj->add_option("--v-count", conj.v_count, "grid size");

    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const bool as_json = format == "json";
    try {
        if (cmd_tail->parsed()) return run_tail(tail, as_json, out_path);
        if (cmd_zeros->parsed()) return run_zeros(zeros, as_json, out_path);
        if (cmd_asymp->parsed()) return run_asymp(asymp, as_json, out_path);
        if (cmd_pos->parsed()) return run_positivity(pos, as_json, out_path);
        if (cmd_mc->parsed()) return run_mc(mc, as_json, out_path);
        if (cmd_cmp->parsed()) return run_compare(cmp, as_json, out_path);
        if (cmd_conj->parsed()) return run_conjecture(conj, as_json, out_path);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
