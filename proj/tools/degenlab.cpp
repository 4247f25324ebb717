// degenlab: batch front end for the audits, scans and solvers.
//
// Exit codes: 0 all checks passed, 1 a check failed (see the `failed` column),
// 2 usage or configuration error.

#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "degenlab/barriers.hpp"
#include "degenlab/config.hpp"
#include "degenlab/errors.hpp"
#include "degenlab/matkernel.hpp"
#include "degenlab/operators.hpp"
#include "degenlab/proofkit.hpp"
#include "degenlab/regularity.hpp"
#include "degenlab/rng.hpp"
#include "degenlab/solver.hpp"

namespace fs = std::filesystem;
using namespace degen;

namespace {

constexpr double kAuditTol = 1e-9;

// Thrown for bad flags or config values; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string config;
    std::uint64_t seed = 0;
    std::string out = ".";
    // (section, key) <- flag value, applied on top of the config file.
    std::deque<std::tuple<std::string, std::string, std::optional<std::string>>> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "config file ([section] key=value)");
    cmd->add_option("--seed", c.seed, "root seed");
    cmd->add_option("--out", c.out, "output directory");
}

// Registers --flag as an override of [section] key.
void add_override(CLI::App* cmd, Common& c, const std::string& flag, const std::string& section,
                  const std::string& key, const std::string& help) {
    c.overrides.emplace_back(section, key, std::nullopt);
    cmd->add_option(flag, std::get<2>(c.overrides.back()), help);
}

Config load_config(Common& c) {
    Config cfg;
    if (!c.config.empty()) {
        if (!fs::exists(c.config)) throw UsageError("config file not found: " + c.config);
        cfg = Config::load(c.config);
    }
    for (const auto& [section, key, value] : c.overrides)
        if (value) cfg.set(section, key, *value);
    return cfg;
}

class Report {
public:
    Report(std::string name, std::vector<std::string> header) : name_(std::move(name)), csv_(with_flag(header)) {}

    CsvWriter& row() { return csv_; }
    void end(bool failed) {
        csv_.cell(failed);
        csv_.end_row();
        failed_ += failed ? 1 : 0;
    }
    std::size_t failed() const { return failed_; }

    int finish(const std::string& dir) const {
        fs::create_directories(dir);
        const std::string path = (fs::path(dir) / (name_ + ".csv")).string();
        csv_.save(path);
        std::printf("%s: %zu rows, %zu failed -> %s\n", name_.c_str(), csv_.rows(), failed_, path.c_str());
        return failed_ ? 1 : 0;
    }

private:
    static std::vector<std::string> with_flag(std::vector<std::string> h) {
        h.push_back("failed");
        return h;
    }
    std::string name_;
    CsvWriter csv_;
    std::size_t failed_ = 0;
};

long long int_option(const Config& cfg, const std::string& sec, const std::string& key, long long def, long long lo) {
    const long long v = cfg.get_int(sec, key, def);
    if (v < lo) throw UsageError(sec + "." + key + " must be >= " + std::to_string(lo));
    return v;
}

std::vector<std::string> coord_names(const char* prefix, int n) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
    return v;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

ProblemConstants constants_for(const OperatorSpec& spec, const LowerOrderSpec& h, int n) {
    ProblemConstants pc;
    const auto [lam, Lam] = ellipticity(spec, n);
    pc.alpha = spec.alpha;
    pc.lambda = lam;
    pc.Lambda = Lam;
    pc.n = n;
    pc.gamma_F = 1.0;
    pc.c_gammaF = h2_constant(spec, n);
    pc.c_F = h4_claimed_constant(spec, n);
    pc.c_h = h.c_h;
    return pc;
}

// ---------------------------------------------------------------------------

int cmd_audit(Common& c) {
    const Config cfg = load_config(c);
    const Problem p = problem_from_config(cfg);
    const OperatorSpec& spec = p.spec;
    AuditOptions o;
    o.n = static_cast<int>(int_option(cfg, "audit", "dim", 2, 1));
    if (o.n > 3) throw UsageError("audit.dim must be 1, 2 or 3");
    o.samples = static_cast<std::size_t>(int_option(cfg, "audit", "samples", 10000, 1));
    o.seed = c.seed;
    const Vec m_list = cfg.get_vec("audit", "m_list", {0.5, 2.0, 10.0});

    Report rep("audit", {"check", "anchor", "family", "alpha", "dim", "samples", "statistic", "value", "threshold"});
    auto add = [&](const std::string& check, const std::string& anchor, std::size_t samples, const std::string& stat,
                   double value, double thr, bool gating) {
        rep.row().cell(check).cell(anchor).cell(family_name(spec.family)).cell(spec.alpha).cell(static_cast<long long>(o.n));
        rep.row().cell(static_cast<long long>(samples)).cell(stat).cell(value).cell(thr);
        rep.end(gating && !(value <= thr));
    };

    const AuditReport h1 = audit_H1(spec, o);
    add("H1", "H1 degenerate ellipticity", h1.samples, "normalized violation", h1.worst, kAuditTol, true);

    const AuditReport h2 = audit_H2(spec, o);
    add("H2", "H2 x-dependence", h2.samples, "normalized violation", h2.extra.at("violation"), kAuditTol, true);
    add("H2 ratio", "H2 x-dependence", h2.samples, "sup ratio vs constant", h2.worst, h2.extra.at("constant"), false);

    const AuditReport h3 = audit_H3(spec, m_list, o);
    add("H3", "H3 doubling pairs", h3.samples, "normalized margin", h3.worst, kAuditTol, true);

    // The componentwise form is what the comparison argument uses; the norm form fails already for
    // lambda = Lambda (p = (1,0), q = (0,1)) and is reported for reference.
    const AuditReport h4 = audit_H4(spec, o);
    add("H4 componentwise", "H4 gradient dependence", h4.samples, "normalized violation",
        h4.extra.at("violation_componentwise"), kAuditTol, true);
    add("H4 componentwise diagonal X", "H4 gradient dependence", h4.samples, "normalized violation",
        h4.extra.at("violation_componentwise_diagX"), kAuditTol, true);
    add("H4 norm form", "H4 gradient dependence", h4.samples, "normalized violation", h4.extra.at("violation_norm"),
        kAuditTol, false);

    bool homogeneous = spec.family != Family::widely_degenerate;
    if (!homogeneous) {
        homogeneous = true;
        for (double d : spec.delta) homogeneous = homogeneous && d == 0.0;
    }
    if (homogeneous) {
        const AuditReport hom = audit_homogeneity(spec, o);
        add("homogeneity", "F(x,sp,tX) = |s|^alpha t F(x,p,X)", hom.samples, "normalized violation", hom.worst,
            kAuditTol, true);
    }
    if (spec.family == Family::pucci_plus || spec.family == Family::pucci_minus) {
        const AuditReport d = audit_duality(spec, o);
        add("duality", "M- (q,X) = -M+ (q,-X)", d.samples, "normalized violation", d.worst, kAuditTol, true);
        add("extremality", "M+(X) <= M+(-Y) + M+(X+Y)", d.samples, "normalized violation",
            d.extra.at("extremality_violation"), kAuditTol, true);
    }
    if (spec.alpha > 0) {
        Rng g(c.seed, 0x7a7);
        double worst = -1e300;
        for (std::size_t k = 0; k < o.samples; ++k) {
            const Vec z = scaled(g.normal_vec(o.n), g.log_uniform(1e-3, 1e2));
            const Vec t = k % 3 == 0 ? axpy(g.log_uniform(1e-8, 1e-1), g.normal_vec(o.n), z)
                                     : scaled(g.normal_vec(o.n), g.log_uniform(1e-3, 1e2));
            const double scale = 1.0 + std::pow(std::max(norm(z), norm(t)), spec.alpha);
            worst = std::max(worst, -zt_margin(z, t, spec.alpha) / scale);
        }
        add("ZT", "||Z|^a - |T|^a| inequality", o.samples, "normalized violation", worst, 1e-12, true);
    }
    if (p.h.form != LowerOrderSpec::Form::zero) {
        const AuditReport lo = audit_lower_order(p.h, o);
        add("lower order growth", "|h(x,q)| <= c_h (|q|^(1+alpha) + 1)", lo.samples, "sup |h| / (|q|^(1+alpha)+1)",
            lo.worst, p.h.c_h * (1.0 + 1e-12), true);
    }
    return rep.finish(c.out);
}

int cmd_prop4(Common& c) {
    const Config cfg = load_config(c);
    const double alpha = cfg.get_double("prop4", "alpha", 1.0);
    const double gamma = cfg.get_double("prop4", "gamma", 0.5);
    const int n = static_cast<int>(int_option(cfg, "prop4", "dim", 2, 1));
    const auto points = static_cast<std::size_t>(int_option(cfg, "prop4", "points", 1000, 1));
    if (!(alpha > 0)) throw UsageError("prop4.alpha must be positive");
    if (n > 3) throw UsageError("prop4.dim must be 1, 2 or 3");
    const RadialTestFn tf = RadialTestFn::holder(gamma);

    double eps = 0.0, rmax = 0.5;
    if (alpha > 2.0) {
        eps = cfg.get_double("prop4", "eps", choose_exponents(Regime::holder_large_alpha, alpha, 1.0, gamma).eps);
        rmax = std::min(rmax, delta_N_holder(n, gamma, eps));
    }
    rmax = cfg.get_double("prop4", "rmax", rmax);
    const double rmin = cfg.get_double("prop4", "rmin", 1e-4 * rmax);
    if (!(rmin > 0 && rmin < rmax && rmax < 1)) throw UsageError("prop4 needs 0 < rmin < rmax < 1");

    Report rep("prop4_scan", concat(concat({"point", "anchor"}, coord_names("x", n)),
                                    {"r", "status", "mu1", "bound", "bound_2eps", "ok", "ok_2eps"}));
    std::size_t excluded = 0;
    Rng g(c.seed, 0x4b4);
    for (std::size_t k = 0; k < points; ++k) {
        const Vec x = scaled(g.unit_vec(n), g.log_uniform(rmin, rmax));
        rep.row().cell(static_cast<long long>(k)).cell(std::string("test-function eigenvalue bound"));
        for (double v : x) rep.row().cell(v);
        rep.row().cell(norm(x));
        try {
            const Prop4Result r = prop4_verify(tf, x, alpha, eps);
            rep.row().cell(std::string("checked")).cell(r.mu1).cell(r.bound).cell(r.bound_alt).cell(r.ok).cell(r.ok_alt);
            rep.end(!r.ok);
        } catch (const PreconditionError&) {
            // Outside the index-set eigenvalue region the bound makes no claim.
            ++excluded;
            rep.row().cell(std::string("excluded")).cell(std::string("")).cell(std::string(""));
            rep.row().cell(std::string("")).cell(std::string("")).cell(std::string(""));
            rep.end(false);
        }
    }
    if (excluded) std::printf("prop4-scan: %zu points outside the precondition region\n", excluded);
    return rep.finish(c.out);
}

int cmd_certificate(Common& c) {
    const Config cfg = load_config(c);
    CertificateInput in;
    const int n = static_cast<int>(int_option(cfg, "certificate", "dim", 2, 1));
    if (!cfg.section("operator").empty()) {
        const Problem p = problem_from_config(cfg);
        in.pc = constants_for(p.spec, p.h, n);
    } else {
        in.pc.n = n;
    }
    in.pc.alpha = cfg.get_double("certificate", "alpha", in.pc.alpha);
    in.pc.lambda = cfg.get_double("certificate", "lambda", in.pc.lambda);
    in.pc.Lambda = cfg.get_double("certificate", "Lambda", in.pc.Lambda);
    in.pc.gamma_F = cfg.get_double("certificate", "gamma_F", in.pc.gamma_F);
    in.pc.c_gammaF = cfg.get_double("certificate", "c_gammaF", in.pc.c_gammaF);
    in.pc.c_F = cfg.get_double("certificate", "c_F", in.pc.c_F);
    in.pc.c_h = cfg.get_double("certificate", "c_h", in.pc.c_h);
    in.r = cfg.get_double("certificate", "r", 0.5);
    in.sup_u = cfg.get_double("certificate", "sup_u", 1.0);
    in.sup_v = cfg.get_double("certificate", "sup_v", 1.0);
    const std::string mode = cfg.get("certificate", "mode", "both");
    if (mode != "holder" && mode != "lip" && mode != "both") throw UsageError("certificate.mode must be holder, lip or both");

    Report rep("certificate", {"mode", "anchor", "regime", "tau_hat", "c", "delta", "delta_binding", "M", "M_binding",
                               "modulus", "smallness_ratio", "failures"});
    for (bool lip : {false, true}) {
        if ((lip && mode == "holder") || (!lip && mode == "lip")) continue;
        in.lipschitz = lip;
        rep.row().cell(std::string(lip ? "lip" : "holder")).cell(std::string(lip ? "Lipschitz estimate" : "Hoelder estimate"));
        try {
            const Certificate cert = certificate(in);
            const CertificateCheck chk = verify_certificate(cert, in);
            std::string fails;
            for (const auto& f : chk.failures) fails += (fails.empty() ? "" : "; ") + f;
            rep.row().cell(regime_name(cert.rc.regime)).cell(cert.rc.tau_hat).cell(cert.rc.c).cell(cert.delta);
            rep.row().cell(cert.delta_binding).cell(cert.M).cell(cert.M_binding).cell(cert.modulus);
            rep.row().cell(chk.smallness_ratio).cell(fails);
            rep.end(!chk.ok);
        } catch (const InfeasibleError& e) {
            for (int i = 0; i < 9; ++i) rep.row().cell(std::string(""));
            rep.row().cell(std::string("infeasible: ") + e.what());
            rep.end(true);
        }
    }
    return rep.finish(c.out);
}

int cmd_barrier(Common& c) {
    const Config cfg = load_config(c);
    const Problem p = problem_from_config(cfg);
    const int n = p.dom.n();
    const auto [lam, Lam] = ellipticity(p.spec, n);
    const double f_inf = cfg.get_double("barrier", "f_inf", 1.0);
    const auto samples = static_cast<std::size_t>(int_option(cfg, "barrier", "samples", 2000, 1));
    const KChoice kc = choose_k(p.spec.alpha, lam, Lam, n, p.dom.C1(), p.h.c_h, p.dom.diam());
    const int k = static_cast<int>(cfg.get_int("barrier", "k", kc.k));
    const double thr = barrier_threshold(p.spec.alpha, lam, Lam, n, k, p.h.c_h, f_inf, p.dom.max_distance());
    const double M = cfg.get_double("barrier", "M", thr > 0 ? 1.05 * thr : 1.0);
    const bool keep = cfg.get_bool("barrier", "rows", false);
    const BarrierAudit a = barrier_audit(p.spec, p.h, p.dom, M, k, f_inf, samples, c.seed, keep);

    Report rep("barrier_audit", {"check", "anchor", "k", "k_binding", "M", "f_inf", "samples", "value", "threshold"});
    auto add = [&](const std::string& check, const std::string& anchor, double v, double t) {
        rep.row().cell(check).cell(anchor).cell(static_cast<long long>(k)).cell(kc.binding).cell(M).cell(f_inf);
        rep.row().cell(static_cast<long long>(a.samples)).cell(v).cell(t);
        rep.end(!(v <= t));
    };
    add("super-solution margin", "F(psi) + h <= -|f|", a.worst_margin_super, 0.0);
    add("sub-solution margin", "F(-psi) + h >= |f|", a.worst_margin_sub, 0.0);
    add("chain bound gap (super)", "barrier chain end bound", a.worst_chain_gap_super, kAuditTol);
    add("chain bound gap (sub)", "barrier chain end bound", a.worst_chain_gap_sub, kAuditTol);
    for (int l = 0; l < 4; ++l)
        add("chain line " + std::to_string(l) + " -> " + std::to_string(l + 1), "barrier chain termwise",
            static_cast<double>(a.line_violations[l]), 0.0);
    int code = rep.finish(c.out);

    if (keep) {
        CsvWriter rows(concat(coord_names("x", n), {"d", "F", "h", "bound", "margin"}));
        for (const auto& r : a.rows) {
            for (double v : r.x) rows.cell(v);
            rows.cell(r.d).cell(r.F).cell(r.h).cell(r.bound).cell(r.margin);
            rows.end_row();
        }
        rows.save((fs::path(c.out) / "barrier_samples.csv").string());
    }
    return code;
}

int cmd_smp(Common& c) {
    const Config cfg = load_config(c);
    const double lam = cfg.get_double("smp", "lambda", 1.0), Lam = cfg.get_double("smp", "Lambda", 2.0);
    const double alpha = cfg.get_double("smp", "alpha", 1.0), R = cfg.get_double("smp", "R", 1.0);
    const int n = static_cast<int>(int_option(cfg, "smp", "dim", 2, 1));
    const auto points = static_cast<std::size_t>(int_option(cfg, "smp", "points", 1000, 1));
    if (n > 3) throw UsageError("smp.dim must be 1, 2 or 3");
    const double cc = cfg.has("smp", "c") ? cfg.get_double("smp", "c", 1.0) : choose_c(lam, Lam, alpha, n, R);
    const OperatorSpec minus = OperatorSpec::pucci(false, alpha, lam, Lam);

    Report rep("smp_audit", concat(concat({"point", "anchor", "c"}, coord_names("x", n)),
                                   {"r", "mu_plus", "mu_minus", "lambda_mu_plus_Lambda_mu_minus", "pucci_minus_w"}));
    Rng g(c.seed, 0x5a5);
    const Vec x1(n, 0.0);
    for (std::size_t k = 0; k < points; ++k) {
        const Vec x = scaled(g.unit_vec(n), g.uniform(0.5 * R, 1.5 * R));
        const Mu mu = smp_mu(x, cc, alpha);
        const SmpJet j = smp_jet(1.0, cc, R, x1, x, alpha);
        const double lin = lam * mu.plus + Lam * mu.minus;
        const double tru = eval(minus, x, j.grad, j.hess);
        rep.row().cell(static_cast<long long>(k)).cell(std::string("strong maximum principle barrier")).cell(cc);
        for (double v : x) rep.row().cell(v);
        rep.row().cell(norm(x)).cell(mu.plus).cell(mu.minus).cell(lin).cell(tru);
        rep.end(!(lin > 0 && tru > 0));
    }
    int code = rep.finish(c.out);

    // With a problem in the config, also solve it and classify the discrete field.
    if (!cfg.section("problem").empty()) {
        const Problem p = problem_from_config(cfg);
        const SolveResult s = solve(p);
        const SmpVerdict v = smp_check(s.u, s.tol);
        Report r2("smp_check", concat({"anchor", "verdict", "value"}, coord_names("x", p.dom.n())));
        r2.row().cell(std::string("strong maximum principle")).cell(to_string(v.kind)).cell(v.value);
        for (int i = 0; i < p.dom.n(); ++i) r2.row().cell(v.point.empty() ? std::string("") : format_double(v.point[i]));
        r2.end(v.kind == SmpVerdict::Kind::violation);
        code = std::max(code, r2.finish(c.out));
    }
    return code;
}

int cmd_solve(Common& c) {
    const Config cfg = load_config(c);
    const Problem p = problem_from_config(cfg);
    const bool variational = cfg.get_bool("solve", "variational", false);
    fs::create_directories(c.out);

    Report rep("solve", {"solver", "anchor", "hgrid", "interior_points", "iterations", "residual", "tol", "sup_norm"});
    GridField u(make_grid(p));
    std::vector<double> history;
    std::string solver = "relaxation";
    try {
        if (variational) {
            if (p.spec.family != Family::pseudo_p) throw UsageError("solve.variational needs family pseudo_p");
            solver = "variational";
            const VariationalResult v = variational_pplap_solve(p.spec.alpha + 2.0, [&](const Vec& x) { return p.f(x); },
                                                                u.grid_ptr(), [&](const Vec& x) { return p.g(x); });
            u = v.u;
            history = v.energy;
            rep.row().cell(solver).cell(std::string("energy gradient")).cell(p.hgrid);
            rep.row().cell(static_cast<long long>(u.grid().interior_points().size())).cell(static_cast<long long>(v.iterations));
            rep.row().cell(v.residual).cell(1e-5).cell(u.sup_abs());
            rep.end(false);
        } else {
            const SolveResult s = solve(p, {}, &u);
            u = s.u;
            history = s.history;
            rep.row().cell(solver).cell(std::string("discrete equation residual")).cell(p.hgrid);
            rep.row().cell(static_cast<long long>(u.grid().interior_points().size())).cell(static_cast<long long>(s.iterations));
            rep.row().cell(s.residual).cell(s.tol).cell(u.sup_abs());
            rep.end(false);

            // Perron bracket when its preconditions hold.
            bool zero_bc = true;
            for (std::size_t i : u.grid().band_points()) zero_bc = zero_bc && p.g(u.grid().coords(i)) == 0.0;
            if (zero_bc && ellipticity(p.spec, p.dom.n()).first > 0) {
                const Bracket b = perron_bracket(p, u.grid_ptr(), 2000, c.seed);
                const double viol = bracket_violation(b, u);
                rep.row().cell(std::string("perron bracket")).cell(std::string("sub <= u <= super")).cell(p.hgrid);
                rep.row().cell(static_cast<long long>(u.grid().interior_points().size())).cell(static_cast<long long>(b.k));
                rep.row().cell(viol).cell(s.tol).cell(b.M);
                rep.end(!(viol <= s.tol));
            }
        }
    } catch (const ConvergenceFailure& e) {
        std::fprintf(stderr, "solve: %s\n", e.what());
        history = e.history();
        rep.row().cell(solver).cell(std::string("discrete equation residual")).cell(p.hgrid);
        rep.row().cell(static_cast<long long>(u.grid().interior_points().size())).cell(static_cast<long long>(history.size()));
        rep.row().cell(history.empty() ? NAN : history.back()).cell(default_tol(p, u.grid())).cell(std::string(""));
        rep.end(true);
    }

    {
        std::ofstream os(fs::path(c.out) / "solve_field.csv");
        write_csv(u, os);
        std::ofstream bin(fs::path(c.out) / "solve_field.bin", std::ios::binary);
        write_binary(u, bin);
    }
    CsvWriter h({"step", variational ? "energy" : "residual"});
    for (std::size_t i = 0; i < history.size(); ++i) h.cell(static_cast<long long>(i)).cell(history[i]).end_row();
    h.save((fs::path(c.out) / "solve_history.csv").string());
    return rep.finish(c.out);
}

int cmd_regularity(Common& c) {
    const Config cfg = load_config(c);
    const Problem p = problem_from_config(cfg);
    Vec levels = cfg.get_vec("regularity", "levels", {p.hgrid, p.hgrid / 2, p.hgrid / 4});
    const double gamma = cfg.get_double("regularity", "gamma", 1.0);
    const double margin = cfg.get_double("regularity", "margin", 0.25);
    const RefinementTable t = refinement_scan(p, levels, gamma, margin, {}, c.seed);
    const int n = p.dom.n();

    Report rep("regularity_scan", concat(concat(concat({"level", "anchor", "hgrid", "gamma", "seminorm"}, coord_names("argmax_x", n)),
                                                coord_names("argmax_y", n)),
                                         {"exact", "residual", "iterations", "sup_norm", "rel_change", "bounded_flag"}));
    for (std::size_t l = 0; l < t.rows.size(); ++l) {
        const RefinementRow& r = t.rows[l];
        rep.row().cell(static_cast<long long>(r.level)).cell(std::string("interior Hoelder/Lipschitz bound"));
        rep.row().cell(r.hgrid).cell(gamma).cell(r.report.value);
        for (double v : r.report.x) rep.row().cell(v);
        for (double v : r.report.y) rep.row().cell(v);
        rep.row().cell(r.report.exact).cell(r.residual).cell(static_cast<long long>(r.iterations)).cell(r.sup_norm);
        rep.row().cell(t.rel_change).cell(t.bounded);
        rep.end(l + 1 == t.rows.size() && !t.bounded);
    }
    return rep.finish(c.out);
}

int cmd_doubling(Common& c) {
    const Config cfg = load_config(c);
    const Problem p = problem_from_config(cfg);
    const SolveResult s = solve(p);
    const int n = p.dom.n();
    const std::string mode = cfg.get("doubling", "mode", "lip");
    if (mode != "holder" && mode != "lip") throw UsageError("doubling.mode must be holder or lip");

    CertificateInput in;
    in.pc = constants_for(p.spec, p.h, n);
    in.r = cfg.get_double("doubling", "r", 0.5);
    in.sup_u = in.sup_v = s.u.sup_abs();
    in.lipschitz = mode == "lip";
    const Certificate cert = certificate(in);
    Vec x0 = p.dom.kind == Domain::Kind::box ? scaled(axpy(1.0, p.dom.lo, p.dom.hi), 0.5) : p.dom.center;
    x0 = cfg.get_vec("doubling", "x0", x0);
    if (static_cast<int>(x0.size()) != n) throw UsageError("doubling.x0 has the wrong dimension");
    const RadialTestFn tf = cert.rc.test_fn();

    Report rep("doubling_check", {"anchor", "mode", "M_source", "M", "gap", "allowance"});
    const double slack = 2.0 * s.u.grid().h();
    const double gap = doubling_gap(s.u, s.u, cert.M, tf, x0);
    rep.row().cell(std::string("doubling functional")).cell(mode).cell(std::string("certificate")).cell(cert.M);
    rep.row().cell(gap).cell(slack * cert.M);
    rep.end(!(gap <= slack * cert.M));
    // Without the penalty the functional is not controlled; reported for contrast.
    for (double M : {0.0, 1.0}) {
        const double g0 = doubling_gap(s.u, s.u, M, tf, x0);
        rep.row().cell(std::string("doubling functional")).cell(mode).cell(std::string("fixed")).cell(M);
        rep.row().cell(g0).cell(std::string(""));
        rep.end(false);
    }
    return rep.finish(c.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"degenlab: audits and numerics for degenerate fully nonlinear elliptic operators"};
    app.require_subcommand(1, 1);
    Common c;

    struct Cmd {
        const char* name;
        const char* help;
        int (*run)(Common&);
    };
    const Cmd cmds[] = {
        {"audit", "sample the structural hypotheses of an operator", cmd_audit},
        {"prop4-scan", "check the test-function eigenvalue bound at sampled points", cmd_prop4},
        {"certificate", "compute (delta, M) for the Hoelder and Lipschitz estimates", cmd_certificate},
        {"barrier-audit", "audit the boundary barrier psi", cmd_barrier},
        {"smp-audit", "audit the strong maximum principle barrier", cmd_smp},
        {"solve", "solve the Dirichlet problem on a grid", cmd_solve},
        {"regularity-scan", "seminorms of solved fields under grid refinement", cmd_regularity},
        {"doubling-check", "evaluate the doubling functional on a solved field", cmd_doubling},
    };
    std::vector<std::pair<CLI::App*, const Cmd*>> subs;
    for (const Cmd& cmd : cmds) {
        CLI::App* s = app.add_subcommand(cmd.name, cmd.help);
        add_common(s, c);
        subs.emplace_back(s, &cmd);
        const std::string name = cmd.name;
        if (name == "audit" || name == "barrier-audit" || name == "solve" || name == "regularity-scan" ||
            name == "doubling-check" || name == "certificate") {
            add_override(s, c, "--op", "operator", "family", "operator family (pucci+, pucci-, example1, ...)");
            add_override(s, c, "--alpha", "operator", "alpha", "degeneracy exponent");
            add_override(s, c, "--lambda", "operator", "lambda", "lower ellipticity");
            add_override(s, c, "--Lambda", "operator", "Lambda", "upper ellipticity");
            add_override(s, c, "--coeff", "operator", "coeff", "coefficient preset");
            add_override(s, c, "--delta", "operator", "delta", "widely degenerate thresholds (comma list)");
            add_override(s, c, "--c-h", "lower_order", "c_h", "lower order growth constant");
        }
        if (name == "barrier-audit" || name == "solve" || name == "regularity-scan" || name == "doubling-check") {
            add_override(s, c, "--hgrid", "grid", "h", "grid spacing");
            add_override(s, c, "--forcing", "problem", "forcing", "forcing preset");
            add_override(s, c, "--forcing-value", "problem", "forcing_value", "forcing scale");
            add_override(s, c, "--boundary", "problem", "boundary", "boundary preset");
            add_override(s, c, "--boundary-value", "problem", "boundary_value", "boundary scale");
            add_override(s, c, "--tol", "problem", "tol", "residual tolerance");
            add_override(s, c, "--max-iter", "problem", "max_iter", "iteration cap");
        }
        if (name == "audit") {
            add_override(s, c, "--dim", "audit", "dim", "dimension N");
            add_override(s, c, "--samples", "audit", "samples", "samples per audit");
            add_override(s, c, "--m-list", "audit", "m_list", "doubling parameters for H3 (comma list)");
        } else if (name == "prop4-scan") {
            add_override(s, c, "--alpha", "prop4", "alpha", "degeneracy exponent");
            add_override(s, c, "--gamma", "prop4", "gamma", "Hoelder exponent of the test function");
            add_override(s, c, "--dim", "prop4", "dim", "dimension N");
            add_override(s, c, "--points", "prop4", "points", "number of sampled points");
            add_override(s, c, "--eps", "prop4", "eps", "index-set exponent (alpha > 2)");
            add_override(s, c, "--rmin", "prop4", "rmin", "smallest |x|");
            add_override(s, c, "--rmax", "prop4", "rmax", "largest |x|");
        } else if (name == "certificate") {
            add_override(s, c, "--dim", "certificate", "dim", "dimension N");
            add_override(s, c, "--r", "certificate", "r", "radius of the inner ball");
            add_override(s, c, "--sup-u", "certificate", "sup_u", "sup norm of u");
            add_override(s, c, "--sup-v", "certificate", "sup_v", "sup norm of v");
            add_override(s, c, "--mode", "certificate", "mode", "holder | lip | both");
        } else if (name == "barrier-audit") {
            add_override(s, c, "--samples", "barrier", "samples", "sample points");
            add_override(s, c, "--f-inf", "barrier", "f_inf", "sup norm of the forcing");
            add_override(s, c, "--M", "barrier", "M", "barrier height (default 1.05 x threshold)");
            add_override(s, c, "--rows", "barrier", "rows", "also write per-sample rows");
        } else if (name == "smp-audit") {
            add_override(s, c, "--alpha", "smp", "alpha", "degeneracy exponent");
            add_override(s, c, "--lambda", "smp", "lambda", "lower ellipticity");
            add_override(s, c, "--Lambda", "smp", "Lambda", "upper ellipticity");
            add_override(s, c, "--dim", "smp", "dim", "dimension N");
            add_override(s, c, "--R", "smp", "R", "annulus radius");
            add_override(s, c, "--points", "smp", "points", "number of sampled points");
            add_override(s, c, "--c", "smp", "c", "barrier rate (default: searched)");
        } else if (name == "solve") {
            add_override(s, c, "--variational", "solve", "variational", "use the energy solver (pseudo_p only)");
        } else if (name == "regularity-scan") {
            add_override(s, c, "--levels", "regularity", "levels", "grid spacings, each half the previous");
            add_override(s, c, "--gamma", "regularity", "gamma", "Hoelder exponent (1 = Lipschitz)");
            add_override(s, c, "--margin", "regularity", "margin", "distance from the boundary");
        } else if (name == "doubling-check") {
            add_override(s, c, "--mode", "doubling", "mode", "holder | lip");
            add_override(s, c, "--x0", "doubling", "x0", "centre point (comma list)");
            add_override(s, c, "--r", "doubling", "r", "radius of the inner ball");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return 2;
    }

    for (const auto& [s, cmd] : subs) {
        if (!s->parsed()) continue;
        try {
            return cmd->run(c);
        } catch (const UsageError& e) {
            std::fprintf(stderr, "%s: %s\n%s", cmd->name, e.what(), s->help().c_str());
            return 2;
        } catch (const InvalidInput& e) {
            std::fprintf(stderr, "%s: invalid input: %s\n", cmd->name, e.what());
            return 2;
        } catch (const Error& e) {
            std::fprintf(stderr, "%s: %s\n", cmd->name, e.what());
            return 1;
        }
    }
    return 2;
}
