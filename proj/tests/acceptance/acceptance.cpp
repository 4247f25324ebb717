// Acceptance driver: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only
// Exit status is 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "degenlab/barriers.hpp"
#include "degenlab/errors.hpp"
#include "degenlab/matkernel.hpp"
#include "degenlab/operators.hpp"
#include "degenlab/proofkit.hpp"
#include "degenlab/regularity.hpp"
#include "degenlab/rng.hpp"
#include "degenlab/solver.hpp"
#include "support/oracles.hpp"

using namespace degen;

namespace {

// Pinned tolerances.
constexpr double kAuditTol = 1e-9;           // normalized violation, criteria 1-2
constexpr double kAuditSeconds = 10.0;       // criterion 1
constexpr double kProp4RelTol = 1e-9;        // criterion 3
constexpr double kProp4Seconds = 5.0;
constexpr double kFitRelResidual = 1e-12;    // criterion 4, relative to |H~|_F
constexpr double kSmallnessMargin = 0.99;    // criterion 5
constexpr double kSpectrumRelTol = 1e-9;     // criterion 7
constexpr double kPoissonTol = 1e-8;         // criterion 8a
constexpr double kGridFactor = 5.0;          // criteria 8b, 8c: error <= 5 h
constexpr double kSolveSeconds = 60.0;
constexpr double kRefinementJump = 0.2;      // criterion 11
constexpr double kDoublingSlack = 2.0;       // criterion 12: gap <= 2 h M

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<OperatorSpec> audit_specs(double alpha) {
    std::vector<OperatorSpec> out;
    for (bool plus : {true, false}) out.push_back(OperatorSpec::pucci(plus, alpha, 1.0, 2.0));
    for (const char* c : {"constant", "scalar_wave", "rotating"}) {
        OperatorSpec s = OperatorSpec::pucci(true, alpha, 1.0, 2.0);
        s.family = Family::example1;
        s.coeff = c;
        out.push_back(s);
    }
    for (const char* c : {"constant", "abs_clip", "smooth"}) {
        OperatorSpec s = OperatorSpec::pucci(true, alpha, 1.0, 2.0);
        s.family = Family::example2;
        s.coeff = c;
        out.push_back(s);
    }
    return out;
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    double h1 = -1e300, hom = 0.0, dual = 0.0, h4 = -1e300, h4diag = -1e300;
    std::string h4_where;
    for (int n : {2, 3})
        for (double a : {0.5, 1.0, 2.0, 3.5})
            for (const OperatorSpec& s : audit_specs(a)) {
                const AuditOptions o{n, 10000, 0};
                h1 = std::max(h1, audit_H1(s, o).worst);
                hom = std::max(hom, audit_homogeneity(s, o).worst);
                if (s.family == Family::pucci_plus || s.family == Family::pucci_minus)
                    dual = std::max(dual, audit_duality(s, o).worst);
                const AuditReport r4 = audit_H4(s, o);
                if (r4.extra.at("violation_componentwise") > h4) {
                    h4 = r4.extra.at("violation_componentwise");
                    h4_where = family_name(s.family) + "/" + s.coeff + " N=" + std::to_string(n) + fmt(" alpha=%g", a);
                }
                h4diag = std::max(h4diag, r4.extra.at("violation_componentwise_diagX"));
            }
    const double t = seconds_since(t0);
    Outcome o;
    o.pass = h1 <= kAuditTol && hom <= kAuditTol && dual <= kAuditTol && h4 <= kAuditTol && t < kAuditSeconds;
    o.detail = "H1 " + fmt("%.2e", h1) + ", homogeneity " + fmt("%.2e", hom) + ", duality " + fmt("%.2e", dual) +
               ", H4 " + fmt("%.2e", h4) + " (worst at " + h4_where + "), H4 on diagonal X " + fmt("%.2e", h4diag) +
               (h4diag <= kAuditTol ? " ok" : " FAIL") + ", " + fmt("%.1fs", t);
    return o;
}

Outcome criterion2() {
    double worst = -1e300;
    std::size_t samples = 0;
    for (int n : {2, 3})
        for (double a : {0.5, 1.0, 2.0, 3.5})
            for (const OperatorSpec& s : audit_specs(a)) {
                if (s.family != Family::example1 && s.family != Family::example2) continue;
                const AuditReport r = audit_H3(s, {0.25, 1.0, 4.0, 16.0}, {n, 10000, 0});
                worst = std::max(worst, r.worst);
                samples += r.samples;
            }
    return {worst <= kAuditTol, "worst margin " + fmt("%.2e", worst) + " over " + std::to_string(samples) + " pairs"};
}

Vec sample_x(Rng& g, int n, double rmin, double rmax) {
    return scaled(g.unit_vec(n), std::exp(g.uniform(std::log(rmin), std::log(rmax))));
}

Outcome criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t checked = 0, failed = 0, excluded = 0, small_checked = 0, small_bad = 0;
    auto check = [&](const RadialTestFn& tf, const Vec& x, double a, double eps) {
        const Prop4Result r = prop4_verify(tf, x, a, eps);
        ++checked;
        if (!(r.mu1 <= r.bound + kProp4RelTol * std::max(std::abs(r.bound), std::abs(r.mu1)))) ++failed;
    };
    for (int n : {2, 3})
        for (double gamma : {0.25, 0.5, 0.75}) {
            const RadialTestFn tf = RadialTestFn::holder(gamma);
            for (double a : {0.5, 1.0, 2.0}) {
                Rng g(17, static_cast<std::uint64_t>(n * 100 + gamma * 10 + a));
                for (int k = 0; k < 1000; ++k) check(tf, sample_x(g, n, 1e-4, 0.5), a, 0.0);
            }
            for (double a : {2.5, 3.0, 4.0}) {
                const double eps = choose_exponents(Regime::holder_large_alpha, a, 1.0, gamma).eps;
                Rng g(29, static_cast<std::uint64_t>(n * 100 + gamma * 10 + a));
                for (int k = 0; k < 1000; ++k) {
                    try {
                        check(tf, sample_x(g, n, 1e-4, 0.5), a, eps);
                    } catch (const PreconditionError&) {
                        ++excluded;
                    }
                }
                // Below delta_N the preconditions are guaranteed.
                const double dN = delta_N_holder(n, gamma, eps);
                for (int k = 0; k < 1000; ++k) {
                    try {
                        check(tf, sample_x(g, n, dN * 1e-6, dN), a, eps);
                        ++small_checked;
                    } catch (const PreconditionError&) {
                        ++small_bad;
                    }
                }
            }
        }
    const double t = seconds_since(t0);
    Outcome o;
    o.pass = failed == 0 && small_bad == 0 && t < kProp4Seconds;
    o.detail = std::to_string(checked - failed) + "/" + std::to_string(checked) + " hold, " +
               std::to_string(excluded) + " outside the index-set eigenvalue region excluded, " +
               std::to_string(small_bad) + " precondition failures below delta_N (of " +
               std::to_string(small_checked + small_bad) + "), " + fmt("%.2fs", t);
    return o;
}

Outcome criterion4() {
    std::size_t bad_range = 0, bad_resid = 0, total = 0;
    double gmin = 1e300, gmax = -1e300, bmin = 1e300, worst_res = 0.0;
    std::vector<RadialTestFn> fns;
    for (double gamma : {0.25, 0.5, 0.75}) fns.push_back(RadialTestFn::holder(gamma));
    for (double tau : {0.1, 0.25, 0.5}) fns.push_back(RadialTestFn::lip(tau, 1.0 / (2.0 * (1.0 + tau))));
    for (int n : {2, 3})
        for (std::size_t f = 0; f < fns.size(); ++f) {
            Rng g(41, n * 10 + f);
            const double rmax = std::min(0.5, 0.99 * fns[f].s_max());
            for (int k = 0; k < 1000; ++k) {
                const Vec x = sample_x(g, n, 1e-4, rmax);
                const SymMat H = h_tilde(fns[f], x);
                const RadialFit fit = radial_coeffs(H, fns[f], x);
                ++total;
                gmin = std::min(gmin, fit.gamma);
                gmax = std::max(gmax, fit.gamma);
                bmin = std::min(bmin, fit.beta);
                const double rel = fit.residual / H.frobenius();
                worst_res = std::max(worst_res, rel);
                if (!(fit.gamma > 0.5 && fit.gamma <= 1.5 + 1e-12 && fit.beta >= 0.5 - 1e-12)) ++bad_range;
                if (!(rel <= kFitRelResidual)) ++bad_resid;
            }
        }
    return {bad_range == 0 && bad_resid == 0,
            "gamma_H in [" + fmt("%.4f", gmin) + ", " + fmt("%.4f", gmax) + "], beta_H >= " + fmt("%.4f", bmin) +
                ", relative residual <= " + fmt("%.1e", worst_res) + " over " + std::to_string(total) + " samples"};
}

Outcome criterion5() {
    const double alphas[] = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0};
    std::size_t ok = 0, total = 0;
    double worst_ratio = 0.0;
    std::string fails;
    for (int k = 0; k < 20; ++k) {
        Rng g(53, k);
        CertificateInput in;
        in.pc.alpha = alphas[k % 10];
        in.pc.lambda = 1.0;
        in.pc.Lambda = g.uniform(1.0, 4.0);
        in.pc.n = 2 + static_cast<int>(g.next_u64() % 2);
        in.pc.gamma_F = k % 3 == 0 ? 0.5 : 1.0;
        in.pc.c_gammaF = g.uniform(0.0, 2.0);
        in.pc.c_F = in.pc.Lambda;
        in.pc.c_h = k % 2 == 0 ? 0.0 : 1.0;
        in.sup_u = g.uniform(0.1, 2.0);
        in.sup_v = g.uniform(0.1, 2.0);
        in.lipschitz = k < 10;
        ++total;
        try {
            const Certificate c = certificate(in);
            const CertificateCheck chk = verify_certificate(c, in);
            worst_ratio = std::max(worst_ratio, chk.smallness_ratio);
            if (chk.ok && chk.smallness_ratio <= kSmallnessMargin * (1.0 + 1e-12)) {
                ++ok;
            } else {
                for (const auto& f : chk.failures) fails += " [" + std::to_string(k) + ": " + f + "]";
            }
        } catch (const InfeasibleError& e) {
            fails += " [" + std::to_string(k) + ": infeasible]";
        }
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " certificates re-verify, worst smallness ratio " +
                             fmt("%.4f", worst_ratio) + fails};
}

Outcome criterion6() {
    bool pass = true;
    std::string detail;
    for (double c_h : {0.0, 1.0}) {
        const OperatorSpec s = OperatorSpec::pucci(true, 1.0, 1.0, 2.0);
        const LowerOrderSpec h = c_h > 0 ? LowerOrderSpec::drift(c_h, 1.0) : LowerOrderSpec::zero();
        const Domain dom = Domain::ball({0.0, 0.0}, 1.0);
        const KChoice kc = choose_k(1.0, 1.0, 2.0, 2, dom.C1(), c_h, dom.diam());
        const double M = 1.05 * barrier_threshold(1.0, 1.0, 2.0, 2, kc.k, c_h, 1.0, dom.max_distance());
        const BarrierAudit a = barrier_audit(s, h, dom, M, kc.k, 1.0, 10000, 0);
        const bool ok = a.worst_margin_super <= 0 && a.worst_margin_sub <= 0 && a.worst_chain_gap_super <= 0 &&
                        a.worst_chain_gap_sub <= 0;
        pass = pass && ok;
        detail += fmt("c_h=%g: ", c_h) + "k=" + std::to_string(kc.k) + fmt(" M=%.3g", M) +
                  fmt(" margin+ %.2e", a.worst_margin_super) + fmt(" margin- %.2e", a.worst_margin_sub) +
                  fmt(" chain gap+ %.2e", a.worst_chain_gap_super) + fmt(" chain gap- %.2e", a.worst_chain_gap_sub) +
                  " per-line violations " + std::to_string(a.line_violations[0]) + "/" +
                  std::to_string(a.line_violations[1]) + "/" + std::to_string(a.line_violations[2]) + "/" +
                  std::to_string(a.line_violations[3]) + "; ";
    }
    return {pass, detail};
}

Outcome criterion7() {
    bool pass = true;
    std::string detail;
    for (int n : {2, 3})
        for (double a : {1.0, 3.0}) {
            const double R = 1.0, lam = 1.0, Lam = 2.0;
            double c = 0.0;
            try {
                c = choose_c(lam, Lam, a, n, R);
            } catch (const InfeasibleError&) {
                pass = false;
                detail += fmt("N=%g", n) + fmt(" alpha=%g: infeasible; ", a);
                continue;
            }
            const OperatorSpec minus = OperatorSpec::pucci(false, a, lam, Lam);
            Rng g(71, n * 10 + static_cast<int>(a));
            double min_val = 1e300, worst_spec = 0.0, min_true = 1e300;
            for (int k = 0; k < 1000; ++k) {
                const Vec x = scaled(g.unit_vec(n), g.uniform(0.5 * R, 1.5 * R));
                const Mu mu = smp_mu(x, c, a);
                const double val = lam * mu.plus + Lam * mu.minus;
                min_val = std::min(min_val, val / (lam * std::abs(mu.plus) + Lam * std::abs(mu.minus)));
                const Vec ev = eigvals(smp_rank2_matrix(x, c, a));
                const double scale = std::abs(mu.plus) + std::abs(mu.minus);
                worst_spec = std::max({worst_spec, std::abs(ev.back() - mu.plus) / scale,
                                       std::abs(ev.front() - mu.minus) / scale});
                // True operator on the rescaled jet (positive homogeneity removes c^a e^{-c(1+a)r}).
                const double r = norm(x);
                const SymMat dhat = SymMat::outer(x) * (c * c / (r * r) + c / (r * r * r)) + SymMat::identity(n, -c / r);
                min_true = std::min(min_true, eval(minus, x, scaled(x, -1.0 / r), dhat));
            }
            const bool ok = min_val > 0 && worst_spec <= kSpectrumRelTol;
            pass = pass && ok;
            detail += "N=" + std::to_string(n) + fmt(" alpha=%g", a) + fmt(" c=%g", c) +
                      fmt(" min normalized lambda mu+ + Lambda mu- %.3f", min_val) +
                      fmt(" spectrum err %.1e", worst_spec) + fmt(" min true P- %.3g", min_true) + "; ";
        }
    return {pass, detail};
}

Outcome criterion8() {
    Outcome o;
    // (a) alpha = 0, lambda = Lambda = 1: the scheme is the 5-point Laplacian.
    {
        const auto t0 = std::chrono::steady_clock::now();
        Problem p;
        p.spec = OperatorSpec::pucci(true, 0.0, 1.0, 1.0);
        p.forcing = "gaussian";
        p.boundary = "wave";
        p.hgrid = 1.0 / 32.0;
        p.tol = 1e-10;
        const SolveResult r = solve(p);
        const GridField ref = oracle::poisson_cg(r.u.grid_ptr(), [&](const Vec& x) { return p.f(x); },
                                                 [&](const Vec& x) { return p.g(x); });
        double err = 0.0;
        for (std::size_t i : r.u.grid().interior_points()) err = std::max(err, std::abs(r.u[i] - ref[i]));
        const double t = seconds_since(t0);
        const bool ok = err <= kPoissonTol && t < kSolveSeconds;
        o.pass = o.pass && ok;
        o.detail += "(a) " + fmt("|u - u_poisson| %.2e", err) + fmt(" %.1fs; ", t);
    }
    // (b) N = 1, p = 4, f = 1 against shooting.
    {
        const auto t0 = std::chrono::steady_clock::now();
        Problem p;
        p.spec = OperatorSpec::pseudo_p(4.0);
        p.dom = Domain::box({0.0}, {1.0});
        p.forcing = "const";
        p.hgrid = 1.0 / 64.0;
        const SolveResult r = solve(p);
        const oracle::Shooting1D shoot(4.0, [](double) { return 1.0; });
        double err = 0.0;
        for (std::size_t i : r.u.grid().interior_points()) err = std::max(err, std::abs(r.u[i] - shoot(r.u.grid().coords(i)[0])));
        const double t = seconds_since(t0);
        const bool ok = err <= kGridFactor * p.hgrid && t < kSolveSeconds;
        o.pass = o.pass && ok;
        o.detail += "(b) " + fmt("|u - u_shoot| %.2e", err) + fmt(" vs 5h %.3f", kGridFactor * p.hgrid) + fmt(" %.1fs; ", t);
    }
    // (c) viscosity vs variational on a 65^2 grid.
    {
        const auto t0 = std::chrono::steady_clock::now();
        Problem p;
        p.spec = OperatorSpec::pseudo_p(4.0);
        p.dom = Domain::box({0.0, 0.0}, {1.0, 1.0});
        p.forcing = "const";
        p.hgrid = 1.0 / 64.0;
        const SolveResult r = solve(p);
        const double t1 = seconds_since(t0);
        const auto t2 = std::chrono::steady_clock::now();
        const VariationalResult v = variational_pplap_solve(4.0, [](const Vec&) { return 1.0; }, r.u.grid_ptr());
        const double t3 = seconds_since(t2);
        double diff = 0.0;
        for (std::size_t i : r.u.grid().interior_points()) diff = std::max(diff, std::abs(r.u[i] - v.u[i]));
        const auto& d = r.u.grid().dims();
        const bool ok = diff <= kGridFactor * p.hgrid && t1 < kSolveSeconds && t3 < kSolveSeconds;
        o.pass = o.pass && ok;
        o.detail += "(c) " + fmt("|u_visc - u_var| %.2e", diff) + " on " + std::to_string(d[0] - 4) + "x" +
                    std::to_string(d[1] - 4) + fmt(" nodes, %.1fs", t1) + fmt(" + %.1fs", t3);
    }
    return o;
}

Outcome criterion9() {
    Outcome o;
    const char* presets[] = {"const", "gaussian", "sine", "linear"};
    double worst_gap = -1e300;
    int pre_fail = 0;
    for (int k = 0; k < 10; ++k) {
        Rng g(97, k);
        Problem sub;
        sub.spec = k % 2 == 0 ? OperatorSpec::pseudo_p(g.uniform(2.5, 4.0)) : OperatorSpec::pucci(true, g.uniform(0.5, 2.0), 1.0, 2.0);
        sub.hgrid = 1.0 / 16.0;
        const ScalarField base = forcing_preset(presets[g.next_u64() % 4], g.uniform(0.5, 2.0));
        const double shift = g.uniform(0.0, 0.5);
        Problem super = sub;
        super.f_custom = base;
        sub.f_custom = [base, shift](const Vec& x) { return base(x) + shift; };
        super.boundary = "const";
        super.boundary_value = g.uniform(0.0, 0.5);
        const SolveResult u = solve(sub);
        const GridField start(u.u.grid_ptr());
        const SolveResult v = solve(super, {}, &start);
        const GridField& vv = v.u;
        const double tol = std::max(u.tol, v.tol);
        const ComparisonReport rep = comparison_check(sub, u.u, super, vv, tol);
        if (!rep.preconditions_ok) {
            ++pre_fail;
            continue;
        }
        worst_gap = std::max(worst_gap, rep.worst_gap);
        if (rep.worst_gap > tol) o.pass = false;
    }
    if (pre_fail > 0) o.pass = false;
    o.detail = "comparison: worst gap " + fmt("%.3e", worst_gap) + ", " + std::to_string(pre_fail) +
               " precondition failures; bracket:";
    for (const char* f : {"zero", "const", "gaussian", "sine", "linear"}) {
        Problem p;
        p.spec = OperatorSpec::pucci(true, 1.0, 1.0, 2.0);
        p.forcing = f;
        p.forcing_value = 1.0;
        p.hgrid = 1.0 / 32.0;
        const SolveResult r = solve(p);
        const Bracket b = perron_bracket(p, r.u.grid_ptr());
        const double viol = bracket_violation(b, r.u);
        if (viol > r.tol) o.pass = false;
        o.detail += std::string(" ") + f + fmt(" (M=%.3g,", b.M) + fmt(" viol %.2e)", viol);
    }
    return o;
}

Outcome criterion10() {
    Outcome o;
    for (double f : {0.0, -1.0}) {
        Problem p;
        p.spec = OperatorSpec::pucci(false, 1.0, 1.0, 2.0);
        p.forcing = "const";
        p.forcing_value = f;
        p.boundary = "wave";
        p.boundary_value = 1.0;
        p.hgrid = 1.0 / 32.0;
        const SolveResult r = solve(p);
        const SmpVerdict v = smp_check(r.u, r.tol);
        if (v.kind != SmpVerdict::Kind::positive) o.pass = false;
        o.detail += fmt("f=%g, boundary min 0.5: ", f) + to_string(v.kind) + fmt(" (interior min %.4f); ", r.u.min_interior());
    }
    Problem z;
    z.spec = OperatorSpec::pucci(false, 1.0, 1.0, 2.0);
    z.hgrid = 1.0 / 32.0;
    const SolveResult r = solve(z);
    const SmpVerdict v = smp_check(r.u, r.tol);
    if (!(r.u.sup_abs() <= r.tol) || v.kind != SmpVerdict::Kind::zero) o.pass = false;
    o.detail += "f=0, zero boundary: " + to_string(v.kind) + fmt(" |u| %.1e", r.u.sup_abs());
    return o;
}

Problem unit_ball_pucci(double f) {
    Problem p;
    p.spec = OperatorSpec::pucci(true, 1.0, 1.0, 2.0);
    p.forcing = "const";
    p.forcing_value = f;
    return p;
}

CertificateInput pucci_certificate_input(double sup_u, double sup_v) {
    CertificateInput in;
    const OperatorSpec s = OperatorSpec::pucci(true, 1.0, 1.0, 2.0);
    in.pc = {1.0, 1.0, 2.0, 2, 1.0, h2_constant(s, 2), h4_claimed_constant(s, 2), 0.0};
    in.r = 0.5;
    in.sup_u = sup_u;
    in.sup_v = sup_v;
    in.lipschitz = true;
    return in;
}

Outcome criterion11() {
    const Problem p = unit_ball_pucci(1.0);
    const RefinementTable t = refinement_scan(p, {1.0 / 16, 1.0 / 32, 1.0 / 64}, 1.0, 0.5);
    const double sup = t.rows.back().sup_norm;
    const Certificate c = certificate(pucci_certificate_input(sup, sup));
    double top = 0.0;
    std::string vals;
    for (const auto& r : t.rows) {
        top = std::max(top, r.report.value);
        vals += fmt(" %.4f", r.report.value);
    }
    return {t.rel_change < kRefinementJump && c.modulus >= top, "seminorms" + vals + fmt(", last change %.1f%%", 100.0 * t.rel_change) +
                                               fmt(", certificate modulus %.4g", c.modulus)};
}

Outcome criterion12() {
    Outcome o;
    for (double h : {1.0 / 16, 1.0 / 32}) {
        Problem pu = unit_ball_pucci(1.2), pv = unit_ball_pucci(1.0);
        pu.hgrid = pv.hgrid = h;
        const SolveResult u = solve(pu);
        const GridField start(u.u.grid_ptr());
        const SolveResult v = solve(pv, {}, &start);
        const GridField& vv = v.u;
        const Certificate c = certificate(pucci_certificate_input(u.u.sup_abs(), v.u.sup_abs()));
        for (const Vec& x0 : {Vec{0.0, 0.0}, Vec{0.2, -0.1}}) {
            const double gap_uv = doubling_gap(u.u, vv, c.M, c.rc.test_fn(), x0);
            const double gap_vv = doubling_gap(vv, vv, c.M, c.rc.test_fn(), x0);
            const double slack = kDoublingSlack * h * c.M;
            if (!(gap_uv <= slack && gap_vv <= slack)) o.pass = false;
            o.detail += fmt("h=1/%g", 1.0 / h) + fmt(" x0=(%g,", x0[0]) + fmt("%g):", x0[1]) + fmt(" gap %.3e", gap_uv) +
                        fmt(" (u=v %.1e)", gap_vv) + fmt(" vs %.3g; ", slack);
        }
    }
    return o;
}

const std::vector<std::pair<const char*, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<const char*, std::function<Outcome()>>> c = {
        {"hypothesis audits (H1, H4, homogeneity, duality)", criterion1},
        {"H3 example bounds", criterion2},
        {"test-function eigenvalue bound", criterion3},
        {"radial decomposition of H~", criterion4},
        {"certificate self-consistency", criterion5},
        {"barrier audit", criterion6},
        {"strong maximum principle barrier", criterion7},
        {"solver oracles", criterion8},
        {"discrete comparison and Perron bracket", criterion9},
        {"SMP numerics", criterion10},
        {"regularity boundedness", criterion11},
        {"doubling functional", criterion12},
    };
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    const auto& cs = criteria();
    if (only < 0 || only > static_cast<int>(cs.size())) {
        std::fprintf(stderr, "criterion must be in 1..%zu\n", cs.size());
        return 2;
    }
    bool all = true;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = cs[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("criterion %2zu %s  %-46s %6.2fs  %s\n", i + 1, o.pass ? "PASS" : "FAIL", cs[i].first,
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
