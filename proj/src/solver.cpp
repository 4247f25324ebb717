#include "degenlab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "degenlab/config.hpp"
#include "degenlab/errors.hpp"

namespace degen {

ScalarField forcing_preset(const std::string& name, double v) {
    if (name == "zero") return [](const Vec&) { return 0.0; };
    if (name == "const") return [v](const Vec&) { return v; };
    if (name == "gaussian") return [v](const Vec& x) { return v * std::exp(-4.0 * dot(x, x)); };
    if (name == "sine") return [v](const Vec& x) { return v * std::sin(M_PI * x[0]); };
    if (name == "linear") return [v](const Vec& x) { return v * x[0]; };
    throw InvalidInput("unknown forcing preset '" + name + "'");
}

ScalarField boundary_preset(const std::string& name, double v) {
    if (name == "zero") return [](const Vec&) { return 0.0; };
    if (name == "const") return [v](const Vec&) { return v; };
    if (name == "linear") return [v](const Vec& x) { return v * x[0]; };
    if (name == "wave") return [v](const Vec& x) { return v * (1.0 + 0.5 * std::sin(3.0 * x[0])); };
    throw InvalidInput("unknown boundary preset '" + name + "'");
}

double Problem::f(const Vec& x) const { return f_custom ? f_custom(x) : forcing_preset(forcing, forcing_value)(x); }

double Problem::g(const Vec& x) const { return g_custom ? g_custom(x) : boundary_preset(boundary, boundary_value)(x); }

void validate(const Problem& p) {
    validate(p.spec);
    if (!(p.hgrid > 0)) throw InvalidInput("hgrid must be positive");
    if (!(p.margin_cells >= 0)) throw InvalidInput("margin must be nonnegative");
    if (p.tol < 0) throw InvalidInput("tol must be nonnegative");
    if (p.max_iter == 0) throw InvalidInput("max_iter must be positive");
    if (!p.f_custom) forcing_preset(p.forcing, p.forcing_value);
    if (!p.g_custom) boundary_preset(p.boundary, p.boundary_value);
}

Problem problem_from_config(const Config& cfg) {
    Problem p;
    p.spec = spec_from_map(cfg.section("operator"));
    const std::string form = cfg.get("lower_order", "form", "zero");
    const double c_h = cfg.get_double("lower_order", "c_h", 0.0);
    const double ha = cfg.get_double("lower_order", "alpha", p.spec.alpha);
    if (form == "zero") p.h = LowerOrderSpec::zero();
    else if (form == "drift") p.h = LowerOrderSpec::drift(c_h, ha);
    else if (form == "growth_bounded") p.h = LowerOrderSpec::growth(c_h, ha);
    else throw InvalidInput("unknown lower_order form '" + form + "'");

    const std::string kind = cfg.get("domain", "kind", "ball");
    const Vec center = cfg.get_vec("domain", "center", {0.0, 0.0});
    if (kind == "ball") p.dom = Domain::ball(center, cfg.get_double("domain", "radius", 1.0));
    else if (kind == "annulus")
        p.dom = Domain::annulus(center, cfg.get_double("domain", "r1", 0.5), cfg.get_double("domain", "r2", 1.0));
    else if (kind == "box")
        p.dom = Domain::box(cfg.get_vec("domain", "lo", {0.0, 0.0}), cfg.get_vec("domain", "hi", {1.0, 1.0}));
    else throw InvalidInput("unknown domain kind '" + kind + "'");

    p.hgrid = cfg.get_double("grid", "h", p.hgrid);
    p.margin_cells = cfg.get_double("grid", "margin", p.margin_cells);
    p.forcing = cfg.get("problem", "forcing", p.forcing);
    p.forcing_value = cfg.get_double("problem", "forcing_value", p.forcing_value);
    p.boundary = cfg.get("problem", "boundary", p.boundary);
    p.boundary_value = cfg.get_double("problem", "boundary_value", p.boundary_value);
    p.tol = cfg.get_double("problem", "tol", p.tol);
    const long long mi = cfg.get_int("problem", "max_iter", static_cast<long long>(p.max_iter));
    if (mi <= 0) throw InvalidInput("max_iter must be positive");
    p.max_iter = static_cast<std::size_t>(mi);
    validate(p);
    return p;
}

std::string to_text(const Problem& p) {
    auto vec = [](const Vec& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
        return s;
    };
    std::ostringstream os;
    os << "[operator]\n" << to_text(p.spec);
    os << "[lower_order]\nform="
       << (p.h.form == LowerOrderSpec::Form::drift            ? "drift"
           : p.h.form == LowerOrderSpec::Form::growth_bounded ? "growth_bounded"
                                                              : "zero")
       << "\nc_h=" << format_double(p.h.c_h) << "\nalpha=" << format_double(p.h.alpha) << "\n";
    os << "[domain]\n";
    switch (p.dom.kind) {
        case Domain::Kind::ball: os << "kind=ball\ncenter=" << vec(p.dom.center) << "\nradius=" << format_double(p.dom.R) << "\n"; break;
        case Domain::Kind::annulus:
            os << "kind=annulus\ncenter=" << vec(p.dom.center) << "\nr1=" << format_double(p.dom.r1)
               << "\nr2=" << format_double(p.dom.R) << "\n";
            break;
        case Domain::Kind::box: os << "kind=box\nlo=" << vec(p.dom.lo) << "\nhi=" << vec(p.dom.hi) << "\n"; break;
    }
    os << "[grid]\nh=" << format_double(p.hgrid) << "\nmargin=" << format_double(p.margin_cells) << "\n";
    os << "[problem]\nforcing=" << p.forcing << "\nforcing_value=" << format_double(p.forcing_value)
       << "\nboundary=" << p.boundary << "\nboundary_value=" << format_double(p.boundary_value)
       << "\ntol=" << format_double(p.tol) << "\nmax_iter=" << p.max_iter << "\n";
    return os.str();
}

std::shared_ptr<const Grid> make_grid(const Problem& p) {
    return std::make_shared<const Grid>(p.dom, p.hgrid, p.margin_cells);
}

double forcing_sup(const Problem& p, const Grid& g) {
    double m = 0.0;
    for (const auto* pts : {&g.interior_points(), &g.band_points()})
        for (std::size_t i : *pts) {
            const double v = p.f(g.coords(i));
            if (!std::isfinite(v)) throw InvalidInput("forcing is not finite on the grid");
            m = std::max(m, std::abs(v));
        }
    return m;
}

double default_tol(const Problem& p, const Grid& g) { return p.tol > 0 ? p.tol : 1e-6 * (1.0 + forcing_sup(p, g)); }

namespace {

bool diagonal_family(Family f) { return f == Family::pseudo_p || f == Family::widely_degenerate; }

struct Local {
    double value;  // F + h
    double diag;   // bound on -d(value)/d(u_c) times h^2
};

// q and the Theta floor come from uq; second differences from ux.
Local local_eval(const Problem& p, double Lam, const GridField& ux, const GridField& uq, std::size_t idx,
                 const Vec& x) {
    const Grid& g = ux.grid();
    const int n = g.n();
    const double h = g.h(), h2 = h * h;
    const auto& st = g.stencil();
    thread_local Vec q, qeff;
    q.resize(n);
    qeff.resize(n);
    std::array<bool, 3> floored{};
    SymMat X(n);
    const double cx = ux[idx], cq = uq[idx];
    for (int i = 0; i < n; ++i) {
        const std::size_t ip = g.shift(idx, st[i]);
        const std::size_t im = g.shift(idx, {-st[i][0], -st[i][1], -st[i][2]});
        q[i] = (uq[ip] - uq[im]) / (2.0 * h);
        const double dq = (uq[ip] + uq[im] - 2.0 * cq) / h2;
        const double fl = 0.5 * h * std::abs(dq);
        // A floored coefficient also moves with u_c: d(g^a X_ii)/dX_ii = (1 + a) g^a.
        floored[i] = fl > std::abs(q[i]);
        qeff[i] = std::copysign(std::max(std::abs(q[i]), fl), q[i]);
        X.set(i, i, (ux[ip] + ux[im] - 2.0 * cx) / h2);
    }
    if (!diagonal_family(p.spec.family)) {
        std::size_t s = static_cast<std::size_t>(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, s += 2) {
                const auto& ep = st[s];
                const auto& em = st[s + 1];
                const double dp = ux[g.shift(idx, ep)] + ux[g.shift(idx, {-ep[0], -ep[1], -ep[2]})] - 2.0 * cx;
                const double dm = ux[g.shift(idx, em)] + ux[g.shift(idx, {-em[0], -em[1], -em[2]})] - 2.0 * cx;
                X.set(i, j, (dp - dm) / (4.0 * h2));
            }
    }
    const double a = p.spec.alpha;
    double coef = 0.0;
    for (int i = 0; i < n; ++i) coef += powa(std::abs(qeff[i]), a) * (floored[i] ? 1.0 + a : 1.0);
    const double floor = n * powa(h, a) * 0.01;
    double diag = 2.0 * Lam * (coef + floor);
    double hval = 0.0;
    if (p.h.form != LowerOrderSpec::Form::zero) {
        hval = lower_order_value(p.h, x, q);
        diag += h * p.h.c_h * (std::pow(norm(q), 1.0 + p.h.alpha) + 1.0);
    }
    return {eval(p.spec, x, qeff, X) + hval, diag};
}

}  // namespace

double discrete_eval(const Problem& p, const GridField& u, std::size_t idx) {
    if (u.grid().mark(idx) != Grid::interior) throw PreconditionError("discrete_eval: point is not interior");
    const double Lam = ellipticity(p.spec, u.grid().n()).second;
    return local_eval(p, Lam, u, u, idx, u.grid().coords(idx)).value;
}

GridField frozen_step(const Problem& p, const GridField& u, const GridField& frozen, double theta) {
    if (&u.grid() != &frozen.grid()) throw InvalidInput("frozen_step: fields on different grids");
    const Grid& g = u.grid();
    const double Lam = ellipticity(p.spec, g.n()).second;
    GridField out(u);
    for (std::size_t idx : g.interior_points()) {
        const Vec x = g.coords(idx);
        const Local l = local_eval(p, Lam, u, frozen, idx, x);
        out[idx] = u[idx] + theta * g.h() * g.h() / l.diag * (l.value - p.f(x));
    }
    return out;
}

GridField boundary_field(const Problem& p, std::shared_ptr<const Grid> grid) {
    GridField u(grid, 0.0);
    for (std::size_t i : grid->band_points()) u[i] = p.g(grid->coords(i));
    return u;
}

SolveResult solve(const Problem& p, const SolveOptions& opt, const GridField* init) {
    validate(p);
    std::shared_ptr<const Grid> grid = init ? init->grid_ptr() : make_grid(p);
    const Grid& g = *grid;
    if (g.n() != p.dom.n()) throw InvalidInput("solve: grid and domain dimensions differ");
    const double tol = default_tol(p, g);
    const double Lam = ellipticity(p.spec, g.n()).second;
    const double h2 = g.h() * g.h();
    double beta = opt.beta;
    if (beta < 0) beta = std::clamp(1.0 - 3.0 * g.h() / (0.5 * p.dom.diam()), 0.0, 0.97);

    const auto& pts = g.interior_points();
    std::vector<Vec> xs(pts.size());
    std::vector<double> fv(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        xs[k] = g.coords(pts[k]);
        fv[k] = p.f(xs[k]);
    }

    GridField u = boundary_field(p, grid);
    if (init)
        for (std::size_t i : pts) u[i] = (*init)[i];
    GridField prev(u), next(u);
    std::vector<double> step(pts.size());
    SolveResult r{u, {}, 0, 0.0, tol};
    const std::size_t stride = std::max<std::size_t>(opt.history_stride, 1);
    for (std::size_t it = 0;; ++it) {
        double rmax = 0.0, vs = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const Local l = local_eval(p, Lam, u, u, pts[k], xs[k]);
            const double res = l.value - fv[k];
            rmax = std::max(rmax, std::abs(res));
            step[k] = opt.theta * h2 / l.diag * res;
            vs += step[k] * (u[pts[k]] - prev[pts[k]]);
        }
        if (!std::isfinite(rmax)) {
            r.history.push_back(rmax);
            throw ConvergenceFailure("solve: iteration diverged", r.history);
        }
        if (it % stride == 0) r.history.push_back(rmax);
        if (rmax < tol) {
            r.u = u;
            r.iterations = it;
            r.residual = rmax;
            return r;
        }
        if (it >= p.max_iter) throw ConvergenceFailure("solve: no convergence within max_iter", r.history);
        const double b = (opt.restart && vs < 0.0) ? 0.0 : beta;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const std::size_t i = pts[k];
            next[i] = u[i] + step[k] + b * (u[i] - prev[i]);
        }
        std::swap(prev, u);
        std::swap(u, next);
    }
}

VariationalResult variational_pplap_solve(double p, const ScalarField& f, std::shared_ptr<const Grid> grid,
                                          const ScalarField& gb, double tol, std::size_t max_iter) {
    if (!(p > 2)) throw InvalidInput("variational solve needs p > 2");
    if (!grid) throw InvalidInput("variational solve needs a grid");
    const Grid& g = *grid;
    const int n = g.n();
    const double h = g.h(), vol = std::pow(h, n);
    const auto& pts = g.interior_points();

    GridField u(grid, 0.0);
    if (gb)
        for (std::size_t i : g.band_points()) u[i] = gb(g.coords(i));
    std::vector<double> fv(g.size(), 0.0);
    for (std::size_t i : pts) fv[i] = f(g.coords(i));

    struct Edge {
        std::size_t a, b;
    };
    std::vector<Edge> edges;
    for (std::size_t a = 0; a < g.size(); ++a) {
        if (g.mark(a) == Grid::outside) continue;
        for (int i = 0; i < n; ++i) {
            const std::size_t b = g.shift(a, g.stencil()[i]);
            if (b >= g.size() || g.mark(b) == Grid::outside) continue;
            if (g.mark(a) == Grid::interior || g.mark(b) == Grid::interior) edges.push_back({a, b});
        }
    }

    auto energy = [&](const std::vector<double>& v) {
        double e = 0.0;
        for (const Edge& ed : edges) e += std::pow(std::abs(v[ed.b] - v[ed.a]) / h, p) / p;
        double lin = 0.0;
        for (std::size_t i : pts) lin += fv[i] * v[i];
        return vol * (e + (p - 1.0) * lin);
    };
    auto gradient = [&](const std::vector<double>& v, std::vector<double>& gr) {
        std::fill(gr.begin(), gr.end(), 0.0);
        for (const Edge& ed : edges) {
            const double s = (v[ed.b] - v[ed.a]) / h;
            const double w = vol * std::pow(std::abs(s), p - 2.0) * s / h;
            gr[ed.b] += w;
            gr[ed.a] -= w;
        }
        for (std::size_t i = 0; i < g.size(); ++i)
            gr[i] = g.mark(i) == Grid::interior ? gr[i] + vol * (p - 1.0) * fv[i] : 0.0;
    };
    auto resid = [&](const std::vector<double>& gr) {
        double m = 0.0;
        for (std::size_t i : pts) m = std::max(m, std::abs(gr[i]));
        return m / ((p - 1.0) * vol);
    };

    // Diagonal of the energy Hessian, floored where the edge slopes vanish.
    auto precond = [&](const std::vector<double>& v, std::vector<double>& pc) {
        std::fill(pc.begin(), pc.end(), 0.0);
        double top = 0.0;
        for (const Edge& ed : edges) {
            const double w = std::pow(std::abs(v[ed.b] - v[ed.a]) / h, p - 2.0);
            pc[ed.a] += w;
            pc[ed.b] += w;
            top = std::max(top, w);
        }
        const double fl = 1e-3 * top + 1e-12;
        for (std::size_t i = 0; i < g.size(); ++i) pc[i] = 1.0 / (vol * (p - 1.0) / (h * h) * (pc[i] + fl));
    };

    std::vector<double>& v = u.values();
    std::vector<double> gr(g.size()), gold(g.size()), zold(g.size()), z(g.size()), pc(g.size()), d(g.size()),
        trial(g.size());
    gradient(v, gr);
    precond(v, pc);
    for (std::size_t i = 0; i < g.size(); ++i) {
        z[i] = pc[i] * gr[i];
        d[i] = -z[i];
    }
    double E = energy(v);
    VariationalResult out{u, {E}, resid(gr), 0};
    double t = 1.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        out.residual = resid(gr);
        if (out.residual <= tol) {
            out.u = u;
            out.iterations = it;
            return out;
        }
        double slope = 0.0;
        for (std::size_t i : pts) slope += gr[i] * d[i];
        if (slope >= 0.0) {
            slope = 0.0;
            for (std::size_t i : pts) {
                d[i] = -z[i];
                slope += gr[i] * d[i];
            }
        }
        t = std::min(1.0, 4.0 * t);
        double Et = 0.0;
        for (int bt = 0;; ++bt) {
            trial = v;
            for (std::size_t i : pts) trial[i] += t * d[i];
            Et = energy(trial);
            if (Et <= E + 1e-4 * t * slope) break;
            t *= 0.5;
            if (bt > 200) throw ConvergenceFailure("variational solve: line search failed", out.energy);
        }
        v.swap(trial);
        E = Et;
        out.energy.push_back(E);
        gold = gr;
        zold = z;
        gradient(v, gr);
        precond(v, pc);
        double num = 0.0, den = 0.0;
        for (std::size_t i : pts) {
            z[i] = pc[i] * gr[i];
            num += z[i] * (gr[i] - gold[i]);
            den += zold[i] * gold[i];
        }
        const double bpr = den > 0 ? std::max(0.0, num / den) : 0.0;
        for (std::size_t i : pts) d[i] = -z[i] + bpr * d[i];
    }
    throw ConvergenceFailure("variational solve: no convergence within max_iter", out.energy);
}

ComparisonReport comparison_check(const Problem& sub_prob, const GridField& u, const Problem& super_prob,
                                  const GridField& v, double tol) {
    ComparisonReport rep;
    const Grid& g = u.grid();
    if (&g != &v.grid() && g.size() != v.grid().size()) throw InvalidInput("comparison_check: grids differ");
    for (std::size_t i : g.band_points())
        if (u[i] > v[i] + tol) {
            rep.preconditions_ok = false;
            rep.message = "u > v on the boundary band";
        }
    rep.sub_defect = -1e300;
    rep.super_defect = -1e300;
    for (std::size_t i : g.interior_points()) {
        const Vec x = g.coords(i);
        const double fs = sub_prob.f(x), fp = super_prob.f(x);
        if (fs < fp - tol && rep.preconditions_ok) {
            rep.preconditions_ok = false;
            rep.message = "forcing of the sub-solution is below that of the super-solution";
        }
        rep.sub_defect = std::max(rep.sub_defect, fs - tol - discrete_eval(sub_prob, u, i));
        rep.super_defect = std::max(rep.super_defect, discrete_eval(super_prob, v, i) - fp - tol);
    }
    if (rep.preconditions_ok && rep.sub_defect > 0) {
        rep.preconditions_ok = false;
        rep.message = "u is not a discrete sub-solution";
    }
    if (rep.preconditions_ok && rep.super_defect > 0) {
        rep.preconditions_ok = false;
        rep.message = "v is not a discrete super-solution";
    }
    if (!rep.preconditions_ok) {
        rep.worst_gap = std::nan("");
        return rep;
    }
    rep.worst_gap = -1e300;
    for (std::size_t i : g.interior_points()) rep.worst_gap = std::max(rep.worst_gap, u[i] - v[i]);
    return rep;
}

Bracket perron_bracket(const Problem& p, std::shared_ptr<const Grid> grid, std::size_t audit_samples,
                       std::uint64_t seed) {
    validate(p);
    const Grid& g = *grid;
    for (std::size_t i : g.band_points())
        if (p.g(g.coords(i)) != 0.0) throw PreconditionError("perron_bracket: boundary data must vanish");
    const int n = g.n();
    const auto [lam, Lam] = ellipticity(p.spec, n);
    if (!(lam > 0)) throw PreconditionError("perron_bracket: operator has no positive lower ellipticity constant");
    const Domain& dom = p.dom;
    const double c_h = p.h.c_h;
    Bracket b{GridField(grid), GridField(grid), 0.0, 0, forcing_sup(p, g), {}};
    b.k = choose_k(p.spec.alpha, lam, Lam, n, dom.C1(), c_h, dom.diam()).k;
    const double thr = barrier_threshold(p.spec.alpha, lam, Lam, n, b.k, c_h, b.f_inf, dom.max_distance());
    b.M = thr > 0 ? 1.05 * thr : 1.0;
    b.audit = barrier_audit(p.spec, p.h, dom, b.M, b.k, b.f_inf, audit_samples, seed);
    if (b.audit.worst_margin_super > 0 || b.audit.worst_margin_sub > 0)
        throw ContractViolation("perron_bracket: barrier audit failed");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.mark(i) == Grid::outside) continue;
        const double d = distance(dom, g.coords(i));
        const double psi = b.M * (1.0 - std::pow(1.0 + d, -b.k));
        b.super[i] = psi;
        b.sub[i] = -psi;
    }
    return b;
}

double bracket_violation(const Bracket& b, const GridField& u) {
    double w = -1e300;
    for (std::size_t i : u.grid().interior_points()) w = std::max({w, b.sub[i] - u[i], u[i] - b.super[i]});
    return w;
}

std::string to_string(SmpVerdict::Kind k) {
    switch (k) {
        case SmpVerdict::Kind::positive: return "positive";
        case SmpVerdict::Kind::zero: return "zero";
        case SmpVerdict::Kind::violation: return "violation";
    }
    return "?";
}

SmpVerdict smp_check(const GridField& u, double tol) {
    const Grid& g = u.grid();
    std::size_t arg = g.interior_points().front();
    double mn = 1e300, mx = 0.0;
    for (std::size_t i : g.interior_points()) {
        if (u[i] < mn) {
            mn = u[i];
            arg = i;
        }
        mx = std::max(mx, std::abs(u[i]));
    }
    if (mn >= -tol && mx <= tol) return {SmpVerdict::Kind::zero, {}, mx};
    if (mn > tol) return {SmpVerdict::Kind::positive, {}, mn};
    return {SmpVerdict::Kind::violation, g.coords(arg), mn};
}

}  // namespace degen
