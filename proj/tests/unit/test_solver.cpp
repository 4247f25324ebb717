#include <cmath>

#include "doctest.h"
#include "degenlab/config.hpp"
#include "degenlab/errors.hpp"
#include "degenlab/solver.hpp"
#include "degenlab/rng.hpp"
#include "support/oracles.hpp"

using namespace degen;

namespace {

Problem pucci_problem(double alpha, const Domain& dom, double h) {
    Problem p;
    p.spec = OperatorSpec::pucci(true, alpha, 1.0, 2.0);
    p.dom = dom;
    p.hgrid = h;
    return p;
}

double smooth_u(const Vec& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (1.0 + 0.3 * i) * x[i];
    return s + 0.5 * std::exp(0.7 * x[0]) * std::cos(1.3 * x.back()) + 0.2 * x[0] * x.back();
}

}  // namespace

TEST_CASE("discrete_eval on constants and linear functions") {
    for (const auto& spec : {OperatorSpec::pucci(true, 1.0, 1.0, 2.0), OperatorSpec::pseudo_p(3.5)}) {
        Problem p;
        p.spec = spec;
        p.dom = Domain::ball({0.0, 0.0}, 1.0);
        p.hgrid = 0.1;
        auto g = make_grid(p);
        GridField c(g, 2.5), lin(g);
        for (std::size_t i = 0; i < g->size(); ++i) lin[i] = 0.3 * g->coords(i)[0] - 1.1 * g->coords(i)[1];
        for (std::size_t i : g->interior_points()) {
            CHECK(discrete_eval(p, c, i) == 0.0);
            CHECK(std::abs(discrete_eval(p, lin, i)) <= 1e-12);
        }
        CHECK_THROWS_AS(discrete_eval(p, c, g->band_points()[0]), PreconditionError);
    }
}

TEST_CASE("discrete_eval is exact on quadratics away from degenerate gradients") {
    // u = x.Bx/2 + b.x with grad u = (1,...,1) at x0: centered differences are exact.
    const Vec x0 = {0.25, 0.25};
    SymMat B(2);
    B.set(0, 0, 1.5);
    B.set(0, 1, -0.7);
    B.set(1, 1, -2.0);
    const Vec b = axpy(-1.0, B.apply(x0), {1.0, 1.0});
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
        Problem p = pucci_problem(1.5, Domain::box({-1.0, -1.0}, {1.0, 1.0}), h);
        auto g = make_grid(p);
        GridField u(g);
        for (std::size_t i = 0; i < g->size(); ++i) {
            const Vec x = g->coords(i);
            u[i] = 0.5 * B.quad(x) + dot(b, x);
        }
        std::array<int, 3> m{0, 0, 0};
        for (int k = 0; k < 2; ++k) m[k] = static_cast<int>(std::lround((x0[k] - g->origin()[k]) / h));
        const std::size_t idx = g->flat(m);
        const double want = eval(p.spec, x0, {1.0, 1.0}, B);
        CHECK(std::abs(discrete_eval(p, u, idx) - want) <= 1e-9);
    }
}

TEST_CASE("discrete_eval converges with order at least one") {
    const Vec x0 = {0.25, -0.5};
    for (const auto& spec : {OperatorSpec::pucci(true, 1.0, 0.5, 2.0), OperatorSpec::pucci(false, 2.5, 1.0, 3.0),
                             OperatorSpec::pseudo_p(4.0)}) {
        CAPTURE(family_name(spec.family));
        std::vector<double> err;
        for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
            Problem p;
            p.spec = spec;
            p.dom = Domain::box({-1.0, -1.0}, {1.0, 1.0});
            p.hgrid = h;
            auto g = make_grid(p);
            GridField u(g);
            for (std::size_t i = 0; i < g->size(); ++i) u[i] = smooth_u(g->coords(i));
            std::array<int, 3> m{0, 0, 0};
            for (int k = 0; k < 2; ++k) m[k] = static_cast<int>(std::lround((x0[k] - g->origin()[k]) / h));
            // Analytic jet of smooth_u.
            const double e = std::exp(0.7 * x0[0]), c = std::cos(1.3 * x0[1]), s = std::sin(1.3 * x0[1]);
            const Vec q = {1.0 + 0.35 * e * c + 0.2 * x0[1], 1.3 - 0.65 * e * s + 0.2 * x0[0]};
            SymMat X(2);
            X.set(0, 0, 0.245 * e * c);
            X.set(0, 1, -0.455 * e * s + 0.2);
            X.set(1, 1, -0.845 * e * c);
            err.push_back(std::abs(discrete_eval(p, u, g->flat(m)) - eval(spec, x0, q, X)));
        }
        CHECK(err[2] < err[0]);
        CHECK(std::log2(err[0] / err[1]) >= 1.0);
        CHECK(std::log2(err[1] / err[2]) >= 1.0);
    }
}

TEST_CASE("frozen step is order preserving for diagonal families") {
    Rng rng(51);
    for (const auto& spec : {OperatorSpec::pseudo_p(3.0), OperatorSpec::widely_degenerate(4.0, {0.05, 0.2})}) {
        Problem p;
        p.spec = spec;
        p.dom = Domain::ball({0.0, 0.0}, 1.0);
        p.hgrid = 1.0 / 16;
        p.forcing = "gaussian";
        p.h = LowerOrderSpec::drift(0.5, spec.alpha);
        auto g = make_grid(p);
        for (int t = 0; t < 20; ++t) {
            GridField frozen(g), u(g), v(g);
            for (std::size_t i = 0; i < g->size(); ++i) {
                frozen[i] = rng.uniform(-1, 1);
                u[i] = rng.uniform(-1, 1);
                v[i] = u[i] + (rng.uniform() < 0.3 ? 0.0 : rng.uniform(0, 0.5));
            }
            const GridField su = frozen_step(p, u, frozen), sv = frozen_step(p, v, frozen);
            double worst = -1e300;
            for (std::size_t i : g->interior_points()) worst = std::max(worst, su[i] - sv[i]);
            CHECK(worst <= 1e-12);
        }
    }
}

TEST_CASE("solve trivial problem") {
    Problem p = pucci_problem(1.0, Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
    const SolveResult r = solve(p);
    CHECK(r.iterations == 0);
    CHECK(r.u.sup_abs() == 0.0);
    CHECK(r.residual == 0.0);
}

TEST_CASE("solve reduces to Poisson when alpha = 0 and lambda = Lambda") {
    Problem p;
    p.spec = OperatorSpec::pucci(true, 0.0, 1.0, 1.0);
    p.dom = Domain::ball({0.0, 0.0}, 1.0);
    p.hgrid = 1.0 / 16;
    p.forcing = "gaussian";
    p.boundary = "wave";
    p.tol = 1e-11;
    const SolveResult r = solve(p);
    const GridField ref = oracle::poisson_cg(r.u.grid_ptr(), [&](const Vec& x) { return p.f(x); },
                                             [&](const Vec& x) { return p.g(x); });
    double err = 0.0;
    for (std::size_t i : r.u.grid().interior_points()) err = std::max(err, std::abs(r.u[i] - ref[i]));
    CHECK(err <= 1e-8);
    // Boundary fidelity.
    for (std::size_t i : r.u.grid().band_points()) CHECK(r.u[i] == p.g(r.u.grid().coords(i)));
}

TEST_CASE("one-dimensional pseudo-p solve against shooting") {
    Problem p;
    p.spec = OperatorSpec::pseudo_p(4.0);
    p.dom = Domain::box({0.0}, {1.0});
    p.hgrid = 1.0 / 32;
    p.forcing = "const";
    const SolveResult r = solve(p);
    const oracle::Shooting1D shoot(4.0, [](double) { return 1.0; }, 20000);
    double err = 0.0;
    for (std::size_t i : r.u.grid().interior_points()) err = std::max(err, std::abs(r.u[i] - shoot(r.u.grid().coords(i)[0])));
    CHECK(err <= 5.0 * p.hgrid);

    // Cross-solver agreement.
    const VariationalResult v = variational_pplap_solve(4.0, [](const Vec&) { return 1.0; }, r.u.grid_ptr());
    double gap = 0.0;
    for (std::size_t i : r.u.grid().interior_points()) gap = std::max(gap, std::abs(r.u[i] - v.u[i]));
    CHECK(gap <= 5.0 * p.hgrid);
    for (std::size_t k = 1; k < v.energy.size(); ++k) CHECK(v.energy[k] <= v.energy[k - 1]);
}

TEST_CASE("variational solve trivial problem") {
    auto g = std::make_shared<const Grid>(Domain::ball({0.0, 0.0}, 1.0), 1.0 / 8);
    const VariationalResult v = variational_pplap_solve(3.0, [](const Vec&) { return 0.0; }, g);
    CHECK(v.u.sup_abs() == 0.0);
    CHECK(v.energy.back() == 0.0);
    CHECK_THROWS_AS(variational_pplap_solve(2.0, [](const Vec&) { return 0.0; }, g), InvalidInput);
}

TEST_CASE("solve is deterministic") {
    Problem p = pucci_problem(1.0, Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
    p.forcing = "sine";
    const SolveResult a = solve(p), b = solve(p);
    CHECK(a.u.values() == b.u.values());
    CHECK(a.history == b.history);
}

TEST_CASE("solve reports non-convergence") {
    Problem p = pucci_problem(1.0, Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
    p.forcing = "const";
    p.max_iter = 3;
    try {
        solve(p);
        FAIL("expected ConvergenceFailure");
    } catch (const ConvergenceFailure& e) {
        CHECK(e.history().size() == 4);
    }
}

TEST_CASE("comparison_check") {
    Problem p = pucci_problem(1.0, Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
    p.forcing = "gaussian";
    const SolveResult r = solve(p);
    const auto same = comparison_check(p, r.u, p, r.u, r.tol);
    CHECK(same.preconditions_ok);
    CHECK(same.worst_gap == doctest::Approx(0.0));

    Problem shifted = p;
    shifted.boundary = "const";
    shifted.boundary_value = 0.3;
    GridField v = r.u;
    for (double& x : v.values()) x += 0.3;
    const auto trans = comparison_check(p, r.u, shifted, v, r.tol);
    CHECK(trans.preconditions_ok);
    CHECK(trans.worst_gap == doctest::Approx(-0.3));

    // Swapping the roles breaks the band ordering.
    const auto bad = comparison_check(shifted, v, p, r.u, r.tol);
    CHECK_FALSE(bad.preconditions_ok);
    CHECK(std::isnan(bad.worst_gap));
}

TEST_CASE("perron_bracket") {
    Problem p = pucci_problem(1.0, Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
    auto g = make_grid(p);
    const Bracket zero = perron_bracket(p, g, 500);
    CHECK(bracket_violation(zero, GridField(g)) <= 0.0);

    p.forcing = "gaussian";
    const Bracket b1 = perron_bracket(p, g, 500);
    const SolveResult r = solve(p, {}, &b1.sub);
    CHECK(bracket_violation(b1, r.u) <= r.tol);

    // With c_h = 0 the threshold is homogeneous of degree 1/(1+alpha) in |f|_inf.
    p.forcing_value = 2.0;
    const Bracket b2 = perron_bracket(p, g, 500);
    CHECK(b2.k == b1.k);
    CHECK(b2.M / b1.M == doctest::Approx(std::pow(2.0, 1.0 / (1.0 + p.spec.alpha))).epsilon(1e-9));

    p.boundary = "const";
    CHECK_THROWS_AS(perron_bracket(p, g, 100), PreconditionError);
}

TEST_CASE("smp_check") {
    Problem p = pucci_problem(1.0, Domain::ball({0.0, 0.0}, 1.0), 1.0 / 16);
    auto g = make_grid(p);
    CHECK(smp_check(GridField(g), 1e-9).kind == SmpVerdict::Kind::zero);

    p.spec = OperatorSpec::pucci(false, 1.0, 1.0, 2.0);
    p.boundary = "const";
    p.boundary_value = 1.0;
    const SolveResult r = solve(p);
    CHECK(smp_check(r.u, r.tol).kind == SmpVerdict::Kind::positive);

    GridField ring(g, 0.0);
    for (std::size_t i : g->interior_points()) ring[i] = norm(g->coords(i)) > 0.5 ? 1.0 : 0.0;
    const SmpVerdict v = smp_check(ring, 1e-9);
    CHECK(v.kind == SmpVerdict::Kind::violation);
    CHECK(norm(v.point) <= 0.5);
}

TEST_CASE("problem config round trip") {
    const Config c = Config::parse_string(
        "[operator]\nfamily = example2\nalpha = 1.5\nlambda = 0.5\nLambda = 2\ncoeff = abs_clip\n"
        "[lower_order]\nform = drift\nc_h = 0.25\nalpha = 1.5\n"
        "[domain]\nkind = annulus\ncenter = 0,0\nr1 = 0.3\nr2 = 1\n"
        "[grid]\nh = 0.05\nmargin = 0.5\n"
        "[problem]\nforcing = sine\nforcing_value = 2\nboundary = wave\nboundary_value = 0.5\n");
    const Problem p = problem_from_config(c);
    CHECK(p.spec.family == Family::example2);
    CHECK(p.dom.kind == Domain::Kind::annulus);
    CHECK(p.h.c_h == 0.25);
    CHECK(p.hgrid == 0.05);
    CHECK(p.forcing == "sine");
    const std::string text = to_text(p);
    CHECK(to_text(problem_from_config(Config::parse_string(text))) == text);

    CHECK_THROWS_AS(problem_from_config(Config::parse_string("[domain]\nkind = torus\n")), InvalidInput);
    CHECK_THROWS_AS(problem_from_config(Config::parse_string("[problem]\nforcing = nope\n")), InvalidInput);
}
