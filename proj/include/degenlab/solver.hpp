#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "degenlab/barriers.hpp"
#include "degenlab/grid.hpp"
#include "degenlab/operators.hpp"

namespace degen {

class Config;

using ScalarField = std::function<double(const Vec&)>;

// Forcing presets: zero | const | gaussian | sine | linear  (scaled by value)
// Boundary presets: zero | const | linear | wave           (scaled by value)
ScalarField forcing_preset(const std::string& name, double value);
ScalarField boundary_preset(const std::string& name, double value);

struct Problem {
    OperatorSpec spec;
    LowerOrderSpec h;
    Domain dom = Domain::ball({0.0, 0.0}, 1.0);
    double hgrid = 1.0 / 32.0;
    double margin_cells = 0.5;
    std::string forcing = "zero";
    double forcing_value = 1.0;
    std::string boundary = "zero";
    double boundary_value = 1.0;
    ScalarField f_custom;  // overrides the forcing preset when set
    ScalarField g_custom;  // overrides the boundary preset when set
    double tol = 0.0;      // 0 selects 1e-6 (1 + |f|_inf)
    std::size_t max_iter = 400000;

    double f(const Vec& x) const;
    double g(const Vec& x) const;
};

void validate(const Problem& p);
Problem problem_from_config(const Config& cfg);
std::string to_text(const Problem& p);

std::shared_ptr<const Grid> make_grid(const Problem& p);
// Sampled sup of |f| over the grid's interior and band.
double forcing_sup(const Problem& p, const Grid& g);
double default_tol(const Problem& p, const Grid& g);

// F(x, q~, X~) + h(x, q~) at an interior point.
double discrete_eval(const Problem& p, const GridField& u, std::size_t idx);

// One relaxation step with the diffusion coefficients and h frozen at `frozen`:
// u + theta dt (F(x, q~[frozen], X~[u]) + h(x, q~[frozen]) - f) at interior points.
GridField frozen_step(const Problem& p, const GridField& u, const GridField& frozen, double theta = 1.0);

struct SolveOptions {
    double theta = 0.9;     // fraction of the local stability step
    double beta = -1.0;     // heavy-ball weight; < 0 picks 1 - 3 h / radius, clamped to [0, 0.97]
    bool restart = true;    // drop the momentum when it opposes the step
    std::size_t history_stride = 1;
};

struct SolveResult {
    GridField u;
    std::vector<double> history;  // max interior |residual| per sweep (strided)
    std::size_t iterations = 0;
    double residual = 0.0;
    double tol = 0.0;
};

// Throws ConvergenceFailure (carrying the residual curve) after max_iter sweeps.
SolveResult solve(const Problem& p, const SolveOptions& opt = {}, const GridField* init = nullptr);
GridField boundary_field(const Problem& p, std::shared_ptr<const Grid> grid);

struct VariationalResult {
    GridField u;
    std::vector<double> energy;
    double residual = 0.0;
    std::size_t iterations = 0;
};

// Minimizes sum_edges h^N |D_i u|^p / p + (p - 1) sum h^N f u with u = g on the band.
// Nonlinear conjugate gradients with Armijo backtracking; the residual is the
// gradient divided by (p - 1) h^N, comparable to the pointwise equation residual.
// Below about 1e-6 the Armijo test on the energy runs into rounding, hence the default.
VariationalResult variational_pplap_solve(double p, const ScalarField& f, std::shared_ptr<const Grid> grid,
                                          const ScalarField& g = {}, double tol = 1e-5,
                                          std::size_t max_iter = 50000);

struct ComparisonReport {
    bool preconditions_ok = true;
    std::string message;
    double worst_gap = 0.0;       // max interior (u - v)
    double sub_defect = 0.0;      // max (f - tol - F[u]) over interior, <= 0 when u is a sub-solution
    double super_defect = 0.0;    // max (F[v] - g - tol)
};

// u a discrete sub-solution of sub_prob, v a discrete super-solution of super_prob;
// requires f_sub >= f_super on the interior and u <= v on the band.
ComparisonReport comparison_check(const Problem& sub_prob, const GridField& u, const Problem& super_prob,
                                  const GridField& v, double tol);

struct Bracket {
    GridField sub;
    GridField super;
    double M = 0.0;
    int k = 0;
    double f_inf = 0.0;
    BarrierAudit audit;
};

// +-psi sampled on the grid; requires zero boundary data and lambda_eff > 0.
Bracket perron_bracket(const Problem& p, std::shared_ptr<const Grid> grid, std::size_t audit_samples = 2000,
                       std::uint64_t seed = 0);
// max over interior of (sub - u) and (u - super).
double bracket_violation(const Bracket& b, const GridField& u);

struct SmpVerdict {
    enum class Kind { positive, zero, violation };
    Kind kind;
    Vec point;       // offending point for violations
    double value = 0.0;
};
std::string to_string(SmpVerdict::Kind k);
SmpVerdict smp_check(const GridField& u, double tol);

}  // namespace degen
