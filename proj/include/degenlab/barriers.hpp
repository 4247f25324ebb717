#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "degenlab/linalg.hpp"
#include "degenlab/operators.hpp"

namespace degen {

struct Domain {
    enum class Kind { ball, annulus, box };
    Kind kind = Kind::ball;
    Vec center{0.0, 0.0};
    double r1 = 0.0;  // annulus inner radius
    double R = 1.0;   // ball radius, annulus outer radius
    Vec lo, hi;       // box corners

    static Domain ball(Vec center, double R);
    static Domain annulus(Vec center, double r1, double r2);
    static Domain box(Vec lo, Vec hi);

    int n() const;
    double diam() const;
    // Semiconcavity constant: D^2 d <= C1 I.
    double C1() const;
    // Largest value of d over the domain.
    double max_distance() const;
    bool contains(const Vec& x) const;  // strictly inside
    // Axis-aligned bounding box.
    Vec bbox_lo() const;
    Vec bbox_hi() const;
};

struct DistanceJet {
    double d;
    Vec grad;
    SymMat hess;
};

// Signed inside distance with its jet; throws DomainError on the medial axis or outside.
DistanceJet distance_jet(const Domain& dom, const Vec& x);
// Distance only; works everywhere (negative outside).
double distance(const Domain& dom, const Vec& x);

struct KChoice {
    int k;
    int k_rule1;  // semiconcavity rule
    int k_rule2;  // ellipticity rule
    std::string binding;
};
KChoice choose_k(double alpha, double lambda, double Lambda, int n, double C1, double c_h, double diam);

struct PsiJet {
    double psi;
    Vec grad;
    SymMat hess;
};
PsiJet psi_jet(double M, int k, const Domain& dom, const Vec& x);

// Smallest M for which the closed-form chain bound (plus the constant part of h) is <= -|f|_inf.
double barrier_threshold(double alpha, double lambda, double Lambda, int n, int k, double c_h, double f_inf,
                         double d_max);

struct BarrierAudit {
    double worst_margin_super = -1e300;   // max F(psi) + h + |f|
    double worst_margin_sub = -1e300;     // max |f| - (F(-psi) + h)
    double worst_chain_gap_super = -1e300;  // max of sampled value minus the closed-form bound
    double worst_chain_gap_sub = -1e300;
    std::vector<std::size_t> line_violations = std::vector<std::size_t>(4, 0);
    std::size_t samples = 0;
    std::size_t skipped = 0;
    struct Row {
        Vec x;
        double d, F, h, bound, margin;
    };
    std::vector<Row> rows;  // filled when keep_rows is set
};

BarrierAudit barrier_audit(const OperatorSpec& spec, const LowerOrderSpec& h, const Domain& dom, double M, int k,
                           double f_inf, std::size_t samples, std::uint64_t seed = 0, bool keep_rows = false);

struct SmpJet {
    double w;
    Vec grad;
    SymMat hess;
    double a, b;
    Vec vec_i, vec_j;
};
SmpJet smp_jet(double m, double c, double R, const Vec& x1, const Vec& x, double alpha);

struct Mu {
    double plus, minus;
};
Mu smp_mu(const Vec& x_rel, double c, double alpha);
// a i (x) i + b j (x) j, whose nonzero spectrum is {mu+, mu-}.
SymMat smp_rank2_matrix(const Vec& x_rel, double c, double alpha);

// Directions used by the c search and audits.
std::vector<Vec> direction_grid(int n);

double choose_c(double lambda, double Lambda, double alpha, int n, double R);

}  // namespace degen
