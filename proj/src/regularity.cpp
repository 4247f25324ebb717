#include "degenlab/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "degenlab/errors.hpp"
#include "degenlab/rng.hpp"

namespace degen {

namespace {

double quotient(double du, double dist, double gamma) { return std::abs(du) / std::pow(dist, gamma); }

}  // namespace

SeminormReport seminorm(const GridField& u, double gamma, double margin, std::uint64_t seed) {
    if (!(gamma > 0 && gamma <= 1)) throw InvalidInput("seminorm: gamma must lie in (0, 1]");
    const Grid& g = u.grid();
    if (margin < g.h() * (1.0 - 1e-12)) throw InvalidInput("seminorm: margin must be at least the grid spacing");
    std::vector<std::size_t> pts;
    std::vector<char> in(g.size(), 0);
    for (std::size_t i : g.interior_points())
        if (distance(g.domain(), g.coords(i)) >= margin) {
            pts.push_back(i);
            in[i] = 1;
        }
    if (pts.empty()) throw DomainError("seminorm: empty interior subdomain");

    SeminormReport r;
    r.gamma = gamma;
    r.margin = margin;
    std::size_t best_a = pts[0], best_b = pts[0];
    auto consider = [&](std::size_t a, std::size_t b) {
        const double dist = norm(axpy(-1.0, g.coords(a), g.coords(b)));
        const double q = quotient(u[a] - u[b], dist, gamma);
        ++r.pairs;
        if (q > r.value) {
            r.value = q;
            best_a = a;
            best_b = b;
        }
    };

    if (pts.size() <= kExactPairLimit) {
        r.exact = true;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) consider(pts[i], pts[j]);
    } else {
        // Stratified by distance decade: level l draws lattice offsets with |component| <= 2^l.
        r.exact = false;
        const int n = g.n();
        int levels = 1;
        int extent = 0;
        for (int i = 0; i < n; ++i) extent = std::max(extent, g.dims()[i]);
        while ((1 << (levels - 1)) < extent) ++levels;
        Rng rng(seed, 0x5e41);
        std::size_t drawn = 0, attempts = 0;
        while (drawn < kSampledPairs && attempts < 50 * kSampledPairs) {
            ++attempts;
            const int level = static_cast<int>(drawn % static_cast<std::size_t>(levels));
            const int span = 1 << level;
            const std::size_t a = pts[rng.next_u64() % pts.size()];
            const auto ma = g.multi(a);
            std::array<int, 3> mb = ma;
            bool zero = true, ok = true;
            for (int i = 0; i < n; ++i) {
                const int off = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(2 * span + 1)) - span;
                zero = zero && off == 0;
                mb[i] = ma[i] + off;
                ok = ok && mb[i] >= 0 && mb[i] < g.dims()[i];
            }
            if (zero || !ok) continue;
            const std::size_t b = g.flat(mb);
            if (!in[b]) continue;
            consider(a, b);
            ++drawn;
        }
    }
    r.x = g.coords(best_a);
    r.y = g.coords(best_b);
    return r;
}

double seminorm_on_pairs(const GridField& u, double gamma,
                         const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    const Grid& g = u.grid();
    double best = 0.0;
    for (const auto& [a, b] : pairs) {
        const double dist = norm(axpy(-1.0, g.coords(a), g.coords(b)));
        if (dist > 0) best = std::max(best, quotient(u[a] - u[b], dist, gamma));
    }
    return best;
}

RefinementTable refinement_scan(const Problem& p, const Vec& levels, double gamma, double margin,
                                const SolveOptions& opt, std::uint64_t seed, bool keep_fields) {
    if (levels.size() < 3) throw InvalidInput("refinement_scan: need at least three levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (std::abs(levels[i - 1] / levels[i] - 2.0) > 1e-9) throw InvalidInput("refinement_scan: levels must halve");
    RefinementTable t;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        Problem pl = p;
        pl.hgrid = levels[l];
        SolveResult s = solve(pl, opt);
        RefinementRow row;
        row.level = static_cast<int>(l);
        row.hgrid = levels[l];
        row.report = seminorm(s.u, gamma, margin, seed);
        row.residual = s.residual;
        row.iterations = s.iterations;
        row.sup_norm = s.u.sup_abs();
        t.rows.push_back(row);
        if (keep_fields) t.fields.push_back(s.u);
    }
    const double a = t.rows[t.rows.size() - 2].report.value, b = t.rows.back().report.value;
    t.rel_change = b > 0 ? std::abs(b - a) / b : (a > 0 ? 1.0 : 0.0);
    t.bounded = t.rel_change < 0.2;
    return t;
}

double doubling_gap(const GridField& u, const GridField& v, double M, const RadialTestFn& tf, const Vec& x0) {
    const Grid& g = u.grid();
    if (g.size() != v.grid().size() || g.h() != v.grid().h()) throw InvalidInput("doubling_gap: grids differ");
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.mark(i) != Grid::outside) pts.push_back(i);
    double sup = -1e300;
    for (std::size_t i : pts) sup = std::max(sup, u[i] - v[i]);

    const std::size_t P = pts.size();
    std::vector<Vec> xs(P);
    std::vector<double> A(P), B(P);
    for (std::size_t k = 0; k < P; ++k) {
        xs[k] = g.coords(pts[k]);
        const double r2 = dot(axpy(-1.0, x0, xs[k]), axpy(-1.0, x0, xs[k]));
        A[k] = u[pts[k]] - M * r2;
        B[k] = v[pts[k]] + M * r2;
    }
    const double smax = tf.s_max();
    const double wcap = std::isfinite(smax) ? omega_eval(tf, smax * (1.0 - 1e-12)).w : 0.0;
    auto omega = [&](double s) {
        if (s <= 0) return 0.0;
        if (s >= smax * (1.0 - 1e-12)) return wcap;
        return omega_eval(tf, s).w;
    };
    // Visit x in decreasing A and y in increasing B so the omega-free bound prunes early.
    std::vector<std::size_t> ox(P), oy(P);
    for (std::size_t k = 0; k < P; ++k) ox[k] = oy[k] = k;
    std::sort(ox.begin(), ox.end(), [&](std::size_t a, std::size_t b) { return A[a] > A[b]; });
    std::sort(oy.begin(), oy.end(), [&](std::size_t a, std::size_t b) { return B[a] < B[b]; });
    double best = -1e300;
    for (std::size_t a : ox) {
        if (A[a] - B[oy[0]] - sup <= best) break;
        for (std::size_t b : oy) {
            const double base = A[a] - B[b] - sup;
            if (base <= best) break;
            const double s = norm(axpy(-1.0, xs[a], xs[b]));
            best = std::max(best, base - M * omega(s));
        }
    }
    return best;
}

}  // namespace degen
