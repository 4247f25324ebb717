#include "degenlab/barriers.hpp"

#include <algorithm>
#include <cmath>

#include "degenlab/errors.hpp"
#include "degenlab/matkernel.hpp"
#include "degenlab/rng.hpp"

namespace degen {

Domain Domain::ball(Vec center, double R) {
    if (!(R > 0)) throw InvalidInput("ball radius must be positive");
    Domain d;
    d.kind = Kind::ball;
    d.center = std::move(center);
    d.R = R;
    return d;
}

Domain Domain::annulus(Vec center, double r1, double r2) {
    if (!(r1 > 0 && r2 > r1)) throw InvalidInput("annulus needs 0 < r1 < r2");
    Domain d;
    d.kind = Kind::annulus;
    d.center = std::move(center);
    d.r1 = r1;
    d.R = r2;
    return d;
}

Domain Domain::box(Vec lo, Vec hi) {
    if (lo.size() != hi.size() || lo.empty()) throw InvalidInput("box corners must share a dimension");
    for (size_t i = 0; i < lo.size(); ++i)
        if (!(hi[i] > lo[i])) throw InvalidInput("box needs lo < hi");
    Domain d;
    d.kind = Kind::box;
    d.lo = std::move(lo);
    d.hi = std::move(hi);
    d.center = scaled(axpy(1.0, d.lo, d.hi), 0.5);
    return d;
}

int Domain::n() const { return static_cast<int>(kind == Kind::box ? lo.size() : center.size()); }

double Domain::diam() const {
    if (kind == Kind::box) return norm(axpy(-1.0, lo, hi));
    return 2.0 * R;
}

double Domain::C1() const {
    switch (kind) {
        case Kind::ball: return 1.0 / R;
        case Kind::annulus: return 1.0 / r1;
        case Kind::box: return 0.0;
    }
    return 0.0;
}

double Domain::max_distance() const {
    switch (kind) {
        case Kind::ball: return R;
        case Kind::annulus: return 0.5 * (R - r1);
        case Kind::box: {
            double m = 1e300;
            for (size_t i = 0; i < lo.size(); ++i) m = std::min(m, 0.5 * (hi[i] - lo[i]));
            return m;
        }
    }
    return 0.0;
}

bool Domain::contains(const Vec& x) const { return distance(*this, x) > 0.0; }

Vec Domain::bbox_lo() const {
    if (kind == Kind::box) return lo;
    Vec v(center);
    for (double& c : v) c -= R;
    return v;
}

Vec Domain::bbox_hi() const {
    if (kind == Kind::box) return hi;
    Vec v(center);
    for (double& c : v) c += R;
    return v;
}

double distance(const Domain& dom, const Vec& x) {
    switch (dom.kind) {
        case Domain::Kind::ball: return dom.R - norm(axpy(-1.0, dom.center, x));
        case Domain::Kind::annulus: {
            const double r = norm(axpy(-1.0, dom.center, x));
            return std::min(r - dom.r1, dom.R - r);
        }
        case Domain::Kind::box: {
            double d = 1e300;
            for (size_t i = 0; i < x.size(); ++i) d = std::min({d, x[i] - dom.lo[i], dom.hi[i] - x[i]});
            return d;
        }
    }
    return 0.0;
}

DistanceJet distance_jet(const Domain& dom, const Vec& x) {
    const int n = dom.n();
    if (static_cast<int>(x.size()) != n) throw InvalidInput("distance_jet: dimension mismatch");
    const double d = distance(dom, x);
    if (!(d > 0.0)) throw DomainError("distance_jet: point not interior");
    DistanceJet j{d, Vec(n, 0.0), SymMat(n)};
    if (dom.kind == Domain::Kind::box) {
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(x[i] - dom.lo[i] - d) <= 1e-12 * (1.0 + d)) {
                j.grad[i] = 1.0;
                ++hits;
            }
            if (std::abs(dom.hi[i] - x[i] - d) <= 1e-12 * (1.0 + d)) {
                j.grad[i] = -1.0;
                ++hits;
            }
        }
        if (hits != 1) throw DomainError("distance_jet: point on the medial axis");
        return j;
    }
    const Vec rel = axpy(-1.0, dom.center, x);
    const double r = norm(rel);
    if (r <= 1e-12 * dom.R) throw DomainError("distance_jet: point on the medial axis");
    const Vec u = scaled(rel, 1.0 / r);
    const SymMat tang = (SymMat::identity(n) - SymMat::outer(u)) * (1.0 / r);
    bool outer_side = true;
    if (dom.kind == Domain::Kind::annulus) {
        const double din = r - dom.r1, dout = dom.R - r;
        if (std::abs(din - dout) <= 1e-12 * dom.R) throw DomainError("distance_jet: point on the medial axis");
        outer_side = dout < din;
    }
    if (outer_side) {
        j.grad = scaled(u, -1.0);
        j.hess = -tang;
    } else {
        j.grad = u;
        j.hess = tang;
    }
    return j;
}

KChoice choose_k(double alpha, double lambda, double Lambda, int n, double C1, double c_h, double diam) {
    if (!(alpha >= 0) || !(lambda > 0) || !(Lambda >= lambda) || n < 1 || C1 < 0 || c_h < 0 || diam < 0)
        throw InvalidInput("choose_k: invalid inputs");
    const double N = n;
    const double e = (1.0 + alpha) / (2.0 + alpha);
    const double sum_lb = std::pow(N, -alpha / 2.0);  // sum |d_i d|^{2+alpha} >= N^{-alpha/2}
    const double need1 = 2.0 * C1 * (1.0 + diam) * std::pow(N, e) / std::pow(sum_lb, e);
    const double need2 = (3.0 * N * Lambda * C1 + 2.0 * c_h * (1.0 + diam)) * std::pow(N, 1.0 / (2.0 + alpha)) / lambda;
    auto k_of = [](double need) { return std::max(1, static_cast<int>(std::ceil(need - 1.0 - 1e-12))); };
    KChoice k;
    k.k_rule1 = k_of(need1);
    k.k_rule2 = k_of(need2);
    k.k = std::max(k.k_rule1, k.k_rule2);
    k.binding = k.k_rule1 > k.k_rule2 ? "semiconcavity" : (k.k_rule1 < k.k_rule2 ? "ellipticity" : "both");
    return k;
}

PsiJet psi_jet(double M, int k, const Domain& dom, const Vec& x) {
    if (!(M > 0)) throw InvalidInput("psi_jet: M must be positive");
    const DistanceJet dj = distance_jet(dom, x);
    const double s = 1.0 + dj.d;
    PsiJet p{M * (1.0 - std::pow(s, -k)), scaled(dj.grad, M * k * std::pow(s, -(k + 1))), SymMat(dom.n())};
    p.hess = (dj.hess * s - SymMat::outer(dj.grad) * (k + 1.0)) * (M * k * std::pow(s, -(k + 2)));
    return p;
}

double barrier_threshold(double alpha, double lambda, double Lambda, int n, int k, double c_h, double f_inf,
                         double d_max) {
    (void)Lambda;
    const double Lk = lambda * (k + 1.0) * std::pow(static_cast<double>(n), -1.0 / (2.0 + alpha));
    const double expo = k + 2.0 + (k + 1.0) * alpha;
    const double need = 4.0 * (f_inf + c_h) * std::pow(1.0 + d_max, expo) / Lk;
    return std::pow(need, 1.0 / (alpha + 1.0)) / k;
}

namespace {

double pucci_plus_alpha(double lo, double hi, const Vec& q, const SymMat& X, double alpha) {
    return pucci_plus_matrix(lo, hi, X.congruence_diag(theta_alpha(q, alpha)));
}

double pucci_minus_alpha(double lo, double hi, const Vec& q, const SymMat& X, double alpha) {
    return -pucci_plus_alpha(lo, hi, q, -X, alpha);
}

Vec sample_inside(Rng& g, const Domain& dom) {
    const Vec lo = dom.bbox_lo(), hi = dom.bbox_hi();
    Vec x(lo.size());
    for (int tries = 0; tries < 10000; ++tries) {
        for (size_t i = 0; i < x.size(); ++i) x[i] = g.uniform(lo[i], hi[i]);
        if (dom.contains(x)) return x;
    }
    throw Error("sample_inside: rejection sampling failed");
}

}  // namespace

BarrierAudit barrier_audit(const OperatorSpec& spec, const LowerOrderSpec& h, const Domain& dom, double M, int k,
                           double f_inf, std::size_t samples, std::uint64_t seed, bool keep_rows) {
    validate(spec);
    const int n = dom.n();
    const auto [lam, Lam] = ellipticity(spec, n);
    const double a = spec.alpha, N = n, C1 = dom.C1(), ch = h.c_h;
    const double ln = lam * (k + 1.0) * std::pow(N, -1.0 / (2.0 + a));
    BarrierAudit out;
    for (std::size_t s = 0; s < samples; ++s) {
        Rng g(seed, s);
        const Vec x = sample_inside(g, dom);
        DistanceJet dj;
        PsiJet pj;
        try {
            dj = distance_jet(dom, x);
            pj = psi_jet(M, k, dom, x);
        } catch (const DomainError&) {
            ++out.skipped;
            continue;
        }
        const double d = dj.d, s1 = 1.0 + d;
        const double F0 = eval(spec, x, pj.grad, pj.hess);
        const double H0 = lower_order_value(h, x, pj.grad);
        const double L0 = F0 + H0;

        const double K = std::pow(M * k, a + 1.0) / std::pow(s1, k + 2.0 + (k + 1.0) * a);
        const double hgrow = ch * (std::pow(M * k, 1.0 + a) / std::pow(s1, (k + 1.0) * (1.0 + a)) + 1.0);
        double sa = 0.0, sa2 = 0.0;
        for (double gi : dj.grad) {
            sa += std::pow(std::abs(gi), a);
            sa2 += std::pow(std::abs(gi), a + 2.0);
        }
        const double L1 = K * (s1 * pucci_plus_alpha(lam, Lam, dj.grad, dj.hess, a) -
                               (k + 1.0) * pucci_minus_alpha(lam, Lam, dj.grad, SymMat::outer(dj.grad), a)) +
                          ch * (std::pow(norm(pj.grad), 1.0 + a) + 1.0);
        const double L2 = K * (s1 * Lam * C1 * sa - (k + 1.0) * lam * sa2) + hgrow;
        const double L3 = K * (2.0 * N * Lam * C1 - ln) + hgrow;
        const double L4 = -ln * K / 4.0 + ch;
        const double lines[5] = {L0, L1, L2, L3, L4};
        for (int i = 0; i < 4; ++i) {
            const double tol = 1e-9 * (1.0 + std::abs(lines[i]) + std::abs(lines[i + 1]));
            if (lines[i] > lines[i + 1] + tol) ++out.line_violations[i];
        }
        const double sub = eval(spec, x, scaled(pj.grad, -1.0), -pj.hess) + lower_order_value(h, x, scaled(pj.grad, -1.0));
        out.worst_margin_super = std::max(out.worst_margin_super, L0 + f_inf);
        out.worst_margin_sub = std::max(out.worst_margin_sub, f_inf - sub);
        const double scale = 1.0 + std::abs(L4);
        out.worst_chain_gap_super = std::max(out.worst_chain_gap_super, (L0 - L4) / scale);
        out.worst_chain_gap_sub = std::max(out.worst_chain_gap_sub, (-sub - L4) / scale);
        if (keep_rows) out.rows.push_back({x, d, F0, H0, L4, L0 + f_inf});
        ++out.samples;
    }
    return out;
}

SmpJet smp_jet(double m, double c, double R, const Vec& x1, const Vec& x, double alpha) {
    const Vec xr = axpy(-1.0, x1, x);
    const double r = norm(xr);
    if (r < 0.5 * R * (1.0 - 1e-12) || r > 1.5 * R * (1.0 + 1e-12)) throw DomainError("smp_jet: point outside the annulus");
    const int n = static_cast<int>(x.size());
    const double e = std::exp(-c * r);
    SmpJet j;
    j.w = m * (e - std::exp(-c * R));
    j.grad = scaled(xr, -m * c * e / r);
    j.a = c * c / (r * r) + c / (r * r * r);
    j.b = -c / r;
    j.hess = (SymMat::outer(xr) * j.a + SymMat::identity(n, j.b)) * (m * e);
    j.vec_i.resize(n);
    j.vec_j.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = std::pow(std::abs(xr[i]), alpha / 2.0);
        j.vec_i[i] = t * xr[i];
        j.vec_j[i] = t;
    }
    return j;
}

Mu smp_mu(const Vec& x_rel, double c, double alpha) {
    const double r = norm(x_rel);
    if (r == 0.0) throw DomainError("smp_mu: x_rel = 0");
    const double a = c * c / (r * r) + c / (r * r * r), b = -c / r;
    double ii = 0.0, jj = 0.0, ij = 0.0;
    for (double xi : x_rel) {
        const double t = std::pow(std::abs(xi), alpha / 2.0);
        ii += t * t * xi * xi;
        jj += t * t;
        ij += t * t * xi;
    }
    const double s = a * ii + b * jj;
    const double disc = std::max(s * s / 4.0 - a * b * (ii * jj - ij * ij), 0.0);
    return {s / 2.0 + std::sqrt(disc), s / 2.0 - std::sqrt(disc)};
}

SymMat smp_rank2_matrix(const Vec& x_rel, double c, double alpha) {
    const double r = norm(x_rel);
    const int n = static_cast<int>(x_rel.size());
    Vec vi(n), vj(n);
    for (int i = 0; i < n; ++i) {
        const double t = std::pow(std::abs(x_rel[i]), alpha / 2.0);
        vi[i] = t * x_rel[i];
        vj[i] = t;
    }
    const double a = c * c / (r * r) + c / (r * r * r), b = -c / r;
    return SymMat::outer(vi) * a + SymMat::outer(vj) * b;
}

std::vector<Vec> direction_grid(int n) {
    std::vector<Vec> dirs;
    if (n == 1) return {{1.0}, {-1.0}};
    if (n == 2) {
        for (int k = 0; k < 64; ++k) {
            const double t = 2.0 * M_PI * k / 64.0;
            dirs.push_back({std::cos(t), std::sin(t)});
        }
        return dirs;
    }
    for (int i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        dirs.push_back(e);
        e[i] = -1.0;
        dirs.push_back(e);
    }
    if (n == 3) {
        const int m = 256;
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < m; ++k) {
            const double z = 1.0 - 2.0 * (k + 0.5) / m;
            const double rr = std::sqrt(1.0 - z * z);
            dirs.push_back({rr * std::cos(golden * k), rr * std::sin(golden * k), z});
        }
    }
    return dirs;
}

double choose_c(double lambda, double Lambda, double alpha, int n, double R) {
    if (!(lambda > 0 && Lambda >= lambda && R > 0 && alpha >= 0)) throw InvalidInput("choose_c: invalid inputs");
    const std::vector<Vec> dirs = direction_grid(n);
    const OperatorSpec minus = OperatorSpec::pucci(false, alpha, lambda, Lambda);
    for (int e = -10; e <= 40; ++e) {
        const double c = std::ldexp(1.0, e);
        bool ok = true;
        for (int ir = 0; ir <= 32 && ok; ++ir) {
            const double r = R * (0.5 + ir / 32.0);
            for (const Vec& u : dirs) {
                const Vec x = scaled(u, r);
                const Mu mu = smp_mu(x, c, alpha);
                const double val = lambda * mu.plus + Lambda * mu.minus;
                if (!(val > 0.1 * (lambda * std::abs(mu.plus) + Lambda * std::abs(mu.minus)))) {
                    ok = false;
                    break;
                }
                // True operator on the rescaled jet: F(grad w, D^2 w) = c^alpha e^{-c(1+alpha) r} F(-x/r, Dhat).
                const SymMat dhat = SymMat::outer(x) * (c * c / (r * r) + c / (r * r * r)) + SymMat::identity(n, -c / r);
                const Vec qhat = scaled(x, -1.0 / r);
                const SymMat w = dhat.congruence_diag(theta_alpha(qhat, alpha));
                double tp = 0.0, tm = 0.0;
                for (double ev : eigvals(w)) (ev > 0 ? tp : tm) += std::abs(ev);
                const double fm = eval(minus, x, qhat, dhat);
                if (!(fm > 0.1 * (lambda * tp + Lambda * tm))) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return c;
    }
    throw InfeasibleError("choose_c: search cap exceeded");
}

}  // namespace degen
