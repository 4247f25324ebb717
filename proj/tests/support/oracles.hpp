#pragma once

// Independent reference computations used only by tests.

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "degenlab/grid.hpp"

namespace oracle {

using degen::Vec;

// Two-point shooting for |u'|^{p-2} u'' = f on [0, 1], u(0) = u(1) = 0.
// With w = |u'|^{p-2} u' / (p - 1) the system is w' = f, u' = sgn(w) |(p-1) w|^{1/(p-1)};
// w(0) is found by bisection on u(1) and the trajectory is integrated with RK4.
class Shooting1D {
public:
    Shooting1D(double p, std::function<double(double)> f, int steps = 200000) : p_(p), f_(std::move(f)), steps_(steps) {
        double lo = -10.0, hi = 10.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (endpoint(mid) > 0.0 ? hi : lo) = mid;
        }
        w0_ = 0.5 * (lo + hi);
        integrate(w0_, &xs_, &us_);
    }

    double operator()(double x) const {
        const double s = x * steps_;
        const int i = std::min(std::max(static_cast<int>(s), 0), steps_ - 1);
        const double t = s - i;
        return (1.0 - t) * us_[i] + t * us_[i + 1];
    }

private:
    double slope(double w) const {
        return std::copysign(std::pow(std::abs((p_ - 1.0) * w), 1.0 / (p_ - 1.0)), w);
    }

    double integrate(double w0, std::vector<double>* xs, std::vector<double>* us) const {
        const double h = 1.0 / steps_;
        double u = 0.0, w = w0;
        if (us) {
            xs->assign(1, 0.0);
            us->assign(1, 0.0);
        }
        for (int i = 0; i < steps_; ++i) {
            const double x = i * h;
            const double k1u = slope(w), k1w = f_(x);
            const double k2u = slope(w + 0.5 * h * k1w), k2w = f_(x + 0.5 * h);
            const double k3u = slope(w + 0.5 * h * k2w), k3w = k2w;
            const double k4u = slope(w + h * k3w), k4w = f_(x + h);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            if (us) {
                xs->push_back(x + h);
                us->push_back(u);
            }
        }
        return u;
    }

    double endpoint(double w0) const { return integrate(w0, nullptr, nullptr); }

    double p_;
    std::function<double(double)> f_;
    int steps_;
    double w0_ = 0.0;
    std::vector<double> xs_, us_;
};

// Five-point (2N+1) Laplacian Delta_h u = f on the interior with u = g on the band,
// solved by conjugate gradients on -Delta_h.
inline degen::GridField poisson_cg(std::shared_ptr<const degen::Grid> grid, const std::function<double(const Vec&)>& f,
                                   const std::function<double(const Vec&)>& g, double rtol = 1e-14) {
    const degen::Grid& G = *grid;
    const int n = G.n();
    const double h2 = G.h() * G.h();
    degen::GridField u(grid, 0.0);
    for (std::size_t i : G.band_points()) u[i] = g(G.coords(i));
    const auto& pts = G.interior_points();
    std::vector<long> pos(G.size(), -1);
    for (std::size_t k = 0; k < pts.size(); ++k) pos[pts[k]] = static_cast<long>(k);

    // A x = -Delta_h restricted to interior unknowns; boundary values go to the right side.
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t k = 0; k < pts.size(); ++k) {
            double s = 2.0 * n * x[k];
            for (int i = 0; i < n; ++i)
                for (int sg : {1, -1}) {
                    const auto& e = G.stencil()[i];
                    const long j = pos[G.shift(pts[k], {sg * e[0], sg * e[1], sg * e[2]})];
                    if (j >= 0) s -= x[j];
                }
            y[k] = s / h2;
        }
    };
    std::vector<double> b(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double s = -f(G.coords(pts[k]));
        for (int i = 0; i < n; ++i)
            for (int sg : {1, -1}) {
                const auto& e = G.stencil()[i];
                const std::size_t j = G.shift(pts[k], {sg * e[0], sg * e[1], sg * e[2]});
                if (pos[j] < 0) s += u[j] / h2;
            }
        b[k] = s;
    }
    std::vector<double> x(pts.size(), 0.0), r = b, p = b, ap(pts.size());
    double rr = 0.0, bb = 0.0;
    for (double v : r) rr += v * v;
    bb = rr;
    for (std::size_t it = 0; it < 20 * pts.size() && rr > rtol * rtol * bb; ++it) {
        apply(p, ap);
        double pap = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) pap += p[k] * ap[k];
        const double a = rr / pap;
        double rn = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            x[k] += a * p[k];
            r[k] -= a * ap[k];
            rn += r[k] * r[k];
        }
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + rn / rr * p[k];
        rr = rn;
    }
    for (std::size_t k = 0; k < pts.size(); ++k) u[pts[k]] = x[k];
    return u;
}

}  // namespace oracle
