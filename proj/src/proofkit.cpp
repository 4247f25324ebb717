#include "degenlab/proofkit.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "degenlab/errors.hpp"
#include "degenlab/matkernel.hpp"
#include "degenlab/operators.hpp"

namespace degen {

RadialTestFn RadialTestFn::holder(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("holder exponent must lie in (0,1)");
    RadialTestFn t;
    t.kind = Kind::holder;
    t.gamma = gamma;
    return t;
}

RadialTestFn RadialTestFn::lip(double tau, double omega0) {
    if (!(tau > 0.0) || !(omega0 > 0.0)) throw InvalidInput("lip test function needs tau > 0, omega0 > 0");
    RadialTestFn t;
    t.kind = Kind::lip;
    t.tau = tau;
    t.omega0 = omega0;
    return t;
}

double RadialTestFn::s_max() const {
    if (kind == Kind::holder) return std::numeric_limits<double>::infinity();
    return std::pow(1.0 / ((1.0 + tau) * omega0), 1.0 / tau);
}

OmegaJet omega_eval(const RadialTestFn& tf, double s) {
    if (!(s > 0.0) || !(s < tf.s_max())) throw DomainError("omega_eval: s outside the validity interval");
    if (tf.kind == RadialTestFn::Kind::holder) {
        const double g = tf.gamma;
        const double p = std::pow(s, g);
        return {p, g * p / s, -g * (1.0 - g) * p / (s * s)};
    }
    const double t = tf.tau, w0 = tf.omega0;
    const double st = std::pow(s, t);
    return {s - w0 * st * s, 1.0 - w0 * (1.0 + t) * st, -w0 * (1.0 + t) * t * st / s};
}

bool lip_slope_holds(const RadialTestFn& tf, double delta) {
    if (tf.kind != RadialTestFn::Kind::lip) return false;
    return std::pow(delta, tf.tau) * tf.omega0 * (1.0 + tf.tau) < 0.5;
}

SymMat g_hessian(const RadialTestFn& tf, const Vec& x) {
    const double r = norm(x);
    if (r == 0.0) throw DomainError("g_hessian: x = 0");
    const OmegaJet w = omega_eval(tf, r);
    const int n = static_cast<int>(x.size());
    const Vec u = scaled(x, 1.0 / r);
    return SymMat::outer(u) * (w.w2 - w.w1 / r) + SymMat::identity(n, w.w1 / r);
}

SymMat h_tilde(const RadialTestFn& tf, const Vec& x) {
    const SymMat h1 = g_hessian(tf, x);
    const double nrm = op_norm(h1);
    if (nrm == 0.0) throw DomainError("h_tilde: D^2 g vanishes");
    return h1 + h1.squared() * (1.0 / (2.0 * nrm));
}

RadialFit radial_coeffs(const SymMat& s, const RadialTestFn& tf, const Vec& x) {
    const double r = norm(x);
    if (r == 0.0) throw DomainError("radial_coeffs: x = 0");
    const OmegaJet w = omega_eval(tf, r);
    const int n = s.n();
    const Vec u = scaled(x, 1.0 / r);
    const SymMat P = SymMat::outer(u);
    const double radial = s.quad(u);
    const double beta = radial / w.w2;
    double gamma = 1.0;
    if (n > 1) gamma = (s.trace() - radial) / ((n - 1) * w.w1 / r);
    const SymMat fit = P * (beta * w.w2 - gamma * w.w1 / r) + SymMat::identity(n, gamma * w.w1 / r);
    return {beta, gamma, (s - fit).frobenius()};
}

std::vector<int> index_set(const Vec& x, double eps) {
    const double r = norm(x);
    if (!(r > 0.0) || !(r < 1.0)) throw DomainError("index_set: need 0 < |x| < 1");
    if (!(eps > 0.0)) throw InvalidInput("index_set: eps must be positive");
    const double thr = std::pow(r, 1.0 + eps);
    std::vector<int> out;
    for (size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) >= thr) out.push_back(static_cast<int>(i));
    return out;
}

Vec theta_of_x(const RadialTestFn& tf, const Vec& x, double alpha) {
    const double r = norm(x);
    if (r == 0.0) throw DomainError("theta_of_x: x = 0");
    return theta_alpha(scaled(x, omega_eval(tf, r).w1 / r), alpha);
}

bool eqNepsilon_check(const RadialTestFn& tf, const Vec& x, double eps, double beta_h, double gamma_h) {
    const double r = norm(x);
    if (r == 0.0) throw DomainError("eqNepsilon_check: x = 0");
    const OmegaJet w = omega_eval(tf, r);
    const double n = static_cast<double>(x.size());
    const double r2e = std::pow(r, 2.0 * eps);
    const double lhs = beta_h * w.w2 * (1.0 - n * r2e) + gamma_h * n * r2e * w.w1 / r;
    return lhs <= w.w2 / 4.0 && w.w2 < 0.0;
}

double prop4_bound(const RadialTestFn& tf, const Vec& x, double alpha, double eps, Prop4Exponent variant) {
    const double r = norm(x);
    if (!(r > 0.0) || !(r < 1.0)) throw DomainError("prop4_bound: need 0 < |x| < 1");
    const OmegaJet w = omega_eval(tf, r);
    const double n = static_cast<double>(x.size());
    const RadialFit fit = radial_coeffs(h_tilde(tf, x), tf, x);
    if (alpha <= 2.0) return std::pow(n, -alpha / 2.0) * fit.beta * w.w2 * std::pow(w.w1, alpha);
    const std::vector<int> idx = index_set(x, eps);
    if (idx.empty()) throw PreconditionError("prop4_bound: I(x, eps) is empty");
    if (!eqNepsilon_check(tf, x, eps, fit.beta, fit.gamma))
        throw PreconditionError("prop4_bound: eigenvalue condition on I(x, eps) fails at this x");
    const double expo = variant == Prop4Exponent::alpha_minus_two_eps ? (alpha - 2.0) * eps : 2.0 * eps;
    return (1.0 - n * std::pow(r, 2.0 * eps)) / static_cast<double>(idx.size()) * std::pow(w.w1, alpha) * w.w2 /
           4.0 * std::pow(r, expo);
}

Prop4Result prop4_verify(const RadialTestFn& tf, const Vec& x, double alpha, double eps) {
    const double b = prop4_bound(tf, x, alpha, eps, Prop4Exponent::alpha_minus_two_eps);
    const double b2 = alpha <= 2.0 ? b : prop4_bound(tf, x, alpha, eps, Prop4Exponent::two_eps);
    const Vec th = theta_of_x(tf, x, alpha);
    const double mu1 = min_eig(h_tilde(tf, x).congruence_diag(th));
    return {mu1, b, mu1 <= b + 1e-9 * std::abs(b), b2, mu1 <= b2 + 1e-9 * std::abs(b2)};
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::holder_small_alpha: return "holder_small_alpha";
        case Regime::holder_large_alpha: return "holder_large_alpha";
        case Regime::lip_small_alpha: return "lip_small_alpha";
        case Regime::lip_large_alpha: return "lip_large_alpha";
    }
    return "?";
}

RadialTestFn RegimeConstants::test_fn() const {
    if (regime == Regime::holder_small_alpha || regime == Regime::holder_large_alpha) return RadialTestFn::holder(gamma);
    return RadialTestFn::lip(tau, omega0);
}

RegimeConstants choose_exponents(Regime regime, double alpha, double gamma_F, double gamma) {
    if (!(alpha > 0.0)) throw PreconditionError("certificate regimes need alpha > 0");
    if (!(gamma_F > 0.0 && gamma_F <= 1.0)) throw PreconditionError("gamma_F must lie in (0,1]");
    if (!(gamma > 0.0 && gamma < 1.0)) throw PreconditionError("gamma must lie in (0,1)");
    RegimeConstants rc;
    rc.regime = regime;
    rc.gamma = gamma;
    switch (regime) {
        case Regime::holder_small_alpha: break;
        case Regime::holder_large_alpha:
            // eps < inf(gamma_F/2, (1-gamma)/2)
            rc.eps = 0.5 * std::min(gamma_F / 2.0, (1.0 - gamma) / 2.0);
            break;
        case Regime::lip_small_alpha:
            // tau < inf(gamma_F, 1/2, alpha/2) and inf(1,alpha) gamma > 2 tau
            rc.tau = 0.5 * std::min({gamma_F, 0.5, alpha / 2.0, std::min(1.0, alpha) * gamma / 2.0});
            rc.omega0 = 1.0 / (2.0 * (1.0 + rc.tau));
            break;
        case Regime::lip_large_alpha: {
            // 0 < tau < inf(1/alpha, gamma_F), gamma > tau alpha, and the eps window nonempty
            rc.tau = 0.5 * std::min({1.0 / alpha, gamma_F, gamma / alpha, 2.0 * gamma_F / alpha});
            const double lo = rc.tau / 2.0;
            const double hi = std::min((gamma / 2.0 - rc.tau) / (alpha - 2.0), (gamma_F - rc.tau) / (alpha - 2.0));
            rc.eps = 0.5 * (lo + hi);
            rc.omega0 = 1.0 / (2.0 * (1.0 + rc.tau));
            break;
        }
    }
    return rc;
}

RegimeConstants regime_constants(RegimeConstants rc, const ProblemConstants& pc, double c_gamma_r) {
    const double a = pc.alpha, g = rc.gamma, n = pc.n;
    const double am1 = std::max(a - 1.0, 0.0);
    auto need = [](bool cond, const char* what) {
        if (!cond) throw PreconditionError(std::string("regime constraint violated: ") + what);
    };
    switch (rc.regime) {
        case Regime::holder_small_alpha:
        case Regime::holder_large_alpha: {
            const bool large = rc.regime == Regime::holder_large_alpha;
            need(large ? a > 2.0 : a <= 2.0, large ? "alpha > 2" : "alpha <= 2");
            if (large) need(rc.eps > 0.0 && rc.eps < std::min(pc.gamma_F / 2.0, (1.0 - g) / 2.0),
                            "0 < eps < inf(gamma_F/2, (1-gamma)/2)");
            const double base = 2.0 - g + (1.0 - g) * a;
            rc.tau_hat = base - (large ? rc.eps : 0.0);
            rc.c = g * (1.0 - g) / 8.0;
            rc.extra_eigs = {(1.0 - g) * a, 6.0 * std::pow(g, 1.0 + a) * (n - g + 3.0)};
            rc.x_dependence = {base - pc.gamma_F, 12.0 * pc.c_gammaF * std::pow(g, 1.0 + a) * (n + 3.0 - g)};
            rc.gradient_swap = {(2.0 - g) + (1.0 - g) * am1, pc.c_F * std::pow(2.0, 1.0 + a) * std::pow(g + 1.0, am1)};
            rc.lower_order = {(1.0 - g) * (1.0 + a), 2.0 * pc.c_h * (std::pow(g + 3.0, 1.0 + a) + 1.0)};
            break;
        }
        case Regime::lip_small_alpha:
        case Regime::lip_large_alpha: {
            const bool large = rc.regime == Regime::lip_large_alpha;
            const double t = rc.tau, w0 = rc.omega0;
            need(large ? a > 2.0 : a <= 2.0, large ? "alpha > 2" : "alpha <= 2");
            need(c_gamma_r > 0.0, "Hoelder modulus c_{gamma,r} > 0");
            need(std::pow(1.0 / ((1.0 + t) * w0), 1.0 / t) > 1.0, "s0 > 1");
            const double k = 6.0 + 2.0 * w0 * t * (1.0 + t);
            rc.c = w0 * t * (1.0 + t) / 8.0;
            rc.extra_eigs = {0.0, 6.0};
            rc.x_dependence = {1.0 - pc.gamma_F, pc.c_gammaF * k};
            if (!large) {
                need(t > 0.0 && t < std::min({pc.gamma_F, 0.5, a / 2.0}), "0 < tau < inf(gamma_F, 1/2, alpha/2)");
                need(std::min(1.0, a) * g > 2.0 * t, "inf(1,alpha) gamma > 2 tau");
                rc.tau_hat = 1.0 - t;
                const double c3 = a <= 1.0 ? 2.0 * pc.c_F * k * std::pow(c_gamma_r, a / 2.0)
                                           : 2.0 * pc.c_F * k * std::sqrt(c_gamma_r) * a * std::pow(3.0, a - 1.0);
                rc.gradient_swap = {1.0 - std::min(1.0, a) * g / 2.0, c3};
                rc.lower_order = {0.0, pc.c_h * (std::pow(2.0, 1.0 + a) + 1.0)};
            } else {
                need(t > 0.0 && t < std::min(1.0 / a, pc.gamma_F), "0 < tau < inf(1/alpha, gamma_F)");
                need(g > t * a, "gamma > tau alpha");
                need(rc.eps > t / 2.0 &&
                         rc.eps < std::min((g / 2.0 - t) / (a - 2.0), (pc.gamma_F - t) / (a - 2.0)),
                     "tau/2 < eps < inf((gamma/2 - tau)/(alpha-2), (gamma_F - tau)/(alpha-2))");
                rc.tau_hat = (2.0 - a) * rc.eps + 1.0 - t;
                rc.gradient_swap = {1.0 - g / 2.0, 2.0 * pc.c_F * c_gamma_r * std::pow(2.0, a - 1.0)};
                rc.lower_order = {0.0, std::pow(2.0, 2.0 + a) * pc.c_h};
            }
            break;
        }
    }
    for (const NamedBound* b : {&rc.extra_eigs, &rc.x_dependence, &rc.gradient_swap, &rc.lower_order})
        need(b->tau < rc.tau_hat, "tau_i < tau_hat");
    need(rc.tau_hat > 0.0 && rc.c > 0.0, "tau_hat > 0 and c > 0");
    return rc;
}

double smallness_lhs(const RegimeConstants& rc, double Lambda, double delta) {
    auto term = [&](const NamedBound& b) { return b.c == 0.0 ? 0.0 : b.c * std::pow(delta, rc.tau_hat - b.tau); };
    return term(rc.x_dependence) + term(rc.gradient_swap) + term(rc.lower_order) + Lambda * term(rc.extra_eigs);
}

double delta_N_holder(int n, double gamma, double eps) {
    return std::exp((-std::log(2.0 * n * (4.0 - gamma)) + std::log(1.0 - gamma)) / (2.0 * eps));
}

double delta_N_lip(int n, double tau, double omega0, double eps) {
    const double k = omega0 * tau * (1.0 + tau);
    const double a = std::exp((std::log(k) - std::log(2.0 * n * (1.0 + k))) / (2.0 * eps - tau));
    const double b = std::exp(-std::log(2.0 * omega0 * (1.0 + tau)) / tau);
    return std::min(a, b);
}

namespace {

constexpr double kMargin = 0.99;

Regime pick(bool lipschitz, double alpha) {
    if (lipschitz) return alpha <= 2.0 ? Regime::lip_small_alpha : Regime::lip_large_alpha;
    return alpha <= 2.0 ? Regime::holder_small_alpha : Regime::holder_large_alpha;
}

void cap(double& value, std::string& name, double candidate, const char* label) {
    if (candidate < value) {
        value = candidate;
        name = label;
    }
}

}  // namespace

Certificate certificate(const CertificateInput& in) {
    const ProblemConstants& pc = in.pc;
    if (!(in.r > 0.0 && in.r < 1.0)) throw PreconditionError("certificate: need 0 < r < 1");
    if (!(pc.lambda > 0.0) || !(pc.Lambda >= pc.lambda)) throw InfeasibleError("certificate: need 0 < lambda <= Lambda");
    if (pc.c_gammaF < 0 || pc.c_F < 0 || pc.c_h < 0 || in.sup_u < 0 || in.sup_v < 0)
        throw PreconditionError("certificate: constants must be nonnegative");

    Certificate cert;
    cert.r = in.r;
    cert.sup_sum = in.sup_u + in.sup_v;
    if (in.lipschitz) {
        CertificateInput h = in;
        h.lipschitz = false;
        cert.c_gamma_r = certificate(h).modulus;
    }
    cert.rc = regime_constants(choose_exponents(pick(in.lipschitz, pc.alpha), pc.alpha, pc.gamma_F), pc, cert.c_gamma_r);
    const RegimeConstants& rc = cert.rc;

    double dcap = 1.0;
    std::string binding = "unit scale";
    switch (rc.regime) {
        case Regime::holder_small_alpha: break;
        case Regime::holder_large_alpha: cap(dcap, binding, kMargin * delta_N_holder(pc.n, rc.gamma, rc.eps), "delta_N"); break;
        case Regime::lip_large_alpha:
            cap(dcap, binding, kMargin * delta_N_lip(pc.n, rc.tau, rc.omega0, rc.eps), "delta_N");
            [[fallthrough]];
        case Regime::lip_small_alpha:
            cap(dcap, binding, std::pow(kMargin / (2.0 * rc.omega0 * (1.0 + rc.tau)), 1.0 / rc.tau), "omega' >= 1/2");
            cap(dcap, binding, std::pow(kMargin / (16.0 * cert.c_gamma_r), 1.0 / rc.gamma), "gradient perturbation");
            break;
    }
    cert.delta_cap = dcap;

    const double target = kMargin * pc.lambda * rc.c / 2.0;
    auto f = [&](double d) { return smallness_lhs(rc, pc.Lambda, d); };
    double delta = dcap;
    if (f(dcap) > target) {
        double lo = dcap, hi = dcap;
        while (f(lo) > target) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-300) throw InfeasibleError("certificate: smallness inequality has no solution");
        }
        while (hi - lo > 1e-9 * lo) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) <= target ? lo : hi) = mid;
        }
        delta = lo;
        binding = "smallness";
    }
    cert.delta = delta;
    cert.delta_binding = binding;

    const double S = cert.sup_sum;
    const double wd = omega_eval(rc.test_fn(), delta).w;
    double M = 0.0;
    std::string mb = "none";
    auto lift = [&](double v, const char* label) {
        if (v > M) {
            M = v;
            mb = label;
        }
    };
    lift(4.0 * S / ((1.0 - in.r) * (1.0 - in.r)), "M(1-r)^2 > 4S");
    lift(2.0 * S / wd, "M omega(delta) > 2S");
    if (in.lipschitz) {
        lift(2.0 * S * (1.0 + rc.tau) / (delta * rc.tau), "lip: M delta tau/(1+tau) > 2S");
        lift(1.0, "lip: M > 1");
        lift(2.0 * S / (0.25 * (1.0 - in.r) * (1.0 - in.r)), "lip: M ((1-r)/2)^2 > 2S");
    }
    cert.M = M > 0.0 ? 1.01 * M : 1e-12;
    cert.M_binding = mb;
    cert.modulus = cert.M;
    return cert;
}

CertificateCheck verify_certificate(const Certificate& cert, const CertificateInput& in) {
    CertificateCheck chk;
    const RegimeConstants& rc = cert.rc;
    auto fail = [&](bool cond, const std::string& what) {
        if (!cond) {
            chk.ok = false;
            chk.failures.push_back(what);
        }
    };
    for (const NamedBound* b : {&rc.extra_eigs, &rc.x_dependence, &rc.gradient_swap, &rc.lower_order})
        fail(b->tau < rc.tau_hat, "tau_i < tau_hat");
    const double target = in.pc.lambda * rc.c / 2.0;
    chk.smallness_ratio = smallness_lhs(rc, in.pc.Lambda, cert.delta) / target;
    fail(chk.smallness_ratio <= kMargin * (1.0 + 1e-12), "delta smallness with 1% margin");
    fail(cert.delta > 0.0 && cert.delta <= cert.delta_cap, "0 < delta <= cap");
    const double S = in.sup_u + in.sup_v;
    const double M = cert.M;
    const double wd = omega_eval(rc.test_fn(), cert.delta).w;
    fail(M * (1.0 - in.r) * (1.0 - in.r) > 4.0 * S, "M(1-r)^2 > 4S");
    fail(M * wd > 2.0 * S, "M omega(delta) > 2S");
    const bool lip = rc.regime == Regime::lip_small_alpha || rc.regime == Regime::lip_large_alpha;
    if (lip) {
        fail(M * cert.delta * rc.tau / (1.0 + rc.tau) > 2.0 * S, "lip: M delta tau/(1+tau) > 2S");
        fail(M > 1.0, "lip: M > 1");
        fail(M * 0.25 * (1.0 - in.r) * (1.0 - in.r) > 2.0 * S, "lip: M ((1-r)/2)^2 > 2S");
        fail(lip_slope_holds(rc.test_fn(), cert.delta), "omega' >= 1/2");
        fail(std::sqrt(cert.c_gamma_r * std::pow(cert.delta, rc.gamma)) < 0.25, "gradient perturbation");
    }
    if (rc.regime == Regime::holder_large_alpha) fail(cert.delta < delta_N_holder(in.pc.n, rc.gamma, rc.eps), "delta < delta_N");
    if (rc.regime == Regime::lip_large_alpha)
        fail(cert.delta < delta_N_lip(in.pc.n, rc.tau, rc.omega0, rc.eps), "delta < delta_N");
    return chk;
}

std::string to_text(const Certificate& c) {
    std::ostringstream os;
    os.precision(10);
    const RegimeConstants& rc = c.rc;
    os << "regime=" << regime_name(rc.regime) << "\n"
       << "tau_hat=" << rc.tau_hat << "\nc=" << rc.c << "\n"
       << "extra_eigs=" << rc.extra_eigs.tau << "," << rc.extra_eigs.c << "\n"
       << "x_dependence=" << rc.x_dependence.tau << "," << rc.x_dependence.c << "\n"
       << "gradient_swap=" << rc.gradient_swap.tau << "," << rc.gradient_swap.c << "\n"
       << "lower_order=" << rc.lower_order.tau << "," << rc.lower_order.c << "\n"
       << "gamma=" << rc.gamma << "\ntau=" << rc.tau << "\neps=" << rc.eps << "\nomega0=" << rc.omega0 << "\n"
       << "delta=" << c.delta << "\ndelta_binding=" << c.delta_binding << "\n"
       << "M=" << c.M << "\nM_binding=" << c.M_binding << "\n"
       << "c_gamma_r=" << c.c_gamma_r << "\nmodulus=" << c.modulus << "\n";
    return os.str();
}

std::string csv_header_certificate() { return "regime,tau_hat,c,delta,M,modulus"; }

std::string csv_row(const Certificate& c) {
    std::ostringstream os;
    os.precision(10);
    os << regime_name(c.rc.regime) << "," << c.rc.tau_hat << "," << c.rc.c << "," << c.delta << "," << c.M << ","
       << c.modulus;
    return os.str();
}

}  // namespace degen
