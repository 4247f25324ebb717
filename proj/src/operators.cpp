#include "degenlab/operators.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "degenlab/errors.hpp"
#include "degenlab/matkernel.hpp"
#include "degenlab/rng.hpp"

namespace degen {

namespace {

double sum_over_sqrt_n(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / std::sqrt(static_cast<double>(x.size()));
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::pucci_plus: return "pucci_plus";
        case Family::pucci_minus: return "pucci_minus";
        case Family::example1: return "example1";
        case Family::example2: return "example2";
        case Family::pseudo_p: return "pseudo_p";
        case Family::widely_degenerate: return "widely_degenerate";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    if (s == "pucci_plus" || s == "pucci+") return Family::pucci_plus;
    if (s == "pucci_minus" || s == "pucci-") return Family::pucci_minus;
    if (s == "example1") return Family::example1;
    if (s == "example2") return Family::example2;
    if (s == "pseudo_p" || s == "pseudo-p") return Family::pseudo_p;
    if (s == "widely_degenerate" || s == "widely-degenerate") return Family::widely_degenerate;
    throw InvalidInput("unknown operator family: " + s);
}

OperatorSpec OperatorSpec::pucci(bool plus, double alpha, double lambda, double Lambda) {
    OperatorSpec s;
    s.family = plus ? Family::pucci_plus : Family::pucci_minus;
    s.alpha = alpha;
    s.lambda = lambda;
    s.Lambda = Lambda;
    return s;
}

OperatorSpec OperatorSpec::pseudo_p(double p) {
    OperatorSpec s;
    s.family = Family::pseudo_p;
    s.alpha = p - 2.0;
    return s;
}

OperatorSpec OperatorSpec::widely_degenerate(double p, Vec delta) {
    OperatorSpec s;
    s.family = Family::widely_degenerate;
    s.alpha = p - 2.0;
    s.delta = std::move(delta);
    return s;
}

void validate(const OperatorSpec& spec) {
    if (!std::isfinite(spec.alpha) || spec.alpha < 0.0)
        throw InvalidInput("alpha must be >= 0 (alpha = 0 only as the uniformly elliptic reduction)");
    if (!(spec.lambda > 0.0) || !(spec.lambda <= spec.Lambda) || !std::isfinite(spec.Lambda))
        throw InvalidInput("need 0 < lambda <= Lambda");
    for (double d : spec.delta)
        if (!(d >= 0.0)) throw InvalidInput("delta thresholds must be >= 0");
    static const char* e1[] = {"constant", "scalar_wave", "rotating"};
    static const char* e2[] = {"constant", "abs_clip", "smooth"};
    auto known = [&](const char* const* names) {
        for (int i = 0; i < 3; ++i)
            if (spec.coeff == names[i]) return true;
        return false;
    };
    if (spec.family == Family::example1 && !known(e1)) throw InvalidInput("unknown example1 preset: " + spec.coeff);
    if (spec.family == Family::example2 && !known(e2)) throw InvalidInput("unknown example2 preset: " + spec.coeff);
}

std::string to_text(const OperatorSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << "family=" << family_name(spec.family) << "\n"
       << "alpha=" << spec.alpha << "\n"
       << "lambda=" << spec.lambda << "\n"
       << "Lambda=" << spec.Lambda << "\n"
       << "coeff=" << spec.coeff << "\n";
    if (!spec.delta.empty()) {
        os << "delta=";
        for (size_t i = 0; i < spec.delta.size(); ++i) os << (i ? "," : "") << spec.delta[i];
        os << "\n";
    }
    return os.str();
}

OperatorSpec spec_from_map(const std::map<std::string, std::string>& kv) {
    OperatorSpec s;
    auto num = [&](const std::string& key, double fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        try {
            size_t used = 0;
            double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw InvalidInput("");
            return v;
        } catch (...) {
            throw InvalidInput("bad number for " + key + ": " + it->second);
        }
    };
    if (auto it = kv.find("family"); it != kv.end()) s.family = parse_family(it->second);
    if (auto it = kv.find("p"); it != kv.end()) s.alpha = num("p", 3.0) - 2.0;
    s.alpha = num("alpha", s.alpha);
    s.lambda = num("lambda", s.lambda);
    s.Lambda = num("Lambda", s.Lambda);
    if (auto it = kv.find("coeff"); it != kv.end()) s.coeff = it->second;
    if (auto it = kv.find("delta"); it != kv.end()) {
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                s.delta.push_back(std::stod(tok));
            } catch (...) {
                throw InvalidInput("bad delta entry: " + tok);
            }
        }
    }
    validate(s);
    return s;
}

SymMat coeff_matrix(const OperatorSpec& spec, const Vec& x) {
    const int n = static_cast<int>(x.size());
    const double sl = std::sqrt(spec.lambda), sL = std::sqrt(spec.Lambda);
    if (spec.coeff == "constant") return SymMat::identity(n, std::sqrt(0.5 * (spec.lambda + spec.Lambda)));
    if (spec.coeff == "scalar_wave") {
        const double s = 0.5 * (1.0 + std::sin(sum_over_sqrt_n(x)));
        return SymMat::identity(n, std::sqrt(spec.lambda + (spec.Lambda - spec.lambda) * s));
    }
    if (spec.coeff == "rotating") {
        if (n < 2) throw InvalidInput("rotating preset needs N >= 2");
        const double th = sum_over_sqrt_n(x);
        const double c = std::cos(th), s = std::sin(th);
        SymMat L = SymMat::identity(n, std::sqrt(0.5 * (spec.lambda + spec.Lambda)));
        // R diag(sl, sL) R^T in the (x1, x2) plane
        L.set(0, 0, c * c * sl + s * s * sL);
        L.set(1, 1, s * s * sl + c * c * sL);
        L.set(0, 1, c * s * (sl - sL));
        return L;
    }
    throw InvalidInput("coeff_matrix: unknown preset " + spec.coeff);
}

double coeff_scalar(const OperatorSpec& spec, const Vec& x) {
    if (spec.coeff == "constant") return 1.0;
    if (spec.coeff == "abs_clip") return 1.0 + std::min(std::abs(x[0]), 1.0);
    if (spec.coeff == "smooth") return 1.5 + 0.5 * std::sin(sum_over_sqrt_n(x));
    throw InvalidInput("coeff_scalar: unknown preset " + spec.coeff);
}

CoeffInfo coeff_info(const OperatorSpec& spec, int n) {
    CoeffInfo c;
    if (spec.family == Family::example1) {
        if (spec.coeff == "scalar_wave")
            c.lip = std::sqrt(static_cast<double>(n)) * (spec.Lambda - spec.lambda) / (4.0 * std::sqrt(spec.lambda));
        else if (spec.coeff == "rotating")
            c.lip = std::sqrt(2.0) * (std::sqrt(spec.Lambda) - std::sqrt(spec.lambda));
    } else if (spec.family == Family::example2) {
        if (spec.coeff == "abs_clip") c = {1.0, 1.0, 2.0};
        if (spec.coeff == "smooth") c = {0.5, 1.0, 2.0};
    }
    return c;
}

std::pair<double, double> ellipticity(const OperatorSpec& spec, int n) {
    switch (spec.family) {
        case Family::pucci_plus:
        case Family::pucci_minus:
        case Family::example1: return {spec.lambda, spec.Lambda};
        case Family::example2: {
            const CoeffInfo c = coeff_info(spec, n);
            return {spec.lambda * c.a_min, spec.Lambda * c.a_max};
        }
        case Family::pseudo_p: return {1.0, 1.0};
        case Family::widely_degenerate: {
            bool zero = true;
            for (double d : spec.delta) zero = zero && d == 0.0;
            return {zero ? 1.0 : 0.0, 1.0};
        }
    }
    return {spec.lambda, spec.Lambda};
}

double h2_constant(const OperatorSpec& spec, int n) {
    const CoeffInfo c = coeff_info(spec, n);
    if (spec.family == Family::example1) return 2.0 * std::sqrt(n * spec.Lambda) * c.lip;
    if (spec.family == Family::example2) return spec.Lambda * n * c.lip;
    return 0.0;
}

double h4_claimed_constant(const OperatorSpec& spec, int n) { return ellipticity(spec, n).second; }

double h3_bound(const OperatorSpec& spec, const Vec& x, const Vec& y, double m) {
    const int n = static_cast<int>(x.size());
    const double r = norm(axpy(-1.0, y, x));
    const CoeffInfo c = coeff_info(spec, n);
    const double base = std::pow(m, spec.alpha + 1.0) * std::pow(r, spec.alpha + 2.0);
    if (spec.family == Family::example1) return c.lip * c.lip * base;
    if (spec.family == Family::example2) return spec.Lambda * c.lip * c.lip * n * base / (4.0 * c.a_min);
    return 0.0;
}

Vec theta_alpha(const Vec& q, double alpha) {
    Vec t(q.size());
    for (size_t i = 0; i < q.size(); ++i) t[i] = powa(std::abs(q[i]), 0.5 * alpha);
    return t;
}

double pucci_plus_matrix(double lambda, double Lambda, const SymMat& w) {
    auto part = [&](double e) { return e > 0 ? Lambda * e : lambda * e; };
    if (w.n() == 1) return part(w(0, 0));
    if (w.n() == 2) {
        const double m = 0.5 * (w(0, 0) + w(1, 1));
        const double d = std::hypot(0.5 * (w(0, 0) - w(1, 1)), w(0, 1));
        return part(m - d) + part(m + d);
    }
    double s = 0.0;
    for (double e : eigvals(w)) s += e > 0 ? Lambda * e : lambda * e;
    return s;
}

double eval(const OperatorSpec& spec, const Vec& x, const Vec& q, const SymMat& X) {
    if (!all_finite(x) || !all_finite(q) || !X.finite()) throw InvalidInput("eval: non-finite jet");
    const int n = X.n();
    if (static_cast<int>(q.size()) != n) throw InvalidInput("eval: dimension mismatch");
    switch (spec.family) {
        case Family::pucci_plus:
            return pucci_plus_matrix(spec.lambda, spec.Lambda, X.congruence_diag(theta_alpha(q, spec.alpha)));
        case Family::pucci_minus:
            return -pucci_plus_matrix(spec.lambda, spec.Lambda, (-X).congruence_diag(theta_alpha(q, spec.alpha)));
        case Family::example1: {
            const SymMat w = X.congruence_diag(theta_alpha(q, spec.alpha));
            const SymMat l2 = coeff_matrix(spec, x).squared();
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += l2(i, j) * w(i, j);
            return s;
        }
        case Family::example2:
            return coeff_scalar(spec, x) *
                   pucci_plus_matrix(spec.lambda, spec.Lambda, X.congruence_diag(theta_alpha(q, spec.alpha)));
        case Family::pseudo_p: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += powa(std::abs(q[i]), spec.alpha) * X(i, i);
            return s;
        }
        case Family::widely_degenerate: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = i < static_cast<int>(spec.delta.size()) ? spec.delta[i] : 0.0;
                const double g = std::max(std::abs(q[i]) - d, 0.0);
                s += powa(g, spec.alpha) * X(i, i);
            }
            return s;
        }
    }
    return 0.0;
}

double lower_order_value(const LowerOrderSpec& h, const Vec& x, const Vec& q) {
    switch (h.form) {
        case LowerOrderSpec::Form::zero: return 0.0;
        case LowerOrderSpec::Form::custom: return h.custom ? h.custom(x, q) : 0.0;
        case LowerOrderSpec::Form::drift:
        case LowerOrderSpec::Form::growth_bounded: {
            const double rn = 1.0 / std::sqrt(static_cast<double>(q.size()));
            double bq = 0.0;
            for (size_t i = 0; i < q.size(); ++i) bq += std::cos(x[i] + static_cast<double>(i)) * rn * q[i];
            const double drift = bq * std::pow(norm(q), h.alpha);
            if (h.form == LowerOrderSpec::Form::drift) return h.c_h * drift;
            return h.c_h * 0.5 * (drift + std::sin(3.0 * x[0]));
        }
    }
    return 0.0;
}

double eval_lower_order(const LowerOrderSpec& h, const Vec& x, const Vec& q) {
    const double v = lower_order_value(h, x, q);
    const double cap = h.c_h * (std::pow(norm(q), 1.0 + h.alpha) + 1.0);
    if (!(std::abs(v) <= cap * (1.0 + 1e-12) + 1e-300)) throw ContractViolation("lower-order term exceeds its growth bound");
    return v;
}

namespace {

Vec sample_point(Rng& g, int n) {
    Vec x(n);
    for (double& v : x) v = g.uniform(-1.0, 1.0);
    return x;
}

// Gradient sample: log-uniform magnitude, some components exactly zero.
Vec sample_grad(Rng& g, int n) {
    Vec q = scaled(g.unit_vec(n), g.log_uniform(0.05, 5.0));
    for (double& v : q)
        if (g.uniform() < 0.1) v = 0.0;
    return q;
}

SymMat sample_sym(Rng& g, int n) { return g.sym(n, g.log_uniform(0.1, 10.0)); }

SymMat random_rotation_sym(Rng& g, const Vec& spectrum) {
    const int n = static_cast<int>(spectrum.size());
    const EigPair e = eig_sym(g.sym(n));
    SymMat r(n);
    for (int k = 0; k < n; ++k) r += SymMat::outer(e.vectors.col(k)) * spectrum[k];
    return r;
}

OperatorSpec with_family(OperatorSpec s, Family f) {
    s.family = f;
    return s;
}

}  // namespace

AuditReport audit_H1(const OperatorSpec& spec, const AuditOptions& o) {
    validate(spec);
    const auto [lo, hi] = ellipticity(spec, o.n);
    AuditReport r;
    r.worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < o.samples; ++k) {
        Rng g(o.seed, k);
        const Vec x = sample_point(g, o.n);
        const Vec q = sample_grad(g, o.n);
        const SymMat M = sample_sym(g, o.n);
        const SymMat N = g.psd(o.n, g.log_uniform(0.01, 10.0));
        const double f1 = eval(spec, x, q, M + N), f0 = eval(spec, x, q, M);
        const double t = N.congruence_diag(theta_alpha(q, spec.alpha)).trace();
        const double d = f1 - f0;
        const double v = std::max(lo * t - d, d - hi * t);
        const double scale = 1.0 + std::abs(f1) + std::abs(f0) + hi * std::abs(t);
        r.worst = std::max(r.worst, v / scale);
        ++r.samples;
    }
    r.extra["lambda_eff"] = lo;
    r.extra["Lambda_eff"] = hi;
    return r;
}

AuditReport audit_H2(const OperatorSpec& spec, const AuditOptions& o) {
    validate(spec);
    const double c = h2_constant(spec, o.n);
    AuditReport r;
    double viol = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < o.samples; ++k) {
        Rng g(o.seed, k);
        const Vec x = sample_point(g, o.n);
        const Vec y = axpy(g.log_uniform(1e-3, 1.0), g.unit_vec(o.n), x);
        const Vec q = sample_grad(g, o.n);
        const SymMat X = sample_sym(g, o.n);
        const double den = norm(axpy(-1.0, y, x)) * std::pow(norm(q), spec.alpha) * op_norm(X);
        if (den < 1e-14) {
            ++r.skipped;
            continue;
        }
        const double d = std::abs(eval(spec, x, q, X) - eval(spec, y, q, X));
        r.worst = std::max(r.worst, d / den);
        viol = std::max(viol, (d - c * den) / (1.0 + d + c * den));
        ++r.samples;
    }
    r.extra["constant"] = c;
    r.extra["violation"] = viol;
    return r;
}

AuditReport audit_H3(const OperatorSpec& spec, const Vec& m_list, const AuditOptions& o) {
    validate(spec);
    if (m_list.empty()) throw InvalidInput("audit_H3: empty m list");
    AuditReport r;
    r.worst = -std::numeric_limits<double>::infinity();
    double worst_lhs = -std::numeric_limits<double>::infinity();
    std::size_t coupled = 0;
    for (std::size_t k = 0; k < o.samples; ++k) {
        Rng g(o.seed, k);
        const double m = m_list[k % m_list.size()];
        if (!(m > 0)) throw InvalidInput("audit_H3: m must be positive");
        const Vec x = sample_point(g, o.n);
        const Vec y = axpy(g.log_uniform(1e-3, 1.0), g.unit_vec(o.n), x);
        SymMat X(o.n), Y(o.n);
        if (k % 2 == 0) {
            // X = Y = P with -mI <= P <= 0
            Vec spec_p(o.n);
            for (double& v : spec_p) v = -m * g.uniform();
            X = random_rotation_sym(g, spec_p);
            Y = X;
        } else {
            // X = D - K, Y = -D - K with K = D^2/(2m) + K0, |D| <= m/4, 0 <= K0 <= m/2
            Vec sd(o.n), sk(o.n);
            for (double& v : sd) v = g.uniform(-0.25, 0.25) * m;
            for (double& v : sk) v = g.uniform(0.0, 0.5) * m;
            const SymMat D = random_rotation_sym(g, sd);
            const SymMat K = D.squared() * (0.5 / m) + random_rotation_sym(g, sk);
            X = D - K;
            Y = -D - K;
            ++coupled;
        }
        if (!doubling_pair_check(X, Y, m)) throw Error("audit_H3: generated pair violates the doubling inequality");
        const Vec p = scaled(axpy(-1.0, y, x), m);
        const double fx = eval(spec, x, p, X), fy = eval(spec, y, p, -Y);
        const double bound = h3_bound(spec, x, y, m);
        const double lhs = fx - fy;
        worst_lhs = std::max(worst_lhs, lhs);
        r.worst = std::max(r.worst, (lhs - bound) / (1.0 + std::abs(fx) + std::abs(fy) + bound));
        ++r.samples;
    }
    r.extra["worst_lhs"] = worst_lhs;
    r.extra["coupled_pairs"] = static_cast<double>(coupled);
    return r;
}

AuditReport audit_H4(const OperatorSpec& spec, const AuditOptions& o) {
    validate(spec);
    const double cF = h4_claimed_constant(spec, o.n);
    const double a = spec.alpha;
    AuditReport r;
    double ratio_comp = 0.0, ratio_diag = 0.0;
    double v_norm = -std::numeric_limits<double>::infinity(), v_comp = v_norm, v_diag = v_norm;
    for (std::size_t k = 0; k < o.samples; ++k) {
        Rng g(o.seed, k);
        const Vec x = sample_point(g, o.n);
        const Vec p = sample_grad(g, o.n);
        Vec q;
        switch (k % 3) {
            case 0: q = sample_grad(g, o.n); break;
            case 1: q = axpy(1e-2 * g.uniform() * norm(p), g.unit_vec(o.n), p); break;
            default: {
                q = p;
                q[g.next_u64() % o.n] = 0.0;
            }
        }
        const SymMat X = sample_sym(g, o.n);
        const SymMat Xd = SymMat::diag(X.diagonal());
        const double xn = op_norm(X), xdn = op_norm(Xd);
        const double dn = std::abs(std::pow(norm(p), a) - std::pow(norm(q), a));
        double dc = 0.0;
        for (int i = 0; i < o.n; ++i) dc += std::abs(std::pow(std::abs(p[i]), a) - std::pow(std::abs(q[i]), a));
        const double dF = std::abs(eval(spec, x, p, X) - eval(spec, x, q, X));
        const double dFd = std::abs(eval(spec, x, p, Xd) - eval(spec, x, q, Xd));
        bool used = false;
        if (dn * xn >= 1e-14) {
            r.worst = std::max(r.worst, dF / (dn * xn));
            used = true;
        }
        if (dc * xn >= 1e-14) {
            ratio_comp = std::max(ratio_comp, dF / (dc * xn));
            used = true;
        }
        if (dc * xdn >= 1e-14) ratio_diag = std::max(ratio_diag, dFd / (dc * xdn));
        v_norm = std::max(v_norm, (dF - cF * dn * xn) / (1.0 + dF + cF * dn * xn));
        v_comp = std::max(v_comp, (dF - cF * dc * xn) / (1.0 + dF + cF * dc * xn));
        v_diag = std::max(v_diag, (dFd - cF * dc * xdn) / (1.0 + dFd + cF * dc * xdn));
        if (used)
            ++r.samples;
        else
            ++r.skipped;
    }
    r.extra["c_F"] = cF;
    r.extra["ratio_componentwise"] = ratio_comp;
    r.extra["ratio_componentwise_diagX"] = ratio_diag;
    r.extra["violation_norm"] = v_norm;
    r.extra["violation_componentwise"] = v_comp;
    r.extra["violation_componentwise_diagX"] = v_diag;
    return r;
}

AuditReport audit_homogeneity(const OperatorSpec& spec, const AuditOptions& o) {
    validate(spec);
    AuditReport r;
    for (std::size_t k = 0; k < o.samples; ++k) {
        Rng g(o.seed, k);
        const Vec x = sample_point(g, o.n);
        const Vec q = sample_grad(g, o.n);
        const SymMat X = sample_sym(g, o.n);
        const double s = 2.0 * g.normal();
        const double t = (k % 10 == 0) ? 0.0 : g.uniform(0.0, 3.0);
        const double lhs = eval(spec, x, scaled(q, s), X * t);
        const double rhs = std::pow(std::abs(s), spec.alpha) * t * eval(spec, x, q, X);
        r.worst = std::max(r.worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
        ++r.samples;
    }
    return r;
}

AuditReport audit_duality(const OperatorSpec& spec, const AuditOptions& o) {
    validate(spec);
    const OperatorSpec plus = with_family(spec, Family::pucci_plus);
    const OperatorSpec minus = with_family(spec, Family::pucci_minus);
    AuditReport r;
    double extremal = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < o.samples; ++k) {
        Rng g(o.seed, k);
        const Vec x = sample_point(g, o.n);
        const Vec q = sample_grad(g, o.n);
        const SymMat X = sample_sym(g, o.n), Y = sample_sym(g, o.n);
        const double fm = eval(minus, x, q, X), fp = eval(plus, x, q, -X);
        r.worst = std::max(r.worst, std::abs(fm + fp) / (1.0 + std::abs(fm) + std::abs(fp)));
        // M+(X) <= M+(-Y) + M+(X+Y)
        const double a = eval(plus, x, q, X), b = eval(plus, x, q, -Y), c = eval(plus, x, q, X + Y);
        extremal = std::max(extremal, (a - b - c) / (1.0 + std::abs(a) + std::abs(b) + std::abs(c)));
        ++r.samples;
    }
    r.extra["extremality_violation"] = extremal;
    return r;
}

AuditReport audit_lower_order(const LowerOrderSpec& h, const AuditOptions& o) {
    AuditReport r;
    for (std::size_t k = 0; k < o.samples; ++k) {
        Rng g(o.seed, k);
        const Vec x = sample_point(g, o.n);
        const Vec q = scaled(g.unit_vec(o.n), g.log_uniform(1e-3, 1e2));
        const double v = lower_order_value(h, x, q);
        r.worst = std::max(r.worst, std::abs(v) / (std::pow(norm(q), 1.0 + h.alpha) + 1.0));
        ++r.samples;
    }
    r.extra["c_h"] = h.c_h;
    return r;
}

double zt_margin(const Vec& z, const Vec& t, double alpha) {
    if (!(alpha > 0)) throw InvalidInput("zt_margin: alpha must be positive");
    const double nz = norm(z), nt = norm(t);
    const double lhs = std::abs(std::pow(nz, alpha) - std::pow(nt, alpha));
    const double rhs = std::max(1.0, alpha) * std::pow(norm(axpy(-1.0, t, z)), std::min(1.0, alpha)) *
                       std::pow(nz + nt, std::max(alpha - 1.0, 0.0));
    return rhs - lhs;
}

}  // namespace degen
