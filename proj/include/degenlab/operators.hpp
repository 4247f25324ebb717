#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "degenlab/linalg.hpp"

namespace degen {

enum class Family { pucci_plus, pucci_minus, example1, example2, pseudo_p, widely_degenerate };

std::string family_name(Family f);
Family parse_family(const std::string& s);  // accepts "pucci+", "pucci_plus", ...

// Coefficient presets.
//   example1 (matrix field L): constant | scalar_wave | rotating
//   example2 (scalar field a): constant | abs_clip | smooth
struct OperatorSpec {
    Family family = Family::pucci_plus;
    double alpha = 1.0;   // pseudo_p / widely_degenerate: alpha = p - 2
    double lambda = 1.0;
    double Lambda = 1.0;
    std::string coeff = "constant";
    Vec delta;            // widely_degenerate thresholds; empty means all zero

    static OperatorSpec pucci(bool plus, double alpha, double lambda, double Lambda);
    static OperatorSpec pseudo_p(double p);
    static OperatorSpec widely_degenerate(double p, Vec delta);
};

void validate(const OperatorSpec& spec);

// key=value lines: family, alpha, lambda, Lambda, coeff, delta (comma list)
std::string to_text(const OperatorSpec& spec);
OperatorSpec spec_from_map(const std::map<std::string, std::string>& kv);

// L(x) for example1, a(x) for example2.
SymMat coeff_matrix(const OperatorSpec& spec, const Vec& x);
double coeff_scalar(const OperatorSpec& spec, const Vec& x);

struct CoeffInfo {
    double lip = 0.0;       // Lipschitz constant: Frobenius norm for L, absolute value for a
    double a_min = 1.0;     // example2 lower bound a_o
    double a_max = 1.0;
};
CoeffInfo coeff_info(const OperatorSpec& spec, int n);

// Constants (lambda_eff, Lambda_eff) with which H1 holds for this family.
std::pair<double, double> ellipticity(const OperatorSpec& spec, int n);
// Constant c_{gamma_F} (gamma_F = 1) derived from the coefficient field.
double h2_constant(const OperatorSpec& spec, int n);
// Constant c_F claimed by the operator-difference argument (Lambda_eff).
double h4_claimed_constant(const OperatorSpec& spec, int n);
// Right-hand side of the H3 estimate at p = m(x - y).
double h3_bound(const OperatorSpec& spec, const Vec& x, const Vec& y, double m);

Vec theta_alpha(const Vec& q, double alpha);

// Lambda tr(W+) - lambda tr(W-)
double pucci_plus_matrix(double lambda, double Lambda, const SymMat& w);

struct Jet {
    Vec x;
    Vec q;
    SymMat X;
};

double eval(const OperatorSpec& spec, const Vec& x, const Vec& q, const SymMat& X);
inline double eval(const OperatorSpec& spec, const Jet& j) { return eval(spec, j.x, j.q, j.X); }

struct LowerOrderSpec {
    enum class Form { zero, drift, growth_bounded, custom };
    Form form = Form::zero;
    double c_h = 0.0;
    double alpha = 1.0;
    std::function<double(const Vec&, const Vec&)> custom;

    static LowerOrderSpec zero() { return {}; }
    static LowerOrderSpec drift(double c_h, double alpha) { return {Form::drift, c_h, alpha, {}}; }
    static LowerOrderSpec growth(double c_h, double alpha) { return {Form::growth_bounded, c_h, alpha, {}}; }
};

// Unchecked value of h; used in inner loops where the bound holds by construction.
double lower_order_value(const LowerOrderSpec& h, const Vec& x, const Vec& q);
// Checked value; throws ContractViolation if |h| > c_h (|q|^{1+alpha} + 1).
double eval_lower_order(const LowerOrderSpec& h, const Vec& x, const Vec& q);

struct AuditReport {
    double worst = 0.0;  // worst violation (normalized) or worst ratio, per audit
    std::size_t samples = 0;
    std::size_t skipped = 0;
    std::map<std::string, double> extra;
};

// Sampling conventions shared by the audits.
struct AuditOptions {
    int n = 2;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
};

AuditReport audit_H1(const OperatorSpec& spec, const AuditOptions& o);
AuditReport audit_H2(const OperatorSpec& spec, const AuditOptions& o);
AuditReport audit_H3(const OperatorSpec& spec, const Vec& m_list, const AuditOptions& o);
AuditReport audit_H4(const OperatorSpec& spec, const AuditOptions& o);
AuditReport audit_homogeneity(const OperatorSpec& spec, const AuditOptions& o);
AuditReport audit_duality(const OperatorSpec& spec, const AuditOptions& o);
AuditReport audit_lower_order(const LowerOrderSpec& h, const AuditOptions& o);

double zt_margin(const Vec& z, const Vec& t, double alpha);

}  // namespace degen
