#pragma once

#include <string>
#include <vector>

#include "degenlab/linalg.hpp"

namespace degen {

struct RadialTestFn {
    enum class Kind { holder, lip };
    Kind kind = Kind::holder;
    double gamma = 0.5;   // holder exponent
    double tau = 0.25;    // lip: omega(s) = s - omega0 s^{1+tau}
    double omega0 = 0.4;

    static RadialTestFn holder(double gamma);
    static RadialTestFn lip(double tau, double omega0);
    // Right end of the validity interval (0, s_max): +inf for holder, s0 for lip.
    double s_max() const;
};

struct OmegaJet {
    double w, w1, w2;
};

OmegaJet omega_eval(const RadialTestFn& tf, double s);
// lip family: delta^tau omega0 (1+tau) < 1/2, which gives 1/2 <= omega' < 1 and omega >= s/2 on (0, delta).
bool lip_slope_holds(const RadialTestFn& tf, double delta);

SymMat g_hessian(const RadialTestFn& tf, const Vec& x);
SymMat h_tilde(const RadialTestFn& tf, const Vec& x);

struct RadialFit {
    double beta;
    double gamma;
    double residual;  // Frobenius misfit
};
RadialFit radial_coeffs(const SymMat& s, const RadialTestFn& tf, const Vec& x);

std::vector<int> index_set(const Vec& x, double eps);
Vec theta_of_x(const RadialTestFn& tf, const Vec& x, double alpha);
bool eqNepsilon_check(const RadialTestFn& tf, const Vec& x, double eps, double beta_h, double gamma_h);

// The alpha > 2 bound carries |x|^{(alpha-2) eps}; its later use carries |x|^{2 eps}.
enum class Prop4Exponent { alpha_minus_two_eps, two_eps };

double prop4_bound(const RadialTestFn& tf, const Vec& x, double alpha, double eps = 0.0,
                   Prop4Exponent variant = Prop4Exponent::alpha_minus_two_eps);

struct Prop4Result {
    double mu1;
    double bound;       // alpha <= 2 form, or the (alpha-2) eps variant
    bool ok;
    double bound_alt;   // 2 eps variant (equal to bound when alpha <= 2)
    bool ok_alt;
};
Prop4Result prop4_verify(const RadialTestFn& tf, const Vec& x, double alpha, double eps = 0.0);

enum class Regime { holder_small_alpha, holder_large_alpha, lip_small_alpha, lip_large_alpha };
std::string regime_name(Regime r);

struct NamedBound {
    double tau = 0.0;
    double c = 0.0;
};

struct ProblemConstants {
    double alpha = 1.0;
    double lambda = 1.0;
    double Lambda = 1.0;
    int n = 2;
    double gamma_F = 1.0;
    double c_gammaF = 0.0;
    double c_F = 1.0;
    double c_h = 0.0;
};

struct RegimeConstants {
    Regime regime;
    double tau_hat = 0.0;
    double c = 0.0;
    NamedBound extra_eigs;     // eigenvalues of Theta (X+Y) Theta
    NamedBound x_dependence;   // F(x,q,X) - F(y,q,X)
    NamedBound gradient_swap;  // F(x,q^x,X) - F(x,q,X)
    NamedBound lower_order;    // h terms
    double gamma = 0.5;        // Hoelder exponent
    double tau = 0.0;          // lip family exponent
    double eps = 0.0;
    double omega0 = 0.0;
    RadialTestFn test_fn() const;
};

// Exponents at the midpoints of the admissible intervals; gamma is the Hoelder exponent.
RegimeConstants choose_exponents(Regime regime, double alpha, double gamma_F, double gamma = 0.5);
// Fills the (tau_i, c_i) table; c_gamma_r is the Hoelder modulus (lip regimes only).
RegimeConstants regime_constants(RegimeConstants chosen, const ProblemConstants& pc, double c_gamma_r = 0.0);

// Left side of the delta-smallness inequality.
double smallness_lhs(const RegimeConstants& rc, double Lambda, double delta);

struct Certificate {
    RegimeConstants rc;
    double delta = 0.0;
    double delta_cap = 0.0;        // from delta_N, omega' >= 1/2 and the gradient perturbation bound
    std::string delta_binding;
    double M = 0.0;
    std::string M_binding;
    double modulus = 0.0;
    double c_gamma_r = 0.0;        // Hoelder modulus used by the lip pass
    double r = 0.5;
    double sup_sum = 0.0;          // |u|_inf + |v|_inf
};

struct CertificateInput {
    ProblemConstants pc;
    double r = 0.5;
    double sup_u = 1.0;
    double sup_v = 1.0;
    bool lipschitz = true;
};

Certificate certificate(const CertificateInput& in);

struct CertificateCheck {
    bool ok = true;
    double smallness_ratio = 0.0;  // lhs / (lambda c / 2); <= 0.99 required
    std::vector<std::string> failures;
};
CertificateCheck verify_certificate(const Certificate& cert, const CertificateInput& in);

std::string to_text(const Certificate& c);
std::string csv_header_certificate();
std::string csv_row(const Certificate& c);

// delta_N thresholds of the alpha > 2 regimes.
double delta_N_holder(int n, double gamma, double eps);
double delta_N_lip(int n, double tau, double omega0, double eps);

}  // namespace degen
