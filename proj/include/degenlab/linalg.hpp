#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace degen {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
Vec axpy(double a, const Vec& x, const Vec& y);  // a*x + y
Vec scaled(const Vec& x, double a);
bool all_finite(const Vec& v);

// x^a for x >= 0 with exact fast paths for the common exponents (0^0 = 1).
inline double powa(double x, double a) {
    if (a == 0.0) return 1.0;
    if (a == 1.0) return x;
    if (a == 2.0) return x * x;
    if (a == 0.5) return std::sqrt(x);
    return std::pow(x, a);
}

// Dense symmetric matrix, n <= 6 (block checks need 2N with N <= 3).
class SymMat {
public:
    static constexpr int kMax = 6;

    explicit SymMat(int n = 1);
    static SymMat identity(int n, double s = 1.0);
    static SymMat diag(const Vec& d);
    static SymMat outer(const Vec& a, const Vec& b);  // (a b^T + b a^T)/2
    static SymMat outer(const Vec& a) { return outer(a, a); }

    int n() const { return n_; }
    double operator()(int i, int j) const { return a_[i * kMax + j]; }
    void set(int i, int j, double v) {
        a_[i * kMax + j] = v;
        a_[j * kMax + i] = v;
    }
    void add(int i, int j, double v) { set(i, j, (*this)(i, j) + v); }

    double trace() const;
    double frobenius() const;
    bool finite() const;
    Vec diagonal() const;
    Vec apply(const Vec& x) const;
    double quad(const Vec& x) const { return dot(x, apply(x)); }

    SymMat operator+(const SymMat& o) const;
    SymMat operator-(const SymMat& o) const;
    SymMat operator-() const;
    SymMat operator*(double s) const;
    SymMat& operator+=(const SymMat& o);

    // D S D for diagonal D given as a vector.
    SymMat congruence_diag(const Vec& d) const;
    // S*S, symmetric for symmetric S.
    SymMat squared() const;

private:
    int n_;
    std::array<double, kMax * kMax> a_{};
};

inline SymMat operator*(double s, const SymMat& m) { return m * s; }

// blockdiag(A, B)
SymMat block_diag(const SymMat& a, const SymMat& b);
// [[A, -A], [-A, A]]
SymMat coupling_block(const SymMat& a);

// Column-major square matrix for eigenvectors and general products.
struct Mat {
    int n = 0;
    std::array<double, SymMat::kMax * SymMat::kMax> a{};
    double& at(int i, int j) { return a[j * SymMat::kMax + i]; }
    double at(int i, int j) const { return a[j * SymMat::kMax + i]; }
    Vec col(int j) const;
};

}  // namespace degen
