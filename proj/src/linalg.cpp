#include "degenlab/linalg.hpp"

#include <cassert>

#include "degenlab/errors.hpp"

namespace degen {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec axpy(double a, const Vec& x, const Vec& y) {
    Vec r(y);
    for (size_t i = 0; i < x.size(); ++i) r[i] += a * x[i];
    return r;
}

Vec scaled(const Vec& x, double a) {
    Vec r(x);
    for (double& v : r) v *= a;
    return r;
}

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

SymMat::SymMat(int n) : n_(n) {
    if (n < 1 || n > kMax) throw InvalidInput("SymMat dimension out of range");
}

SymMat SymMat::identity(int n, double s) {
    SymMat m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, s);
    return m;
}

SymMat SymMat::diag(const Vec& d) {
    SymMat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n(); ++i) m.set(i, i, d[i]);
    return m;
}

SymMat SymMat::outer(const Vec& a, const Vec& b) {
    SymMat m(static_cast<int>(a.size()));
    for (int i = 0; i < m.n(); ++i)
        for (int j = i; j < m.n(); ++j) m.set(i, j, 0.5 * (a[i] * b[j] + b[i] * a[j]));
    return m;
}

double SymMat::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SymMat::frobenius() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
}

bool SymMat::finite() const {
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            if (!std::isfinite((*this)(i, j))) return false;
    return true;
}

Vec SymMat::diagonal() const {
    Vec d(n_);
    for (int i = 0; i < n_; ++i) d[i] = (*this)(i, i);
    return d;
}

Vec SymMat::apply(const Vec& x) const {
    Vec y(n_, 0.0);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
}

SymMat SymMat::operator+(const SymMat& o) const {
    SymMat r(*this);
    r += o;
    return r;
}

SymMat SymMat::operator-(const SymMat& o) const { return *this + (-o); }

SymMat SymMat::operator-() const { return *this * -1.0; }

SymMat SymMat::operator*(double s) const {
    SymMat r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) r.set(i, j, s * (*this)(i, j));
    return r;
}

SymMat& SymMat::operator+=(const SymMat& o) {
    if (o.n_ != n_) throw InvalidInput("SymMat dimension mismatch");
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) set(i, j, (*this)(i, j) + o(i, j));
    return *this;
}

SymMat SymMat::congruence_diag(const Vec& d) const {
    SymMat r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) r.set(i, j, d[i] * (*this)(i, j) * d[j]);
    return r;
}

SymMat SymMat::squared() const {
    SymMat r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
            double s = 0.0;
            for (int k = 0; k < n_; ++k) s += (*this)(i, k) * (*this)(k, j);
            r.set(i, j, s);
        }
    return r;
}

SymMat block_diag(const SymMat& a, const SymMat& b) {
    const int n = a.n();
    SymMat r(n + b.n());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) r.set(i, j, a(i, j));
    for (int i = 0; i < b.n(); ++i)
        for (int j = i; j < b.n(); ++j) r.set(n + i, n + j, b(i, j));
    return r;
}

SymMat coupling_block(const SymMat& a) {
    const int n = a.n();
    SymMat r(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            r.set(i, j, a(i, j));
            r.set(n + i, n + j, a(i, j));
            r.set(i, n + j, -a(i, j));
        }
    return r;
}

Vec Mat::col(int j) const {
    Vec c(n);
    for (int i = 0; i < n; ++i) c[i] = at(i, j);
    return c;
}

}  // namespace degen
