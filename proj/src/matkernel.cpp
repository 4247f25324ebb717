#include "degenlab/matkernel.hpp"

#include <algorithm>
#include <numeric>

#include "degenlab/errors.hpp"

namespace degen {

EigPair eig_sym(const SymMat& s) {
    if (!s.finite()) throw InvalidInput("eig_sym: non-finite entry");
    const int n = s.n();
    double a[SymMat::kMax][SymMat::kMax];
    Mat v;
    v.n = n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = s(i, j);
        v.at(i, i) = 1.0;
    }
    const double scale = s.frobenius();
    const double stop = 1e-13 * scale;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        off = std::sqrt(2.0 * off);
        if (off <= stop || off == 0.0) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - sn * vkq;
                    v.at(k, q) = sn * vkp + c * vkq;
                }
            }
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a[i][i] < a[j][j]; });
    EigPair out;
    out.values.resize(n);
    out.vectors.n = n;
    for (int k = 0; k < n; ++k) {
        out.values[k] = a[order[k]][order[k]];
        for (int i = 0; i < n; ++i) out.vectors.at(i, k) = v.at(i, order[k]);
    }
    return out;
}

Vec eigvals(const SymMat& s) {
    if (s.n() == 1) {
        if (!s.finite()) throw InvalidInput("eig_sym: non-finite entry");
        return {s(0, 0)};
    }
    if (s.n() == 2) {
        if (!s.finite()) throw InvalidInput("eig_sym: non-finite entry");
        const double m = 0.5 * (s(0, 0) + s(1, 1));
        const double d = std::hypot(0.5 * (s(0, 0) - s(1, 1)), s(0, 1));
        return {m - d, m + d};
    }
    return eig_sym(s).values;
}

double min_eig(const SymMat& s) { return eigvals(s).front(); }
double max_eig(const SymMat& s) { return eigvals(s).back(); }

Parts split_parts(const SymMat& s) {
    const EigPair e = eig_sym(s);
    const int n = s.n();
    Parts p{SymMat(n), SymMat(n)};
    for (int k = 0; k < n; ++k) {
        const Vec q = e.vectors.col(k);
        const double lam = e.values[k];
        if (lam > 0)
            p.plus += SymMat::outer(q) * lam;
        else if (lam < 0)
            p.minus += SymMat::outer(q) * (-lam);
    }
    return p;
}

double op_norm(const SymMat& s) {
    const Vec v = eigvals(s);
    return std::max(std::abs(v.front()), std::abs(v.back()));
}

double psd_tol(const SymMat& s) { return 1e-10 * (1.0 + s.frobenius()); }

bool is_psd(const SymMat& s) { return min_eig(s) >= -psd_tol(s); }

bool loewner_leq(const SymMat& a, const SymMat& b) { return is_psd(b - a); }

bool doubling_pair_check(const SymMat& x, const SymMat& y, double m) {
    if (!(m > 0)) throw InvalidInput("doubling_pair_check: m must be positive");
    if (x.n() != y.n()) throw InvalidInput("doubling_pair_check: dimension mismatch");
    const int n = x.n();
    const SymMat b = block_diag(x, y);
    const SymMat lower = SymMat::identity(2 * n, -m);
    const SymMat upper = coupling_block(SymMat::identity(n, m));
    return loewner_leq(lower, b) && loewner_leq(b, upper);
}

bool ishii_block_check(const SymMat& x, const SymMat& y, const SymMat& a, double iota, double big_m) {
    if (!(iota > 0)) throw InvalidInput("ishii_block_check: iota must be positive");
    const int n = x.n();
    if (y.n() != n || a.n() != 2 * n) throw InvalidInput("ishii_block_check: dimension mismatch");
    const SymMat shift = SymMat::identity(n, 2.0 * big_m);
    const SymMat b = block_diag(x - shift, y - shift);
    const SymMat lower = SymMat::identity(2 * n, -(1.0 / iota + op_norm(a) + 1.0));
    const SymMat upper = a + a.squared() * iota + SymMat::identity(2 * n);
    return loewner_leq(lower, b) && loewner_leq(b, upper);
}

}  // namespace degen
