#pragma once

#include <utility>

#include "degenlab/linalg.hpp"

namespace degen {

struct EigPair {
    Vec values;  // ascending
    Mat vectors;  // orthonormal columns, vectors.col(k) pairs with values[k]
};

// Cyclic Jacobi; stops when off-diagonal mass <= 1e-13 * ||S||_F.
EigPair eig_sym(const SymMat& s);
Vec eigvals(const SymMat& s);
double min_eig(const SymMat& s);
double max_eig(const SymMat& s);

struct Parts {
    SymMat plus;
    SymMat minus;
};
Parts split_parts(const SymMat& s);

double op_norm(const SymMat& s);

// Eigenvalue threshold used by every PSD test.
double psd_tol(const SymMat& s);
bool is_psd(const SymMat& s);
// a <= b in the Loewner order.
bool loewner_leq(const SymMat& a, const SymMat& b);

// -m I_2N <= blockdiag(X,Y) <= m [[I,-I],[-I,I]]
bool doubling_pair_check(const SymMat& x, const SymMat& y, double m);

// -(1/iota + |A| + 1) I <= blockdiag(X - 2M I, Y - 2M I) <= A + iota A^2 + I
bool ishii_block_check(const SymMat& x, const SymMat& y, const SymMat& a, double iota, double big_m);

}  // namespace degen
