#pragma once
#include <optional>
#include <vector>

#include "prodesc/matrix.hpp"

namespace prodesc {

// Which unimodular transforms to accumulate. Kernel extraction needs V only;
// presentations that hand out generator coordinates need U and Uinv. The
// transforms are dense, so callers on large matrices should request as little
// as possible.
//
// When `modulus` is set, working entries are reduced into symmetric residues
// after every operation. That is only sound when the caller's column span
// contains modulus * Z^n (each reduction is a column operation against such a
// column), so V/Vinv tracking is rejected in that mode. It keeps presentation
// matrices of finite groups from blowing up.
struct SmithOptions {
    bool want_u = false;
    bool want_uinv = false;
    bool want_v = false;
    bool want_vinv = false;
    std::optional<Int> modulus;
};

// U * A * V = D with U, V unimodular and D = diag(d_1,...,d_r,0,...),
// d_1 | d_2 | ... | d_r, all d_i > 0. diag has min(nrows, ncols) entries
// including the trailing zeros.
struct SmithResult {
    std::vector<Int> diag;
    int rank = 0;
    SparseMat u, uinv, v, vinv;
};

SmithResult smith_normal_form(const SparseMat& a, const SmithOptions& opt = {});

// Invariant factors only (no transforms, same elimination).
std::vector<Int> smith_diagonal(const SparseMat& a);

// Exact determinant by fraction-free elimination; square input.
Int determinant(const SparseMat& a);

}  // namespace prodesc
