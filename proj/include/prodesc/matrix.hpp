#pragma once
#include <map>
#include <utility>
#include <vector>

#include "prodesc/ints.hpp"

namespace prodesc {

// Row-major sparse integer matrix. Each row holds (col, value) pairs sorted
// by column with no explicit zeros. Bar-complex differentials are a few
// entries per row at thousands of rows, so this is the default storage;
// small dense work happens inside the Smith routine.
struct SparseMat {
    int nrows = 0;
    int ncols = 0;
    std::vector<std::vector<std::pair<int, Int>>> rows;

    SparseMat() = default;
    SparseMat(int r, int c) : nrows(r), ncols(c), rows(static_cast<size_t>(r)) {}

    static SparseMat identity(int n);
    static SparseMat zero(int r, int c) { return SparseMat(r, c); }
    static SparseMat diagonal(const std::vector<Int>& d);
    static SparseMat from_dense(const std::vector<std::vector<Int>>& d, int cols = -1);

    Int at(int i, int j) const;
    bool is_zero() const;
    size_t nnz() const;

    SparseMat mul(const SparseMat& other) const;
    SparseMat transpose() const;
    // this * column vector
    std::vector<Int> apply(const std::vector<Int>& v) const;
    SparseMat scaled(const Int& c) const;
    SparseMat sub(const SparseMat& other) const;  // this - other
    // horizontal concatenation [this | other]
    SparseMat hcat(const SparseMat& other) const;
    // vertical concatenation [this ; other]
    SparseMat vcat(const SparseMat& other) const;
    SparseMat column(int j) const;
    std::vector<Int> column_vec(int j) const;
    SparseMat select_columns(const std::vector<int>& idx) const;

    std::vector<std::vector<Int>> to_dense() const;
    bool operator==(const SparseMat& other) const;
};

// Accumulating builder; entries may be added in any order and are summed.
class MatBuilder {
  public:
    MatBuilder(int r, int c) : nrows_(r), ncols_(c), cells_(static_cast<size_t>(r)) {}
    void add(int i, int j, const Int& v);
    // dense block at row/col offsets: block[a][b] added to (r0+a, c0+b)
    void add_block(int r0, int c0, const SparseMat& block, const Int& coeff);
    SparseMat build() const;
    int rows() const { return nrows_; }
    int cols() const { return ncols_; }

  private:
    int nrows_, ncols_;
    std::vector<std::map<int, Int>> cells_;
};

}  // namespace prodesc
