#include "prodesc/matrix.hpp"

#include <algorithm>

#include "prodesc/errors.hpp"

namespace prodesc {

SparseMat SparseMat::identity(int n) {
    SparseMat m(n, n);
    for (int i = 0; i < n; ++i) m.rows[i].emplace_back(i, Int(1));
    return m;
}

SparseMat SparseMat::diagonal(const std::vector<Int>& d) {
    SparseMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0) m.rows[i].emplace_back(static_cast<int>(i), d[i]);
    return m;
}

SparseMat SparseMat::from_dense(const std::vector<std::vector<Int>>& d, int cols) {
    int r = static_cast<int>(d.size());
    int c = cols >= 0 ? cols : (r ? static_cast<int>(d[0].size()) : 0);
    SparseMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < static_cast<int>(d[i].size()); ++j)
            if (d[i][j] != 0) m.rows[i].emplace_back(j, d[i][j]);
    return m;
}

Int SparseMat::at(int i, int j) const {
    const auto& row = rows[i];
    auto it = std::lower_bound(row.begin(), row.end(), j,
                               [](const std::pair<int, Int>& e, int c) { return e.first < c; });
    if (it != row.end() && it->first == j) return it->second;
    return Int(0);
}

bool SparseMat::is_zero() const {
    for (const auto& r : rows)
        if (!r.empty()) return false;
    return true;
}

size_t SparseMat::nnz() const {
    size_t n = 0;
    for (const auto& r : rows) n += r.size();
    return n;
}

SparseMat SparseMat::mul(const SparseMat& other) const {
    if (ncols != other.nrows) throw InvariantError("matrix product shape mismatch");
    SparseMat out(nrows, other.ncols);
    std::map<int, Int> acc;
    for (int i = 0; i < nrows; ++i) {
        acc.clear();
        for (const auto& [k, a] : rows[i])
            for (const auto& [j, b] : other.rows[k]) {
                auto it = acc.find(j);
                if (it == acc.end())
                    acc.emplace(j, a * b);
                else
                    it->second += a * b;
            }
        auto& row = out.rows[i];
        for (auto& [j, v] : acc)
            if (v != 0) row.emplace_back(j, v);
    }
    return out;
}

SparseMat SparseMat::transpose() const {
    SparseMat out(ncols, nrows);
    for (int i = 0; i < nrows; ++i)
        for (const auto& [j, v] : rows[i]) out.rows[j].emplace_back(i, v);
    return out;
}

std::vector<Int> SparseMat::apply(const std::vector<Int>& v) const {
    if (static_cast<int>(v.size()) != ncols) throw InvariantError("matrix apply shape mismatch");
    std::vector<Int> out(static_cast<size_t>(nrows), Int(0));
    for (int i = 0; i < nrows; ++i)
        for (const auto& [j, a] : rows[i]) out[i] += a * v[j];
    return out;
}

SparseMat SparseMat::scaled(const Int& c) const {
    SparseMat out(nrows, ncols);
    if (c == 0) return out;
    for (int i = 0; i < nrows; ++i)
        for (const auto& [j, v] : rows[i]) out.rows[i].emplace_back(j, v * c);
    return out;
}

SparseMat SparseMat::sub(const SparseMat& other) const {
    if (nrows != other.nrows || ncols != other.ncols)
        throw InvariantError("matrix difference shape mismatch");
    MatBuilder b(nrows, ncols);
    for (int i = 0; i < nrows; ++i) {
        for (const auto& [j, v] : rows[i]) b.add(i, j, v);
        for (const auto& [j, v] : other.rows[i]) b.add(i, j, -v);
    }
    return b.build();
}

SparseMat SparseMat::hcat(const SparseMat& other) const {
    if (nrows != other.nrows) throw InvariantError("hcat row mismatch");
    SparseMat out(nrows, ncols + other.ncols);
    for (int i = 0; i < nrows; ++i) {
        out.rows[i] = rows[i];
        for (const auto& [j, v] : other.rows[i]) out.rows[i].emplace_back(j + ncols, v);
    }
    return out;
}

SparseMat SparseMat::vcat(const SparseMat& other) const {
    if (ncols != other.ncols) throw InvariantError("vcat col mismatch");
    SparseMat out(nrows + other.nrows, ncols);
    for (int i = 0; i < nrows; ++i) out.rows[i] = rows[i];
    for (int i = 0; i < other.nrows; ++i) out.rows[nrows + i] = other.rows[i];
    return out;
}

SparseMat SparseMat::column(int j) const {
    SparseMat out(nrows, 1);
    for (int i = 0; i < nrows; ++i) {
        Int v = at(i, j);
        if (v != 0) out.rows[i].emplace_back(0, v);
    }
    return out;
}

std::vector<Int> SparseMat::column_vec(int j) const {
    std::vector<Int> out(static_cast<size_t>(nrows), Int(0));
    for (int i = 0; i < nrows; ++i) out[i] = at(i, j);
    return out;
}

SparseMat SparseMat::select_columns(const std::vector<int>& idx) const {
    std::map<int, std::vector<int>> where;  // old col -> positions in output
    for (size_t p = 0; p < idx.size(); ++p) where[idx[p]].push_back(static_cast<int>(p));
    SparseMat out(nrows, static_cast<int>(idx.size()));
    for (int i = 0; i < nrows; ++i) {
        std::map<int, Int> acc;
        for (const auto& [j, v] : rows[i]) {
            auto it = where.find(j);
            if (it == where.end()) continue;
            for (int p : it->second) acc[p] = v;
        }
        for (auto& [p, v] : acc) out.rows[i].emplace_back(p, v);
    }
    return out;
}

std::vector<std::vector<Int>> SparseMat::to_dense() const {
    std::vector<std::vector<Int>> d(static_cast<size_t>(nrows),
                                    std::vector<Int>(static_cast<size_t>(ncols), Int(0)));
    for (int i = 0; i < nrows; ++i)
        for (const auto& [j, v] : rows[i]) d[i][j] = v;
    return d;
}

bool SparseMat::operator==(const SparseMat& other) const {
    return nrows == other.nrows && ncols == other.ncols && rows == other.rows;
}

void MatBuilder::add(int i, int j, const Int& v) {
    if (v == 0) return;
    auto& cell = cells_[i];
    auto it = cell.find(j);
    if (it == cell.end())
        cell.emplace(j, v);
    else {
        it->second += v;
        if (it->second == 0) cell.erase(it);
    }
}

void MatBuilder::add_block(int r0, int c0, const SparseMat& block, const Int& coeff) {
    if (coeff == 0) return;
    for (int i = 0; i < block.nrows; ++i)
        for (const auto& [j, v] : block.rows[i]) add(r0 + i, c0 + j, v * coeff);
}

SparseMat MatBuilder::build() const {
    SparseMat m(nrows_, ncols_);
    for (int i = 0; i < nrows_; ++i) {
        m.rows[i].reserve(cells_[i].size());
        for (const auto& [j, v] : cells_[i]) m.rows[i].emplace_back(j, v);
    }
    return m;
}

}  // namespace prodesc
