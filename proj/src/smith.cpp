#include "prodesc/smith.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "prodesc/errors.hpp"

namespace prodesc {

namespace {

// Working state: row-major maps plus a column -> rows occupancy index so that
// column operations do not scan the whole matrix. Transforms are dense.
struct Work {
    int m, n;
    std::vector<std::map<int, Int>> rows;
    std::vector<std::set<int>> colrows;
    SmithOptions opt;
    std::vector<std::vector<Int>> u, uinv, v, vinv;

    Work(const SparseMat& a, const SmithOptions& o)
        : m(a.nrows), n(a.ncols), rows(static_cast<size_t>(a.nrows)),
          colrows(static_cast<size_t>(a.ncols)), opt(o) {
        if (opt.modulus && (opt.want_v || opt.want_vinv))
            throw InvariantError("modular reduction discards column transforms");
        for (int i = 0; i < m; ++i)
            for (const auto& [j, val] : a.rows[i]) set_entry(i, j, val);
        auto ident = [](int k) {
            std::vector<std::vector<Int>> e(static_cast<size_t>(k),
                                            std::vector<Int>(static_cast<size_t>(k), Int(0)));
            for (int i = 0; i < k; ++i) e[i][i] = 1;
            return e;
        };
        if (opt.want_u) u = ident(m);
        if (opt.want_uinv) uinv = ident(m);
        if (opt.want_v) v = ident(n);
        if (opt.want_vinv) vinv = ident(n);
    }

    // symmetric residue when a modulus is active
    Int canon(const Int& v) const {
        if (!opt.modulus) return v;
        const Int& d = *opt.modulus;
        Int r = mod_canonical(v, d);
        if (2 * r > d) r -= d;
        return r;
    }

    void set_entry(int i, int j, const Int& raw) {
        Int val = canon(raw);
        if (val == 0) {
            auto it = rows[i].find(j);
            if (it != rows[i].end()) {
                rows[i].erase(it);
                colrows[j].erase(i);
            }
        } else {
            auto [it, inserted] = rows[i].emplace(j, val);
            if (!inserted) it->second = val;
            if (inserted) colrows[j].insert(i);
        }
    }

    // row i -= q * row k
    void row_sub(int i, int k, const Int& q) {
        if (q == 0) return;
        for (const auto& [j, val] : rows[k]) {
            Int nv = at(i, j) - q * val;
            set_entry(i, j, nv);
        }
        if (opt.want_u)
            for (int j = 0; j < m; ++j) u[i][j] -= q * u[k][j];
        if (opt.want_uinv)
            for (int a = 0; a < m; ++a) uinv[a][k] += q * uinv[a][i];
    }

    // col j -= q * col k
    void col_sub(int j, int k, const Int& q) {
        if (q == 0) return;
        std::vector<int> touched(colrows[k].begin(), colrows[k].end());
        for (int i : touched) {
            Int nv = at(i, j) - q * at(i, k);
            set_entry(i, j, nv);
        }
        if (opt.want_v)
            for (int a = 0; a < n; ++a) v[a][j] -= q * v[a][k];
        if (opt.want_vinv)
            for (int b = 0; b < n; ++b) vinv[k][b] += q * vinv[j][b];
    }

    void row_swap(int i, int k) {
        if (i == k) return;
        std::vector<int> ci(colsOf(i)), ck(colsOf(k));
        std::swap(rows[i], rows[k]);
        for (int j : ci) { colrows[j].erase(i); colrows[j].insert(k); }
        for (int j : ck) { colrows[j].erase(k); colrows[j].insert(i); }
        // fix overlap: columns present in both stay present in both
        for (int j : ci)
            if (rows[i].count(j)) colrows[j].insert(i);
        for (int j : ck)
            if (rows[k].count(j)) colrows[j].insert(k);
        if (opt.want_u) std::swap(u[i], u[k]);
        if (opt.want_uinv)
            for (int a = 0; a < m; ++a) std::swap(uinv[a][i], uinv[a][k]);
    }

    void col_swap(int j, int k) {
        if (j == k) return;
        std::vector<int> rj(colrows[j].begin(), colrows[j].end());
        std::vector<int> rk(colrows[k].begin(), colrows[k].end());
        std::map<int, Int> valj, valk;
        for (int i : rj) valj[i] = rows[i][j];
        for (int i : rk) valk[i] = rows[i][k];
        for (int i : rj) { rows[i].erase(j); colrows[j].erase(i); }
        for (int i : rk) { rows[i].erase(k); colrows[k].erase(i); }
        for (auto& [i, val] : valj) { rows[i][k] = val; colrows[k].insert(i); }
        for (auto& [i, val] : valk) { rows[i][j] = val; colrows[j].insert(i); }
        if (opt.want_v)
            for (int a = 0; a < n; ++a) std::swap(v[a][j], v[a][k]);
        if (opt.want_vinv) std::swap(vinv[j], vinv[k]);
    }

    void row_negate(int i) {
        for (auto& [j, val] : rows[i]) val = -val;
        if (opt.want_u)
            for (int j = 0; j < m; ++j) u[i][j] = -u[i][j];
        if (opt.want_uinv)
            for (int a = 0; a < m; ++a) uinv[a][i] = -uinv[a][i];
    }

    Int at(int i, int j) const {
        auto it = rows[i].find(j);
        return it == rows[i].end() ? Int(0) : it->second;
    }

    std::vector<int> colsOf(int i) const {
        std::vector<int> out;
        out.reserve(rows[i].size());
        for (const auto& [j, _] : rows[i]) out.push_back(j);
        return out;
    }
};

}  // namespace

SmithResult smith_normal_form(const SparseMat& a, const SmithOptions& opt) {
    Work w(a, opt);
    const int m = w.m, n = w.n;
    const int steps = std::min(m, n);
    int k = 0;
    while (k < steps) {
        // minimal |value| pivot in the active submatrix, first hit on ties
        int pi = -1, pj = -1;
        Int best;
        bool have = false;
        for (int i = k; i < m && !(have && best == 1); ++i) {
            for (const auto& [j, val] : w.rows[i]) {
                if (j < k) continue;
                Int av = abs_int(val);
                if (!have || av < best) {
                    have = true;
                    best = av;
                    pi = i;
                    pj = j;
                    if (best == 1) break;
                }
            }
        }
        if (!have) break;
        w.row_swap(k, pi);
        w.col_swap(k, pj);

        // Each pass either finishes or strictly shrinks |pivot|, so this
        // terminates. The divisibility merge stays at the same pivot position.
        for (;;) {
            // clear column k with row ops; remainders may replace the pivot
            bool dirty = true;
            while (dirty) {
                dirty = false;
                std::vector<int> below(w.colrows[k].begin(), w.colrows[k].end());
                for (int i : below) {
                    if (i == k) continue;
                    Int piv = w.at(k, k);
                    Int q = div_nearest(w.at(i, k), piv);
                    w.row_sub(i, k, q);
                    if (w.at(i, k) != 0) {
                        w.row_swap(k, i);
                        dirty = true;
                    }
                }
            }
            // clear row k with col ops
            dirty = true;
            while (dirty) {
                dirty = false;
                std::vector<int> right = w.colsOf(k);
                for (int j : right) {
                    if (j == k) continue;
                    Int piv = w.at(k, k);
                    Int q = div_nearest(w.at(k, j), piv);
                    w.col_sub(j, k, q);
                    if (w.at(k, j) != 0) {
                        w.col_swap(k, j);
                        dirty = true;
                    }
                }
            }
            // column ops can reintroduce entries in column k
            bool col_clean = true;
            for (int i : w.colrows[k])
                if (i != k) { col_clean = false; break; }
            if (!col_clean) continue;

            // pivot must divide the rest of the active submatrix
            Int piv = w.at(k, k);
            if (abs_int(piv) != 1) {
                int bad_row = -1;
                for (int i = k + 1; i < m && bad_row < 0; ++i)
                    for (const auto& [j, val] : w.rows[i]) {
                        if (j <= k) continue;
                        if (val % piv != 0) {
                            bad_row = i;
                            break;
                        }
                    }
                if (bad_row >= 0) {
                    w.row_sub(k, bad_row, Int(-1));  // row k += bad row
                    continue;
                }
            }
            break;
        }
        ++k;
    }

    SmithResult res;
    res.rank = k;
    res.diag.assign(static_cast<size_t>(steps), Int(0));
    for (int i = 0; i < k; ++i) {
        Int d = w.at(i, i);
        if (d < 0) {
            w.row_negate(i);
            d = -d;
        }
        res.diag[i] = d;
    }
    auto pack = [](const std::vector<std::vector<Int>>& d) { return SparseMat::from_dense(d); };
    if (opt.want_u) res.u = pack(w.u);
    if (opt.want_uinv) res.uinv = pack(w.uinv);
    if (opt.want_v) res.v = pack(w.v);
    if (opt.want_vinv) res.vinv = pack(w.vinv);
    return res;
}

std::vector<Int> smith_diagonal(const SparseMat& a) {
    return smith_normal_form(a).diag;
}

Int determinant(const SparseMat& a) {
    if (a.nrows != a.ncols) throw InvariantError("determinant of non-square matrix");
    int n = a.nrows;
    if (n == 0) return Int(1);
    auto d = a.to_dense();
    // Bareiss fraction-free elimination
    Int prev(1);
    int sign = 1;
    for (int r = 0; r < n - 1; ++r) {
        if (d[r][r] == 0) {
            int s = -1;
            for (int i = r + 1; i < n; ++i)
                if (d[i][r] != 0) { s = i; break; }
            if (s < 0) return Int(0);
            std::swap(d[r], d[s]);
            sign = -sign;
        }
        for (int i = r + 1; i < n; ++i)
            for (int j = r + 1; j < n; ++j)
                d[i][j] = exact_div(d[r][r] * d[i][j] - d[i][r] * d[r][j], prev);
        prev = d[r][r];
    }
    return sign > 0 ? d[n - 1][n - 1] : -d[n - 1][n - 1];
}

}  // namespace prodesc
