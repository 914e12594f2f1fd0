#include "prodesc/homology.hpp"

#include <algorithm>
#include <map>

#include "prodesc/errors.hpp"

namespace prodesc {

namespace {

using Col = std::map<int, Int>;  // row -> value, no zeros

int top_row(const Col& c) { return c.empty() ? -1 : c.begin()->first; }

void col_axpy(Col& dst, const Col& src, const Int& q) {
    // dst -= q * src
    if (q == 0) return;
    for (const auto& [r, v] : src) {
        auto it = dst.find(r);
        if (it == dst.end()) {
            Int nv = -q * v;
            if (nv != 0) dst.emplace(r, nv);
        } else {
            it->second -= q * v;
            if (it->second == 0) dst.erase(it);
        }
    }
}

std::vector<Col> to_cols(const SparseMat& m) {
    std::vector<Col> cols(static_cast<size_t>(m.ncols));
    for (int i = 0; i < m.nrows; ++i)
        for (const auto& [j, v] : m.rows[i]) cols[j].emplace(i, v);
    return cols;
}

SparseMat from_cols(const std::vector<Col>& cols, int nrows) {
    SparseMat m(nrows, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j)
        for (const auto& [i, v] : cols[j]) m.rows[i].emplace_back(static_cast<int>(j), v);
    for (auto& row : m.rows)
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    return m;
}

}  // namespace

namespace {

// Echelonize column spans by ascending pivot row, stopping once the pivot
// would land at `row_limit` or below; leftover columns (top row past the
// limit) are returned untouched after the processed ones. The canonical pass
// reduces earlier columns at later pivot rows into [0, pivot).
std::vector<Col> echelonize_cols(std::vector<Col> pending, int row_limit, bool canonical) {
    std::vector<Col> basis;
    std::vector<Col> rest;
    std::map<int, std::vector<Col>> buckets;
    for (auto& c : pending) {
        if (c.empty()) continue;
        if (top_row(c) >= row_limit)
            rest.push_back(std::move(c));
        else
            buckets[top_row(c)].push_back(std::move(c));
    }
    while (!buckets.empty()) {
        auto it = buckets.begin();
        int r = it->first;
        std::vector<Col> group = std::move(it->second);
        buckets.erase(it);
        while (group.size() > 1) {
            size_t best = 0;
            for (size_t i = 1; i < group.size(); ++i)
                if (abs_int(group[i].at(r)) < abs_int(group[best].at(r))) best = i;
            std::swap(group[0], group[best]);
            std::vector<Col> again;
            for (size_t i = 1; i < group.size(); ++i) {
                Int q = div_nearest(group[i].at(r), group[0].at(r));
                col_axpy(group[i], group[0], q);
                if (group[i].empty()) continue;
                int t = top_row(group[i]);
                if (t == r)
                    again.push_back(std::move(group[i]));
                else if (t >= row_limit)
                    rest.push_back(std::move(group[i]));
                else
                    buckets[t].push_back(std::move(group[i]));
            }
            group.resize(1);
            for (auto& c : again) group.push_back(std::move(c));
        }
        if (!group.empty()) {
            if (group[0].at(r) < 0)
                for (auto& [row, v] : group[0]) v = -v;
            basis.push_back(std::move(group[0]));
        }
    }
    if (canonical) {
        for (size_t j = 0; j < basis.size(); ++j) {
            int pj = top_row(basis[j]);
            const Int& piv = basis[j].at(pj);
            for (size_t i = 0; i < j; ++i) {
                auto it = basis[i].find(pj);
                if (it == basis[i].end()) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), it->second.get_mpz_t(), piv.get_mpz_t());
                col_axpy(basis[i], basis[j], q);
            }
        }
    }
    for (auto& c : rest) basis.push_back(std::move(c));
    return basis;
}

}  // namespace

SparseMat hnf_basis(const SparseMat& columns) {
    auto basis = echelonize_cols(to_cols(columns), columns.nrows, true);
    return from_cols(basis, columns.nrows);
}

std::optional<std::vector<Int>> hnf_solve(const SparseMat& h, const std::vector<Int>& x) {
    if (static_cast<int>(x.size()) != h.nrows) throw InvariantError("hnf_solve shape mismatch");
    std::vector<Col> cols = to_cols(h);
    std::map<int, Int> residual;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0) residual.emplace(static_cast<int>(i), x[i]);
    std::vector<Int> c(cols.size(), Int(0));
    for (size_t j = 0; j < cols.size(); ++j) {
        int pj = top_row(cols[j]);
        if (!residual.empty() && residual.begin()->first < pj) return std::nullopt;
        auto it = residual.find(pj);
        if (it == residual.end()) continue;
        const Int& piv = cols[j].at(pj);
        if (it->second % piv != 0) return std::nullopt;
        Int q = exact_div(it->second, piv);
        c[j] = q;
        // residual -= q * col_j
        for (const auto& [r, v] : cols[j]) {
            auto rit = residual.find(r);
            if (rit == residual.end()) {
                Int nv = -q * v;
                if (nv != 0) residual.emplace(r, nv);
            } else {
                rit->second -= q * v;
                if (rit->second == 0) residual.erase(rit);
            }
        }
    }
    if (!residual.empty()) return std::nullopt;
    return c;
}

SparseMat integer_kernel_basis(const SparseMat& a) {
    // Echelonize [A ; I] over the A-rows only; columns whose A-part vanished
    // carry a kernel basis in the identity block. No separate transform
    // accumulation, so the in-band reduction keeps entries tame.
    std::vector<Col> cols(static_cast<size_t>(a.ncols));
    for (int i = 0; i < a.nrows; ++i)
        for (const auto& [j, v] : a.rows[i]) cols[j].emplace(i, v);
    for (int j = 0; j < a.ncols; ++j) cols[j].emplace(a.nrows + j, Int(1));
    auto done = echelonize_cols(std::move(cols), a.nrows, false);
    MatBuilder bottom(a.ncols, static_cast<int>(done.size()));
    int nkeep = 0;
    for (const auto& c : done) {
        if (c.empty() || top_row(c) < a.nrows) continue;
        for (const auto& [r, v] : c) bottom.add(r - a.nrows, nkeep, v);
        ++nkeep;
    }
    SparseMat b = bottom.build();
    std::vector<int> idx(static_cast<size_t>(nkeep));
    for (int i = 0; i < nkeep; ++i) idx[static_cast<size_t>(i)] = i;
    return hnf_basis(b.select_columns(idx));
}

SparseMat congruence_kernel_basis(const SparseMat& a, const Int& d) {
    // { z : A z = 0 mod d } via the kernel of [A | dI] projected to z.
    // The dI columns keep every A-row entry reducible below d throughout.
    std::vector<Col> cols(static_cast<size_t>(a.ncols + a.nrows));
    for (int i = 0; i < a.nrows; ++i)
        for (const auto& [j, v] : a.rows[i]) {
            Int r = mod_canonical(v, d);
            if (2 * r > d) r -= d;
            if (r != 0) cols[j].emplace(i, r);
        }
    for (int j = 0; j < a.ncols; ++j) cols[j].emplace(a.nrows + j, Int(1));
    for (int i = 0; i < a.nrows; ++i) cols[a.ncols + i].emplace(i, d);
    auto done = echelonize_cols(std::move(cols), a.nrows, false);
    MatBuilder bottom(a.ncols, static_cast<int>(done.size()));
    int nkeep = 0;
    for (const auto& c : done) {
        if (c.empty() || top_row(c) < a.nrows) continue;
        for (const auto& [r, v] : c) bottom.add(r - a.nrows, nkeep, v);
        ++nkeep;
    }
    SparseMat b = bottom.build();
    std::vector<int> idx(static_cast<size_t>(nkeep));
    for (int i = 0; i < nkeep; ++i) idx[static_cast<size_t>(i)] = i;
    return hnf_basis(b.select_columns(idx));
}

SparseMat kernel_lattice(const SparseMat& m, const FgAbGroup& target) {
    if (m.nrows != target.gens()) throw InvariantError("kernel_lattice shape mismatch");
    SparseMat basis = SparseMat::identity(m.ncols);

    auto restrict_rows = [&](const std::vector<int>& idx) {
        SparseMat sub(static_cast<int>(idx.size()), m.ncols);
        for (size_t a = 0; a < idx.size(); ++a) sub.rows[a] = m.rows[static_cast<size_t>(idx[a])];
        return sub;
    };

    // exact equations from free target rows
    std::vector<int> free_rows;
    for (int i = target.torsion_gens(); i < target.gens(); ++i) free_rows.push_back(i);
    if (!free_rows.empty()) {
        SparseMat a = restrict_rows(free_rows).mul(basis);
        basis = basis.mul(integer_kernel_basis(a));
    }

    // congruences grouped by invariant factor
    std::map<Int, std::vector<int>> by_mod;
    for (int i = 0; i < target.torsion_gens(); ++i) by_mod[target.gen_order(i)].push_back(i);
    for (const auto& [d, idx] : by_mod) {
        if (basis.ncols == 0) break;
        SparseMat a = restrict_rows(idx).mul(basis);
        basis = basis.mul(congruence_kernel_basis(a, d));
    }
    return hnf_basis(basis);
}

bool Subgroup::contains(const Subgroup& other) const {
    if (!(ambient == other.ambient)) throw InvariantError("subgroup ambient mismatch");
    for (int j = 0; j < other.basis.ncols; ++j)
        if (!hnf_solve(basis, other.basis.column_vec(j))) return false;
    return true;
}

bool Subgroup::is_full() const { return basis == SparseMat::identity(ambient.gens()); }

Subgroup subgroup_from_columns(const FgAbGroup& ambient, const SparseMat& columns) {
    return Subgroup{ambient, hnf_basis(columns.hcat(ambient.relations()))};
}

Subgroup image_subgroup(const Homomorphism& h) {
    return subgroup_from_columns(h.target(), h.matrix());
}

Subgroup full_subgroup(const FgAbGroup& g) {
    return Subgroup{g, SparseMat::identity(g.gens())};
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    if (!(a.ambient == b.ambient)) throw InvariantError("subgroup ambient mismatch");
    // x = A u = B w  <=>  (u;w) in ker [A | -B]; project to A u
    SparseMat ker = integer_kernel_basis(a.basis.hcat(b.basis.scaled(Int(-1))));
    SparseMat upart(a.basis.ncols, ker.ncols);
    for (int i = 0; i < a.basis.ncols; ++i) upart.rows[i] = ker.rows[i];
    return Subgroup{a.ambient, hnf_basis(a.basis.mul(upart))};
}

Subquotient Subquotient::make(const FgAbGroup& ambient, const SparseMat& lattice_basis,
                              const SparseMat& relation_columns) {
    Subquotient sq;
    sq.ambient_ = ambient;
    sq.lattice_ = lattice_basis;
    const int q = lattice_basis.ncols;

    MatBuilder cb(q, relation_columns.ncols);
    for (int j = 0; j < relation_columns.ncols; ++j) {
        auto c = hnf_solve(lattice_basis, relation_columns.column_vec(j));
        if (!c) throw InvariantError("relation outside the presented lattice");
        for (int i = 0; i < q; ++i) cb.add(i, j, (*c)[static_cast<size_t>(i)]);
    }
    SparseMat rel = cb.build();

    // All-torsion ambients have a finite exponent E with E*Z^q inside the
    // relation span (the callers always pass the ambient relations), so the
    // presentation can be reduced mod E throughout: append the E e_i columns
    // and let the Smith routine reduce. Without that, bar-complex
    // presentations blow up their coefficients.
    std::optional<Int> exponent;
    if (ambient.is_finite() && ambient.gens() > 0 && q > 0) {
        exponent = ambient.torsion().back();
        rel = rel.hcat(SparseMat::identity(q).scaled(*exponent));
    }
    rel = hnf_basis(rel);

    SmithOptions opt;
    opt.want_u = true;
    opt.want_uinv = true;
    opt.modulus = exponent;
    auto s = smith_normal_form(rel, opt);
    sq.u_ = s.u;
    sq.uinv_ = s.uinv;

    std::vector<Int> torsion;
    long rank = 0;
    for (int t = 0; t < q; ++t) {
        Int d = (t < s.rank) ? s.diag[static_cast<size_t>(t)] : Int(0);
        if (exponent) d = (d == 0) ? *exponent : gcd(d, *exponent);
        if (d == 1) continue;
        sq.picked_.push_back(t);
        if (d == 0)
            ++rank;
        else
            torsion.push_back(d);
    }
    sq.group_ = FgAbGroup::of(rank, std::move(torsion));
    return sq;
}

std::vector<Int> Subquotient::representative(int i) const {
    std::vector<Int> e(static_cast<size_t>(lattice_.ncols), Int(0));
    int t = picked_[static_cast<size_t>(i)];
    for (int a = 0; a < uinv_.nrows; ++a) {
        Int v = uinv_.at(a, t);
        if (v != 0) e[static_cast<size_t>(a)] = v;
    }
    return lattice_.apply(e);
}

SparseMat Subquotient::representatives() const {
    MatBuilder b(ambient_.gens(), group_.gens());
    for (int i = 0; i < group_.gens(); ++i) {
        auto r = representative(i);
        for (size_t a = 0; a < r.size(); ++a) b.add(static_cast<int>(a), i, r[a]);
    }
    return b.build();
}

std::vector<Int> Subquotient::coordinates(const std::vector<Int>& ambient_elt) const {
    auto c = hnf_solve(lattice_, ambient_elt);
    if (!c) throw InvariantError("element outside the presented lattice");
    auto y = u_.apply(*c);
    std::vector<Int> out(static_cast<size_t>(group_.gens()), Int(0));
    for (int i = 0; i < group_.gens(); ++i) {
        Int v = y[static_cast<size_t>(picked_[static_cast<size_t>(i)])];
        Int d = group_.gen_order(i);
        out[static_cast<size_t>(i)] = (d == 0) ? v : mod_canonical(v, d);
    }
    return out;
}

SparseMat Subquotient::coordinate_matrix() const {
    MatBuilder b(group_.gens(), ambient_.gens());
    for (int j = 0; j < ambient_.gens(); ++j) {
        std::vector<Int> e(static_cast<size_t>(ambient_.gens()), Int(0));
        e[static_cast<size_t>(j)] = 1;
        auto y = coordinates(e);
        for (int i = 0; i < group_.gens(); ++i) b.add(i, j, y[static_cast<size_t>(i)]);
    }
    return b.build();
}

KernelResult kernel(const Homomorphism& h) {
    if (auto bad = h.diagnose()) throw InputError("ill-formed homomorphism: " + *bad);
    SparseMat w = kernel_lattice(h.matrix(), h.target());
    auto pres = Subquotient::make(h.source(), w, h.source().relations());
    Homomorphism incl(pres.group(), h.source(), pres.representatives());
    return KernelResult{pres.group(), std::move(incl), std::move(pres)};
}

CokernelResult cokernel(const Homomorphism& h) {
    if (auto bad = h.diagnose()) throw InputError("ill-formed homomorphism: " + *bad);
    const FgAbGroup& b = h.target();
    auto pres = Subquotient::make(b, SparseMat::identity(b.gens()),
                                  h.matrix().hcat(b.relations()));
    Homomorphism proj(b, pres.group(), pres.coordinate_matrix());
    return CokernelResult{pres.group(), std::move(proj), std::move(pres)};
}

HomologyResult homology_at(const Homomorphism& d_in, const Homomorphism& d_out) {
    if (!(d_in.target() == d_out.source()))
        throw InvariantError("homology_at: differentials not composable");
    if (!d_out.compose_after(d_in).is_zero_map())
        throw InvariantError("homology_at: composite differential is nonzero");
    const FgAbGroup& b = d_out.source();
    SparseMat w = kernel_lattice(d_out.matrix(), d_out.target());
    auto pres = Subquotient::make(b, w, d_in.matrix().hcat(b.relations()));
    return HomologyResult{pres.group(), std::move(pres)};
}

FgAbGroup subquotient_group_only(const FgAbGroup& ambient, const SparseMat& lattice_basis,
                                 const SparseMat& relation_columns) {
    const int q = lattice_basis.ncols;
    MatBuilder cb(q, relation_columns.ncols);
    for (int j = 0; j < relation_columns.ncols; ++j) {
        auto c = hnf_solve(lattice_basis, relation_columns.column_vec(j));
        if (!c) throw InvariantError("relation outside the presented lattice");
        for (int i = 0; i < q; ++i) cb.add(i, j, (*c)[static_cast<size_t>(i)]);
    }
    SparseMat rel = cb.build();
    std::optional<Int> exponent;
    if (ambient.is_finite() && ambient.gens() > 0 && q > 0) {
        exponent = ambient.torsion().back();
        rel = rel.hcat(SparseMat::identity(q).scaled(*exponent));
    }
    rel = hnf_basis(rel);
    SmithOptions opt;
    opt.modulus = exponent;
    auto s = smith_normal_form(rel, opt);
    std::vector<Int> torsion;
    long rank = 0;
    for (int t = 0; t < q; ++t) {
        Int d = (t < s.rank) ? s.diag[static_cast<size_t>(t)] : Int(0);
        if (exponent) d = (d == 0) ? *exponent : gcd(d, *exponent);
        if (d == 1) continue;
        if (d == 0)
            ++rank;
        else
            torsion.push_back(d);
    }
    return FgAbGroup::of(rank, std::move(torsion));
}

FgAbGroup homology_group_at(const Homomorphism& d_in, const Homomorphism& d_out) {
    if (!(d_in.target() == d_out.source()))
        throw InvariantError("homology_at: differentials not composable");
    if (!d_out.compose_after(d_in).is_zero_map())
        throw InvariantError("homology_at: composite differential is nonzero");
    const FgAbGroup& b = d_out.source();
    SparseMat w = kernel_lattice(d_out.matrix(), d_out.target());
    return subquotient_group_only(b, w, d_in.matrix().hcat(b.relations()));
}

Homomorphism induced_map(const Subquotient& src, const Subquotient& dst,
                         const SparseMat& ambient_map) {
    MatBuilder b(dst.group().gens(), src.group().gens());
    for (int j = 0; j < src.group().gens(); ++j) {
        auto image = ambient_map.apply(src.representative(j));
        auto y = dst.coordinates(image);
        for (int i = 0; i < dst.group().gens(); ++i) b.add(i, j, y[static_cast<size_t>(i)]);
    }
    return Homomorphism(src.group(), dst.group(), b.build());
}

FgAbGroup subgroup_group(const Subgroup& s) {
    return Subquotient::make(s.ambient, s.basis, s.ambient.relations()).group();
}

bool is_surjective(const Homomorphism& h) { return image_subgroup(h).is_full(); }

bool is_injective(const Homomorphism& h) { return kernel(h).group.is_trivial(); }

bool is_isomorphism(const Homomorphism& h) {
    return are_isomorphic(h.source(), h.target()) && is_surjective(h) && is_injective(h);
}

}  // namespace prodesc
