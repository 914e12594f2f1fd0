#include "prodesc/descent.hpp"

#include <algorithm>
#include <sstream>

#include "prodesc/errors.hpp"

namespace prodesc {

namespace {

SparseMat blockdiag_over_tuples(const SparseMat& m, long long ntuples) {
    MatBuilder b(static_cast<int>(m.nrows * ntuples), static_cast<int>(m.ncols * ntuples));
    for (int r = 0; r < m.nrows; ++r)
        for (const auto& [c, v] : m.rows[r])
            for (long long t = 0; t < ntuples; ++t)
                b.add(static_cast<int>(r * ntuples + t), static_cast<int>(c * ntuples + t), v);
    return b.build();
}

long long powll(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

bool gchain_equal(const GChainComplex& a, const GChainComplex& b) {
    if (a.lo != b.lo || a.modules.size() != b.modules.size()) return false;
    for (size_t k = 0; k < a.modules.size(); ++k) {
        if (!(a.modules[k].underlying == b.modules[k].underlying) ||
            a.modules[k].level != b.modules[k].level || !(a.modules[k].action == b.modules[k].action))
            return false;
    }
    return a.diffs == b.diffs;
}

}  // namespace

GChainComplex make_gchain(int lo, std::vector<DiscreteGModule> modules,
                          std::vector<Homomorphism> diffs) {
    if (modules.empty()) throw InputError("chain complex needs at least one module");
    if (diffs.size() + 1 != modules.size())
        throw InputError("chain complex needs one differential per gap");
    GChainComplex x;
    x.lo = lo;
    x.modules = std::move(modules);
    x.diffs = std::move(diffs);
    for (size_t k = 0; k < x.diffs.size(); ++k) {
        if (!(x.diffs[k].source() == x.modules[k + 1].underlying) ||
            !(x.diffs[k].target() == x.modules[k].underlying))
            throw InputError("chain differential endpoints mismatch");
        if (auto bad = x.diffs[k].diagnose()) throw InputError("chain differential: " + *bad);
        if (!is_equivariant(x.modules[k + 1], x.modules[k], x.diffs[k]))
            throw InvariantError("chain differential is not equivariant");
        if (k > 0 && !x.diffs[k - 1].compose_after(x.diffs[k]).is_zero_map())
            throw InvariantError("chain complex has d o d != 0");
    }
    return x;
}

Subquotient homotopy_class(const GChainComplex& x, int t) {
    if (!x.has_degree(t)) {
        auto z = FgAbGroup::zero();
        return Subquotient::make(z, SparseMat::identity(0), SparseMat::zero(0, 0));
    }
    const FgAbGroup& g = x.module_at(t).underlying;
    Homomorphism d_in = (t + 1 <= x.hi()) ? x.diffs[static_cast<size_t>(t - x.lo)]
                                          : Homomorphism::zero(FgAbGroup::zero(), g);
    Homomorphism d_out = (t - 1 >= x.lo) ? x.diffs[static_cast<size_t>(t - 1 - x.lo)]
                                         : Homomorphism::zero(g, FgAbGroup::zero());
    return homology_at(d_in, d_out).pres;
}

FgAbGroup homotopy(const GChainComplex& x, int t) { return homotopy_class(x, t).group(); }

GComplexTower validate_gcomplex_tower(GComplexTower t) {
    if (t.head.empty()) throw InputError("complex tower needs at least one level");
    if (t.maps.size() + 1 != t.head.size())
        throw InputError("complex tower needs one chain map per adjacent pair");
    const int lo = t.head.front().lo;
    const int size = static_cast<int>(t.head.front().modules.size());
    for (const auto& x : t.head)
        if (x.lo != lo || static_cast<int>(x.modules.size()) != size)
            throw InputError("complex tower levels must share the degree range");
    for (size_t i = 0; i < t.maps.size(); ++i) {
        if (static_cast<int>(t.maps[i].size()) != size)
            throw InputError("chain map must cover every degree");
        for (int k = 0; k < size; ++k) {
            const auto& f = t.maps[i][static_cast<size_t>(k)];
            if (!(f.source() == t.head[i + 1].modules[static_cast<size_t>(k)].underlying) ||
                !(f.target() == t.head[i].modules[static_cast<size_t>(k)].underlying))
                throw InputError("chain map endpoints mismatch");
            if (!is_equivariant(t.head[i + 1].modules[static_cast<size_t>(k)],
                                t.head[i].modules[static_cast<size_t>(k)], f))
                throw InvariantError("tower chain map is not equivariant");
        }
        // chain maps commute with the differentials
        for (int k = 0; k + 1 < size; ++k) {
            auto left = t.maps[i][static_cast<size_t>(k)].compose_after(
                t.head[i + 1].diffs[static_cast<size_t>(k)]);
            auto right = t.head[i].diffs[static_cast<size_t>(k)].compose_after(
                t.maps[i][static_cast<size_t>(k + 1)]);
            if (!(left == right))
                throw InvariantError("tower chain map does not commute with the differential");
        }
    }
    if (t.period) {
        int p = *t.period;
        if (p < 1 || t.head_length() < p + 1)
            throw InputError("periodic rule needs head length > period");
        for (size_t i = static_cast<size_t>(p); i < t.head.size(); ++i)
            if (!gchain_equal(t.head[i], t.head[i - static_cast<size_t>(p)]))
                throw InvariantError("declared periodicity is not structurally exact (complexes)");
        for (size_t i = static_cast<size_t>(p); i < t.maps.size(); ++i)
            if (!(t.maps[i] == t.maps[i - static_cast<size_t>(p)]))
                throw InvariantError("declared periodicity is not structurally exact (chain maps)");
    }
    return t;
}

GComplexTower materialize(const GComplexTower& t, int levels) {
    GComplexTower out;
    out.period = t.period;
    int avail = t.head_length();
    int want = t.period ? std::max(levels, avail) : std::min(levels, avail);
    for (int i = 0; i < want; ++i) {
        int idx = i;
        while (idx >= avail) idx -= *t.period;
        out.head.push_back(t.head[static_cast<size_t>(idx)]);
    }
    int mavail = static_cast<int>(t.maps.size());
    for (int i = 0; i + 1 < want; ++i) {
        int idx = i;
        while (idx >= mavail) idx -= *t.period;
        out.maps.push_back(t.maps[static_cast<size_t>(idx)]);
    }
    return out;
}

GComplexTower constant_gcomplex_tower(const GChainComplex& x, int head_length) {
    GComplexTower t;
    for (int i = 0; i < head_length; ++i) {
        t.head.push_back(x);
        if (i + 1 < head_length) {
            std::vector<Homomorphism> id;
            for (const auto& m : x.modules) id.push_back(Homomorphism::identity(m.underlying));
            t.maps.push_back(std::move(id));
        }
    }
    t.period = 1;
    return validate_gcomplex_tower(std::move(t));
}

std::map<int, HolimCell> holim(const GComplexTower& raw, int horizon) {
    GComplexTower t = validate_gcomplex_tower(raw);
    const int L = t.period ? horizon + 1 : t.head_length();
    GComplexTower mt = materialize(t, L);
    const int lo = mt.head.front().lo, hi = mt.head.front().hi();

    std::map<int, HolimCell> out;
    std::map<int, AbTower> htowers;
    for (int deg = lo; deg <= hi; ++deg) {
        std::vector<Subquotient> pres;
        for (const auto& x : mt.head) pres.push_back(homotopy_class(x, deg));
        AbTower ht;
        for (const auto& p : pres) ht.groups.push_back(p.group());
        for (size_t i = 0; i + 1 < pres.size(); ++i)
            ht.maps.push_back(induced_map(pres[i + 1], pres[i],
                                          mt.maps[i][static_cast<size_t>(deg - lo)].matrix()));
        if (mt.period && static_cast<int>(ht.groups.size()) > *mt.period) {
            bool ok = true;
            int p = *mt.period;
            for (size_t i = static_cast<size_t>(p); i < ht.groups.size() && ok; ++i)
                ok = ht.groups[i] == ht.groups[i - static_cast<size_t>(p)];
            for (size_t i = static_cast<size_t>(p); i < ht.maps.size() && ok; ++i)
                ok = ht.maps[i] == ht.maps[i - static_cast<size_t>(p)];
            if (ok) ht.period = p;
        }
        htowers.emplace(deg, std::move(ht));
    }

    auto zero_tower = [&] {
        AbTower z;
        z.groups = {FgAbGroup::zero()};
        return z;
    };

    bool any_indefinite = false;
    for (int deg = lo - 1; deg <= hi; ++deg) {
        HolimCell cell;
        const AbTower& qt = htowers.count(deg) ? htowers.at(deg) : zero_tower();
        const AbTower& st = htowers.count(deg + 1) ? htowers.at(deg + 1) : zero_tower();
        cell.quotient = tower_lim(qt, horizon);
        cell.sub = tower_lim1(st, horizon);
        any_indefinite |= cell.sub == Lim1::undetermined ||
                          cell.quotient.ml.kind == MlKind::undetermined;
        out.emplace(deg, std::move(cell));
    }
    if (any_indefinite) {
        bool all_surjective = true;
        for (const auto& level_maps : mt.maps)
            for (const auto& f : level_maps) all_surjective &= is_surjective(f);
        if (!all_surjective)
            throw InputError(
                "decomposition not valid: homotopy towers lack certificates and the tower is "
                "not levelwise surjective");
    }
    return out;
}

namespace {

// Everything the E2 pipelines need per materialized level: the classes
// A^{n,t} = H_t(Map(Q^n, X_*)) with their cofaces and tower transitions.
struct E2Grid {
    int lo = 0, hi = 0, n_max = 0, levels = 0;
    long long q = 1;
    // a[i][t-lo][n], cofaces f[i][t-lo][n] : A^n -> A^{n+1}
    std::vector<std::vector<std::vector<Subquotient>>> a;
    std::vector<std::vector<std::vector<Homomorphism>>> f;
    // itrans[i][t-lo][n] : A_{i+1} -> A_i
    std::vector<std::vector<std::vector<Homomorphism>>> itrans;
    std::optional<int> period;
};

E2Grid build_grid(const GComplexTower& raw, int n_max, int depth, int horizon) {
    GComplexTower t = validate_gcomplex_tower(raw);
    const int L = t.period ? horizon + 1 : t.head_length();
    GComplexTower mt = materialize(t, L);
    E2Grid g;
    g.lo = mt.head.front().lo;
    g.hi = mt.head.front().hi();
    g.n_max = n_max;
    g.levels = mt.head_length();
    g.period = mt.period;
    const auto& tower = *mt.head.front().modules.front().tower;
    g.q = tower.level(depth).order;
    const int size = g.hi - g.lo + 1;

    // per level: the Gamma-fixed complexes of each chain module and the
    // blockdiagonal chain differentials per cosimplicial degree
    std::vector<std::vector<CochainComplex>> gf(static_cast<size_t>(g.levels));
    std::vector<std::vector<std::vector<SparseMat>>> chain_d(static_cast<size_t>(g.levels));
    for (int i = 0; i < g.levels; ++i) {
        for (int k = 0; k < size; ++k)
            gf[static_cast<size_t>(i)].push_back(gamma_fixed_complex(
                mt.head[static_cast<size_t>(i)].modules[static_cast<size_t>(k)], depth, n_max));
        chain_d[static_cast<size_t>(i)].resize(static_cast<size_t>(n_max + 1));
        for (int n = 0; n <= n_max; ++n)
            for (int k = 0; k + 1 < size; ++k)
                chain_d[static_cast<size_t>(i)][static_cast<size_t>(n)].push_back(
                    blockdiag_over_tuples(
                        mt.head[static_cast<size_t>(i)].diffs[static_cast<size_t>(k)].matrix(),
                        powll(g.q, n)));
        // cofaces commute with the chain differentials (cosimplicial identity
        // check at the chain level)
        for (int n = 0; n < n_max; ++n)
            for (int k = 0; k + 1 < size; ++k) {
                const auto& ga = gf[static_cast<size_t>(i)][static_cast<size_t>(k)];
                const auto& gb = gf[static_cast<size_t>(i)][static_cast<size_t>(k + 1)];
                SparseMat left = reduce_mod_target(
                    ga.diff(n).matrix().mul(
                        chain_d[static_cast<size_t>(i)][static_cast<size_t>(n)][static_cast<size_t>(k)]),
                    ga.group(n + 1));
                SparseMat right = reduce_mod_target(
                    chain_d[static_cast<size_t>(i)][static_cast<size_t>(n + 1)][static_cast<size_t>(k)]
                        .mul(gb.diff(n).matrix()),
                    ga.group(n + 1));
                if (!(left == right))
                    throw InvariantError("coface does not commute with the chain differential");
            }
    }

    g.a.resize(static_cast<size_t>(g.levels));
    g.f.resize(static_cast<size_t>(g.levels));
    for (int i = 0; i < g.levels; ++i) {
        g.a[static_cast<size_t>(i)].resize(static_cast<size_t>(size));
        g.f[static_cast<size_t>(i)].resize(static_cast<size_t>(size));
        for (int k = 0; k < size; ++k) {
            for (int n = 0; n <= n_max; ++n) {
                const auto& cx = gf[static_cast<size_t>(i)];
                const FgAbGroup& mid = cx[static_cast<size_t>(k)].group(n);
                Homomorphism d_in =
                    (k + 1 < size)
                        ? Homomorphism(cx[static_cast<size_t>(k + 1)].group(n), mid,
                                       chain_d[static_cast<size_t>(i)][static_cast<size_t>(n)]
                                              [static_cast<size_t>(k)])
                        : Homomorphism::zero(FgAbGroup::zero(), mid);
                Homomorphism d_out =
                    (k > 0) ? Homomorphism(mid, cx[static_cast<size_t>(k - 1)].group(n),
                                           chain_d[static_cast<size_t>(i)][static_cast<size_t>(n)]
                                                  [static_cast<size_t>(k - 1)])
                            : Homomorphism::zero(mid, FgAbGroup::zero());
                g.a[static_cast<size_t>(i)][static_cast<size_t>(k)].push_back(
                    homology_at(d_in, d_out).pres);
            }
            for (int n = 0; n < n_max; ++n)
                g.f[static_cast<size_t>(i)][static_cast<size_t>(k)].push_back(induced_map(
                    g.a[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(n)],
                    g.a[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(n + 1)],
                    gf[static_cast<size_t>(i)][static_cast<size_t>(k)].diff(n).matrix()));
        }
    }

    g.itrans.resize(static_cast<size_t>(std::max(g.levels - 1, 0)));
    for (int i = 0; i + 1 < g.levels; ++i) {
        g.itrans[static_cast<size_t>(i)].resize(static_cast<size_t>(size));
        for (int k = 0; k < size; ++k)
            for (int n = 0; n <= n_max; ++n) {
                SparseMat chain = blockdiag_over_tuples(
                    mt.maps[static_cast<size_t>(i)][static_cast<size_t>(k)].matrix(),
                    powll(g.q, n));
                g.itrans[static_cast<size_t>(i)][static_cast<size_t>(k)].push_back(induced_map(
                    g.a[static_cast<size_t>(i + 1)][static_cast<size_t>(k)][static_cast<size_t>(n)],
                    g.a[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(n)],
                    chain));
            }
    }
    return g;
}

// cohomology classes of the cosimplicial direction per level
struct BTower {
    std::vector<Subquotient> pres;  // over ambient A^{s,t} groups
    std::vector<Homomorphism> maps;
};

BTower b_tower(const E2Grid& g, int s, int t) {
    BTower bt;
    if (t < g.lo || t > g.hi) {
        for (int i = 0; i < g.levels; ++i) {
            auto z = FgAbGroup::zero();
            bt.pres.push_back(Subquotient::make(z, SparseMat::identity(0), SparseMat::zero(0, 0)));
            if (i > 0) bt.maps.push_back(Homomorphism::zero(z, z));
        }
        return bt;
    }
    const int k = t - g.lo;
    for (int i = 0; i < g.levels; ++i) {
        const auto& arow = g.a[static_cast<size_t>(i)][static_cast<size_t>(k)];
        const auto& frow = g.f[static_cast<size_t>(i)][static_cast<size_t>(k)];
        Homomorphism d_in = (s > 0) ? frow[static_cast<size_t>(s - 1)]
                                    : Homomorphism::zero(FgAbGroup::zero(),
                                                         arow[static_cast<size_t>(s)].group());
        Homomorphism d_out = (s < g.n_max)
                                 ? frow[static_cast<size_t>(s)]
                                 : Homomorphism::zero(arow[static_cast<size_t>(s)].group(),
                                                      FgAbGroup::zero());
        bt.pres.push_back(homology_at(d_in, d_out).pres);
    }
    for (int i = 0; i + 1 < g.levels; ++i)
        bt.maps.push_back(induced_map(
            bt.pres[static_cast<size_t>(i + 1)], bt.pres[static_cast<size_t>(i)],
            g.itrans[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(s)]
                .matrix()));
    return bt;
}

AbTower to_ab(const BTower& bt, std::optional<int> period) {
    AbTower t;
    for (const auto& p : bt.pres) t.groups.push_back(p.group());
    t.maps = bt.maps;
    if (period && static_cast<int>(t.groups.size()) > *period) {
        bool ok = true;
        int p = *period;
        for (size_t i = static_cast<size_t>(p); i < t.groups.size() && ok; ++i)
            ok = t.groups[i] == t.groups[i - static_cast<size_t>(p)];
        for (size_t i = static_cast<size_t>(p); i < t.maps.size() && ok; ++i)
            ok = t.maps[i] == t.maps[i - static_cast<size_t>(p)];
        if (ok) t.period = p;
    }
    return t;
}

AbTower a_tower(const E2Grid& g, int n, int t) {
    AbTower out;
    if (t < g.lo || t > g.hi) {
        out.groups.assign(static_cast<size_t>(g.levels), FgAbGroup::zero());
        for (int i = 0; i + 1 < g.levels; ++i)
            out.maps.push_back(Homomorphism::zero(FgAbGroup::zero(), FgAbGroup::zero()));
        return out;
    }
    const int k = t - g.lo;
    for (int i = 0; i < g.levels; ++i)
        out.groups.push_back(
            g.a[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(n)].group());
    for (int i = 0; i + 1 < g.levels; ++i)
        out.maps.push_back(
            g.itrans[static_cast<size_t>(i)][static_cast<size_t>(k)][static_cast<size_t>(n)]);
    if (g.period && static_cast<int>(out.groups.size()) > *g.period) {
        bool ok = true;
        int p = *g.period;
        for (size_t i = static_cast<size_t>(p); i < out.groups.size() && ok; ++i)
            ok = out.groups[i] == out.groups[i - static_cast<size_t>(p)];
        for (size_t i = static_cast<size_t>(p); i < out.maps.size() && ok; ++i)
            ok = out.maps[i] == out.maps[i - static_cast<size_t>(p)];
        if (ok) out.period = p;
    }
    return out;
}

// the limit complex node for a certified A-tower: either the zero group or
// the stable image at level 0 with its presentation
struct LimitNode {
    bool zero = true;
    std::optional<Subquotient> pres;  // over the level-0 A-group
};

std::optional<std::vector<LimitNode>> limit_nodes(const E2Grid& g, int t, int horizon) {
    std::vector<LimitNode> nodes(static_cast<size_t>(g.n_max + 1));
    if (t < g.lo || t > g.hi) return nodes;  // all zero
    const int k = t - g.lo;
    for (int n = 0; n <= g.n_max; ++n) {
        AbTower at = a_tower(g, n, t);
        ProGroup lim = tower_lim(at, horizon);
        if (!lim.lim_value) return std::nullopt;
        if (lim.lim_value->is_trivial()) continue;
        // nonzero exact values only arise from stable images constant up to
        // isomorphism; rebuild the stable image at level 0
        if (lim.ml.kind != MlKind::certified) return std::nullopt;
        Homomorphism acc;
        const int kk = lim.ml.k;
        if (kk >= g.levels) return std::nullopt;
        for (int j = 1; j <= kk; ++j) {
            const auto& step = g.itrans[static_cast<size_t>(j - 1)][static_cast<size_t>(k)]
                                       [static_cast<size_t>(n)];
            acc = (j == 1) ? step : acc.compose_after(step);
        }
        Subgroup s = (kk == 0)
                         ? full_subgroup(at.groups.front())
                         : image_subgroup(acc);
        nodes[static_cast<size_t>(n)].zero = false;
        nodes[static_cast<size_t>(n)].pres =
            Subquotient::make(s.ambient, s.basis, s.ambient.relations());
    }
    return nodes;
}

std::optional<FgAbGroup> limit_complex_cohomology(const E2Grid& g, int t, int s, int horizon) {
    auto nodes = limit_nodes(g, t, horizon);
    if (!nodes) return std::nullopt;
    // assemble the complex of stable values with induced cofaces
    std::vector<FgAbGroup> groups;
    std::vector<Homomorphism> homs;
    const int k = t - g.lo;
    for (int n = 0; n <= g.n_max; ++n)
        groups.push_back((*nodes)[static_cast<size_t>(n)].zero
                             ? FgAbGroup::zero()
                             : (*nodes)[static_cast<size_t>(n)].pres->group());
    for (int n = 0; n < g.n_max; ++n) {
        const auto& src = (*nodes)[static_cast<size_t>(n)];
        const auto& dst = (*nodes)[static_cast<size_t>(n + 1)];
        if (src.zero || dst.zero) {
            homs.push_back(Homomorphism::zero(groups[static_cast<size_t>(n)],
                                              groups[static_cast<size_t>(n + 1)]));
            continue;
        }
        homs.push_back(induced_map(
            *src.pres, *dst.pres,
            g.f[0][static_cast<size_t>(k)][static_cast<size_t>(n)].matrix()));
    }
    Homomorphism d_in = (s > 0) ? homs[static_cast<size_t>(s - 1)]
                                : Homomorphism::zero(FgAbGroup::zero(),
                                                     groups[static_cast<size_t>(s)]);
    Homomorphism d_out = (s < g.n_max)
                             ? homs[static_cast<size_t>(s)]
                             : Homomorphism::zero(groups[static_cast<size_t>(s)], FgAbGroup::zero());
    return homology_group_at(d_in, d_out);
}

}  // namespace

const E2Cell* E2Page::cell(int s, int t) const {
    for (const auto& c : cells)
        if (c.s == s && c.t == t) return &c;
    return nullptr;
}

E2Page descent_e2(const GComplexTower& t, int s_max, int t_min, int t_max, int n_max,
                  int depth, int horizon) {
    if (n_max < s_max + 1) throw InputError("descent E2 needs n_max >= s_max + 1");
    E2Grid g = build_grid(t, n_max, depth, horizon);
    E2Page page;
    page.s_max = s_max;
    page.t_min = std::max(t_min, g.lo - 1);
    page.t_max = std::min(t_max, g.hi);

    for (int s = 0; s <= s_max; ++s) {
        for (int deg = page.t_min; deg <= page.t_max; ++deg) {
            E2Cell cell;
            cell.s = s;
            cell.t = deg;

            BTower bq = b_tower(g, s, deg);
            cell.quotient = tower_lim(to_ab(bq, g.period), horizon);

            // sub layer: lim^1 of the levelwise cohomology one homotopy
            // degree up (exact Milnor term on row zero)
            cell.sub = (deg + 1 > g.hi) ? Lim1::zero
                                        : tower_lim1(to_ab(b_tower(g, s, deg + 1), g.period), horizon);

            // interchange term of the levelwise route
            cell.interchange =
                (s == 0) ? Lim1::zero
                         : tower_lim1(to_ab(b_tower(g, s - 1, deg), g.period), horizon);

            // the honest limit complex, when every cosimplicial degree has a
            // certified exact limit
            std::optional<FgAbGroup> exact = limit_complex_cohomology(g, deg, s, horizon);
            bool sub_layer_resolved = false;
            if (cell.sub == Lim1::zero) {
                // also require the raw homotopy towers one degree up to have
                // settled certificates
                bool raw_zero = true;
                for (int n = 0; n <= g.n_max && raw_zero; ++n) {
                    Lim1 l1 = (deg + 1 > g.hi) ? Lim1::zero
                                               : tower_lim1(a_tower(g, n, deg + 1), horizon);
                    raw_zero = l1 == Lim1::zero;
                }
                sub_layer_resolved = raw_zero;
                if (!raw_zero) {
                    if (g.q == 1) {
                        // degenerate cosimplicial direction: the sub layer
                        // contributes only on row zero
                        if (s == 0) {
                            cell.sub = (deg + 1 > g.hi)
                                           ? Lim1::zero
                                           : tower_lim1(a_tower(g, 0, deg + 1), horizon);
                            sub_layer_resolved = cell.sub == Lim1::zero;
                        } else {
                            sub_layer_resolved = true;
                        }
                    } else {
                        cell.flags.push_back(
                            "lim^1 layer present above row zero; layers reported separately");
                    }
                }
            }

            if (exact) {
                if (cell.quotient.lim_value && cell.interchange == Lim1::zero &&
                    !are_isomorphic(*cell.quotient.lim_value, *exact))
                    throw InvariantError("levelwise assembly disagrees with the limit complex");
                if (cell.quotient.lim_value && cell.interchange != Lim1::zero &&
                    !are_isomorphic(*cell.quotient.lim_value, *exact))
                    cell.flags.push_back(
                        "limit-complex value absorbs a lim^1 interchange contribution");
                cell.quotient.lim_value = exact;
                if (sub_layer_resolved && cell.sub == Lim1::zero) cell.exact = exact;
            } else if (sub_layer_resolved && cell.sub == Lim1::zero &&
                       cell.interchange == Lim1::zero && cell.quotient.lim_value) {
                cell.exact = cell.quotient.lim_value;
            }

            if (!cell.exact) {
                if (cell.sub == Lim1::nonzero)
                    cell.flags.push_back("nonzero lim^1 sub layer; value split into layers");
                if (cell.interchange == Lim1::nonzero)
                    cell.flags.push_back("nonzero interchange lim^1 between cohomology and limit");
                if (cell.sub == Lim1::undetermined || cell.interchange == Lim1::undetermined ||
                    cell.quotient.ml.kind == MlKind::undetermined)
                    cell.flags.push_back("certificates undetermined within the horizon");
            }
            page.cells.push_back(std::move(cell));
        }
    }
    return page;
}

E2Page jannsen_e2(const GComplexTower& raw, int s_max, int t_min, int t_max, int depth,
                  int horizon) {
    GComplexTower t = validate_gcomplex_tower(raw);
    const int L = t.period ? horizon + 1 : t.head_length();
    GComplexTower mt = materialize(t, L);
    const int lo = mt.head.front().lo, hi = mt.head.front().hi();
    auto tower_ptr = mt.head.front().modules.front().tower;

    E2Page page;
    page.s_max = s_max;
    page.t_min = std::max(t_min, lo - 1);
    page.t_max = std::min(t_max, hi);

    for (int deg = page.t_min; deg <= page.t_max; ++deg) {
        // the tower of homotopy modules in this degree
        ModuleTower ht;
        if (deg >= lo && deg <= hi) {
            std::vector<Subquotient> pres;
            for (const auto& x : mt.head) pres.push_back(homotopy_class(x, deg));
            for (int i = 0; i < mt.head_length(); ++i) {
                const auto& x = mt.head[static_cast<size_t>(i)];
                DiscreteGModule base = inflate(x.module_at(deg), depth);
                std::vector<SparseMat> action;
                for (int gg = 0; gg < base.group().order; ++gg)
                    action.push_back(induced_map(pres[static_cast<size_t>(i)],
                                                 pres[static_cast<size_t>(i)], base.act(gg))
                                         .matrix());
                ht.head.push_back(make_module(tower_ptr, depth,
                                              pres[static_cast<size_t>(i)].group(),
                                              std::move(action)));
                if (i > 0)
                    ht.maps.push_back(induced_map(
                        pres[static_cast<size_t>(i)], pres[static_cast<size_t>(i - 1)],
                        mt.maps[static_cast<size_t>(i - 1)][static_cast<size_t>(deg - lo)]
                            .matrix()));
            }
        } else {
            for (int i = 0; i < mt.head_length(); ++i) {
                ht.head.push_back(trivial_module(tower_ptr, depth, FgAbGroup::zero()));
                if (i > 0)
                    ht.maps.push_back(Homomorphism::zero(FgAbGroup::zero(), FgAbGroup::zero()));
            }
        }
        if (mt.period) {
            // re-verify structural periodicity on the derived tower
            int p = *mt.period;
            bool ok = ht.head_length() > p;
            for (int i = p; i < ht.head_length() && ok; ++i)
                ok = ht.head[static_cast<size_t>(i)].underlying ==
                         ht.head[static_cast<size_t>(i - p)].underlying &&
                     ht.head[static_cast<size_t>(i)].action ==
                         ht.head[static_cast<size_t>(i - p)].action;
            for (size_t i = static_cast<size_t>(p); i < ht.maps.size() && ok; ++i)
                ok = ht.maps[i] == ht.maps[i - static_cast<size_t>(p)];
            if (ok) ht.period = p;
        }
        ModuleTower validated = validate_module_tower(std::move(ht));

        for (int s = 0; s <= s_max; ++s) {
            AssembledCohomology res = h_cont(validated, s, depth, horizon);
            E2Cell cell;
            cell.s = s;
            cell.t = deg;
            cell.quotient = res.quotient;
            cell.sub = res.sub;
            if (cell.sub == Lim1::zero && cell.quotient.lim_value)
                cell.exact = cell.quotient.lim_value;
            for (auto& fl : res.flags) cell.flags.push_back(fl);
            if (cell.sub == Lim1::nonzero)
                cell.flags.push_back("nonzero lim^1 sub piece in the exact sequence");
            page.cells.push_back(std::move(cell));
        }
    }
    return page;
}

bool E2Comparison::all_equal() const {
    for (const auto& c : cells)
        if (c.verdict != CellVerdict::equal) return false;
    return true;
}

std::vector<const CellComparison*> E2Comparison::differences() const {
    std::vector<const CellComparison*> out;
    for (const auto& c : cells)
        if (c.verdict == CellVerdict::differs) out.push_back(&c);
    return out;
}

E2Comparison compare_e2(const GComplexTower& raw, int s_max, int t_min, int t_max, int n_max,
                        int depth, int horizon) {
    GComplexTower t = validate_gcomplex_tower(raw);
    E2Comparison cmp;
    cmp.descent = descent_e2(t, s_max, t_min, t_max, n_max, depth, horizon);
    cmp.jannsen = jannsen_e2(t, s_max, t_min, t_max, depth, horizon);

    // certificates of the raw homotopy towers per degree
    const int L = t.period ? horizon + 1 : t.head_length();
    GComplexTower mt = materialize(t, L);
    const int lo = mt.head.front().lo, hi = mt.head.front().hi();
    std::map<int, MlStatus> homotopy_ml;
    for (int deg = lo; deg <= hi; ++deg) {
        std::vector<Subquotient> pres;
        for (const auto& x : mt.head) pres.push_back(homotopy_class(x, deg));
        AbTower ht;
        for (const auto& p : pres) ht.groups.push_back(p.group());
        for (size_t i = 0; i + 1 < pres.size(); ++i)
            ht.maps.push_back(induced_map(pres[i + 1], pres[i],
                                          mt.maps[i][static_cast<size_t>(deg - lo)].matrix()));
        ht.period = mt.period;
        if (ht.period) {
            bool ok = static_cast<int>(ht.groups.size()) > *ht.period;
            int p = *ht.period;
            for (size_t i = static_cast<size_t>(p); i < ht.groups.size() && ok; ++i)
                ok = ht.groups[i] == ht.groups[i - static_cast<size_t>(p)];
            for (size_t i = static_cast<size_t>(p); i < ht.maps.size() && ok; ++i)
                ok = ht.maps[i] == ht.maps[i - static_cast<size_t>(p)];
            if (!ok) ht.period.reset();
        }
        homotopy_ml.emplace(deg, ml_check(ht, horizon));
    }
    auto ml_of = [&](int deg) {
        auto it = homotopy_ml.find(deg);
        if (it == homotopy_ml.end()) {
            MlStatus st;
            st.kind = MlKind::certified;  // zero towers
            return st;
        }
        return it->second;
    };

    for (const auto& dc : cmp.descent.cells) {
        const E2Cell* jc = cmp.jannsen.cell(dc.s, dc.t);
        if (!jc) continue;
        CellComparison cc;
        cc.s = dc.s;
        cc.t = dc.t;
        MlStatus mlq = ml_of(dc.t), mls = ml_of(dc.t + 1);
        cc.ml_asserted = mlq.kind == MlKind::certified && mls.kind == MlKind::certified;

        bool both_exact = dc.exact.has_value() && jc->exact.has_value();
        bool subs_equal = dc.sub == jc->sub;
        if (both_exact) {
            cc.verdict = are_isomorphic(*dc.exact, *jc->exact) && subs_equal
                             ? CellVerdict::equal
                             : CellVerdict::differs;
        } else if (dc.sub == Lim1::undetermined || jc->sub == Lim1::undetermined ||
                   dc.quotient.ml.kind == MlKind::undetermined ||
                   jc->quotient.ml.kind == MlKind::undetermined) {
            cc.verdict = CellVerdict::undetermined;
        } else if (subs_equal && pro_groups_agree(dc.quotient, jc->quotient)) {
            cc.verdict = CellVerdict::equal;
        } else {
            cc.verdict = CellVerdict::differs;
        }
        if (cc.verdict == CellVerdict::differs) {
            std::ostringstream os;
            os << "descent sub " << static_cast<int>(dc.sub) << " vs jannsen sub "
               << static_cast<int>(jc->sub);
            if (mlq.kind == MlKind::non_ml || mls.kind == MlKind::non_ml)
                os << "; lim^1 witness: " << (mls.kind == MlKind::non_ml ? mls : mlq).reason;
            cc.detail = os.str();
        }
        cmp.cells.push_back(std::move(cc));
    }
    return cmp;
}

CounterexampleReport gamma_tower_counterexample(const ModuleTower& m, int s_max, int depth,
                                                int horizon) {
    if (s_max < 2) throw InputError("counterexample check needs s_max >= 2");
    ModuleTower base = validate_module_tower(m);
    ModuleTower gt = gamma_tower(base, depth);

    CounterexampleReport rep;
    rep.lim1_of_tower = tower_lim1(underlying_tower(base), horizon);
    for (int s = 0; s <= s_max; ++s) rep.by_degree.push_back(h_cont(gt, s, depth, horizon));

    rep.high_degrees_vanish = true;
    for (int s = 2; s <= s_max; ++s)
        rep.high_degrees_vanish &= rep.by_degree[static_cast<size_t>(s)].exact_zero();

    const auto& deg1 = rep.by_degree[1];
    bool quotient_trivial = deg1.quotient.lim_value && deg1.quotient.lim_value->is_trivial();
    rep.degree_one_matches_lim1 = (deg1.sub == rep.lim1_of_tower) && quotient_trivial;

    // independent fixed-point tower for the degree-zero comparison
    const int L = base.period ? horizon + 1 : base.head_length();
    ModuleTower mb = materialize(base, L);
    std::vector<Subquotient> fp;
    for (const auto& mod : mb.head) fp.push_back(fixed_points(inflate(mod, depth)));
    AbTower fpt;
    for (const auto& p : fp) fpt.groups.push_back(p.group());
    for (size_t i = 0; i + 1 < fp.size(); ++i)
        fpt.maps.push_back(induced_map(fp[i + 1], fp[i], mb.maps[i].matrix()));
    if (mb.period) {
        bool ok = static_cast<int>(fpt.groups.size()) > *mb.period;
        int p = *mb.period;
        for (size_t i = static_cast<size_t>(p); i < fpt.groups.size() && ok; ++i)
            ok = fpt.groups[i] == fpt.groups[i - static_cast<size_t>(p)];
        for (size_t i = static_cast<size_t>(p); i < fpt.maps.size() && ok; ++i)
            ok = fpt.maps[i] == fpt.maps[i - static_cast<size_t>(p)];
        if (ok) fpt.period = p;
    }
    rep.fixed_point_limit = tower_lim(fpt, horizon);
    rep.degree_zero_matches_fixed_points =
        pro_groups_agree(rep.by_degree[0].quotient, rep.fixed_point_limit) &&
        rep.by_degree[0].sub == Lim1::zero;
    return rep;
}

}  // namespace prodesc
