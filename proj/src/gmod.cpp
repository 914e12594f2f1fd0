#include "prodesc/gmod.hpp"

#include <sstream>

#include "prodesc/errors.hpp"

namespace prodesc {

namespace {

constexpr long long kMaxCoordinates = 1LL << 22;

long long ipow(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        r *= b;
        if (r > kMaxCoordinates) throw InputError("cochain degree too large for this group size");
    }
    return r;
}

// lexicographic tuple index, first coordinate most significant
long long tuple_index(const std::vector<int>& t, int q) {
    long long idx = 0;
    for (int x : t) idx = idx * q + x;
    return idx;
}

std::vector<int> tuple_decode(long long idx, int q, int n) {
    std::vector<int> t(static_cast<size_t>(n), 0);
    for (int i = n - 1; i >= 0; --i) {
        t[static_cast<size_t>(i)] = static_cast<int>(idx % q);
        idx /= q;
    }
    return t;
}

// coeff * block mapping source tuple ts to target tuple tt, generator-major
void add_tuple_block(MatBuilder& b, long long n_out, long long n_in, long long tt, long long ts,
                     const SparseMat& block, int sign) {
    for (int r = 0; r < block.nrows; ++r)
        for (const auto& [c, v] : block.rows[r])
            b.add(static_cast<int>(r * n_out + tt), static_cast<int>(c * n_in + ts),
                  sign > 0 ? v : -v);
}

}  // namespace

FgAbGroup power_group(const FgAbGroup& m, long long k) {
    if (k < 0) throw InputError("negative power");
    std::vector<Int> torsion;
    torsion.reserve(m.torsion().size() * static_cast<size_t>(k));
    for (const auto& d : m.torsion())
        for (long long i = 0; i < k; ++i) torsion.push_back(d);
    FgAbGroup g = FgAbGroup::of(m.rank() * k, std::move(torsion));
    return g;
}

DiscreteGModule make_module(std::shared_ptr<const ProfiniteTower> tower, int level,
                            FgAbGroup underlying, std::vector<SparseMat> action) {
    if (!tower) throw InputError("module needs a tower");
    if (level < 0 || level > tower->depth()) throw InputError("module level outside tower");
    const FiniteGroup& q = tower->level(level);
    if (static_cast<int>(action.size()) != q.order)
        throw InputError("action must assign a matrix to every group element");
    DiscreteGModule m;
    m.tower = std::move(tower);
    m.level = level;
    m.underlying = std::move(underlying);
    m.action.reserve(action.size());
    for (auto& a : action) m.action.push_back(reduce_mod_target(a, m.underlying));
    // exhaustive action check: identity and multiplicativity
    if (!(m.action[0] == SparseMat::identity(m.underlying.gens())))
        throw InvariantError("action of the identity is not the identity map");
    for (int g = 0; g < q.order; ++g) {
        Homomorphism hg(m.underlying, m.underlying, m.act(g));
        if (auto bad = hg.diagnose())
            throw InvariantError("action matrix is not a homomorphism: " + *bad);
        for (int h = 0; h < q.order; ++h) {
            SparseMat gh = reduce_mod_target(m.act(g).mul(m.act(h)), m.underlying);
            if (!(gh == m.act(q.mul(g, h))))
                throw InvariantError("action is not multiplicative");
        }
    }
    return m;
}

DiscreteGModule trivial_module(std::shared_ptr<const ProfiniteTower> tower, int level,
                               FgAbGroup underlying) {
    const FiniteGroup& q = tower->level(level);
    std::vector<SparseMat> action(static_cast<size_t>(q.order),
                                  SparseMat::identity(underlying.gens()));
    return make_module(std::move(tower), level, std::move(underlying), std::move(action));
}

DiscreteGModule inflate(const DiscreteGModule& m, int to_level) {
    if (to_level < m.level) throw InputError("inflation must go deeper in the tower");
    if (to_level == m.level) return m;
    const FiniteGroup& q = m.tower->level(to_level);
    DiscreteGModule out;
    out.tower = m.tower;
    out.level = to_level;
    out.underlying = m.underlying;
    out.action.reserve(static_cast<size_t>(q.order));
    for (int g = 0; g < q.order; ++g)
        out.action.push_back(m.act(m.tower->project(to_level, m.level, g)));
    return out;
}

DiscreteGModule gamma(const DiscreteGModule& m, int level) {
    DiscreteGModule base = inflate(m, level);
    const FiniteGroup& q = base.group();
    const int n = q.order;
    const int gens = base.underlying.gens();
    DiscreteGModule out;
    out.tower = base.tower;
    out.level = level;
    out.underlying = power_group(base.underlying, n);
    out.action.reserve(static_cast<size_t>(n));
    for (int g = 0; g < n; ++g) {
        MatBuilder b(out.underlying.gens(), out.underlying.gens());
        // (g.f)(g') = f(g' g): value block g' comes from block g'*g
        for (int gp = 0; gp < n; ++gp) {
            int src = q.mul(gp, g);
            for (int r = 0; r < gens; ++r) b.add(r * n + gp, r * n + src, Int(1));
        }
        out.action.push_back(b.build());
    }
    return out;
}

bool is_equivariant(const DiscreteGModule& src, const DiscreteGModule& dst,
                    const Homomorphism& h) {
    int level = std::max(src.level, dst.level);
    DiscreteGModule a = inflate(src, level), b = inflate(dst, level);
    const FiniteGroup& q = a.group();
    for (int g = 0; g < q.order; ++g) {
        SparseMat left = reduce_mod_target(h.matrix().mul(a.act(g)), b.underlying);
        SparseMat right = reduce_mod_target(b.act(g).mul(h.matrix()), b.underlying);
        if (!(left == right)) return false;
    }
    return true;
}

CochainComplex make_complex(std::vector<FgAbGroup> groups, std::vector<Homomorphism> diffs) {
    if (diffs.size() + 1 != groups.size()) throw InputError("complex needs one differential per gap");
    for (size_t n = 0; n < diffs.size(); ++n) {
        if (!(diffs[n].source() == groups[n]) || !(diffs[n].target() == groups[n + 1]))
            throw InputError("differential endpoints do not match the complex");
        if (n > 0 && !diffs[n].compose_after(diffs[n - 1]).is_zero_map()) {
            std::ostringstream os;
            os << "d o d != 0 between degrees " << (n - 1) << " and " << (n + 1);
            throw InvariantError(os.str());
        }
    }
    CochainComplex c;
    c.groups = std::move(groups);
    c.diffs = std::move(diffs);
    return c;
}

CochainComplex inhomogeneous_complex(const DiscreteGModule& m, int level, int n_max) {
    if (n_max < 0) throw InputError("n_max must be nonnegative");
    DiscreteGModule mm = inflate(m, level);
    const FiniteGroup& qg = mm.group();
    const int q = qg.order;
    const int gens = mm.underlying.gens();
    SparseMat ident = SparseMat::identity(gens);

    std::vector<FgAbGroup> groups;
    std::vector<Homomorphism> diffs;
    for (int n = 0; n <= n_max; ++n) groups.push_back(power_group(mm.underlying, ipow(q, n)));
    for (int n = 0; n < n_max; ++n) {
        long long nin = ipow(q, n), nout = ipow(q, n + 1);
        MatBuilder b(static_cast<int>(gens * nout), static_cast<int>(gens * nin));
        std::vector<int> t;
        for (long long to = 0; to < nout; ++to) {
            t = tuple_decode(to, q, n + 1);
            // g_1 . f(g_2..g_{n+1})
            std::vector<int> rest(t.begin() + 1, t.end());
            add_tuple_block(b, nout, nin, to, tuple_index(rest, q), mm.act(t[0]), +1);
            // (-1)^i f(.., g_i g_{i+1}, ..)
            for (int i = 1; i <= n; ++i) {
                std::vector<int> merged;
                merged.reserve(static_cast<size_t>(n));
                for (int a = 0; a < n + 1; ++a) {
                    if (a == i - 1) {
                        merged.push_back(qg.mul(t[static_cast<size_t>(a)], t[static_cast<size_t>(a + 1)]));
                        ++a;
                    } else
                        merged.push_back(t[static_cast<size_t>(a)]);
                }
                add_tuple_block(b, nout, nin, to, tuple_index(merged, q), ident,
                                (i % 2 == 0) ? +1 : -1);
            }
            // (-1)^{n+1} f(g_1..g_n)
            std::vector<int> front(t.begin(), t.end() - 1);
            add_tuple_block(b, nout, nin, to, tuple_index(front, q), ident,
                            ((n + 1) % 2 == 0) ? +1 : -1);
        }
        diffs.emplace_back(groups[static_cast<size_t>(n)], groups[static_cast<size_t>(n + 1)],
                           b.build());
    }
    return make_complex(std::move(groups), std::move(diffs));
}

CochainComplex homogeneous_fixed_complex(const DiscreteGModule& m, int level, int n_max) {
    if (n_max < 0) throw InputError("n_max must be nonnegative");
    DiscreteGModule mm = inflate(m, level);
    const FiniteGroup& qg = mm.group();
    const int q = qg.order;
    const int gens = mm.underlying.gens();
    SparseMat ident = SparseMat::identity(gens);

    // fixed cochains of Map(Q^{n+1}, M) are free on the orbit representatives
    // (e, x_1..x_n); evaluation elsewhere translates by the diagonal action
    std::vector<FgAbGroup> groups;
    std::vector<Homomorphism> diffs;
    for (int n = 0; n <= n_max; ++n) groups.push_back(power_group(mm.underlying, ipow(q, n)));
    for (int n = 0; n < n_max; ++n) {
        long long nin = ipow(q, n), nout = ipow(q, n + 1);
        MatBuilder b(static_cast<int>(gens * nout), static_cast<int>(gens * nin));
        std::vector<int> t;
        for (long long to = 0; to < nout; ++to) {
            t = tuple_decode(to, q, n + 1);
            // omit the leading e: x_1 . f~(x_1^-1 x_2, .., x_1^-1 x_{n+1})
            int x1inv = qg.inverse(t[0]);
            std::vector<int> shifted;
            shifted.reserve(static_cast<size_t>(n));
            for (int a = 1; a < n + 1; ++a) shifted.push_back(qg.mul(x1inv, t[static_cast<size_t>(a)]));
            add_tuple_block(b, nout, nin, to, tuple_index(shifted, q), mm.act(t[0]), +1);
            // omit x_i for i = 1..n+1
            for (int i = 1; i <= n + 1; ++i) {
                std::vector<int> omitted;
                omitted.reserve(static_cast<size_t>(n));
                for (int a = 0; a < n + 1; ++a)
                    if (a != i - 1) omitted.push_back(t[static_cast<size_t>(a)]);
                add_tuple_block(b, nout, nin, to, tuple_index(omitted, q), ident,
                                (i % 2 == 0) ? +1 : -1);
            }
        }
        diffs.emplace_back(groups[static_cast<size_t>(n)], groups[static_cast<size_t>(n + 1)],
                           b.build());
    }
    return make_complex(std::move(groups), std::move(diffs));
}

CochainComplex gamma_fixed_complex(const DiscreteGModule& m, int level, int n_max) {
    if (n_max < 0) throw InputError("n_max must be nonnegative");
    DiscreteGModule mm = inflate(m, level);
    const FiniteGroup& qg = mm.group();
    const int q = qg.order;
    const int gens = mm.underlying.gens();
    SparseMat ident = SparseMat::identity(gens);

    // (Gamma^{n+1} M)^Q: fixed points under right translation of the first
    // argument are functions constant in it, so degree n is Map(Q^n, M); the
    // triple cofaces evaluated at representatives give the differential
    std::vector<FgAbGroup> groups;
    std::vector<Homomorphism> diffs;
    for (int n = 0; n <= n_max; ++n) groups.push_back(power_group(mm.underlying, ipow(q, n)));
    for (int n = 0; n < n_max; ++n) {
        long long nin = ipow(q, n), nout = ipow(q, n + 1);
        MatBuilder b(static_cast<int>(gens * nout), static_cast<int>(gens * nin));
        std::vector<int> t;
        for (long long to = 0; to < nout; ++to) {
            t = tuple_decode(to, q, n + 1);
            // coface 0: f^(x_2..x_{n+1})
            std::vector<int> rest(t.begin() + 1, t.end());
            add_tuple_block(b, nout, nin, to, tuple_index(rest, q), ident, +1);
            // coface i (1..n): merge (x_i, x_{i+1}) -> x_{i+1} x_i
            for (int i = 1; i <= n; ++i) {
                std::vector<int> merged;
                merged.reserve(static_cast<size_t>(n));
                for (int a = 0; a < n + 1; ++a) {
                    if (a == i - 1) {
                        merged.push_back(qg.mul(t[static_cast<size_t>(a + 1)], t[static_cast<size_t>(a)]));
                        ++a;
                    } else
                        merged.push_back(t[static_cast<size_t>(a)]);
                }
                add_tuple_block(b, nout, nin, to, tuple_index(merged, q), ident,
                                (i % 2 == 0) ? +1 : -1);
            }
            // last coface inserts the unit of the triple: x_{n+1} . f^(x_1..x_n)
            std::vector<int> front(t.begin(), t.end() - 1);
            add_tuple_block(b, nout, nin, to, tuple_index(front, q), mm.act(t[static_cast<size_t>(n)]),
                            ((n + 1) % 2 == 0) ? +1 : -1);
        }
        diffs.emplace_back(groups[static_cast<size_t>(n)], groups[static_cast<size_t>(n + 1)],
                           b.build());
    }
    return make_complex(std::move(groups), std::move(diffs));
}

SparseMat inflation_matrix(const DiscreteGModule& m, int level_from, int level_to, int n) {
    if (level_to < level_from) throw InputError("inflation goes deeper");
    const FiniteGroup& qf = m.tower->level(level_from);
    const FiniteGroup& qt = m.tower->level(level_to);
    const int gens = m.underlying.gens();
    long long nin = ipow(qf.order, n), nout = ipow(qt.order, n);
    MatBuilder b(static_cast<int>(gens * nout), static_cast<int>(gens * nin));
    for (long long to = 0; to < nout; ++to) {
        auto t = tuple_decode(to, qt.order, n);
        std::vector<int> mapped;
        mapped.reserve(t.size());
        for (int x : t) mapped.push_back(m.tower->project(level_to, level_from, x));
        long long ts = tuple_index(mapped, qf.order);
        for (int r = 0; r < gens; ++r)
            b.add(static_cast<int>(r * nout + to), static_cast<int>(r * nin + ts), Int(1));
    }
    return b.build();
}

Subquotient complex_cohomology_class(const CochainComplex& c, int s) {
    if (s < 0 || s > c.top()) throw InputError("degree outside the complex");
    Homomorphism din = (s == 0) ? Homomorphism::zero(FgAbGroup::zero(), c.group(0))
                                : c.diff(s - 1);
    Homomorphism dout = (s == c.top())
                            ? Homomorphism::zero(c.group(s), FgAbGroup::zero())
                            : c.diff(s);
    return homology_at(din, dout).pres;
}

FgAbGroup complex_cohomology(const CochainComplex& c, int s) {
    if (s < 0 || s > c.top()) throw InputError("degree outside the complex");
    Homomorphism din = (s == 0) ? Homomorphism::zero(FgAbGroup::zero(), c.group(0))
                                : c.diff(s - 1);
    Homomorphism dout = (s == c.top())
                            ? Homomorphism::zero(c.group(s), FgAbGroup::zero())
                            : c.diff(s);
    return homology_group_at(din, dout);
}

FgAbGroup finite_cohomology(const DiscreteGModule& m, int level, int s) {
    if (s < 0) throw InputError("negative cohomological degree");
    auto c = inhomogeneous_complex(m, level, s + 1);
    return complex_cohomology(c, s);
}

Subquotient fixed_points(const DiscreteGModule& m) {
    const FiniteGroup& q = m.group();
    const int gens = m.underlying.gens();
    const int blocks = q.order - 1;
    if (blocks == 0)
        return Subquotient::make(m.underlying, SparseMat::identity(gens), m.underlying.relations());
    MatBuilder b(gens * blocks, gens);
    for (int g = 1; g < q.order; ++g) {
        int blk = g - 1;
        for (int r = 0; r < gens; ++r) {
            for (const auto& [c, v] : m.act(g).rows[r]) b.add(r * blocks + blk, c, v);
            b.add(r * blocks + blk, r, Int(-1));
        }
    }
    SparseMat w = kernel_lattice(b.build(), power_group(m.underlying, blocks));
    return Subquotient::make(m.underlying, w, m.underlying.relations());
}

StabilizedColimit continuous_cohomology(const DiscreteGModule& m, int s, int depth) {
    if (depth > m.tower->depth()) throw InputError("depth exceeds the tower");
    if (depth < m.level) throw InputError("depth is above the module's level");
    StabilizedColimit out;
    out.first_level = m.level;
    std::vector<Subquotient> classes;
    for (int j = m.level; j <= depth; ++j) {
        auto c = inhomogeneous_complex(m, j, s + 1);
        classes.push_back(complex_cohomology_class(c, s));
        out.values.push_back(classes.back().group());
        if (j > m.level) {
            SparseMat infl = inflation_matrix(m, j - 1, j, s);
            out.maps.push_back(induced_map(classes[classes.size() - 2], classes.back(), infl));
        }
    }
    const size_t k = out.maps.size();
    if (k >= 2) {
        const auto& f1 = out.maps[k - 2];
        const auto& f2 = out.maps[k - 1];
        if (is_isomorphism(f1) && is_isomorphism(f2)) {
            out.stabilized_at = m.level + static_cast<int>(k) - 2;
            out.value = out.values.back();
            out.note = "inflations are isomorphisms from the flagged level";
        } else if (f1.is_zero_map() && f2.is_zero_map()) {
            out.stabilized_at = m.level + static_cast<int>(k);
            out.value = FgAbGroup::zero();
            out.note = "two consecutive inflation images vanish; colimit collapses to 0";
        }
    }
    return out;
}

}  // namespace prodesc
