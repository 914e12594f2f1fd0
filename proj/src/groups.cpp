#include "prodesc/groups.hpp"

#include <set>
#include <sstream>

#include "prodesc/errors.hpp"

namespace prodesc {

int FiniteGroup::inverse(int a) const {
    for (int b = 0; b < order; ++b)
        if (mul(a, b) == 0) return b;
    throw InvariantError("element without inverse");
}

std::optional<std::string> validate_group(const FiniteGroup& g, int exhaustive_bound) {
    const int n = g.order;
    if (n <= 0) return "order must be positive";
    if (static_cast<int>(g.table.size()) != n) return "table has wrong number of rows";
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(g.table[static_cast<size_t>(a)].size()) != n) {
            std::ostringstream os;
            os << "table row " << a << " has wrong length";
            return os.str();
        }
        for (int b = 0; b < n; ++b) {
            int v = g.mul(a, b);
            if (v < 0 || v >= n) {
                std::ostringstream os;
                os << "closure fails at (" << a << "," << b << ")";
                return os.str();
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        if (g.mul(0, a) != a || g.mul(a, 0) != a) {
            std::ostringstream os;
            os << "element 0 is not an identity against " << a;
            return os.str();
        }
    }
    for (int a = 0; a < n; ++a) {
        bool inv = false;
        for (int b = 0; b < n; ++b)
            if (g.mul(a, b) == 0 && g.mul(b, a) == 0) inv = true;
        if (!inv) {
            std::ostringstream os;
            os << "element " << a << " has no two-sided inverse";
            return os.str();
        }
    }
    if (n <= exhaustive_bound) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
                        std::ostringstream os;
                        os << "associativity fails at (" << a << "," << b << "," << c << ")";
                        return os.str();
                    }
    }
    return std::nullopt;
}

FiniteGroup trivial_group() {
    FiniteGroup g;
    g.order = 1;
    g.table = {{0}};
    g.name = "1";
    return g;
}

FiniteGroup cyclic(int n) {
    if (n <= 0) throw InputError("cyclic group order must be positive");
    FiniteGroup g;
    g.order = n;
    g.table.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            g.table[static_cast<size_t>(a)][static_cast<size_t>(b)] = (a + b) % n;
    g.name = "C" + std::to_string(n);
    return g;
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    FiniteGroup g;
    g.order = a.order * b.order;
    g.table.assign(static_cast<size_t>(g.order), std::vector<int>(static_cast<size_t>(g.order)));
    auto enc = [&](int x, int y) { return x * b.order + y; };
    for (int x1 = 0; x1 < a.order; ++x1)
        for (int y1 = 0; y1 < b.order; ++y1)
            for (int x2 = 0; x2 < a.order; ++x2)
                for (int y2 = 0; y2 < b.order; ++y2)
                    g.table[static_cast<size_t>(enc(x1, y1))][static_cast<size_t>(enc(x2, y2))] =
                        enc(a.mul(x1, x2), b.mul(y1, y2));
    g.name = a.name + "x" + b.name;
    return g;
}

FiniteGroup dihedral(int n) {
    if (n < 1) throw InputError("dihedral parameter must be >= 1");
    // element f*n + i stands for s^f r^i; (s^f r^i)(s^h r^j) = s^{f+h} r^{(-1)^h i + j}
    FiniteGroup g;
    g.order = 2 * n;
    g.table.assign(static_cast<size_t>(g.order), std::vector<int>(static_cast<size_t>(g.order)));
    auto enc = [&](int i, int f) { return f * n + ((i % n) + n) % n; };
    for (int i = 0; i < n; ++i)
        for (int f = 0; f < 2; ++f)
            for (int j = 0; j < n; ++j)
                for (int h = 0; h < 2; ++h) {
                    int ii = h ? (j - i) : (i + j);
                    g.table[static_cast<size_t>(enc(i, f))][static_cast<size_t>(enc(j, h))] =
                        enc(ii, (f + h) % 2);
                }
    g.name = "D" + std::to_string(n);
    return g;
}

std::optional<std::string> validate_hom(const GroupHom& h) {
    if (static_cast<int>(h.map.size()) != h.source.order) return "map has wrong length";
    for (int v : h.map)
        if (v < 0 || v >= h.target.order) return "map value out of range";
    if (h.apply(0) != 0) return "identity is not preserved";
    for (int a = 0; a < h.source.order; ++a)
        for (int b = 0; b < h.source.order; ++b)
            if (h.apply(h.source.mul(a, b)) != h.target.mul(h.apply(a), h.apply(b))) {
                std::ostringstream os;
                os << "multiplicativity fails at (" << a << "," << b << ")";
                return os.str();
            }
    return std::nullopt;
}

bool is_surjective(const GroupHom& h) {
    std::set<int> seen(h.map.begin(), h.map.end());
    return static_cast<int>(seen.size()) == h.target.order;
}

GroupHom compose(const GroupHom& outer, const GroupHom& inner) {
    if (inner.target.order != outer.source.order)
        throw InvariantError("group hom composition mismatch");
    GroupHom h;
    h.source = inner.source;
    h.target = outer.target;
    h.map.reserve(inner.map.size());
    for (int v : inner.map) h.map.push_back(outer.apply(v));
    return h;
}

GroupHom identity_hom(const FiniteGroup& g) {
    GroupHom h;
    h.source = h.target = g;
    h.map.resize(static_cast<size_t>(g.order));
    for (int i = 0; i < g.order; ++i) h.map[static_cast<size_t>(i)] = i;
    return h;
}

GroupHom quotient_map(int n, int m) {
    if (m <= 0 || n <= 0 || n % m != 0) throw InputError("quotient_map requires m | n");
    GroupHom h;
    h.source = cyclic(n);
    h.target = cyclic(m);
    h.map.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) h.map[static_cast<size_t>(i)] = i % m;
    return h;
}

int ProfiniteTower::project(int from, int to, int elt) const {
    if (to > from) throw InvariantError("projection goes down the tower");
    int e = elt;
    for (int j = from; j > to; --j) e = transitions[static_cast<size_t>(j - 1)].apply(e);
    return e;
}

std::optional<std::string> validate_tower(const ProfiniteTower& t) {
    if (t.levels.empty()) return "tower needs at least one level";
    if (t.transitions.size() + 1 != t.levels.size()) return "transition count must be levels - 1";
    for (size_t j = 0; j < t.transitions.size(); ++j) {
        const auto& q = t.transitions[j];
        if (q.source.order != t.levels[j + 1].order || q.target.order != t.levels[j].order) {
            std::ostringstream os;
            os << "transition " << j << " does not match adjacent levels";
            return os.str();
        }
        if (auto bad = validate_hom(q)) {
            std::ostringstream os;
            os << "transition " << j << ": " << *bad;
            return os.str();
        }
        if (!is_surjective(q)) {
            std::ostringstream os;
            os << "transition " << j << " is not surjective";
            return os.str();
        }
    }
    for (size_t j = 0; j < t.levels.size(); ++j)
        if (auto bad = validate_group(t.levels[j])) {
            std::ostringstream os;
            os << "level " << j << ": " << *bad;
            return os.str();
        }
    return std::nullopt;
}

ProfiniteTower cyclic_prime_tower(int p, int depth) {
    ProfiniteTower t;
    int n = 1;
    for (int j = 0; j <= depth; ++j) {
        t.levels.push_back(cyclic(n));
        if (j < depth) {
            GroupHom q;
            q.source = cyclic(n * p);
            q.target = t.levels.back();
            q.map.resize(static_cast<size_t>(n * p));
            for (int i = 0; i < n * p; ++i) q.map[static_cast<size_t>(i)] = i % n;
            t.transitions.push_back(std::move(q));
        }
        n *= p;
    }
    t.name = "Z" + std::to_string(p) + "_depth" + std::to_string(depth);
    return t;
}

ProfiniteTower trivial_tower() {
    ProfiniteTower t;
    t.levels.push_back(trivial_group());
    t.name = "e";
    return t;
}

ProfiniteTower constant_tower(const FiniteGroup& g, int depth) {
    ProfiniteTower t;
    for (int j = 0; j <= depth; ++j) {
        t.levels.push_back(g);
        if (j < depth) t.transitions.push_back(identity_hom(g));
    }
    t.name = g.name + "_const";
    return t;
}

}  // namespace prodesc
