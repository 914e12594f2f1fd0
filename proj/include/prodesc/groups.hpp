#pragma once
#include <optional>
#include <string>
#include <vector>

namespace prodesc {

// Finite group as a Cayley table on element indices 0..n-1 with 0 the
// identity. Axioms are checked exhaustively up to a configured bound.
struct FiniteGroup {
    int order = 1;
    std::vector<std::vector<int>> table;  // table[a][b] = a*b
    std::string name;

    int mul(int a, int b) const { return table[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
    int inverse(int a) const;
    bool is_trivial() const { return order == 1; }
};

// diagnostic is nullopt when all axioms hold
std::optional<std::string> validate_group(const FiniteGroup& g, int exhaustive_bound = 64);

FiniteGroup trivial_group();
FiniteGroup cyclic(int n);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
// dihedral group of order 2n (symmetries of the n-gon); dihedral(3) is S_3
FiniteGroup dihedral(int n);

struct GroupHom {
    FiniteGroup source, target;
    std::vector<int> map;  // image of each source element

    int apply(int a) const { return map[static_cast<size_t>(a)]; }
};

std::optional<std::string> validate_hom(const GroupHom& h);
bool is_surjective(const GroupHom& h);
GroupHom compose(const GroupHom& outer, const GroupHom& inner);
GroupHom identity_hom(const FiniteGroup& g);
// reduction Z/n -> Z/m for m | n
GroupHom quotient_map(int n, int m);

// Profinite group presented by finite quotients Q_0 <- Q_1 <- ... <- Q_J with
// surjective transitions q_j : Q_{j+1} -> Q_j.
struct ProfiniteTower {
    std::vector<FiniteGroup> levels;
    std::vector<GroupHom> transitions;  // transitions[j] : levels[j+1] -> levels[j]
    std::string name;

    int depth() const { return static_cast<int>(levels.size()) - 1; }
    const FiniteGroup& level(int j) const { return levels[static_cast<size_t>(j)]; }
    // composite projection levels[from] -> levels[to], to <= from
    int project(int from, int to, int elt) const;
};

std::optional<std::string> validate_tower(const ProfiniteTower& t);

// tower {Z/p^j} for j = 0..depth (level 0 is trivial)
ProfiniteTower cyclic_prime_tower(int p, int depth);
ProfiniteTower trivial_tower();
// constant tower on a single finite group (identity transitions)
ProfiniteTower constant_tower(const FiniteGroup& g, int depth);

}  // namespace prodesc
