#pragma once
#include <memory>
#include <optional>
#include <vector>

#include "prodesc/fgab.hpp"
#include "prodesc/groups.hpp"
#include "prodesc/homology.hpp"

namespace prodesc {

// M^k with the generator-major index convention: coordinate (i, b) of the
// i-th generator in copy b sits at i*k + b. Every mapping-space basis in this
// codebase follows that layout so that invariant factors stay in chain order.
FgAbGroup power_group(const FgAbGroup& m, long long k);

// Abelian group with an action of a finite quotient level of a profinite
// tower; the level records through which quotient the action factors.
struct DiscreteGModule {
    std::shared_ptr<const ProfiniteTower> tower;
    int level = 0;
    FgAbGroup underlying;
    std::vector<SparseMat> action;  // per element of tower->level(level)

    const FiniteGroup& group() const { return tower->level(level); }
    const SparseMat& act(int g) const { return action[static_cast<size_t>(g)]; }
};

// validates the action exhaustively: identity, multiplicativity
DiscreteGModule make_module(std::shared_ptr<const ProfiniteTower> tower, int level,
                            FgAbGroup underlying, std::vector<SparseMat> action);
DiscreteGModule trivial_module(std::shared_ptr<const ProfiniteTower> tower, int level,
                               FgAbGroup underlying);

// same underlying group, action pulled back along the tower surjection
DiscreteGModule inflate(const DiscreteGModule& m, int to_level);

// Map(Q_level, M) with g acting by right translation of the argument:
// (g.f)(g') = f(g'g). Coefficient blocks are identities.
DiscreteGModule gamma(const DiscreteGModule& m, int level);

// G-equivariant map check at a common level (inflating as needed)
bool is_equivariant(const DiscreteGModule& src, const DiscreteGModule& dst,
                    const Homomorphism& h);

// Bounded cochain complex in degrees 0..top with d o d = 0 enforced.
struct CochainComplex {
    std::vector<FgAbGroup> groups;
    std::vector<Homomorphism> diffs;  // diffs[n] : C^n -> C^{n+1}

    int top() const { return static_cast<int>(groups.size()) - 1; }
    const FgAbGroup& group(int n) const { return groups[static_cast<size_t>(n)]; }
    const Homomorphism& diff(int n) const { return diffs[static_cast<size_t>(n)]; }
};

CochainComplex make_complex(std::vector<FgAbGroup> groups, std::vector<Homomorphism> diffs);

// The three models of the group cochains of Q = tower level of M, built on
// explicit bases of Map(Q^n, M) (tuples ordered lexicographically).
//
// inhomogeneous: C^n = Map(Q^n, M), the usual bar differential
//   (df)(g_1..g_{n+1}) = g_1 f(g_2..) + sum (-1)^i f(.., g_i g_{i+1}, ..)
//                        + (-1)^{n+1} f(g_1..g_n).
CochainComplex inhomogeneous_complex(const DiscreteGModule& m, int level, int n_max);
// homogeneous fixed: degree n is Map(Q^{n+1}, M)^Q under the diagonal action
// (g.f)(x_0..x_n) = g f(g^-1 x_0, ..), realized on representatives with
// first coordinate e; differential omits coordinates.
CochainComplex homogeneous_fixed_complex(const DiscreteGModule& m, int level, int n_max);
// Gamma fixed: degree n is (Gamma^{n+1} M)^Q under first-argument right
// translation, realized on representatives; differential is the alternating
// sum of the triple cofaces.
CochainComplex gamma_fixed_complex(const DiscreteGModule& m, int level, int n_max);

// chain map C*(Q_level_from, M) -> C*(Q_level_to, M') for the inhomogeneous
// model along the tower surjection (precomposition in each argument);
// degree n matrix
SparseMat inflation_matrix(const DiscreteGModule& m, int level_from, int level_to, int n);

// H^s with zero differentials padded at the boundary degrees; exact group
// cohomology needs s < top().
Subquotient complex_cohomology_class(const CochainComplex& c, int s);
FgAbGroup complex_cohomology(const CochainComplex& c, int s);

// H^s(Q; M) through the inhomogeneous model
FgAbGroup finite_cohomology(const DiscreteGModule& m, int level, int s);

// fixed-point subgroup M^Q as a subquotient of M (kernel of all g - 1)
Subquotient fixed_points(const DiscreteGModule& m);

// H^s(Q_j; M) for j = m.level .. depth with inflation-induced maps; the
// colimit over j is reported with stabilization flags, never guessed.
struct StabilizedColimit {
    int first_level = 0;
    std::vector<FgAbGroup> values;
    std::vector<Homomorphism> maps;
    std::optional<int> stabilized_at;
    std::optional<FgAbGroup> value;
    std::string note;
};

StabilizedColimit continuous_cohomology(const DiscreteGModule& m, int s, int depth);

}  // namespace prodesc
