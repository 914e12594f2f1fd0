#pragma once
#include <optional>
#include <string>
#include <vector>

#include "prodesc/gmod.hpp"

namespace prodesc {

// Tower of canonical abelian groups M_0 <- M_1 <- ... given by an explicit
// head and an optional periodicity rule (indices past the head repeat the
// last full period, verified structurally before use).
struct AbTower {
    std::vector<FgAbGroup> groups;
    std::vector<Homomorphism> maps;  // maps[i] : groups[i+1] -> groups[i]
    std::optional<int> period;

    int head_length() const { return static_cast<int>(groups.size()); }
};

AbTower validate_ab_tower(AbTower t);
// extend to `levels` entries under the periodic rule; explicit towers cap at
// their head
AbTower materialize(const AbTower& t, int levels);

enum class MlKind { certified, non_ml, undetermined };
enum class Lim1 { zero, nonzero, undetermined };

struct MlWitness {
    Homomorphism period_composite;  // injective endomorphism
    SparseMat stable_image;         // Hermite basis; mapped strictly into itself
    int level;
};

struct MlStatus {
    MlKind kind = MlKind::undetermined;
    int k = 0;  // images Im(M_{i+j} -> M_i) verified equal for j >= k
    int horizon = 0;
    std::optional<MlWitness> witness;
    std::string reason;
};

// Image-chain stabilization check. Certifies Mittag-Leffler from surjective
// transitions, from finiteness of all levels, or from a periodic rule whose
// one-period composite preserves the stable image; certifies failure from an
// injective period composite that moves the deepest image strictly into
// itself. Anything else is reported undetermined at the given horizon.
MlStatus ml_check(const AbTower& t, int horizon);

// re-verifies a certificate by exact image/kernel computation
bool verify_ml_status(const AbTower& t, const MlStatus& s);

struct ProGroup {
    std::vector<FgAbGroup> levels;        // stable images (or raw levels)
    std::vector<Homomorphism> transitions;
    MlStatus ml;
    Lim1 lim1 = Lim1::undetermined;
    std::optional<FgAbGroup> lim_value;   // exact inverse limit when certified
    bool pro_object = false;              // value given only by the level tower
    std::string note;
};

ProGroup tower_lim(const AbTower& t, int horizon);
Lim1 tower_lim1(const AbTower& t, int horizon);

// Tower of discrete G-modules with G-equivariant transitions.
struct ModuleTower {
    std::vector<DiscreteGModule> head;
    std::vector<Homomorphism> maps;  // maps[i] : head[i+1] -> head[i] (underlying)
    std::optional<int> period;

    int head_length() const { return static_cast<int>(head.size()); }
};

ModuleTower validate_module_tower(ModuleTower t);
ModuleTower materialize(const ModuleTower& t, int levels);
AbTower underlying_tower(const ModuleTower& t);
// constant tower on one module
ModuleTower constant_module_tower(const DiscreteGModule& m, int head_length);
// apply Gamma at the given level to every entry
ModuleTower gamma_tower(const ModuleTower& t, int level);

// degree-wise towers of the Gamma-fixed cochain complexes at a tower level,
// with transition chain maps; the inverse limit is never collapsed here
struct ProComplex {
    std::vector<CochainComplex> level_complexes;
    std::vector<std::vector<SparseMat>> transition_maps;  // [i][n] : level i+1 -> i
    int n_max = 0;
    int depth = 0;
};

ProComplex prodiscrete_complex(const ModuleTower& t, int n_max, int depth, int levels);

struct AssembledCohomology {
    Lim1 sub = Lim1::undetermined;  // lim^1 of the degree-(s-1) cohomology tower
    ProGroup quotient;              // lim of the degree-s cohomology tower
    std::string extension_note;
    std::vector<std::string> flags;

    bool exact_zero() const;
};

// H^s of the pro-discrete cochain complex, assembled as an extension of
// lim H^s(level complexes) by lim^1 H^{s-1}(level complexes). Demands
// surjective (or ML-certified) degree towers; eventually-constant towers are
// cross-checked against the honest limit complex.
AssembledCohomology h_cts(const ModuleTower& t, int s, int n_max, int depth, int horizon);

// H^s via the tower {H^s_c(G; M_i)} and the lim/lim^1 exact sequence, with
// H^{-1} = 0. Cohomology of G is evaluated at the deepest tower level, with
// inflation-stabilization flags carried as provenance.
AssembledCohomology h_cont(const ModuleTower& t, int s, int depth, int horizon);

struct ComparisonReport {
    std::optional<bool> agree;  // nullopt = not asserted / undetermined
    AssembledCohomology cts, cont;
    std::string details;
};

ComparisonReport compare_cts_cont(const ModuleTower& t, int s, int n_max, int depth, int horizon);

bool pro_groups_agree(const ProGroup& a, const ProGroup& b);

}  // namespace prodesc
