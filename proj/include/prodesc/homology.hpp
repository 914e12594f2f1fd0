#pragma once
#include <optional>
#include <vector>

#include "prodesc/fgab.hpp"
#include "prodesc/matrix.hpp"
#include "prodesc/smith.hpp"

namespace prodesc {

// Unique column-Hermite basis of the integer column span. Pivot rows strictly
// increase, pivots are positive, and entries of earlier columns at a pivot row
// are canonical residues, so lattice equality is matrix equality.
SparseMat hnf_basis(const SparseMat& columns);

// Solve h * c = x over Z for h in column-Hermite form.
std::optional<std::vector<Int>> hnf_solve(const SparseMat& h, const std::vector<Int>& x);

// { x : m*x = 0 in the canonical group `target` }, as a column-Hermite basis.
// Free target rows give exact equations, torsion rows congruences.
SparseMat kernel_lattice(const SparseMat& m, const FgAbGroup& target);

// integer kernel { z : a z = 0 } / congruence kernel { z : a z = 0 mod d }
SparseMat integer_kernel_basis(const SparseMat& a);
SparseMat congruence_kernel_basis(const SparseMat& a, const Int& d);

// Subgroup of a canonical group, stored as the Hermite basis of its preimage
// lattice (always containing the relation columns).
struct Subgroup {
    FgAbGroup ambient;
    SparseMat basis;

    bool operator==(const Subgroup& other) const = default;
    bool contains(const Subgroup& other) const;
    bool is_full() const;
};

Subgroup subgroup_from_columns(const FgAbGroup& ambient, const SparseMat& columns);
Subgroup image_subgroup(const Homomorphism& h);
Subgroup full_subgroup(const FgAbGroup& g);
Subgroup intersect(const Subgroup& a, const Subgroup& b);

// Presentation of a subquotient L/R of a canonical ambient group. Carries the
// canonical form together with representatives for its generators and exact
// coordinates for ambient elements of L, which is what induced maps need.
class Subquotient {
  public:
    static Subquotient make(const FgAbGroup& ambient, const SparseMat& lattice_basis,
                            const SparseMat& relation_columns);

    const FgAbGroup& group() const { return group_; }
    const FgAbGroup& ambient() const { return ambient_; }
    std::vector<Int> representative(int i) const;
    SparseMat representatives() const;
    std::vector<Int> coordinates(const std::vector<Int>& ambient_elt) const;
    // coordinates() as a matrix on all ambient generators; only meaningful
    // when the lattice is full (cokernel-style quotients)
    SparseMat coordinate_matrix() const;

  private:
    FgAbGroup ambient_, group_;
    SparseMat lattice_;       // Hermite basis W, ambient.gens() x q
    SparseMat u_, uinv_;      // Smith transforms of the relation matrix, q x q
    std::vector<int> picked_; // Smith row index per canonical generator
};

struct KernelResult {
    FgAbGroup group;
    Homomorphism inclusion;
    Subquotient pres;
};

struct CokernelResult {
    FgAbGroup group;
    Homomorphism projection;
    Subquotient pres;
};

struct HomologyResult {
    FgAbGroup group;
    Subquotient pres;
};

KernelResult kernel(const Homomorphism& h);
CokernelResult cokernel(const Homomorphism& h);
// ker(d_out) / im(d_in); throws InvariantError unless d_out o d_in = 0
HomologyResult homology_at(const Homomorphism& d_in, const Homomorphism& d_out);

// canonical form only, no generator bookkeeping; much cheaper on big inputs
FgAbGroup subquotient_group_only(const FgAbGroup& ambient, const SparseMat& lattice_basis,
                                 const SparseMat& relation_columns);
FgAbGroup homology_group_at(const Homomorphism& d_in, const Homomorphism& d_out);

// Map induced on subquotients by an ambient-level map that carries the source
// lattice into the target lattice (chain maps, inflations, transitions).
Homomorphism induced_map(const Subquotient& src, const Subquotient& dst,
                         const SparseMat& ambient_map);

FgAbGroup subgroup_group(const Subgroup& s);
bool is_surjective(const Homomorphism& h);
bool is_injective(const Homomorphism& h);
bool is_isomorphism(const Homomorphism& h);

}  // namespace prodesc
