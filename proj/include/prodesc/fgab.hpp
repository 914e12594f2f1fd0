#pragma once
#include <optional>
#include <string>
#include <vector>

#include "prodesc/matrix.hpp"

namespace prodesc {

// Finitely generated abelian group in invariant-factor form:
//   Z/d_1 + Z/d_2 + ... + Z/d_k + Z^rank,   d_1 | d_2 | ... | d_k, d_i >= 2.
// Values are always canonical, so equality is component comparison. The
// generator list everywhere is: torsion generators in chain order first,
// then the free generators.
class FgAbGroup {
  public:
    FgAbGroup() = default;
    // canonicalizes an arbitrary cyclic-factor list; 0 factors count as Z
    static FgAbGroup of(long rank, std::vector<Int> factors);
    static FgAbGroup free(long rank) { return of(rank, {}); }
    static FgAbGroup zero() { return {}; }

    long rank() const { return rank_; }
    const std::vector<Int>& torsion() const { return torsion_; }
    int gens() const { return static_cast<int>(torsion_.size()) + static_cast<int>(rank_); }
    int torsion_gens() const { return static_cast<int>(torsion_.size()); }
    bool is_trivial() const { return rank_ == 0 && torsion_.empty(); }
    bool is_finite() const { return rank_ == 0; }
    std::optional<Int> order() const;
    // order of generator i (0 means infinite)
    Int gen_order(int i) const;
    // torsion relation columns d_i * e_i as a gens() x torsion_gens() matrix
    SparseMat relations() const;
    std::string to_string() const;
    bool operator==(const FgAbGroup& other) const = default;

  private:
    long rank_ = 0;
    std::vector<Int> torsion_;
};

// Group homomorphism by an integer matrix on the canonical generators,
// columns = images of source generators, entries reduced mod the target
// generator's invariant factor.
class Homomorphism {
  public:
    Homomorphism() = default;
    Homomorphism(FgAbGroup source, FgAbGroup target, SparseMat matrix);

    static Homomorphism zero(const FgAbGroup& source, const FgAbGroup& target);
    static Homomorphism identity(const FgAbGroup& g);

    const FgAbGroup& source() const { return source_; }
    const FgAbGroup& target() const { return target_; }
    const SparseMat& matrix() const { return matrix_; }

    // d * (image of generator of order d) = 0 in the target
    bool well_defined() const;
    std::optional<std::string> diagnose() const;
    Homomorphism compose_after(const Homomorphism& inner) const;  // this o inner
    std::vector<Int> apply(const std::vector<Int>& coords) const;
    bool is_zero_map() const { return matrix_.is_zero(); }
    bool operator==(const Homomorphism& other) const = default;

  private:
    FgAbGroup source_, target_;
    SparseMat matrix_;
};

// reduce entries of a matrix into canonical residues for the given target
SparseMat reduce_mod_target(const SparseMat& m, const FgAbGroup& target);

bool are_isomorphic(const FgAbGroup& a, const FgAbGroup& b);

}  // namespace prodesc
