#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prodesc/towers.hpp"

namespace prodesc {

// Bounded chain complex of discrete G-modules, degrees lo..lo+n, differentials
// going down. Homotopy is modeled by homology.
struct GChainComplex {
    int lo = 0;
    std::vector<DiscreteGModule> modules;
    std::vector<Homomorphism> diffs;  // diffs[k] : X_{lo+k+1} -> X_{lo+k}

    int hi() const { return lo + static_cast<int>(modules.size()) - 1; }
    bool has_degree(int t) const { return t >= lo && t <= hi(); }
    const DiscreteGModule& module_at(int t) const {
        return modules[static_cast<size_t>(t - lo)];
    }
};

// validates d o d = 0 and equivariance of the differentials
GChainComplex make_gchain(int lo, std::vector<DiscreteGModule> modules,
                          std::vector<Homomorphism> diffs);

FgAbGroup homotopy(const GChainComplex& x, int t);
Subquotient homotopy_class(const GChainComplex& x, int t);

struct GComplexTower {
    std::vector<GChainComplex> head;
    // maps[i][k] : X_{i+1, lo+k} -> X_{i, lo+k}, a G-equivariant chain map
    std::vector<std::vector<Homomorphism>> maps;
    std::optional<int> period;

    int head_length() const { return static_cast<int>(head.size()); }
};

GComplexTower validate_gcomplex_tower(GComplexTower t);
GComplexTower materialize(const GComplexTower& t, int levels);
GComplexTower constant_gcomplex_tower(const GChainComplex& x, int head_length);

// homotopy of the levelwise derived limit: for each t an extension of
// lim H_t by lim^1 H_{t+1}
struct HolimCell {
    Lim1 sub = Lim1::zero;  // lim^1 H_{t+1}
    ProGroup quotient;      // lim H_t
};
std::map<int, HolimCell> holim(const GComplexTower& t, int horizon);

struct E2Cell {
    int s = 0, t = 0;
    ProGroup quotient;               // lim of the levelwise cohomology
    Lim1 sub = Lim1::zero;           // sub layer one homotopy degree up
    Lim1 interchange = Lim1::zero;   // lim^1 of levelwise H^{s-1}, ML route only
    std::optional<FgAbGroup> exact;  // set when every certificate is definite
    std::vector<std::string> flags;
};

struct E2Page {
    int s_max = 0, t_min = 0, t_max = 0;
    std::vector<E2Cell> cells;  // absent cells are omitted, never zero-filled

    const E2Cell* cell(int s, int t) const;
};

// E2 of the descent spectral sequence in the algebraic model: homotopy of the
// derived limit per cosimplicial degree first, then cohomology in the
// cosimplicial direction. Cells carrying indefinite certificates are flagged,
// never silently zeroed.
E2Page descent_e2(const GComplexTower& t, int s_max, int t_min, int t_max, int n_max,
                  int depth, int horizon);

// E2 with Jannsen's continuous cohomology of the homotopy-group towers.
E2Page jannsen_e2(const GComplexTower& t, int s_max, int t_min, int t_max, int depth,
                  int horizon);

enum class CellVerdict { equal, differs, undetermined };

struct CellComparison {
    int s = 0, t = 0;
    CellVerdict verdict = CellVerdict::undetermined;
    bool ml_asserted = false;  // all relevant homotopy towers were certified
    std::string detail;
};

struct E2Comparison {
    E2Page descent, jannsen;
    std::vector<CellComparison> cells;

    bool all_equal() const;
    std::vector<const CellComparison*> differences() const;
};

E2Comparison compare_e2(const GComplexTower& t, int s_max, int t_min, int t_max, int n_max,
                        int depth, int horizon);

// Verifies the failure of Gamma-acyclicity for towers: H^s_cont of the
// coinduced tower vanishes for s >= 2, equals the lim^1 status of {M_i} at
// s = 1, and the limit of the fixed points at s = 0.
struct CounterexampleReport {
    std::vector<AssembledCohomology> by_degree;  // s = 0 .. s_max
    Lim1 lim1_of_tower = Lim1::undetermined;
    ProGroup fixed_point_limit;
    bool high_degrees_vanish = false;
    bool degree_one_matches_lim1 = false;
    bool degree_zero_matches_fixed_points = false;

    bool passed() const {
        return high_degrees_vanish && degree_one_matches_lim1 &&
               degree_zero_matches_fixed_points;
    }
};

CounterexampleReport gamma_tower_counterexample(const ModuleTower& m, int s_max, int depth,
                                                int horizon);

}  // namespace prodesc
