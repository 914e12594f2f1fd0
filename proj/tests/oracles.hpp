#pragma once
// Independent cross-checks used by the unit and acceptance suites. These stay
// off the library's computation paths on purpose: the minor-gcd oracle checks
// Smith forms, the enumeration oracle checks kernels on small finite groups,
// and the periodic-resolution oracle checks cyclic group cohomology.
#include <optional>
#include <vector>

#include "prodesc/fgab.hpp"
#include "prodesc/matrix.hpp"

namespace oracles {

using prodesc::FgAbGroup;
using prodesc::Int;
using prodesc::SparseMat;

// gcd of all k x k minors, via explicit minor expansion; 6x6 tops out fast
inline Int minor_gcd(const std::vector<std::vector<Int>>& a, int k) {
    int m = static_cast<int>(a.size());
    int n = m ? static_cast<int>(a[0].size()) : 0;
    std::vector<int> ri(static_cast<size_t>(k)), ci(static_cast<size_t>(k));
    Int g(0);

    // determinant by Laplace expansion on selected rows/cols
    auto det = [&](auto&& self, std::vector<int> rs, std::vector<int> cs) -> Int {
        if (rs.size() == 1) return a[static_cast<size_t>(rs[0])][static_cast<size_t>(cs[0])];
        Int acc(0);
        int sign = 1;
        for (size_t t = 0; t < cs.size(); ++t) {
            std::vector<int> rs2(rs.begin() + 1, rs.end());
            std::vector<int> cs2;
            for (size_t u = 0; u < cs.size(); ++u)
                if (u != t) cs2.push_back(cs[u]);
            acc += Int(sign) * a[static_cast<size_t>(rs[0])][static_cast<size_t>(cs[t])] *
                   self(self, rs2, cs2);
            sign = -sign;
        }
        return acc;
    };

    auto combos = [&](auto&& self, int limit, int depth, int start, std::vector<int>& sel,
                      auto&& each) -> void {
        if (depth == k) {
            each(sel);
            return;
        }
        for (int v = start; v < limit; ++v) {
            sel[static_cast<size_t>(depth)] = v;
            self(self, limit, depth + 1, v + 1, sel, each);
        }
    };

    std::vector<int> rowsel(static_cast<size_t>(k)), colsel(static_cast<size_t>(k));
    combos(combos, m, 0, 0, rowsel, [&](const std::vector<int>& rs) {
        combos(combos, n, 0, 0, colsel, [&](const std::vector<int>& cs) {
            Int d = det(det, rs, cs);
            g = prodesc::gcd(g, d);
        });
    });
    return g;
}

// expected Smith diagonal from the minor-gcd chain: d_1...d_k = gcd of k-minors
inline std::vector<Int> smith_diag_by_minors(const std::vector<std::vector<Int>>& a) {
    int m = static_cast<int>(a.size());
    int n = m ? static_cast<int>(a[0].size()) : 0;
    int steps = std::min(m, n);
    std::vector<Int> out(static_cast<size_t>(steps), Int(0));
    Int prev(1);
    for (int k = 1; k <= steps; ++k) {
        Int g = minor_gcd(a, k);
        if (g == 0) break;  // rank reached; the rest stay 0
        out[static_cast<size_t>(k - 1)] = prodesc::exact_div(g, prev);
        prev = g;
    }
    return out;
}

// Exhaustive elements of a finite canonical group as coordinate vectors.
inline std::vector<std::vector<Int>> enumerate_elements(const FgAbGroup& g) {
    std::vector<std::vector<Int>> out;
    if (g.rank() != 0) return out;  // only finite groups
    std::vector<Int> cur(static_cast<size_t>(g.gens()), Int(0));
    auto rec = [&](auto&& self, int i) -> void {
        if (i == g.gens()) {
            out.push_back(cur);
            return;
        }
        for (Int v(0); v < g.gen_order(i); ++v) {
            cur[static_cast<size_t>(i)] = v;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace oracles
