#include "prodesc/fgab.hpp"

#include <sstream>

#include "prodesc/errors.hpp"
#include "prodesc/smith.hpp"

namespace prodesc {

FgAbGroup FgAbGroup::of(long rank, std::vector<Int> factors) {
    if (rank < 0) throw InputError("negative rank");
    FgAbGroup g;
    g.rank_ = rank;
    std::vector<Int> nontrivial;
    for (auto& d : factors) {
        Int a = abs_int(d);
        if (a == 0)
            g.rank_ += 1;
        else if (a != 1)
            nontrivial.push_back(a);
    }
    if (!nontrivial.empty()) {
        // invariant factors of the direct sum via the diagonal presentation
        bool chained = true;
        for (size_t i = 0; i + 1 < nontrivial.size(); ++i)
            if (nontrivial[i + 1] % nontrivial[i] != 0) {
                chained = false;
                break;
            }
        if (chained)
            g.torsion_ = std::move(nontrivial);
        else {
            auto diag = smith_diagonal(SparseMat::diagonal(nontrivial));
            for (auto& d : diag)
                if (d > 1) g.torsion_.push_back(d);
        }
    }
    return g;
}

std::optional<Int> FgAbGroup::order() const {
    if (rank_ > 0) return std::nullopt;
    Int o(1);
    for (const auto& d : torsion_) o *= d;
    return o;
}

Int FgAbGroup::gen_order(int i) const {
    if (i < torsion_gens()) return torsion_[static_cast<size_t>(i)];
    return Int(0);
}

SparseMat FgAbGroup::relations() const {
    SparseMat r(gens(), torsion_gens());
    for (int i = 0; i < torsion_gens(); ++i)
        r.rows[i].emplace_back(i, torsion_[static_cast<size_t>(i)]);
    return r;
}

std::string FgAbGroup::to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& d : torsion_) {
        if (!first) os << " + ";
        os << "Z/" << d.get_str();
        first = false;
    }
    if (rank_ > 0) {
        if (!first) os << " + ";
        os << "Z";
        if (rank_ > 1) os << "^" << rank_;
    }
    return os.str();
}

SparseMat reduce_mod_target(const SparseMat& m, const FgAbGroup& target) {
    if (m.nrows != target.gens()) throw InvariantError("reduce_mod_target shape mismatch");
    SparseMat out(m.nrows, m.ncols);
    for (int i = 0; i < m.nrows; ++i) {
        Int d = target.gen_order(i);
        if (d == 0) {
            out.rows[i] = m.rows[i];
            continue;
        }
        for (const auto& [j, v] : m.rows[i]) {
            Int r = mod_canonical(v, d);
            if (r != 0) out.rows[i].emplace_back(j, r);
        }
    }
    return out;
}

Homomorphism::Homomorphism(FgAbGroup source, FgAbGroup target, SparseMat matrix)
    : source_(std::move(source)), target_(std::move(target)) {
    if (matrix.nrows != target_.gens() || matrix.ncols != source_.gens())
        throw InputError("homomorphism matrix has wrong shape");
    matrix_ = reduce_mod_target(matrix, target_);
}

Homomorphism Homomorphism::zero(const FgAbGroup& source, const FgAbGroup& target) {
    return Homomorphism(source, target, SparseMat::zero(target.gens(), source.gens()));
}

Homomorphism Homomorphism::identity(const FgAbGroup& g) {
    return Homomorphism(g, g, SparseMat::identity(g.gens()));
}

bool Homomorphism::well_defined() const { return !diagnose().has_value(); }

std::optional<std::string> Homomorphism::diagnose() const {
    for (int j = 0; j < source_.gens(); ++j) {
        Int d = source_.gen_order(j);
        if (d == 0) continue;
        for (int i = 0; i < target_.gens(); ++i) {
            Int v = matrix_.at(i, j) * d;
            Int di = target_.gen_order(i);
            bool ok = (di == 0) ? (v == 0) : (v % di == 0);
            if (!ok) {
                std::ostringstream os;
                os << "generator " << j << " of order " << d.get_str()
                   << " maps to an element not killed by " << d.get_str() << " (row " << i << ")";
                return os.str();
            }
        }
    }
    return std::nullopt;
}

Homomorphism Homomorphism::compose_after(const Homomorphism& inner) const {
    if (!(inner.target_ == source_)) throw InvariantError("composition source/target mismatch");
    return Homomorphism(inner.source_, target_, matrix_.mul(inner.matrix_));
}

std::vector<Int> Homomorphism::apply(const std::vector<Int>& coords) const {
    auto v = matrix_.apply(coords);
    for (int i = 0; i < target_.gens(); ++i) {
        Int d = target_.gen_order(i);
        if (d != 0) v[i] = mod_canonical(v[i], d);
    }
    return v;
}

bool are_isomorphic(const FgAbGroup& a, const FgAbGroup& b) { return a == b; }

}  // namespace prodesc
