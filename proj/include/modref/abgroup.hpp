#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modref/intmatrix.hpp"

namespace modref {

// Finitely generated abelian group presented as Z^k modulo the row lattice
// of a relation matrix, together with Smith-basis data. Two groups are
// isomorphic iff their pruned invariant-factor sequences coincide; two
// elements are equal iff their canonical (Smith-reduced) representatives
// coincide.
class FgAbGroup {
  public:
    FgAbGroup() : ambient_(0) {}

    static FgAbGroup from_presentation(int ambient, const IntMatrix& rels) {
        if (rels.cols() != ambient)
            throw std::invalid_argument("FgAbGroup: relation width != ambient rank");
        FgAbGroup g;
        g.ambient_ = ambient;
        g.rels_ = hnf_canonical(rels);
        SnfResult s = snf(g.rels_);
        g.V_ = s.V;
        auto vinv = solve_left(g.V_, IntMatrix::identity(ambient));
        g.Vinv_ = *vinv;  // V is unimodular
        g.coord_orders_.assign(ambient, Int(0));
        int n = std::min(s.D.rows(), s.D.cols());
        for (int i = 0; i < n; ++i) g.coord_orders_[i] = s.D.at(i, i);
        g.compute_invariant_factors();
        return g;
    }

    // Group already in diagonal form: coordinate i has the given order
    // (0 = infinite). Coordinates keep their meaning: V = identity.
    static FgAbGroup diagonal(const IntVec& orders) {
        FgAbGroup g;
        g.ambient_ = static_cast<int>(orders.size());
        std::vector<IntVec> rows;
        for (int i = 0; i < g.ambient_; ++i) {
            if (orders[i] == 0) continue;
            IntVec r(g.ambient_);
            r[i] = orders[i];
            rows.push_back(r);
        }
        g.rels_ = hnf_canonical(IntMatrix::from_rows(rows, g.ambient_));
        g.V_ = IntMatrix::identity(g.ambient_);
        g.Vinv_ = g.V_;
        g.coord_orders_ = orders;
        for (Int& d : g.coord_orders_) d = abs_int(d);
        g.compute_invariant_factors();
        return g;
    }

    static FgAbGroup free(int rank) { return diagonal(IntVec(rank, Int(0))); }
    static FgAbGroup trivial() { return FgAbGroup(); }

    int ambient() const { return ambient_; }
    const IntMatrix& rels() const { return rels_; }
    const IntMatrix& smith_basis() const { return V_; }
    const IntMatrix& smith_basis_inv() const { return Vinv_; }
    const IntVec& coord_orders() const { return coord_orders_; }
    const std::vector<Int>& invariant_factors() const { return inv_factors_; }

    bool same_presentation(const FgAbGroup& o) const {
        return ambient_ == o.ambient_ && rels_ == o.rels_;
    }
    bool isomorphic_to(const FgAbGroup& o) const { return inv_factors_ == o.inv_factors_; }

    IntVec smith_coords(const IntVec& x) const {
        IntVec y = apply_row(x, V_);
        for (int i = 0; i < ambient_; ++i) y[i] = mod_order(y[i], coord_orders_[i]);
        return y;
    }
    IntVec from_smith(const IntVec& y) const { return apply_row(y, Vinv_); }

    IntVec canon(const IntVec& x) const { return from_smith(smith_coords(x)); }

    bool is_zero_elt(const IntVec& x) const { return vec_is_zero(smith_coords(x)); }
    bool elements_equal(const IntVec& x, const IntVec& y) const {
        return smith_coords(x) == smith_coords(y);
    }

    bool is_trivial() const {
        for (const Int& d : coord_orders_)
            if (d != 1) return false;
        return true;
    }
    bool is_finite() const {
        for (const Int& d : coord_orders_)
            if (d == 0) return false;
        return true;
    }
    std::optional<Int> order() const {
        Int n = 1;
        for (const Int& d : coord_orders_) {
            if (d == 0) return std::nullopt;
            n *= d;
        }
        return n;
    }

    // All elements as canonical ambient representatives (finite groups only).
    std::vector<IntVec> elements() const {
        auto n = order();
        if (!n) throw std::domain_error("elements(): infinite group");
        std::vector<IntVec> out;
        out.reserve(static_cast<std::size_t>(n->get_ui()));
        IntVec y(ambient_, Int(0));
        for (;;) {
            out.push_back(from_smith(y));
            int i = 0;
            for (; i < ambient_; ++i) {
                y[i] += 1;
                if (y[i] < coord_orders_[i]) break;
                y[i] = 0;
            }
            if (i == ambient_) break;
        }
        return out;
    }

    std::string describe() const {
        if (inv_factors_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < inv_factors_.size(); ++i) {
            if (i) s += " + ";
            s += (inv_factors_[i] == 0) ? "Z" : "Z/" + inv_factors_[i].get_str();
        }
        return s;
    }

  private:
    void compute_invariant_factors() {
        inv_factors_.clear();
        // coord orders need not form a chain when the group was built in
        // diagonal form; renormalize through the Smith form of the diagonal.
        std::vector<IntVec> rows;
        int k = 0;
        for (const Int& d : coord_orders_)
            if (d != 0) ++k;
        IntMatrix diag(k, k);
        int t = 0;
        for (const Int& d : coord_orders_) {
            if (d == 0) continue;
            diag.at(t, t) = d;
            ++t;
        }
        SnfResult s = snf(diag);
        for (int i = 0; i < k; ++i)
            if (s.D.at(i, i) > 1) inv_factors_.push_back(s.D.at(i, i));
        for (const Int& d : coord_orders_)
            if (d == 0) inv_factors_.push_back(0);
    }

    int ambient_;
    IntMatrix rels_;          // canonical HNF, zero rows dropped
    IntMatrix V_, Vinv_;      // Smith basis: x_smith = x * V
    IntVec coord_orders_;     // per Smith coordinate; 0 = infinite, 1 = trivial
    std::vector<Int> inv_factors_;  // pruned chain, 0's for free rank
};

inline FgAbGroup group_from_presentation(int ambient, const IntMatrix& rels) {
    return FgAbGroup::from_presentation(ambient, rels);
}

// Homomorphism of presented groups, x |-> x * matrix on ambient coordinates.
// Well-definedness (relations land in relations) is checked at construction.
struct GroupMap {
    FgAbGroup source, target;
    IntMatrix matrix;
};

inline GroupMap make_map(FgAbGroup src, FgAbGroup tgt, IntMatrix m) {
    if (m.rows() != src.ambient() || m.cols() != tgt.ambient())
        throw std::invalid_argument("make_map: matrix shape mismatch");
    for (int i = 0; i < src.rels().rows(); ++i) {
        if (!tgt.is_zero_elt(apply_row(src.rels().row(i), m)))
            throw std::invalid_argument("make_map: map does not respect relations");
    }
    return GroupMap{std::move(src), std::move(tgt), std::move(m)};
}

inline IntVec apply_map(const GroupMap& f, const IntVec& x) { return apply_row(x, f.matrix); }

inline GroupMap identity_map(const FgAbGroup& g) {
    return GroupMap{g, g, IntMatrix::identity(g.ambient())};
}
inline GroupMap zero_map(const FgAbGroup& src, const FgAbGroup& tgt) {
    return GroupMap{src, tgt, IntMatrix::zero(src.ambient(), tgt.ambient())};
}

inline GroupMap compose(const GroupMap& f, const GroupMap& g) {
    if (!f.target.same_presentation(g.source))
        throw std::invalid_argument("compose: middle groups differ");
    return GroupMap{f.source, g.target, f.matrix * g.matrix};
}

inline GroupMap map_sub(const GroupMap& f, const GroupMap& g) {
    return GroupMap{f.source, f.target, f.matrix - g.matrix};
}

// Equality as maps on the quotient: every generator difference must die in
// the target.
inline bool maps_equal(const GroupMap& f, const GroupMap& g) {
    if (f.matrix.rows() != g.matrix.rows() || f.matrix.cols() != g.matrix.cols()) return false;
    IntMatrix d = f.matrix - g.matrix;
    for (int i = 0; i < d.rows(); ++i)
        if (!f.target.is_zero_elt(d.row(i))) return false;
    return true;
}

// Subgroup of a presented group, given by generating rows in ambient
// coordinates. The canonical form stacks the generators with the ambient
// relation lattice, so equality of subgroups of a quotient absorbs relations.
struct Subgroup {
    FgAbGroup ambient;
    IntMatrix gens;
    IntMatrix canon;
};

inline Subgroup subgroup(const FgAbGroup& g, const IntMatrix& gens) {
    if (gens.cols() != g.ambient()) throw std::invalid_argument("subgroup: generator width mismatch");
    return Subgroup{g, gens, hnf_canonical(vstack(gens, g.rels()))};
}

inline Subgroup full_subgroup(const FgAbGroup& g) {
    return subgroup(g, IntMatrix::identity(g.ambient()));
}
inline Subgroup trivial_subgroup(const FgAbGroup& g) {
    return subgroup(g, IntMatrix::zero(0, g.ambient()));
}

inline bool subgroups_equal(const Subgroup& a, const Subgroup& b) {
    if (!a.ambient.same_presentation(b.ambient))
        throw std::invalid_argument("subgroups_equal: ambient groups differ");
    return a.canon == b.canon;
}

inline bool subgroup_contains(const Subgroup& s, const IntVec& x) {
    return solve_left(s.canon, x).has_value();
}

inline bool subgroup_is_full(const Subgroup& s) {
    return subgroups_equal(s, full_subgroup(s.ambient));
}
inline bool subgroup_is_trivial(const Subgroup& s) {
    return subgroups_equal(s, trivial_subgroup(s.ambient));
}

// Kernel of f as a subgroup of the source: conditions are read off in the
// Smith coordinates of the target, one congruence per coordinate.
inline Subgroup kernel_of(const GroupMap& f) {
    const int k = f.source.ambient();
    LatticeRestrictor lr(k);
    IntMatrix fv = f.matrix * f.target.smith_basis();
    const IntVec& ords = f.target.coord_orders();
    for (int j = 0; j < f.target.ambient(); ++j) {
        if (ords[j] == 1) continue;
        IntVec col(k);
        bool nz = false;
        for (int i = 0; i < k; ++i) {
            col[i] = mod_order(fv.at(i, j), ords[j]);
            if (col[i] != 0) nz = true;
        }
        if (nz) lr.restrict(col, ords[j]);
    }
    return subgroup(f.source, lr.basis_with(f.source.rels()));
}

inline Subgroup image_of(const GroupMap& f) { return subgroup(f.target, f.matrix); }

inline std::pair<FgAbGroup, GroupMap> quotient(const FgAbGroup& g, const Subgroup& h) {
    if (!h.ambient.same_presentation(g))
        throw std::invalid_argument("quotient: subgroup of a different group");
    FgAbGroup q = FgAbGroup::from_presentation(g.ambient(), vstack(g.rels(), h.gens));
    GroupMap proj{g, q, IntMatrix::identity(g.ambient())};
    return {q, proj};
}

// A subgroup realized as an abstract group together with its inclusion.
struct SubgroupEmbedding {
    FgAbGroup group;
    GroupMap inclusion;  // group -> ambient
};

inline SubgroupEmbedding subgroup_as_group(const Subgroup& s) {
    IntMatrix basis = s.canon;  // lattice L with rels(ambient) <= L
    auto rels_in_basis = solve_left(basis, s.ambient.rels());
    // always solvable: the canonical form contains the ambient relations
    FgAbGroup abstract = FgAbGroup::from_presentation(basis.rows(), *rels_in_basis);
    GroupMap inc{abstract, s.ambient, basis};
    return {std::move(abstract), std::move(inc)};
}

// Whether the specific map f is an isomorphism: trivial kernel plus image
// equal to the full target (never mere equality of invariant factors).
inline bool map_is_isomorphism(const GroupMap& f) {
    return subgroup_is_trivial(kernel_of(f)) && subgroup_is_full(image_of(f));
}

// ---------------------------------------------------------------------------
// Hom and tensor of groups.

// Hom(G, H) presented on a basis of the lattice of relation-compatible
// matrices. `basis` row t is the flattened g x h matrix realizing the t-th
// ambient generator of the Hom group; evaluation is matrix application.
struct HomGroup {
    FgAbGroup group;
    IntMatrix basis;  // t x (g*h)
    FgAbGroup src, tgt;
};

inline HomGroup hom_group(const FgAbGroup& g, const FgAbGroup& h) {
    const int gs = g.ambient(), hs = h.ambient();
    LatticeRestrictor lr(gs * hs);
    const IntVec& ords = h.coord_orders();
    for (int r = 0; r < g.rels().rows(); ++r) {
        IntVec a = g.rels().row(r);
        for (int j = 0; j < hs; ++j) {
            if (ords[j] == 1) continue;
            IntVec col(gs * hs);
            bool nz = false;
            for (int p = 0; p < gs; ++p) {
                if (a[p] == 0) continue;
                for (int q = 0; q < hs; ++q) {
                    col[p * hs + q] = mod_order(a[p] * h.smith_basis().at(q, j), ords[j]);
                    if (col[p * hs + q] != 0) nz = true;
                }
            }
            if (nz) lr.restrict(col, ords[j]);
        }
    }
    IntMatrix basis = hnf_canonical(lr.basis());
    // trivial homs: matrices whose rows lie in the relation lattice of H
    std::vector<IntVec> triv;
    for (int p = 0; p < gs; ++p)
        for (int r = 0; r < h.rels().rows(); ++r) {
            IntVec row(gs * hs);
            for (int q = 0; q < hs; ++q) row[p * hs + q] = h.rels().at(r, q);
            triv.push_back(row);
        }
    auto coords = solve_left(basis, IntMatrix::from_rows(triv, gs * hs));
    FgAbGroup grp = FgAbGroup::from_presentation(basis.rows(), *coords);
    return HomGroup{std::move(grp), std::move(basis), g, h};
}

inline IntMatrix hom_lift(const HomGroup& hg, const IntVec& coords) {
    IntVec flat = apply_row(coords, hg.basis);
    IntMatrix f(hg.src.ambient(), hg.tgt.ambient());
    for (int p = 0; p < hg.src.ambient(); ++p)
        for (int q = 0; q < hg.tgt.ambient(); ++q) f.at(p, q) = flat[p * hg.tgt.ambient() + q];
    return f;
}

inline IntVec hom_evaluate(const HomGroup& hg, const IntVec& coords, const IntVec& x) {
    return hg.tgt.canon(apply_row(x, hom_lift(hg, coords)));
}

// Coordinates of an explicit relation-compatible matrix in the Hom group.
inline std::optional<IntVec> hom_coords_of(const HomGroup& hg, const IntMatrix& f) {
    IntVec flat(static_cast<std::size_t>(f.rows()) * f.cols());
    for (int p = 0; p < f.rows(); ++p)
        for (int q = 0; q < f.cols(); ++q) flat[p * f.cols() + q] = f.at(p, q);
    return solve_left(hg.basis, flat);
}

// G (x)_Z H on generator pairs with both relation sets imposed bilinearly.
struct TensorZGroup {
    FgAbGroup group;  // ambient = g*h
    FgAbGroup left, right;
};

inline TensorZGroup tensor_z(const FgAbGroup& g, const FgAbGroup& h) {
    const int gs = g.ambient(), hs = h.ambient();
    std::vector<IntVec> rows;
    for (int r = 0; r < g.rels().rows(); ++r)
        for (int q = 0; q < hs; ++q) {
            IntVec row(gs * hs);
            for (int p = 0; p < gs; ++p) row[p * hs + q] = g.rels().at(r, p);
            rows.push_back(row);
        }
    for (int p = 0; p < gs; ++p)
        for (int r = 0; r < h.rels().rows(); ++r) {
            IntVec row(gs * hs);
            for (int q = 0; q < hs; ++q) row[p * hs + q] = h.rels().at(r, q);
            rows.push_back(row);
        }
    FgAbGroup grp = FgAbGroup::from_presentation(gs * hs, IntMatrix::from_rows(rows, gs * hs));
    return TensorZGroup{std::move(grp), g, h};
}

inline IntVec tensor_pure(const TensorZGroup&, const IntVec& x, const IntVec& y) {
    return kron_vec(x, y);
}

struct DirectSum {
    FgAbGroup group;
    IntMatrix inc1, inc2;    // summand -> sum
    IntMatrix proj1, proj2;  // sum -> summand
};

inline DirectSum direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
    const int ka = a.ambient(), kb = b.ambient();
    std::vector<IntVec> rows;
    for (int i = 0; i < a.rels().rows(); ++i) {
        IntVec r(ka + kb);
        for (int j = 0; j < ka; ++j) r[j] = a.rels().at(i, j);
        rows.push_back(r);
    }
    for (int i = 0; i < b.rels().rows(); ++i) {
        IntVec r(ka + kb);
        for (int j = 0; j < kb; ++j) r[ka + j] = b.rels().at(i, j);
        rows.push_back(r);
    }
    DirectSum d;
    d.group = FgAbGroup::from_presentation(ka + kb, IntMatrix::from_rows(rows, ka + kb));
    d.inc1 = IntMatrix(ka, ka + kb);
    d.inc2 = IntMatrix(kb, ka + kb);
    d.proj1 = IntMatrix(ka + kb, ka);
    d.proj2 = IntMatrix(ka + kb, kb);
    for (int i = 0; i < ka; ++i) { d.inc1.at(i, i) = 1; d.proj1.at(i, i) = 1; }
    for (int i = 0; i < kb; ++i) { d.inc2.at(i, ka + i) = 1; d.proj2.at(ka + i, i) = 1; }
    return d;
}

// Coordinate change to diagonal form with order-1 coordinates dropped.
// to_comp/from_comp are mutually inverse on the quotient.
struct Compression {
    FgAbGroup comp;       // diagonal group on the kept coordinates
    IntMatrix to_comp;    // ambient x t
    IntMatrix from_comp;  // t x ambient
};

inline Compression compress(const FgAbGroup& g) {
    std::vector<int> keep;
    for (int i = 0; i < g.ambient(); ++i)
        if (g.coord_orders()[i] != 1) keep.push_back(i);
    const int t = static_cast<int>(keep.size());
    Compression c;
    IntVec orders(t);
    for (int i = 0; i < t; ++i) orders[i] = g.coord_orders()[keep[i]];
    c.comp = FgAbGroup::diagonal(orders);
    c.to_comp = IntMatrix(g.ambient(), t);
    c.from_comp = IntMatrix(t, g.ambient());
    for (int i = 0; i < t; ++i) {
        for (int a = 0; a < g.ambient(); ++a) {
            c.to_comp.at(a, i) = g.smith_basis().at(a, keep[i]);
            c.from_comp.at(i, a) = g.smith_basis_inv().at(keep[i], a);
        }
    }
    return c;
}

}  // namespace modref
