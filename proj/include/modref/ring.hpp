#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modref/abgroup.hpp"

namespace modref {

// Ring element: coordinates over the additive generators of its ring.
using RingElt = IntVec;

struct RingAxiomIssue {
    enum class Kind { NonAssociative, BadUnit, OrderIncompatible };
    Kind kind;
    int i = -1, j = -1, l = -1;

    std::string describe() const {
        switch (kind) {
            case Kind::NonAssociative:
                return "non-associative triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                       std::to_string(l) + ")";
            case Kind::BadUnit:
                return "unit fails on generator " + std::to_string(i);
            default:
                return "order-incompatible product (" + std::to_string(i) + "," + std::to_string(j) + ")";
        }
    }
};

class RingAxiomError : public std::invalid_argument {
  public:
    explicit RingAxiomError(std::vector<RingAxiomIssue> issues)
        : std::invalid_argument(join(issues)), issues_(std::move(issues)) {}
    const std::vector<RingAxiomIssue>& issues() const { return issues_; }

  private:
    static std::string join(const std::vector<RingAxiomIssue>& v) {
        std::string s = "ring axioms violated:";
        for (const auto& i : v) s += " " + i.describe() + ";";
        return s;
    }
    std::vector<RingAxiomIssue> issues_;
};

// Ring finitely generated as an abelian group, in diagonal additive form:
// generator e_i has additive order orders[i] (0 = infinite), products are
// given by structure constants mult[i][j] = coordinates of e_i * e_j.
// Possibly non-commutative. Validated at construction.
class StructureRing {
  public:
    StructureRing() = default;

    static StructureRing validated(IntVec orders, std::vector<std::vector<RingElt>> mult, RingElt unit,
                                   std::string name = "") {
        StructureRing r;
        r.orders_ = std::move(orders);
        r.mult_ = std::move(mult);
        r.unit_ = std::move(unit);
        r.name_ = std::move(name);
        for (Int& d : r.orders_) d = abs_int(d);
        auto issues = r.axiom_violations();
        if (!issues.empty()) throw RingAxiomError(std::move(issues));
        r.unit_ = r.reduce(r.unit_);
        for (auto& row : r.mult_)
            for (auto& c : row) c = r.reduce(c);
        return r;
    }

    int rank() const { return static_cast<int>(orders_.size()); }
    const IntVec& orders() const { return orders_; }
    const RingElt& unit() const { return unit_; }
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }

    const RingElt& basis_product(int i, int j) const { return mult_[i][j]; }

    RingElt reduce(const RingElt& x) const {
        RingElt y(rank());
        for (int i = 0; i < rank(); ++i) y[i] = mod_order(x[i], orders_[i]);
        return y;
    }
    bool is_zero(const RingElt& x) const {
        for (int i = 0; i < rank(); ++i)
            if (mod_order(x[i], orders_[i]) != 0) return false;
        return true;
    }
    bool elements_equal(const RingElt& a, const RingElt& b) const { return reduce(a) == reduce(b); }

    RingElt mul(const RingElt& a, const RingElt& b) const {
        RingElt y(rank());
        for (int i = 0; i < rank(); ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < rank(); ++j) {
                if (b[j] == 0) continue;
                const RingElt& c = mult_[i][j];
                for (int l = 0; l < rank(); ++l)
                    if (c[l] != 0) y[l] += a[i] * b[j] * c[l];
            }
        }
        return reduce(y);
    }

    RingElt basis_elt(int i) const {
        RingElt e(rank());
        e[i] = 1;
        return e;
    }
    RingElt zero() const { return RingElt(rank()); }
    RingElt from_integer(const Int& n) const { return reduce(vec_scale(n, unit_)); }

    FgAbGroup additive() const { return FgAbGroup::diagonal(orders_); }

    // Matrix of y |-> a*y in the row convention (x transforms as x*M).
    IntMatrix left_mult_matrix(const RingElt& a) const {
        IntMatrix m(rank(), rank());
        for (int j = 0; j < rank(); ++j) m.set_row(j, mul(a, basis_elt(j)));
        return m;
    }
    // Matrix of y |-> y*a.
    IntMatrix right_mult_matrix(const RingElt& a) const {
        IntMatrix m(rank(), rank());
        for (int j = 0; j < rank(); ++j) m.set_row(j, mul(basis_elt(j), a));
        return m;
    }

    bool is_commutative() const {
        for (int i = 0; i < rank(); ++i)
            for (int j = i + 1; j < rank(); ++j)
                if (!elements_equal(mult_[i][j], mult_[j][i])) return false;
        return true;
    }

    std::vector<RingAxiomIssue> axiom_violations() const {
        std::vector<RingAxiomIssue> out;
        const int r = rank();
        if (static_cast<int>(mult_.size()) != r || static_cast<int>(unit_.size()) != r)
            throw std::invalid_argument("StructureRing: table shape mismatch");
        for (const auto& row : mult_) {
            if (static_cast<int>(row.size()) != r) throw std::invalid_argument("StructureRing: table shape mismatch");
            for (const auto& c : row)
                if (static_cast<int>(c.size()) != r)
                    throw std::invalid_argument("StructureRing: table shape mismatch");
        }
        // order compatibility: d_i * (e_i e_j) = 0 and d_j * (e_i e_j) = 0
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                bool bad = (orders_[i] != 0 && !is_zero(vec_scale(orders_[i], mult_[i][j]))) ||
                           (orders_[j] != 0 && !is_zero(vec_scale(orders_[j], mult_[i][j])));
                if (bad)
                    out.push_back({RingAxiomIssue::Kind::OrderIncompatible, i, j, -1});
            }
        // two-sided unit
        for (int i = 0; i < r; ++i) {
            if (!elements_equal(mul_raw(unit_, basis_elt(i)), basis_elt(i)) ||
                !elements_equal(mul_raw(basis_elt(i), unit_), basis_elt(i)))
                out.push_back({RingAxiomIssue::Kind::BadUnit, i, -1, -1});
        }
        // associativity on basis triples
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                for (int l = 0; l < r; ++l) {
                    RingElt ab_c = mul_raw(mult_[i][j], basis_elt(l));
                    RingElt a_bc = mul_raw(basis_elt(i), mult_[j][l]);
                    if (!elements_equal(ab_c, a_bc))
                        out.push_back({RingAxiomIssue::Kind::NonAssociative, i, j, l});
                }
        return out;
    }

  private:
    // product without assuming the table was validated (used during checks)
    RingElt mul_raw(const RingElt& a, const RingElt& b) const {
        RingElt y(rank());
        for (int i = 0; i < rank(); ++i)
            for (int j = 0; j < rank(); ++j) {
                if (a[i] == 0 || b[j] == 0) continue;
                for (int l = 0; l < rank(); ++l) y[l] += a[i] * b[j] * mult_[i][j][l];
            }
        return reduce(y);
    }

    IntVec orders_;
    std::vector<std::vector<RingElt>> mult_;
    RingElt unit_;
    std::string name_;
};

inline StructureRing ring_validate(IntVec orders, std::vector<std::vector<RingElt>> mult, RingElt unit,
                                   std::string name = "") {
    return StructureRing::validated(std::move(orders), std::move(mult), std::move(unit), std::move(name));
}

inline StructureRing ring_opposite(const StructureRing& r) {
    std::vector<std::vector<RingElt>> m(r.rank(), std::vector<RingElt>(r.rank()));
    for (int i = 0; i < r.rank(); ++i)
        for (int j = 0; j < r.rank(); ++j) m[i][j] = r.basis_product(j, i);
    return StructureRing::validated(r.orders(), std::move(m), r.unit(),
                                    r.name().empty() ? "" : r.name() + "^op");
}

// Unital ring homomorphism between structure rings, as a matrix on additive
// generators. Additive well-definedness, multiplicativity on basis pairs and
// preservation of the unit are checked at construction.
struct RingMap {
    StructureRing source, target;
    IntMatrix matrix;
};

inline RingMap ring_map(StructureRing src, StructureRing tgt, IntMatrix m) {
    if (m.rows() != src.rank() || m.cols() != tgt.rank())
        throw std::invalid_argument("ring_map: matrix shape mismatch");
    for (int i = 0; i < src.rank(); ++i) {
        if (src.orders()[i] == 0) continue;
        if (!tgt.is_zero(vec_scale(src.orders()[i], m.row(i))))
            throw std::invalid_argument("ring_map: additive orders not respected");
    }
    if (!tgt.elements_equal(apply_row(src.unit(), m), tgt.unit()))
        throw std::invalid_argument("ring_map: unit not preserved");
    for (int i = 0; i < src.rank(); ++i)
        for (int j = 0; j < src.rank(); ++j) {
            RingElt lhs = apply_row(src.basis_product(i, j), m);
            RingElt rhs = tgt.mul(m.row(i), m.row(j));
            if (!tgt.elements_equal(lhs, rhs))
                throw std::invalid_argument("ring_map: not multiplicative on basis pair (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
        }
    return RingMap{std::move(src), std::move(tgt), std::move(m)};
}

inline RingElt ring_map_apply(const RingMap& f, const RingElt& a) {
    return f.target.reduce(apply_row(a, f.matrix));
}

inline RingMap ring_map_identity(const StructureRing& r) {
    return RingMap{r, r, IntMatrix::identity(r.rank())};
}

inline RingMap ring_map_compose(const RingMap& f, const RingMap& g) {
    return RingMap{f.source, g.target, f.matrix * g.matrix};
}

// An algebra over a base ring: a ring S together with the structure map
// R -> S making it an object of the category of R-algebras.
struct Algebra {
    StructureRing ring;
    RingMap structure_map;  // base -> ring
    std::string name;
};

inline Algebra algebra_over(const StructureRing& base, const StructureRing& s, IntMatrix structure,
                            std::string name = "") {
    if (name.empty()) name = s.name();
    return Algebra{s, ring_map(base, s, std::move(structure)), std::move(name)};
}

inline Algebra algebra_self(const StructureRing& r, std::string name = "") {
    if (name.empty()) name = r.name().empty() ? "R" : r.name();
    return Algebra{r, ring_map_identity(r), std::move(name)};
}

// The unique unital map Z -> S.
inline Algebra algebra_over_integers(const StructureRing& z, const StructureRing& s, std::string name = "") {
    if (z.rank() != 1 || z.orders()[0] != 0)
        throw std::invalid_argument("algebra_over_integers: base is not the ring of integers");
    IntMatrix m(1, s.rank());
    m.set_row(0, s.unit());
    return algebra_over(z, s, std::move(m), std::move(name));
}

// --- Builtin catalog -------------------------------------------------------

inline StructureRing ring_integers() {
    return StructureRing::validated(IntVec{0}, {{IntVec{1}}}, IntVec{1}, "integers");
}

inline StructureRing ring_cyclic(const Int& n) {
    if (n < 0) throw std::invalid_argument("cyclic: modulus must be >= 0");
    return StructureRing::validated(IntVec{n}, {{IntVec{1}}}, IntVec{1},
                                    "cyclic(" + n.get_str() + ")");
}

// n x n matrices over Z/m (m = 0 gives matrices over Z).
inline StructureRing ring_matrix(int n, const Int& m) {
    if (n < 1) throw std::invalid_argument("matrix: size must be >= 1");
    const int r = n * n;
    auto idx = [n](int a, int b) { return a * n + b; };
    std::vector<std::vector<RingElt>> mult(r, std::vector<RingElt>(r, RingElt(r)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    if (b == c) mult[idx(a, b)][idx(c, d)][idx(a, d)] = 1;
    RingElt unit(r);
    for (int a = 0; a < n; ++a) unit[idx(a, a)] = 1;
    return StructureRing::validated(IntVec(r, m), std::move(mult), std::move(unit),
                                    "matrix(" + std::to_string(n) + "," + m.get_str() + ")");
}

// Upper-triangular n x n matrices over Z/m.
inline StructureRing ring_triangular(int n, const Int& m) {
    if (n < 1) throw std::invalid_argument("triangular: size must be >= 1");
    std::vector<std::pair<int, int>> cells;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) cells.push_back({a, b});
    const int r = static_cast<int>(cells.size());
    auto idx = [&cells](int a, int b) {
        for (std::size_t t = 0; t < cells.size(); ++t)
            if (cells[t].first == a && cells[t].second == b) return static_cast<int>(t);
        return -1;
    };
    std::vector<std::vector<RingElt>> mult(r, std::vector<RingElt>(r, RingElt(r)));
    for (int s = 0; s < r; ++s)
        for (int t = 0; t < r; ++t) {
            auto [a, b] = cells[s];
            auto [c, d] = cells[t];
            if (b == c) mult[s][t][idx(a, d)] = 1;
        }
    RingElt unit(r);
    for (int a = 0; a < n; ++a) unit[idx(a, a)] = 1;
    return StructureRing::validated(IntVec(r, m), std::move(mult), std::move(unit),
                                    "triangular(" + std::to_string(n) + "," + m.get_str() + ")");
}

// Group ring (Z/m)[A] for the finite abelian group A = prod Z/type[i].
inline StructureRing ring_group_ring(const IntVec& type, const Int& m) {
    for (const Int& t : type)
        if (t < 1) throw std::invalid_argument("group_ring: group orders must be >= 1");
    std::vector<IntVec> elems;
    IntVec cur(type.size(), Int(0));
    for (;;) {
        elems.push_back(cur);
        std::size_t i = 0;
        for (; i < type.size(); ++i) {
            cur[i] += 1;
            if (cur[i] < type[i]) break;
            cur[i] = 0;
        }
        if (i == type.size()) break;
    }
    const int r = static_cast<int>(elems.size());
    auto find = [&elems](const IntVec& v) {
        for (std::size_t t = 0; t < elems.size(); ++t)
            if (elems[t] == v) return static_cast<int>(t);
        return -1;
    };
    std::vector<std::vector<RingElt>> mult(r, std::vector<RingElt>(r, RingElt(r)));
    for (int s = 0; s < r; ++s)
        for (int t = 0; t < r; ++t) {
            IntVec sum(type.size());
            for (std::size_t i = 0; i < type.size(); ++i)
                sum[i] = mod_order(elems[s][i] + elems[t][i], type[i]);
            mult[s][t][find(sum)] = 1;
        }
    RingElt unit(r);
    unit[find(IntVec(type.size(), Int(0)))] = 1;
    std::string nm = "group_ring(";
    for (std::size_t i = 0; i < type.size(); ++i) nm += (i ? "x" : "") + type[i].get_str();
    nm += "," + m.get_str() + ")";
    return StructureRing::validated(IntVec(r, m), std::move(mult), std::move(unit), std::move(nm));
}

inline StructureRing ring_product(const StructureRing& a, const StructureRing& b) {
    const int ra = a.rank(), rb = b.rank(), r = ra + rb;
    IntVec orders(r);
    for (int i = 0; i < ra; ++i) orders[i] = a.orders()[i];
    for (int i = 0; i < rb; ++i) orders[ra + i] = b.orders()[i];
    std::vector<std::vector<RingElt>> mult(r, std::vector<RingElt>(r, RingElt(r)));
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < ra; ++j)
            for (int l = 0; l < ra; ++l) mult[i][j][l] = a.basis_product(i, j)[l];
    for (int i = 0; i < rb; ++i)
        for (int j = 0; j < rb; ++j)
            for (int l = 0; l < rb; ++l) mult[ra + i][ra + j][ra + l] = b.basis_product(i, j)[l];
    RingElt unit(r);
    for (int i = 0; i < ra; ++i) unit[i] = a.unit()[i];
    for (int i = 0; i < rb; ++i) unit[ra + i] = b.unit()[i];
    return StructureRing::validated(std::move(orders), std::move(mult), std::move(unit),
                                    "product(" + a.name() + "," + b.name() + ")");
}

// (Z/m)[x]/(x^2): rank 2, e0 = 1, e1 = x with x^2 = 0.
inline StructureRing ring_dual_numbers(const Int& m) {
    std::vector<std::vector<RingElt>> mult(2, std::vector<RingElt>(2, RingElt(2)));
    mult[0][0] = IntVec{1, 0};
    mult[0][1] = IntVec{0, 1};
    mult[1][0] = IntVec{0, 1};
    mult[1][1] = IntVec{0, 0};
    return StructureRing::validated(IntVec{m, m}, std::move(mult), IntVec{1, 0},
                                    "dual_numbers(" + m.get_str() + ")");
}

// --- Central split criterion ----------------------------------------------

// Decides the sufficient criterion: the subring generated by `gens` is
// central and is a direct summand of R as a module over itself (a retraction
// exists, found by exact linear solving). When this holds, the base-change
// injectivity required of a central subalgebra holds for every module.
//
// Throws if the generators do not generate a unital subring.
inline bool is_central_subring_split(const StructureRing& r, const std::vector<RingElt>& gens) {
    const int n = r.rank();
    FgAbGroup add = r.additive();

    // close the additive span of gens under multiplication
    IntMatrix span = hnf_canonical(vstack(IntMatrix::from_rows(gens, n), add.rels()));
    for (;;) {
        std::vector<IntVec> extra;
        for (int i = 0; i < span.rows(); ++i)
            for (int j = 0; j < span.rows(); ++j) {
                RingElt p = r.mul(span.row(i), span.row(j));
                if (!solve_left(span, p).has_value()) extra.push_back(p);
            }
        if (extra.empty()) break;
        span = hnf_canonical(vstack(span, IntMatrix::from_rows(extra, n)));
    }
    if (!solve_left(span, r.unit()).has_value())
        throw std::invalid_argument("is_central_subring_split: generators span no unital subring");

    auto emb = subgroup_as_group(subgroup(add, span));
    const FgAbGroup& sub = emb.group;          // abstract copy of R'
    const IntMatrix& p = emb.inclusion.matrix;  // sub -> R coordinates
    const int t = sub.ambient();

    // centrality of every element of R'
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < n; ++j) {
            RingElt u = p.row(i);
            if (!r.elements_equal(r.mul(u, r.basis_elt(j)), r.mul(r.basis_elt(j), u))) return false;
        }

    // Retraction rho: R -> R' with rho|R' = id and rho(u x) = u rho(x).
    // Unknowns are the n*t entries of rho's matrix; each logical condition is
    // sum_k rho(v_k) * P_k ≡ target, read per Smith coordinate of R'.
    const IntVec& sords = sub.coord_orders();
    struct LinCond {
        std::vector<std::pair<IntVec, IntMatrix>> terms;  // (ambient elt, post map)
        IntVec target;
    };
    std::vector<LinCond> lin;
    for (int i = 0; i < t; ++i) {
        IntVec target(t);
        target[i] = 1;
        lin.push_back({{{p.row(i), IntMatrix::identity(t)}}, target});
    }
    for (int i = 0; i < t; ++i) {
        IntMatrix mi(t, t);
        for (int l = 0; l < t; ++l) mi.set_row(l, *solve_left(span, r.mul(p.row(i), p.row(l))));
        for (int j = 0; j < n; ++j) {
            IntVec ej(n);
            ej[j] = 1;
            lin.push_back({{{r.mul(p.row(i), r.basis_elt(j)), IntMatrix::identity(t)}, {ej, -mi}},
                           IntVec(t)});
        }
    }
    // additive well-definedness: d_j * rho(e_j) ≡ 0
    for (int j = 0; j < n; ++j) {
        if (r.orders()[j] == 0) continue;
        IntVec ej(n);
        ej[j] = r.orders()[j];
        lin.push_back({{{ej, IntMatrix::identity(t)}}, IntVec(t)});
    }

    const int unknowns = n * t;
    std::vector<IntVec> cols;
    IntVec mods, rhsv;
    for (const auto& lc : lin) {
        // value(X) = sum_k v_k * X * P_k, conditions per Smith coordinate of sub
        for (int j = 0; j < t; ++j) {
            if (sords[j] == 1) continue;
            IntVec col(unknowns);
            bool nz = false;
            for (const auto& [v, post] : lc.terms) {
                IntMatrix pv = post * sub.smith_basis();  // t x t
                for (int a = 0; a < n; ++a) {
                    if (v[a] == 0) continue;
                    for (int b = 0; b < t; ++b) {
                        Int add_c = v[a] * pv.at(b, j);
                        if (add_c != 0) {
                            col[a * t + b] += add_c;
                            nz = true;
                        }
                    }
                }
            }
            IntVec tj = apply_row(lc.target, sub.smith_basis());
            for (Int& x : col) x = mod_order(x, sords[j]);
            rhsv.push_back(mod_order(tj[j], sords[j]));
            mods.push_back(sords[j]);
            if (nz || rhsv.back() != 0) cols.push_back(col);
            else { rhsv.pop_back(); mods.pop_back(); }
        }
    }
    IntMatrix a(unknowns, static_cast<int>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (int i = 0; i < unknowns; ++i) a.at(i, static_cast<int>(c)) = cols[c][i];
    return solve_congruences(a, rhsv, mods).has_value();
}

}  // namespace modref
