#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modref/ring.hpp"

namespace modref {

inline bool rings_equal(const StructureRing& a, const StructureRing& b) {
    if (a.rank() != b.rank() || a.orders() != b.orders() || a.unit() != b.unit()) return false;
    for (int i = 0; i < a.rank(); ++i)
        for (int j = 0; j < a.rank(); ++j)
            if (a.basis_product(i, j) != b.basis_product(i, j)) return false;
    return true;
}

// Check that per-generator maps on a group satisfy the module axioms of a
// ring given by structure constants: act(e_i) after act(e_j) equals the
// expansion of act(e_i e_j), and the unit acts as the identity.
inline void check_action_axioms(const FgAbGroup& g, const StructureRing& r,
                                const std::vector<IntMatrix>& act, const char* what) {
    const int k = g.ambient();
    auto equal_mod = [&](const IntMatrix& a, const IntMatrix& b) {
        IntMatrix d = a - b;
        for (int i = 0; i < k; ++i)
            if (!g.is_zero_elt(d.row(i))) return false;
        return true;
    };
    for (int i = 0; i < r.rank(); ++i)
        for (int j = 0; j < r.rank(); ++j) {
            IntMatrix lhs = act[j] * act[i];  // x*A_j*A_i realizes e_i.(e_j.x)... see below
            // row convention: applying e_j then e_i is x*A_j*A_i and must equal
            // the action of e_i e_j
            IntMatrix rhs(k, k);
            const RingElt& c = r.basis_product(i, j);
            for (int l = 0; l < r.rank(); ++l) {
                if (c[l] == 0) continue;
                for (int p = 0; p < k; ++p)
                    for (int q = 0; q < k; ++q) rhs.at(p, q) += c[l] * act[l].at(p, q);
            }
            if (!equal_mod(lhs, rhs))
                throw std::logic_error(std::string(what) + ": action breaks structure constants at (" +
                                       std::to_string(i) + "," + std::to_string(j) + ")");
        }
    IntMatrix uid(k, k);
    for (int l = 0; l < r.rank(); ++l) {
        if (r.unit()[l] == 0) continue;
        for (int p = 0; p < k; ++p)
            for (int q = 0; q < k; ++q) uid.at(p, q) += r.unit()[l] * act[l].at(p, q);
    }
    if (!equal_mod(uid, IntMatrix::identity(k)))
        throw std::logic_error(std::string(what) + ": unit does not act as identity");
    for (int i = 0; i < r.rank(); ++i) {
        if (r.orders()[i] == 0) continue;
        IntMatrix scaled(k, k);
        for (int p = 0; p < k; ++p)
            for (int q = 0; q < k; ++q) scaled.at(p, q) = r.orders()[i] * act[i].at(p, q);
        if (!equal_mod(scaled, IntMatrix::zero(k, k)))
            throw std::logic_error(std::string(what) + ": action ignores generator order");
    }
}

// Finitely presented left or right module over a StructureRing. Right
// modules are stored as left modules over the opposite ring; `acting` is the
// ring whose left action the matrices implement. The underlying abelian
// group lives on ambient coordinates that are literally the R-coefficients
// of the generators, so expressing an element as an R-combination of
// generators is coordinate projection.
struct FpModule {
    StructureRing ring;
    bool left = true;
    StructureRing acting;                         // ring, or its opposite for right modules
    int gens = 0;
    std::vector<std::vector<RingElt>> relations;  // each: one RingElt per generator
    FgAbGroup underlying;                         // ambient = gens * rank
    std::vector<IntMatrix> action;                // per acting-basis generator, on ambient
    Compression comp;                             // compressed underlying
    std::vector<IntMatrix> action_c;              // action on compressed coordinates

    std::string describe() const {
        return std::string(left ? "left" : "right") + " module over " + ring.name() + ": " +
               underlying.describe();
    }
};

inline FpModule module_from_presentation(const StructureRing& r, bool left, int gens,
                                         const std::vector<std::vector<RingElt>>& relations) {
    FpModule m;
    m.ring = r;
    m.left = left;
    m.acting = left ? r : ring_opposite(r);
    m.gens = gens;
    m.relations = relations;
    const int rk = r.rank();
    const int amb = gens * rk;

    std::vector<IntVec> rows;
    for (int g = 0; g < gens; ++g)
        for (int i = 0; i < rk; ++i) {
            if (r.orders()[i] == 0) continue;
            IntVec row(amb);
            row[g * rk + i] = r.orders()[i];
            rows.push_back(row);
        }
    for (const auto& rel : relations) {
        if (static_cast<int>(rel.size()) != gens)
            throw std::invalid_argument("module_from_presentation: relation arity mismatch");
        for (int i = 0; i < rk; ++i) {
            IntVec row(amb);
            for (int g = 0; g < gens; ++g) {
                RingElt prod = m.acting.mul(m.acting.basis_elt(i), rel[g]);
                for (int l = 0; l < rk; ++l) row[g * rk + l] = prod[l];
            }
            rows.push_back(row);
        }
    }
    m.underlying = FgAbGroup::from_presentation(amb, IntMatrix::from_rows(rows, amb));

    m.action.reserve(rk);
    for (int i = 0; i < rk; ++i) {
        IntMatrix a(amb, amb);
        IntMatrix lm = m.acting.left_mult_matrix(m.acting.basis_elt(i));
        for (int g = 0; g < gens; ++g)
            for (int p = 0; p < rk; ++p)
                for (int q = 0; q < rk; ++q) a.at(g * rk + p, g * rk + q) = lm.at(p, q);
        m.action.push_back(std::move(a));
    }
    check_action_axioms(m.underlying, m.acting, m.action, "module_from_presentation");

    m.comp = compress(m.underlying);
    for (const auto& a : m.action)
        m.action_c.push_back(m.comp.from_comp * a * m.comp.to_comp);
    return m;
}

inline FpModule free_module(const StructureRing& r, bool left, int n) {
    return module_from_presentation(r, left, n, {});
}
inline FpModule zero_module(const StructureRing& r, bool left) {
    return module_from_presentation(r, left, 0, {});
}

// Action of a ring element on an element in ambient coordinates.
inline IntVec module_scale(const FpModule& m, const RingElt& a, const IntVec& x) {
    IntVec y(m.underlying.ambient());
    for (int i = 0; i < m.acting.rank(); ++i) {
        if (a[i] == 0) continue;
        IntVec t = apply_row(x, m.action[i]);
        for (int p = 0; p < m.underlying.ambient(); ++p) y[p] += a[i] * t[p];
    }
    return m.underlying.canon(y);
}

// Generator g as an element: unit coefficient in block g.
inline IntVec module_generator(const FpModule& m, int g) {
    IntVec x(m.underlying.ambient());
    for (int l = 0; l < m.ring.rank(); ++l) x[g * m.ring.rank() + l] = m.ring.unit()[l];
    return x;
}

// A module presented from an explicit action: the group is given in diagonal
// form with one module generator per coordinate, and act[i] realizes the
// action of basis element e_i (left action for left modules, x |-> x*e_i for
// right ones). Returns the module together with the coordinate bridges.
struct ActionModule {
    FpModule module;
    IntMatrix coords_to_underlying;  // s x (s*rank)
    IntMatrix underlying_to_coords;  // (s*rank) x s
};

inline ActionModule module_from_action(const StructureRing& r, bool left, const IntVec& orders,
                                       const std::vector<IntMatrix>& act) {
    const int s = static_cast<int>(orders.size());
    const int rk = r.rank();
    FgAbGroup given = FgAbGroup::diagonal(orders);
    const StructureRing acting = left ? r : ring_opposite(r);
    check_action_axioms(given, acting, act, "module_from_action");

    std::vector<std::vector<RingElt>> rels;
    for (int l = 0; l < s; ++l) {
        if (orders[l] == 0) continue;
        std::vector<RingElt> rel(s, r.zero());
        rel[l] = r.reduce(vec_scale(orders[l], r.unit()));
        rels.push_back(std::move(rel));
    }
    for (int i = 0; i < rk; ++i)
        for (int l = 0; l < s; ++l) {
            std::vector<RingElt> rel(s, r.zero());
            rel[l] = vec_add(rel[l], acting.basis_elt(i));
            IntVec image = act[i].row(l);  // e_i . m_l in the given coordinates
            for (int mcol = 0; mcol < s; ++mcol)
                rel[mcol] = vec_sub(rel[mcol], vec_scale(image[mcol], r.unit()));
            for (auto& c : rel) c = r.reduce(c);
            rels.push_back(std::move(rel));
        }

    ActionModule out;
    out.module = module_from_presentation(r, left, s, rels);

    out.coords_to_underlying = IntMatrix(s, s * rk);
    for (int l = 0; l < s; ++l)
        for (int j = 0; j < rk; ++j) out.coords_to_underlying.at(l, l * rk + j) = r.unit()[j];
    out.underlying_to_coords = IntMatrix(s * rk, s);
    for (int l = 0; l < s; ++l)
        for (int i = 0; i < rk; ++i) out.underlying_to_coords.set_row(l * rk + i, act[i].row(l));

    // self-check: the bridge is an isomorphism given <-> underlying
    GroupMap bridge = make_map(given, out.module.underlying, out.coords_to_underlying);
    if (!map_is_isomorphism(bridge))
        throw std::logic_error("module_from_action: presented module does not match the given group");
    IntMatrix round = out.coords_to_underlying * out.underlying_to_coords;
    for (int l = 0; l < s; ++l) {
        IntVec e(s);
        e[l] = 1;
        if (!given.elements_equal(apply_row(e, round), e))
            throw std::logic_error("module_from_action: coordinate bridges fail to invert");
    }
    return out;
}

// S as a left R-module through the structure map.
inline ActionModule algebra_as_left_module(const Algebra& a) {
    std::vector<IntMatrix> act;
    for (int i = 0; i < a.structure_map.source.rank(); ++i)
        act.push_back(a.ring.left_mult_matrix(ring_map_apply(a.structure_map, a.structure_map.source.basis_elt(i))));
    return module_from_action(a.structure_map.source, true, a.ring.orders(), act);
}

// S as a right R-module through the structure map.
inline ActionModule algebra_as_right_module(const Algebra& a) {
    std::vector<IntMatrix> act;
    for (int i = 0; i < a.structure_map.source.rank(); ++i)
        act.push_back(a.ring.right_mult_matrix(ring_map_apply(a.structure_map, a.structure_map.source.basis_elt(i))));
    return module_from_action(a.structure_map.source, false, a.ring.orders(), act);
}

// Module homomorphism; R-linearity is checked at construction.
struct ModuleMap {
    FpModule source, target;
    IntMatrix matrix;  // on underlying ambient coordinates
};

inline ModuleMap module_map(const FpModule& src, const FpModule& tgt, IntMatrix m) {
    if (!rings_equal(src.ring, tgt.ring) || src.left != tgt.left)
        throw std::invalid_argument("module_map: modules live over different rings or sides");
    GroupMap g = make_map(src.underlying, tgt.underlying, m);  // additive well-definedness
    for (int i = 0; i < src.acting.rank(); ++i) {
        IntMatrix d = src.action[i] * g.matrix - g.matrix * tgt.action[i];
        for (int p = 0; p < d.rows(); ++p)
            if (!tgt.underlying.is_zero_elt(d.row(p)))
                throw std::invalid_argument("module_map: not linear over basis element " + std::to_string(i));
    }
    return ModuleMap{src, tgt, std::move(g.matrix)};
}

// S (x)_R M as a module over the algebra's ring: same generators, relations
// pushed through the structure map.
inline FpModule base_change(const FpModule& m, const Algebra& a) {
    if (!rings_equal(m.ring, a.structure_map.source))
        throw std::invalid_argument("base_change: module not over the algebra's base ring");
    std::vector<std::vector<RingElt>> rels;
    for (const auto& rel : m.relations) {
        std::vector<RingElt> pushed;
        for (const auto& c : rel) pushed.push_back(ring_map_apply(a.structure_map, c));
        rels.push_back(std::move(pushed));
    }
    return module_from_presentation(a.ring, m.left, m.gens, rels);
}

// Hom_R(M, P): the additive homs between the compressed underlying groups
// cut out by R-linearity, solved entirely in compressed (diagonal)
// coordinates. `basis` row t is the flattened compressed matrix realizing
// the t-th generator; lifts are reported on the underlying ambients.
struct HomRGroup {
    FgAbGroup group;
    IntMatrix basis;  // t x (tM * tP), compressed coordinates
    FpModule source, target;
};

inline HomRGroup hom_R(const FpModule& m, const FpModule& p) {
    if (!rings_equal(m.ring, p.ring) || m.left != p.left)
        throw std::invalid_argument("hom_R: modules live over different rings or sides");
    const int tm = m.comp.comp.ambient();
    const int tp = p.comp.comp.ambient();
    const IntVec& mords = m.comp.comp.coord_orders();
    const IntVec& pords = p.comp.comp.coord_orders();

    LatticeRestrictor lr(tm * tp);
    // additive: d_a F[a, q] ≡ 0 (mod d_q)
    for (int a = 0; a < tm; ++a) {
        if (mords[a] == 0) continue;
        for (int q = 0; q < tp; ++q) {
            if (pords[q] == 1) continue;
            Int c = mod_order(mords[a], pords[q]);
            if (c != 0 || pords[q] == 0)
                lr.restrict_sparse({{a * tp + q, mords[a]}}, pords[q]);
        }
    }
    // linearity: (A_i F - F B_i)[a, q] ≡ 0 (mod d_q) on compressed actions
    for (int i = 0; i < m.acting.rank(); ++i) {
        const IntMatrix& ai = m.action_c[i];
        const IntMatrix& bi = p.action_c[i];
        for (int a = 0; a < tm; ++a)
            for (int q = 0; q < tp; ++q) {
                if (pords[q] == 1) continue;
                std::map<int, Int> col;
                for (int pp = 0; pp < tm; ++pp)
                    if (ai.at(a, pp) != 0) col[pp * tp + q] += ai.at(a, pp);
                for (int qq = 0; qq < tp; ++qq)
                    if (bi.at(qq, q) != 0) col[a * tp + qq] -= bi.at(qq, q);
                std::vector<std::pair<int, Int>> sparse;
                for (auto& [idx, c] : col) {
                    Int cc = mod_order(c, pords[q]);
                    if (cc != 0) sparse.push_back({idx, cc});
                }
                if (!sparse.empty()) lr.restrict_sparse(sparse, pords[q]);
            }
    }
    IntMatrix basis = hnf_canonical(lr.basis());
    // trivial homs: matrices vanishing into the torsion of P
    std::vector<IntVec> triv;
    for (int a = 0; a < tm; ++a)
        for (int q = 0; q < tp; ++q) {
            if (pords[q] == 0) continue;
            IntVec row(tm * tp);
            row[a * tp + q] = pords[q];
            triv.push_back(row);
        }
    auto coords = solve_left(basis, IntMatrix::from_rows(triv, tm * tp));
    HomRGroup out;
    out.group = FgAbGroup::from_presentation(basis.rows(), *coords);
    out.basis = std::move(basis);
    out.source = m;
    out.target = p;
    return out;
}

// The underlying-ambient matrix of a hom element.
inline IntMatrix hom_R_lift(const HomRGroup& hg, const IntVec& coords) {
    IntVec flat = apply_row(coords, hg.basis);
    const int tp = hg.target.comp.comp.ambient();
    IntMatrix fc(hg.source.comp.comp.ambient(), tp);
    for (int a = 0; a < fc.rows(); ++a)
        for (int q = 0; q < tp; ++q) fc.at(a, q) = flat[a * tp + q];
    return hg.source.comp.to_comp * fc * hg.target.comp.from_comp;
}

inline IntVec hom_R_evaluate(const HomRGroup& hg, const IntVec& coords, const IntVec& x) {
    return hg.target.underlying.canon(apply_row(x, hom_R_lift(hg, coords)));
}

// Coordinates of an explicit R-linear matrix given on underlying ambients.
inline std::optional<IntVec> hom_R_coords_of(const HomRGroup& hg, const IntMatrix& f) {
    IntMatrix fc = hg.source.comp.from_comp * f * hg.target.comp.to_comp;
    const int tp = hg.target.comp.comp.ambient();
    IntVec flat(static_cast<std::size_t>(fc.rows()) * tp);
    for (int a = 0; a < fc.rows(); ++a)
        for (int q = 0; q < tp; ++q) flat[a * tp + q] = fc.at(a, q);
    return solve_left(hg.basis, flat);
}

// A module structure on a plain group over an algebra's ring: used for the
// right S-module structures carried by duals and extension values.
struct SModuleStructure {
    FgAbGroup group;
    Algebra algebra;
    bool left = false;
    std::vector<IntMatrix> action;  // per basis element of the algebra's ring
};

// Hom_R(M, S) with its right S-module structure (f.s)(m) = f(m).s.
struct DualModule {
    HomRGroup hom;                  // the group and matrix lifts
    Algebra algebra;
    ActionModule s_as_left_module;  // target of the hom, with coordinate bridges
    std::vector<IntMatrix> action;  // right S-action on hom coordinates

    SModuleStructure smodule() const { return SModuleStructure{hom.group, algebra, false, action}; }
};

inline DualModule dual_at(const FpModule& m, const Algebra& a) {
    if (!m.left) throw std::invalid_argument("dual_at: expected a left module");
    if (!rings_equal(m.ring, a.structure_map.source))
        throw std::invalid_argument("dual_at: module not over the algebra's base ring");
    DualModule d;
    d.algebra = a;
    d.s_as_left_module = algebra_as_left_module(a);
    d.hom = hom_R(m, d.s_as_left_module.module);

    const StructureRing& s = a.ring;
    const int t = d.hom.group.ambient();
    for (int i = 0; i < s.rank(); ++i) {
        // right multiplication by e_i on the underlying of S-as-module
        IntMatrix rm = d.s_as_left_module.underlying_to_coords * s.right_mult_matrix(s.basis_elt(i)) *
                       d.s_as_left_module.coords_to_underlying;
        IntMatrix act(t, t);
        for (int b = 0; b < t; ++b) {
            IntVec coords(t);
            coords[b] = 1;
            IntMatrix f = hom_R_lift(d.hom, coords) * rm;
            auto c = hom_R_coords_of(d.hom, f);
            if (!c) throw std::logic_error("dual_at: right action leaves the hom lattice");
            act.set_row(b, *c);
        }
        d.action.push_back(std::move(act));
    }
    check_action_axioms(d.hom.group, ring_opposite(s), d.action, "dual_at");
    return d;
}

// --- Bimodule structures ----------------------------------------------------

// A left module together with a verified commuting right action.
struct BimoduleStructure {
    FpModule module;                      // left module
    std::vector<IntMatrix> right_action;  // x |-> x.e_i on underlying ambient
};

inline BimoduleStructure declare_bimodule(const FpModule& m, std::vector<IntMatrix> right_action) {
    if (!m.left) throw std::invalid_argument("declare_bimodule: expected a left module");
    check_action_axioms(m.underlying, ring_opposite(m.ring), right_action, "declare_bimodule");
    for (int i = 0; i < m.ring.rank(); ++i)
        for (int j = 0; j < m.ring.rank(); ++j) {
            IntMatrix d = m.action[i] * right_action[j] - right_action[j] * m.action[i];
            for (int p = 0; p < d.rows(); ++p)
                if (!m.underlying.is_zero_elt(d.row(p)))
                    throw std::invalid_argument("declare_bimodule: left and right actions do not commute");
        }
    return BimoduleStructure{m, std::move(right_action)};
}

// Over a commutative ring every left module is a bimodule with m.r := r.m.
inline BimoduleStructure bimodule_from_commutative(const FpModule& m) {
    if (!m.ring.is_commutative())
        throw std::invalid_argument("bimodule_from_commutative: ring is not commutative");
    return declare_bimodule(m, m.action);
}

// The regular bimodule R over itself.
inline BimoduleStructure bimodule_regular(const StructureRing& r) {
    FpModule m = free_module(r, true, 1);
    std::vector<IntMatrix> right;
    for (int i = 0; i < r.rank(); ++i) right.push_back(r.right_mult_matrix(r.basis_elt(i)));
    return declare_bimodule(m, right);
}

// An algebra S as an R-bimodule through its structure map.
inline BimoduleStructure bimodule_algebra(const Algebra& a) {
    ActionModule am = algebra_as_left_module(a);
    std::vector<IntMatrix> right;
    for (int i = 0; i < a.structure_map.source.rank(); ++i) {
        RingElt im = ring_map_apply(a.structure_map, a.structure_map.source.basis_elt(i));
        right.push_back(am.underlying_to_coords * a.ring.right_mult_matrix(im) * am.coords_to_underlying);
    }
    return declare_bimodule(am.module, std::move(right));
}

// --- Quasicoherent extension of a linear map --------------------------------

struct AlgebraDiagram {
    std::vector<Algebra> algebras;
    struct Arrow {
        int from, to;
        RingMap map;
    };
    std::vector<Arrow> arrows;
};

inline void validate_diagram(const AlgebraDiagram& d) {
    for (const auto& ar : d.arrows) {
        const Algebra& a = d.algebras.at(ar.from);
        const Algebra& b = d.algebras.at(ar.to);
        if (!rings_equal(ar.map.source, a.ring) || !rings_equal(ar.map.target, b.ring))
            throw std::invalid_argument("diagram: arrow endpoints do not match");
        // arrows must be maps of R-algebras: compatible with structure maps
        IntMatrix lhs = a.structure_map.matrix * ar.map.matrix;
        IntMatrix rhs = b.structure_map.matrix;
        for (int i = 0; i < lhs.rows(); ++i)
            if (!b.ring.is_zero(vec_sub(lhs.row(i), rhs.row(i))))
                throw std::invalid_argument("diagram: arrow is not a map of algebras over the base");
    }
}

// The canonical extension f_S = id_S (x) w of a linear map w: M -> N, one
// component per algebra, with all naturality squares over the diagram's
// arrows checked exactly.
struct NaturalFamily {
    std::vector<FpModule> source_values, target_values;  // per algebra
    std::vector<IntMatrix> components;                   // on underlying ambients
};

inline NaturalFamily qc_hom_from_linear(const ModuleMap& w, const AlgebraDiagram& diagram) {
    validate_diagram(diagram);
    const FpModule& m = w.source;
    const FpModule& n = w.target;
    const int rk = m.ring.rank();

    NaturalFamily fam;
    for (const auto& alg : diagram.algebras) {
        FpModule ms = base_change(m, alg);
        FpModule ns = base_change(n, alg);
        const int sk = alg.ring.rank();
        IntMatrix comp(ms.underlying.ambient(), ns.underlying.ambient());
        for (int j = 0; j < m.gens; ++j) {
            IntVec wj = apply_row(module_generator(m, j), w.matrix);
            for (int g = 0; g < n.gens; ++g) {
                // coefficient of generator g in w(gen_j), pushed through the algebra
                RingElt rho(rk);
                for (int l = 0; l < rk; ++l) rho[l] = wj[g * rk + l];
                IntMatrix rms = alg.ring.right_mult_matrix(ring_map_apply(alg.structure_map, rho));
                for (int p = 0; p < sk; ++p)
                    for (int q = 0; q < sk; ++q) comp.at(j * sk + p, g * sk + q) = rms.at(p, q);
            }
        }
        module_map(ms, ns, comp);  // S-linearity self-check
        fam.source_values.push_back(std::move(ms));
        fam.target_values.push_back(std::move(ns));
        fam.components.push_back(std::move(comp));
    }
    // naturality over every arrow
    for (const auto& ar : diagram.arrows) {
        const int sk_from = diagram.algebras[ar.from].ring.rank();
        const int sk_to = diagram.algebras[ar.to].ring.rank();
        auto block_phi = [&](int blocks) {
            IntMatrix b(blocks * sk_from, blocks * sk_to);
            for (int g = 0; g < blocks; ++g)
                for (int p = 0; p < sk_from; ++p)
                    for (int q = 0; q < sk_to; ++q) b.at(g * sk_from + p, g * sk_to + q) = ar.map.matrix.at(p, q);
            return b;
        };
        IntMatrix lhs = fam.components[ar.from] * block_phi(n.gens);
        IntMatrix rhs = block_phi(m.gens) * fam.components[ar.to];
        IntMatrix d = lhs - rhs;
        const FgAbGroup& tgt = fam.target_values[ar.to].underlying;
        for (int p = 0; p < d.rows(); ++p)
            if (!tgt.is_zero_elt(d.row(p)))
                throw std::logic_error("qc_hom_from_linear: naturality square fails");
    }
    return fam;
}

}  // namespace modref
