#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modref/verifiers.hpp"

namespace modref {

// A test pair (N, M) together with the sufficiency route that predicts
// exactness of its fork.
struct CatalogPair {
    std::string name;
    FpModule n, m;
    std::optional<BimoduleStructure> bimodule_on_m;
    bool flat = false;     // asserted flatness of M (or N)
    bool central = false;  // covered by the ring's split central subring
};

struct CatalogEntry {
    std::string name;
    StructureRing ring;
    std::vector<std::pair<std::string, FpModule>> left_modules;
    std::vector<std::pair<std::string, FpModule>> right_modules;
    AlgebraDiagram diagram;  // always contains the ring itself first
    std::vector<CatalogPair> pairs;
    std::vector<RingElt> central_gens;
    int cap = 3;  // truncation cap for the graded jobs on this entry
};

namespace builtins {

inline FpModule quotient_module(const StructureRing& r, bool left, const std::vector<RingElt>& ideal_gens) {
    std::vector<std::vector<RingElt>> rels;
    for (const auto& g : ideal_gens) rels.push_back({g});
    return module_from_presentation(r, left, 1, rels);
}

inline RingElt ints(std::vector<long> v) { return RingElt(v.begin(), v.end()); }

// F4 as F2[w]/(w^2 + w + 1).
inline StructureRing ring_f4() {
    std::vector<std::vector<RingElt>> mult(2, std::vector<RingElt>(2, RingElt(2)));
    mult[0][0] = ints({1, 0});
    mult[0][1] = ints({0, 1});
    mult[1][0] = ints({0, 1});
    mult[1][1] = ints({1, 1});
    return StructureRing::validated(IntVec{2, 2}, std::move(mult), ints({1, 0}), "f4");
}

inline CatalogEntry entry_integers() {
    CatalogEntry e;
    e.name = "integers";
    e.ring = ring_integers();
    e.central_gens = {e.ring.unit()};
    auto mod = [&](bool left, long n) { return quotient_module(e.ring, left, {ints({n})}); };
    e.left_modules = {{"Z", free_module(e.ring, true, 1)},
                      {"Z/2", mod(true, 2)},
                      {"Z/3", mod(true, 3)},
                      {"Z/4", mod(true, 4)},
                      {"Z/6", mod(true, 6)},
                      {"Z+Z/3", module_from_presentation(e.ring, true, 2, {{ints({0}), ints({3})}})}};
    e.right_modules = {{"Z", free_module(e.ring, false, 1)},
                       {"Z/2", mod(false, 2)},
                       {"Z/3", mod(false, 3)},
                       {"Z/4", mod(false, 4)},
                       {"Z/6", mod(false, 6)},
                       {"Z+Z/3", module_from_presentation(e.ring, false, 2, {{ints({0}), ints({3})}})}};

    auto z2 = ring_cyclic(2), z4 = ring_cyclic(4), z6 = ring_cyclic(6);
    e.diagram.algebras = {algebra_self(e.ring, "Z"), algebra_over_integers(e.ring, z4, "Z/4"),
                          algebra_over_integers(e.ring, z6, "Z/6"),
                          algebra_over_integers(e.ring, z2, "Z/2")};
    IntMatrix one(1, 1);
    one.at(0, 0) = 1;
    e.diagram.arrows.push_back({0, 1, ring_map(e.ring, z4, one)});
    e.diagram.arrows.push_back({0, 2, ring_map(e.ring, z6, one)});
    e.diagram.arrows.push_back({1, 3, ring_map(z4, z2, one)});
    e.diagram.arrows.push_back({2, 3, ring_map(z6, z2, one)});

    for (const auto& [nn, n] : e.right_modules)
        for (const auto& [nm, m] : e.left_modules)
            e.pairs.push_back({nn + "(x)" + nm, n, m, bimodule_from_commutative(m), false, true});
    return e;
}

inline CatalogEntry entry_cyclic(long order, std::vector<long> quots) {
    CatalogEntry e;
    e.name = "cyclic(" + std::to_string(order) + ")";
    e.ring = ring_cyclic(order);
    e.central_gens = {e.ring.unit()};
    e.left_modules = {{"free", free_module(e.ring, true, 1)}};
    e.right_modules = {{"free", free_module(e.ring, false, 1)}};
    for (long q : quots) {
        e.left_modules.push_back({"R/" + std::to_string(q), quotient_module(e.ring, true, {ints({q})})});
        e.right_modules.push_back({"R/" + std::to_string(q), quotient_module(e.ring, false, {ints({q})})});
    }
    IntMatrix one(1, 1);
    one.at(0, 0) = 1;
    e.diagram.algebras.push_back(algebra_self(e.ring, "R"));
    // quotient algebras R -> Z/q
    int idx = 1;
    for (long q : quots) {
        auto zq = ring_cyclic(q);
        e.diagram.algebras.push_back(Algebra{zq, ring_map(e.ring, zq, one), "Z/" + std::to_string(q)});
        e.diagram.arrows.push_back({0, idx, ring_map(e.ring, zq, one)});
        ++idx;
    }
    // dual numbers over the base as a third algebra shape
    auto dn = ring_dual_numbers(order);
    IntMatrix dmap(1, 2);
    dmap.at(0, 0) = 1;
    e.diagram.algebras.push_back(Algebra{dn, ring_map(e.ring, dn, dmap), "dual"});
    int dn_idx = idx;
    e.diagram.arrows.push_back({0, dn_idx, ring_map(e.ring, dn, dmap)});
    IntMatrix dproj(2, 1);
    dproj.at(0, 0) = 1;  // x |-> 0
    e.diagram.arrows.push_back({dn_idx, 0, ring_map(dn, e.ring, dproj)});
    // dual numbers onto each quotient, x |-> 0
    for (std::size_t qi = 0; qi < quots.size(); ++qi) {
        auto zq = ring_cyclic(quots[qi]);
        IntMatrix dq(2, 1);
        dq.at(0, 0) = 1;
        e.diagram.arrows.push_back({dn_idx, static_cast<int>(qi) + 1, ring_map(dn, zq, dq)});
    }

    for (const auto& [nn, n] : e.right_modules)
        for (const auto& [nm, m] : e.left_modules)
            e.pairs.push_back({nn + "(x)" + nm, n, m, bimodule_from_commutative(m), false, true});
    return e;
}

inline CatalogEntry entry_matrix2() {
    CatalogEntry e;
    e.name = "matrix(2,2)";
    e.ring = ring_matrix(2, 2);
    e.central_gens = {e.ring.unit()};
    e.cap = 2;
    auto cols = module_from_presentation(e.ring, true, 1, {{e.ring.basis_elt(1)}, {e.ring.basis_elt(3)}});
    auto rows = module_from_presentation(e.ring, false, 1, {{e.ring.basis_elt(2)}, {e.ring.basis_elt(3)}});
    e.left_modules = {{"free", free_module(e.ring, true, 1)}, {"columns", cols}};
    e.right_modules = {{"free", free_module(e.ring, false, 1)}, {"rows", rows}};

    // conjugation by g = [[1,1],[0,1]] (an involution over F2)
    RingElt g = e.ring.reduce(vec_add(vec_add(e.ring.basis_elt(0), e.ring.basis_elt(1)), e.ring.basis_elt(3)));
    IntMatrix conj(4, 4);
    for (int i = 0; i < 4; ++i) conj.set_row(i, e.ring.mul(e.ring.mul(g, e.ring.basis_elt(i)), g));
    auto prod = ring_product(e.ring, e.ring);
    IntMatrix diag(4, 8);
    for (int i = 0; i < 4; ++i) {
        diag.at(i, i) = 1;
        diag.at(i, 4 + i) = 1;
    }
    e.diagram.algebras = {algebra_self(e.ring, "R"),
                          Algebra{e.ring, ring_map(e.ring, e.ring, conj), "R_conj"},
                          Algebra{prod, ring_map(e.ring, prod, diag), "RxR"}};
    e.diagram.arrows.push_back({0, 1, ring_map(e.ring, e.ring, conj)});
    e.diagram.arrows.push_back({0, 2, ring_map(e.ring, prod, diag)});
    IntMatrix proj1(8, 4), proj2(8, 4);
    for (int i = 0; i < 4; ++i) {
        proj1.at(i, i) = 1;
        proj2.at(4 + i, i) = 1;
    }
    e.diagram.arrows.push_back({2, 0, ring_map(prod, e.ring, proj1)});
    // second projection followed by conjugation lands in R_conj
    e.diagram.arrows.push_back({2, 1, ring_map(prod, e.ring, proj2 * conj)});

    e.pairs.push_back({"rows(x)columns", rows, cols, std::nullopt, true, true});
    e.pairs.push_back({"rows(x)free", rows, free_module(e.ring, true, 1),
                       bimodule_regular(e.ring), false, true});
    e.pairs.push_back({"free(x)columns", free_module(e.ring, false, 1), cols, std::nullopt, true, true});
    e.pairs.push_back({"free(x)free", free_module(e.ring, false, 1), free_module(e.ring, true, 1),
                       bimodule_regular(e.ring), false, true});
    return e;
}

inline CatalogEntry entry_triangular2() {
    CatalogEntry e;
    e.name = "triangular(2,2)";
    e.ring = ring_triangular(2, 2);  // basis: e00, e01, e11
    e.central_gens = {e.ring.unit()};
    e.cap = 2;
    auto s1 = module_from_presentation(e.ring, true, 1, {{e.ring.basis_elt(1)}, {e.ring.basis_elt(2)}});
    auto s2 = module_from_presentation(e.ring, true, 1, {{e.ring.basis_elt(0)}, {e.ring.basis_elt(1)}});
    auto s1r = module_from_presentation(e.ring, false, 1, {{e.ring.basis_elt(0)}, {e.ring.basis_elt(1)}});
    auto s2r = module_from_presentation(e.ring, false, 1, {{e.ring.basis_elt(1)}, {e.ring.basis_elt(2)}});
    e.left_modules = {{"free", free_module(e.ring, true, 1)}, {"top", s1}, {"bottom", s2}};
    e.right_modules = {{"free", free_module(e.ring, false, 1)}, {"top", s1r}, {"bottom", s2r}};

    // quotient to F2 x F2 (kill the strictly upper part) and inclusion into M2
    auto f22 = ring_product(ring_cyclic(2), ring_cyclic(2));
    IntMatrix quot(3, 2);
    quot.at(0, 0) = 1;  // e00 -> (1,0)
    quot.at(2, 1) = 1;  // e11 -> (0,1)
    auto m2 = ring_matrix(2, 2);
    IntMatrix inc(3, 4);
    inc.at(0, 0) = 1;
    inc.at(1, 1) = 1;
    inc.at(2, 3) = 1;
    RingElt g = m2.reduce(vec_add(vec_add(m2.basis_elt(0), m2.basis_elt(1)), m2.basis_elt(3)));
    IntMatrix conj(4, 4);
    for (int i = 0; i < 4; ++i) conj.set_row(i, m2.mul(m2.mul(g, m2.basis_elt(i)), g));
    e.diagram.algebras = {algebra_self(e.ring, "R"),
                          Algebra{f22, ring_map(e.ring, f22, quot), "F2xF2"},
                          Algebra{m2, ring_map(e.ring, m2, inc), "M2"},
                          Algebra{m2, ring_map(e.ring, m2, inc * conj), "M2_conj"}};
    e.diagram.arrows.push_back({0, 1, ring_map(e.ring, f22, quot)});
    e.diagram.arrows.push_back({0, 2, ring_map(e.ring, m2, inc)});
    e.diagram.arrows.push_back({0, 3, ring_map(e.ring, m2, inc * conj)});
    e.diagram.arrows.push_back({2, 3, ring_map(m2, m2, conj)});

    for (const auto& [nn, n] : e.right_modules)
        for (const auto& [nm, m] : e.left_modules) {
            std::optional<BimoduleStructure> bim;
            if (nm == "free") bim = bimodule_regular(e.ring);
            e.pairs.push_back({nn + "(x)" + nm, n, m, bim, false, true});
        }
    return e;
}

inline CatalogEntry entry_dual_numbers() {
    CatalogEntry e;
    e.name = "dual_numbers(2)";
    e.ring = ring_dual_numbers(2);
    e.central_gens = {e.ring.unit()};
    auto res = quotient_module(e.ring, true, {e.ring.basis_elt(1)});
    auto resr = quotient_module(e.ring, false, {e.ring.basis_elt(1)});
    e.left_modules = {{"free", free_module(e.ring, true, 1)}, {"residue", res}};
    e.right_modules = {{"free", free_module(e.ring, false, 1)}, {"residue", resr}};

    auto f2 = ring_cyclic(2);
    IntMatrix quot(2, 1);
    quot.at(0, 0) = 1;
    auto prod = ring_product(e.ring, f2);
    IntMatrix dmap(2, 3);
    dmap.at(0, 0) = 1;
    dmap.at(0, 2) = 1;
    dmap.at(1, 1) = 1;  // x |-> (x, 0)
    e.diagram.algebras = {algebra_self(e.ring, "R"),
                          Algebra{f2, ring_map(e.ring, f2, quot), "F2"},
                          Algebra{prod, ring_map(e.ring, prod, dmap), "RxF2"}};
    e.diagram.arrows.push_back({0, 1, ring_map(e.ring, f2, quot)});
    e.diagram.arrows.push_back({0, 2, ring_map(e.ring, prod, dmap)});
    IntMatrix proj1(3, 2), proj2(3, 1);
    proj1.at(0, 0) = 1;
    proj1.at(1, 1) = 1;
    proj2.at(2, 0) = 1;
    e.diagram.arrows.push_back({2, 0, ring_map(prod, e.ring, proj1)});
    e.diagram.arrows.push_back({2, 1, ring_map(prod, f2, proj2)});

    for (const auto& [nn, n] : e.right_modules)
        for (const auto& [nm, m] : e.left_modules)
            e.pairs.push_back({nn + "(x)" + nm, n, m, bimodule_from_commutative(m), false, true});
    return e;
}

inline CatalogEntry entry_group_ring_c3() {
    CatalogEntry e;
    e.name = "group_ring(3,2)";
    e.ring = ring_group_ring(IntVec{3}, 2);  // F2[C3], basis 1, g, g^2
    e.central_gens = {e.ring.unit()};
    // trivial module: quotient by (g - 1)
    auto triv = quotient_module(e.ring, true, {e.ring.reduce(vec_sub(e.ring.basis_elt(1), e.ring.basis_elt(0)))});
    auto trivr = quotient_module(e.ring, false, {e.ring.reduce(vec_sub(e.ring.basis_elt(1), e.ring.basis_elt(0)))});
    e.left_modules = {{"free", free_module(e.ring, true, 1)}, {"trivial", triv}};
    e.right_modules = {{"free", free_module(e.ring, false, 1)}, {"trivial", trivr}};

    auto f2 = ring_cyclic(2);
    IntMatrix aug(3, 1);
    aug.at(0, 0) = 1;
    aug.at(1, 0) = 1;
    aug.at(2, 0) = 1;
    auto f4 = ring_f4();
    IntMatrix tof4(3, 2);
    tof4.set_row(0, ints({1, 0}));
    tof4.set_row(1, ints({0, 1}));   // g -> w
    tof4.set_row(2, ints({1, 1}));   // g^2 -> w^2 = 1 + w
    auto prod = ring_product(f2, f4);
    IntMatrix split(3, 3);
    split.set_row(0, ints({1, 1, 0}));
    split.set_row(1, ints({1, 0, 1}));
    split.set_row(2, ints({1, 1, 1}));
    e.diagram.algebras = {algebra_self(e.ring, "R"),
                          Algebra{f2, ring_map(e.ring, f2, aug), "F2"},
                          Algebra{f4, ring_map(e.ring, f4, tof4), "F4"},
                          Algebra{prod, ring_map(e.ring, prod, split), "F2xF4"}};
    e.diagram.arrows.push_back({0, 1, ring_map(e.ring, f2, aug)});
    e.diagram.arrows.push_back({0, 2, ring_map(e.ring, f4, tof4)});
    e.diagram.arrows.push_back({0, 3, ring_map(e.ring, prod, split)});
    IntMatrix proj1(3, 1);
    proj1.at(0, 0) = 1;
    e.diagram.arrows.push_back({3, 1, ring_map(prod, f2, proj1)});

    for (const auto& [nn, n] : e.right_modules)
        for (const auto& [nm, m] : e.left_modules)
            e.pairs.push_back({nn + "(x)" + nm, n, m, bimodule_from_commutative(m), false, true});
    return e;
}

inline CatalogEntry entry_product23() {
    CatalogEntry e;
    e.name = "product(2,3)";
    e.ring = ring_product(ring_cyclic(2), ring_cyclic(3));
    e.central_gens = {e.ring.unit()};
    auto first = quotient_module(e.ring, true, {e.ring.basis_elt(1)});   // kill the Z/3 part
    auto second = quotient_module(e.ring, true, {e.ring.basis_elt(0)});  // kill the Z/2 part
    auto firstr = quotient_module(e.ring, false, {e.ring.basis_elt(1)});
    auto secondr = quotient_module(e.ring, false, {e.ring.basis_elt(0)});
    e.left_modules = {{"free", free_module(e.ring, true, 1)}, {"part2", first}, {"part3", second}};
    e.right_modules = {{"free", free_module(e.ring, false, 1)}, {"part2", firstr}, {"part3", secondr}};

    auto z2 = ring_cyclic(2), z3 = ring_cyclic(3), z6 = ring_cyclic(6);
    IntMatrix p1(2, 1), p2(2, 1);
    p1.at(0, 0) = 1;
    p2.at(1, 0) = 1;
    // chinese-remainder identification with Z/6: (1,0) -> 3, (0,1) -> 4
    IntMatrix crt(2, 1);
    crt.at(0, 0) = 3;
    crt.at(1, 0) = 4;
    IntMatrix one(1, 1);
    one.at(0, 0) = 1;
    e.diagram.algebras = {algebra_self(e.ring, "R"), Algebra{z2, ring_map(e.ring, z2, p1), "Z/2"},
                          Algebra{z3, ring_map(e.ring, z3, p2), "Z/3"},
                          Algebra{z6, ring_map(e.ring, z6, crt), "Z/6"}};
    e.diagram.arrows.push_back({0, 1, ring_map(e.ring, z2, p1)});
    e.diagram.arrows.push_back({0, 2, ring_map(e.ring, z3, p2)});
    e.diagram.arrows.push_back({0, 3, ring_map(e.ring, z6, crt)});
    e.diagram.arrows.push_back({3, 1, ring_map(z6, z2, one)});
    e.diagram.arrows.push_back({3, 2, ring_map(z6, z3, one)});

    for (const auto& [nn, n] : e.right_modules)
        for (const auto& [nm, m] : e.left_modules)
            e.pairs.push_back({nn + "(x)" + nm, n, m, bimodule_from_commutative(m), false, true});
    return e;
}

}  // namespace builtins

inline std::vector<CatalogEntry> builtin_catalog() {
    return {builtins::entry_integers(),     builtins::entry_cyclic(4, {2}),
            builtins::entry_cyclic(6, {2, 3}), builtins::entry_matrix2(),
            builtins::entry_triangular2(),  builtins::entry_dual_numbers(),
            builtins::entry_group_ring_c3(), builtins::entry_product23()};
}

// Named ring lookup for the command-line catalog.
inline std::optional<StructureRing> catalog_ring(const std::string& spec) {
    auto parse_args = [](const std::string& s) {
        std::vector<long> args;
        std::string cur;
        for (char c : s) {
            if (c == ',' ) {
                args.push_back(std::stol(cur));
                cur.clear();
            } else if (c != ' ') {
                cur += c;
            }
        }
        if (!cur.empty()) args.push_back(std::stol(cur));
        return args;
    };
    auto paren = spec.find('(');
    std::string name = spec.substr(0, paren);
    std::vector<long> args;
    if (paren != std::string::npos) {
        auto close = spec.rfind(')');
        if (close == std::string::npos || close < paren) return std::nullopt;
        args = parse_args(spec.substr(paren + 1, close - paren - 1));
    }
    try {
        if (name == "integers") return ring_integers();
        if (name == "cyclic" && args.size() == 1) return ring_cyclic(args[0]);
        if (name == "matrix" && args.size() == 2) return ring_matrix(static_cast<int>(args[0]), args[1]);
        if (name == "triangular" && args.size() == 2)
            return ring_triangular(static_cast<int>(args[0]), args[1]);
        if (name == "dual_numbers" && args.size() == 1) return ring_dual_numbers(args[0]);
        if (name == "group_ring" && args.size() >= 2) {
            IntVec type(args.begin(), args.end() - 1);
            return ring_group_ring(type, args.back());
        }
        if (name == "f4" && args.empty()) return builtins::ring_f4();
        if (name == "product" && args.size() == 2)
            return ring_product(ring_cyclic(args[0]), ring_cyclic(args[1]));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace modref
