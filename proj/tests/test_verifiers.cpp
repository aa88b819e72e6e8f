#include <catch2/catch_amalgamated.hpp>

#include "modref/builtins.hpp"
#include "modref/verifiers.hpp"

using namespace modref;

namespace {


FpModule z_left(long n) { return module_from_presentation(ring_integers(), true, 1, {{IntVec{n}}}); }
FpModule z_right(long n) { return module_from_presentation(ring_integers(), false, 1, {{IntVec{n}}}); }

AlgebraDiagram z_diagram() {
    auto z = ring_integers();
    AlgebraDiagram d;
    d.algebras = {algebra_self(z, "Z"), algebra_over_integers(z, ring_cyclic(4), "Z/4"),
                  algebra_over_integers(z, ring_cyclic(6), "Z/6")};
    IntMatrix one(1, 1);
    one.at(0, 0) = 1;
    d.arrows.push_back({0, 1, ring_map(z, ring_cyclic(4), one)});
    d.arrows.push_back({0, 2, ring_map(z, ring_cyclic(6), one)});
    auto z2 = ring_cyclic(2);
    d.algebras.push_back(algebra_over_integers(z, z2, "Z/2"));
    d.arrows.push_back({1, 3, ring_map(ring_cyclic(4), z2, one)});
    d.arrows.push_back({2, 3, ring_map(ring_cyclic(6), z2, one)});
    return d;
}

}  // namespace

TEST_CASE("bimodule/flat sufficiency verdicts") {
    SECTION("commutative instance holds with sections") {
        auto rep = verify_bimodule_flat_case("Z: Z (x) Z/2", z_right(0), z_left(2),
                                             bimodule_from_commutative(z_left(2)), false);
        REQUIRE(rep.verdict == Verdict::holds);
    }
    SECTION("M = R holds over every catalog ring") {
        for (const auto& entry : builtin_catalog()) {
            auto n = free_module(entry.ring, false, 1);
            auto m = free_module(entry.ring, true, 1);
            auto rep = verify_bimodule_flat_case(entry.name + ": free pair", n, m,
                                                 bimodule_regular(entry.ring), false);
            REQUIRE(rep.verdict == Verdict::holds);
        }
    }
    SECTION("declaring nothing is a usage error") {
        REQUIRE_THROWS_AS(verify_bimodule_flat_case("bad", z_right(2), z_left(2), std::nullopt, false),
                          std::invalid_argument);
    }
}

TEST_CASE("central split verdicts") {
    SECTION("matrix ring over the span of 1") {
        auto e = builtins::entry_matrix2();
        std::vector<std::pair<FpModule, FpModule>> pairs;
        for (const auto& p : e.pairs) pairs.push_back({p.n, p.m});
        auto rep = verify_central_split_case(e.name, e.ring, e.central_gens, pairs);
        REQUIRE(rep.verdict == Verdict::holds);
    }
    SECTION("non-split generators give inconclusive") {
        // the center of M2(F2) is F2, but a non-central subring must not pass
        auto r = ring_matrix(2, 2);
        std::vector<std::pair<FpModule, FpModule>> pairs;
        auto rep = verify_central_split_case("M2 via non-central subring", r,
                                             {r.unit(), r.basis_elt(1)}, pairs);
        REQUIRE(rep.verdict == Verdict::inconclusive);
    }
}

TEST_CASE("extension formula biconditional") {
    SECTION("over Z") {
        auto rep = verify_extension_formula("Z: Z (x) Z/2", z_right(0), z_left(2));
        REQUIRE(rep.verdict == Verdict::holds);
    }
    SECTION("M = R over the triangular ring") {
        auto r = ring_triangular(2, 2);
        auto rep = verify_extension_formula("T: N (x) T",
                                            module_from_presentation(r, false, 1, {{r.basis_elt(1)}}),
                                            free_module(r, true, 1));
        REQUIRE(rep.verdict == Verdict::holds);
    }
}

TEST_CASE("symmetry of the two kernel orientations") {
    auto rep = verify_symmetry("Z: Z/3 vs Z/2", z_right(3), z_left(2));
    REQUIRE(rep.verdict == Verdict::holds);
    auto rep2 = verify_symmetry("Z: Z/4 vs Z/6", z_right(4), z_left(6));
    REQUIRE(rep2.verdict == Verdict::holds);
}

TEST_CASE("kernel comparison across caps") {
    auto rep = verify_kernel_compare("Z: Z (x) Z/2", z_right(0), z_left(2), 3);
    REQUIRE(rep.verdict == Verdict::holds);
}

TEST_CASE("natural transformation harness") {
    auto diagram = z_diagram();
    SECTION("components, additivity, injectivity over (Z/2, Z/2)") {
        auto rep = verify_nat_transformations("Z: Z/2, Z/2", z_right(2), z_left(2), diagram);
        REQUIRE(rep.verdict == Verdict::holds);
    }
    SECTION("the pure-tensor component is the classical pairing") {
        // w = i(n (x) m): component at S sends f to n (x) f(m)
        auto n = z_right(2);
        auto m = z_left(2);
        auto h = make_nat_harness(n, m, diagram);
        GroupMap into = canonical_into_kernel(h.ke);
        // the tensor group is Z/2 generated by the single pure tensor
        IntVec w = apply_map(into, IntVec{1});  // 1 (x) gen
        auto nt = kernel_element_to_nat(h, w);
        // at S = Z/4: Hom(Z/2, Z/4) = Z/2; the nonzero f has f(gen) = 2
        const auto& pa = h.at[1];
        REQUIRE(*pa.dual.hom.group.order() == 2);
        for (const auto& coords : pa.dual.hom.group.elements()) {
            if (pa.dual.hom.group.is_zero_elt(coords)) continue;
            IntVec img = apply_row(coords, nt.components[1]);
            // expected: 1 (x) f(gen) = pure(1, 2) in Z (x) Z/4... over N = Z/2
            IntVec expected = tensor_pure_R(pa.value, IntVec{1}, apply_row(module_generator(m, 0),
                                                                           hom_R_lift(pa.dual.hom, coords)));
            REQUIRE(pa.value.group.elements_equal(img, expected));
        }
    }
    SECTION("zero goes to the zero transformation") {
        auto h = make_nat_harness(z_right(2), z_left(2), diagram);
        auto nt = kernel_element_to_nat(h, IntVec(h.ke.group.ambient(), Int(0)));
        for (const auto& c : nt.components) REQUIRE(c.is_zero());
    }
    SECTION("free module: component evaluates at the generator") {
        auto n = z_right(3);
        auto m = module_from_presentation(ring_integers(), true, 1, {});
        auto rep = verify_nat_transformations("Z: Z/3, Z", n, m, diagram);
        REQUIRE(rep.verdict == Verdict::holds);
    }
}

TEST_CASE("reflexivity with the classical contrast") {
    auto diagram = z_diagram();
    SECTION("M = Z/2: functorial value survives, classical dies at S = Z") {
        auto rep = verify_reflexivity("Z: Z/2", z_left(2), diagram);
        REQUIRE(rep.verdict == Verdict::holds);
        // at S = Z the classical double dual is 0 and the evaluation map is
        // not injective; find the recorded flags
        bool found_contrast = false;
        for (const auto& [k, v] : rep.details)
            if (k == "classical_iso(Z)" && v == "false") found_contrast = true;
        REQUIRE(found_contrast);
        // functorial group at Z is Z/2
        bool found_value = false;
        for (const auto& g : rep.groups)
            if (g.name == "functorial(Z)" && g.invariant_factors == std::vector<std::string>{"2"})
                found_value = true;
        REQUIRE(found_value);
    }
    SECTION("M = R: both branches are isomorphisms") {
        auto rep = verify_reflexivity("Z: Z", module_from_presentation(ring_integers(), true, 1, {}), diagram);
        REQUIRE(rep.verdict == Verdict::holds);
        for (const auto& [k, v] : rep.details)
            if (k.rfind("classical_iso", 0) == 0) REQUIRE(v == "true");
    }
    SECTION("M = Z + Z/3 at S = Z/9: functorial value Z/9 + Z/3") {
        auto z = ring_integers();
        AlgebraDiagram d;
        d.algebras = {algebra_over_integers(z, ring_cyclic(9), "Z/9")};
        auto m = module_from_presentation(z, true, 2, {{IntVec{0}, IntVec{3}}});
        auto rep = verify_reflexivity("Z: Z+Z/3 at Z/9", m, d);
        REQUIRE(rep.verdict == Verdict::holds);
        bool found = false;
        for (const auto& g : rep.groups)
            if (g.name == "functorial(Z/9)" &&
                g.invariant_factors == std::vector<std::string>{"3", "9"})
                found = true;
        REQUIRE(found);
    }
}

TEST_CASE("extended-dual reflexivity") {
    auto diagram = z_diagram();
    SECTION("M = Z/2") {
        auto rep = verify_vee_reflexivity("Z: Z/2", z_left(2), diagram, 3);
        REQUIRE(rep.verdict == Verdict::holds);
        bool found = false;
        for (const auto& g : rep.groups)
            if (g.name == "value(Z)" && g.invariant_factors == std::vector<std::string>{"2"}) found = true;
        REQUIRE(found);
    }
    SECTION("M = Z/6 at S = Z/4 gives Z/2") {
        auto z = ring_integers();
        AlgebraDiagram d;
        d.algebras = {algebra_over_integers(z, ring_cyclic(4), "Z/4")};
        auto rep = verify_vee_reflexivity("Z: Z/6 at Z/4", z_left(6), d, 3);
        REQUIRE(rep.verdict == Verdict::holds);
        bool found = false;
        for (const auto& g : rep.groups)
            if (g.name == "value(Z/4)" && g.invariant_factors == std::vector<std::string>{"2"}) found = true;
        REQUIRE(found);
    }
}

TEST_CASE("witness replay") {
    SECTION("a manufactured witness replays, a corrupted one does not") {
        // witness: vector (1) with map x2 into Z/4 target (image 2 != 0 mod 4
        // would fail the map check, so use x4) and lattice 2Z
        IntMatrix map(1, 1);
        map.at(0, 0) = 4;
        IntMatrix lat(1, 1);
        lat.at(0, 0) = 2;
        WitnessData w = make_witness("test", IntVec{1}, map, IntVec{4}, lat);
        REQUIRE(replay_witness(w));  // 1*4 = 0 mod 4, and 1 not in 2Z
        WitnessData bad = w;
        bad.vec[0] = "2";  // now 2 lies in 2Z: the non-membership claim breaks
        REQUIRE_FALSE(replay_witness(bad));
    }
    SECTION("fork failure witnesses would replay (synthetic check)") {
        // no catalog instance fails; validate the mechanism on the real maps
        // of an exact instance: kernel generators must NOT replay as
        // counterexamples since they lie in the image lattice
        auto ke = kernel_extension(z_right(2), z_left(2));
        IntMatrix im = image_of(ke.fork.i).canon;
        GroupMap diff = map_sub(ke.fork.p1, ke.fork.p2);
        for (int r = 0; r < ke.inclusion.matrix.rows(); ++r) {
            WitnessData w = make_witness("kernel generator", ke.inclusion.matrix.row(r), diff.matrix,
                                         ke.fork.t2.coord_orders(), im);
            REQUIRE_FALSE(replay_witness(w));
        }
    }
}

TEST_CASE("counterexample search") {
    SECTION("commutative-only bounds report no failures") {
        SearchBounds b;
        b.max_rank = 1;
        b.orders = {Int(2), Int(3)};
        b.max_gens = 1;
        b.max_rels = 1;
        auto sum = search_counterexamples(b);
        REQUIRE(sum.rings_valid > 0);
        REQUIRE(sum.failed == 0);
        REQUIRE(sum.pairs_checked == sum.covered + sum.exact);
    }
    SECTION("rank-2 sweep over order 2 classifies every instance") {
        SearchBounds b;
        b.max_rank = 2;
        b.orders = {Int(2)};
        b.max_gens = 1;
        b.max_rels = 1;
        auto sum = search_counterexamples(b);
        REQUIRE(sum.rings_valid >= 4);
        REQUIRE(sum.pairs_checked == sum.covered + sum.exact + sum.failed);
        for (const auto& f : sum.failures)
            for (const auto& w : f.witnesses) REQUIRE(replay_witness(w));
    }
}

TEST_CASE("catalog sanity") {
    auto cat = builtin_catalog();
    REQUIRE(cat.size() >= 6);
    std::size_t modules = 0, pairs = 0;
    for (const auto& e : cat) {
        REQUIRE_NOTHROW(validate_diagram(e.diagram));
        REQUIRE(e.diagram.algebras.size() >= 3);
        modules += e.left_modules.size() + e.right_modules.size();
        pairs += e.pairs.size();
        // every catalog ring validates (construction throws otherwise) and
        // the declared central generators split
        REQUIRE(is_central_subring_split(e.ring, e.central_gens));
    }
    REQUIRE(modules >= 12);
    REQUIRE(pairs >= 40);
}
