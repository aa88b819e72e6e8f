#include <catch2/catch_amalgamated.hpp>

#include "modref/ring.hpp"

using namespace modref;

TEST_CASE("validation accepts the standard rings") {
    REQUIRE_NOTHROW(ring_integers());
    REQUIRE_NOTHROW(ring_cyclic(4));
    REQUIRE_NOTHROW(ring_matrix(2, 2));
    REQUIRE_NOTHROW(ring_triangular(2, 2));
    REQUIRE_NOTHROW(ring_group_ring(IntVec{3}, 2));
    REQUIRE_NOTHROW(ring_product(ring_cyclic(2), ring_cyclic(3)));
    REQUIRE_NOTHROW(ring_dual_numbers(2));
}

TEST_CASE("validation reports the offending axiom") {
    SECTION("bad unit: e0^2 = 2 e0 with unit e0") {
        try {
            ring_validate(IntVec{0}, {{IntVec{2}}}, IntVec{1});
            FAIL("expected RingAxiomError");
        } catch (const RingAxiomError& e) {
            bool has_bad_unit = false;
            for (const auto& i : e.issues())
                if (i.kind == RingAxiomIssue::Kind::BadUnit) has_bad_unit = true;
            REQUIRE(has_bad_unit);
        }
    }
    SECTION("order incompatibility") {
        // e0 has order 2 but e0*e0 = e1 of infinite order
        std::vector<std::vector<RingElt>> mult(2, std::vector<RingElt>(2, RingElt(2)));
        mult[0][0] = IntVec{0, 1};
        try {
            ring_validate(IntVec{2, 0}, std::move(mult), IntVec{0, 1});
            FAIL("expected RingAxiomError");
        } catch (const RingAxiomError& e) {
            bool has_order = false;
            for (const auto& i : e.issues())
                if (i.kind == RingAxiomIssue::Kind::OrderIncompatible && i.i == 0 && i.j == 0)
                    has_order = true;
            REQUIRE(has_order);
        }
    }
    SECTION("non-associative triple is named") {
        // rank 2 over Z/2: e1*e1 = e1, e1*e0 = e1, e0*e1 = 0 with unit e0 breaks both
        std::vector<std::vector<RingElt>> mult(2, std::vector<RingElt>(2, RingElt(2)));
        mult[0][0] = IntVec{1, 0};
        mult[1][1] = IntVec{0, 1};
        mult[1][0] = IntVec{0, 1};
        mult[0][1] = IntVec{0, 0};
        try {
            ring_validate(IntVec{2, 2}, std::move(mult), IntVec{1, 0});
            FAIL("expected RingAxiomError");
        } catch (const RingAxiomError& e) {
            REQUIRE_FALSE(e.issues().empty());
        }
    }
}

TEST_CASE("ring arithmetic") {
    auto m2 = ring_matrix(2, 2);
    // e01 * e10 = e00 but e10 * e01 = e11
    auto e01 = m2.basis_elt(1), e10 = m2.basis_elt(2);
    REQUIRE(m2.mul(e01, e10) == m2.basis_elt(0));
    REQUIRE(m2.mul(e10, e01) == m2.basis_elt(3));
    REQUIRE_FALSE(m2.is_commutative());
    REQUIRE(ring_cyclic(4).is_commutative());

    auto z4 = ring_cyclic(4);
    REQUIRE(z4.mul(IntVec{2}, IntVec{3}) == IntVec{2});  // 6 mod 4
    REQUIRE(z4.from_integer(7) == IntVec{3});
}

TEST_CASE("opposite ring") {
    SECTION("commutative rings are their own opposite") {
        auto z6 = ring_product(ring_cyclic(2), ring_cyclic(3));
        auto op = ring_opposite(z6);
        for (int i = 0; i < z6.rank(); ++i)
            for (int j = 0; j < z6.rank(); ++j)
                REQUIRE(op.basis_product(i, j) == z6.basis_product(i, j));
    }
    SECTION("triangular ring transposes its table") {
        auto t = ring_triangular(2, 2);
        auto op = ring_opposite(t);
        for (int i = 0; i < t.rank(); ++i)
            for (int j = 0; j < t.rank(); ++j)
                REQUIRE(op.basis_product(i, j) == t.basis_product(j, i));
    }
    SECTION("involution") {
        auto m2 = ring_matrix(2, 2);
        auto back = ring_opposite(ring_opposite(m2));
        for (int i = 0; i < m2.rank(); ++i)
            for (int j = 0; j < m2.rank(); ++j)
                REQUIRE(back.basis_product(i, j) == m2.basis_product(i, j));
    }
}

TEST_CASE("ring maps") {
    auto z = ring_integers();
    auto z4 = ring_cyclic(4);
    SECTION("canonical map Z -> Z/4") {
        auto a = algebra_over_integers(z, z4);
        REQUIRE(ring_map_apply(a.structure_map, IntVec{7}) == IntVec{3});
    }
    SECTION("Z/4 -> Z/2 quotient is a ring map, Z/4 -> Z/8 by 2 is not") {
        auto z2 = ring_cyclic(2);
        IntMatrix m(1, 1);
        m.at(0, 0) = 1;
        REQUIRE_NOTHROW(ring_map(z4, z2, m));
        auto z8 = ring_cyclic(8);
        IntMatrix bad(1, 1);
        bad.at(0, 0) = 2;
        REQUIRE_THROWS_AS(ring_map(z4, z8, bad), std::invalid_argument);
    }
}

TEST_CASE("central split criterion") {
    SECTION("span of the identity in M2(F2) is central and split") {
        auto m2 = ring_matrix(2, 2);
        REQUIRE(is_central_subring_split(m2, {m2.unit()}));
    }
    SECTION("the whole ring of integers") {
        auto z = ring_integers();
        REQUIRE(is_central_subring_split(z, {z.unit()}));
    }
    SECTION("non-unital generators are rejected") {
        auto z4 = ring_cyclic(4);
        REQUIRE_THROWS_AS(is_central_subring_split(z4, {IntVec{2}}), std::invalid_argument);
    }
    SECTION("the center of the triangular ring splits over F2") {
        auto t = ring_triangular(2, 2);
        REQUIRE(is_central_subring_split(t, {t.unit()}));
    }
    SECTION("field-like catalog rings split over the span of 1") {
        for (const auto& r : {ring_matrix(2, 2), ring_triangular(2, 2), ring_dual_numbers(2),
                              ring_group_ring(IntVec{3}, 2), ring_cyclic(3)})
            REQUIRE(is_central_subring_split(r, {r.unit()}));
    }
    SECTION("a non-central subring is not reported split") {
        // span{1, e01} in M2(F2) is a subring but e01 is not central
        auto m2 = ring_matrix(2, 2);
        REQUIRE_FALSE(is_central_subring_split(m2, {m2.unit(), m2.basis_elt(1)}));
    }
}

TEST_CASE("additive group and multiplication matrices") {
    auto d = ring_dual_numbers(2);
    auto add = d.additive();
    REQUIRE(add.invariant_factors() == std::vector<Int>{2, 2});
    // left multiplication by x kills x and sends 1 to x
    auto lm = d.left_mult_matrix(d.basis_elt(1));
    REQUIRE(apply_row(IntVec{1, 0}, lm) == IntVec{0, 1});
    REQUIRE(apply_row(IntVec{0, 1}, lm) == IntVec{0, 0});
}

TEST_CASE("group rings multiply by group addition") {
    auto fc3 = ring_group_ring(IntVec{3}, 2);  // F2[C3]
    REQUIRE(fc3.rank() == 3);
    // g * g^2 = identity element of the group
    REQUIRE(fc3.mul(fc3.basis_elt(1), fc3.basis_elt(2)) == fc3.basis_elt(0));
    REQUIRE(fc3.is_commutative());
}
