#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "modref/module.hpp"

namespace modref {

// Order of a generator pair in a tensor of cyclic groups (0 = infinite).
inline Int cyclic_tensor_order(const Int& a, const Int& b) {
    if (a == 0) return b;
    if (b == 0) return a;
    return gcd(a, b);
}

// N (x)_R M for a right module N and a left module M over the same ring:
// the Z-tensor of the compressed underlying groups modulo the balancing
// relations pure(n.e_i, m) - pure(n, e_i.m) over all generators and ring
// basis elements.
struct TensorGroup {
    FpModule n, m;   // right factor, left factor
    FgAbGroup group;  // ambient = kN_c * kM_c
    Compression comp;
};

inline TensorGroup tensor_over_R(const FpModule& n, const FpModule& m) {
    if (!rings_equal(n.ring, m.ring))
        throw std::invalid_argument("tensor_over_R: factors over different rings");
    if (n.left || !m.left)
        throw std::invalid_argument("tensor_over_R: expected a right and a left module");
    const int kn = n.comp.comp.ambient();
    const int km = m.comp.comp.ambient();
    const int rk = m.ring.rank();
    const IntVec& no = n.comp.comp.coord_orders();
    const IntVec& mo = m.comp.comp.coord_orders();

    std::vector<IntVec> rows;
    for (int a = 0; a < kn; ++a) {
        if (no[a] == 0) continue;
        for (int b = 0; b < km; ++b) {
            IntVec row(kn * km);
            row[a * km + b] = no[a];
            rows.push_back(row);
        }
    }
    for (int b = 0; b < km; ++b) {
        if (mo[b] == 0) continue;
        for (int a = 0; a < kn; ++a) {
            IntVec row(kn * km);
            row[a * km + b] = mo[b];
            rows.push_back(row);
        }
    }
    for (int i = 0; i < rk; ++i) {
        const IntMatrix& ra = n.action_c[i];  // x -> x.e_i
        const IntMatrix& la = m.action_c[i];  // x -> e_i.x
        for (int a = 0; a < kn; ++a)
            for (int b = 0; b < km; ++b) {
                IntVec row(kn * km);
                for (int q = 0; q < km; ++q) row[a * km + q] -= la.at(b, q);
                for (int p = 0; p < kn; ++p) row[p * km + b] += ra.at(a, p);
                rows.push_back(row);
            }
    }
    TensorGroup t;
    t.n = n;
    t.m = m;
    t.group = FgAbGroup::from_presentation(kn * km, IntMatrix::from_rows(rows, kn * km));
    t.comp = compress(t.group);
    return t;
}

// pure(x, y) in the ambient coordinates of the tensor group.
inline IntVec tensor_pure_R(const TensorGroup& t, const IntVec& x, const IntVec& y) {
    return kron_vec(apply_row(x, t.n.comp.to_comp), apply_row(y, t.m.comp.to_comp));
}

// The three-term fork  N(x)M -> N(x)M(x)R  =>  N(x)M(x)R(x)R  with
// i(v) = v(x)1, p1(v(x)r) = v(x)r(x)1, p2(v(x)r) = v(x)1(x)r.
// The containment Im i <= Ker(p1 - p2) holds unconditionally and is
// asserted at construction.
struct TensorFork {
    TensorGroup t0;
    Compression c0;      // compression of t0.group; t1/t2 are built on it
    FgAbGroup t1, t2;    // diagonal groups
    GroupMap i, p1, p2;  // i: t0.group -> t1, p1/p2: t1 -> t2
};

inline TensorFork build_fork(const FpModule& n, const FpModule& m) {
    TensorFork f;
    f.t0 = tensor_over_R(n, m);
    f.c0 = f.t0.comp;
    const StructureRing& r = m.ring;
    const int tc = f.c0.comp.ambient();
    const int rk = r.rank();
    const IntVec& co = f.c0.comp.coord_orders();
    const IntVec& ro = r.orders();

    IntVec o1(static_cast<std::size_t>(tc) * rk), o2(static_cast<std::size_t>(tc) * rk * rk);
    for (int a = 0; a < tc; ++a)
        for (int l = 0; l < rk; ++l) {
            o1[a * rk + l] = cyclic_tensor_order(co[a], ro[l]);
            for (int l2 = 0; l2 < rk; ++l2)
                o2[(a * rk + l) * rk + l2] = cyclic_tensor_order(o1[a * rk + l], ro[l2]);
        }
    f.t1 = FgAbGroup::diagonal(o1);
    f.t2 = FgAbGroup::diagonal(o2);

    IntMatrix urow(1, rk);
    urow.set_row(0, r.unit());
    f.i = make_map(f.t0.group, f.t1, kron(f.c0.to_comp, urow));
    f.p1 = make_map(f.t1, f.t2, kron(IntMatrix::identity(tc * rk), urow));
    IntMatrix p2m(tc * rk, tc * rk * rk);
    for (int a = 0; a < tc; ++a)
        for (int l = 0; l < rk; ++l)
            for (int lp = 0; lp < rk; ++lp)
                p2m.at(a * rk + l, (a * rk + lp) * rk + l) = r.unit()[lp];
    f.p2 = make_map(f.t1, f.t2, std::move(p2m));

    if (!maps_equal(compose(f.i, f.p1), compose(f.i, f.p2)))
        throw std::logic_error("build_fork: Im i is not contained in Ker(p1 - p2)");
    return f;
}

// Exactness verdict for the fork. Failure is a report, not an error;
// witnesses are ambient vectors that replay the discrepancy.
struct ExactnessReport {
    bool i_injective = false;
    bool middle_exact = false;
    Subgroup kernel;                     // Ker(p1 - p2) as a subgroup of t1
    std::vector<IntVec> witnesses_i;     // nonzero elements of Ker i (t0 ambient)
    std::vector<IntVec> witnesses_mid;   // kernel generators outside Im i (t1 ambient)

    bool exact() const { return i_injective && middle_exact; }
};

inline ExactnessReport check_fork_exactness(const TensorFork& f) {
    ExactnessReport rep;
    Subgroup ker_i = kernel_of(f.i);
    rep.i_injective = subgroup_is_trivial(ker_i);
    if (!rep.i_injective) {
        for (int r = 0; r < ker_i.gens.rows(); ++r) {
            IntVec g = ker_i.gens.row(r);
            if (!f.t0.group.is_zero_elt(g)) rep.witnesses_i.push_back(f.t0.group.canon(g));
        }
    }
    GroupMap diff = map_sub(f.p1, f.p2);
    rep.kernel = kernel_of(diff);
    Subgroup im = image_of(f.i);
    rep.middle_exact = subgroups_equal(im, rep.kernel);
    if (!rep.middle_exact) {
        for (int r = 0; r < rep.kernel.canon.rows(); ++r) {
            IntVec g = rep.kernel.canon.row(r);
            if (!subgroup_contains(im, g)) rep.witnesses_mid.push_back(g);
        }
    }
    return rep;
}

inline ExactnessReport check_fork_exactness(const FpModule& n, const FpModule& m) {
    return check_fork_exactness(build_fork(n, m));
}

// The kernel Ker(p1 - p2) as an abstract group with its inclusion into t1;
// the computational value of the extension of the functor S |-> N (x)_R S
// at the module M (and symmetrically of S |-> S (x)_R M at N).
struct KernelExtension {
    TensorFork fork;
    FgAbGroup group;
    GroupMap inclusion;  // group -> t1
};

inline KernelExtension kernel_extension(const FpModule& n, const FpModule& m) {
    TensorFork f = build_fork(n, m);
    auto emb = subgroup_as_group(kernel_of(map_sub(f.p1, f.p2)));
    return KernelExtension{std::move(f), std::move(emb.group), std::move(emb.inclusion)};
}

// The canonical map t0 -> Ker(p1 - p2) induced by i. Its being an
// isomorphism is equivalent to exactness of the fork.
inline GroupMap canonical_into_kernel(const KernelExtension& ke) {
    const IntMatrix& basis = ke.inclusion.matrix;
    IntMatrix coords(ke.fork.t0.group.ambient(), basis.rows());
    for (int a = 0; a < ke.fork.t0.group.ambient(); ++a) {
        auto c = solve_left(basis, ke.fork.i.matrix.row(a));
        if (!c) throw std::logic_error("canonical_into_kernel: image of i escapes the kernel lattice");
        coords.set_row(a, *c);
    }
    return make_map(ke.fork.t0.group, ke.group, std::move(coords));
}

// Sections s(n(x)m(x)r) = n(x)mr and s'(n(x)m(x)r(x)r') = n(x)mr(x)r' that
// exist when M carries a verified bimodule structure. The identities
// s o i = id, s' o p2 = id and s' o p1 = i o s are checked exactly.
struct ForkSections {
    TensorFork fork;
    GroupMap s;        // t1 -> t0
    GroupMap s_prime;  // t2 -> t1
};

inline ForkSections bimodule_sections(const FpModule& n, const BimoduleStructure& bm) {
    TensorFork f = build_fork(n, bm.module);
    const FpModule& m = bm.module;
    const int kn = n.comp.comp.ambient();
    const int km = m.comp.comp.ambient();
    const int tc = f.c0.comp.ambient();
    const int rk = m.ring.rank();

    std::vector<IntMatrix> ract_c;
    for (int l = 0; l < rk; ++l)
        ract_c.push_back(m.comp.from_comp * bm.right_action[l] * m.comp.to_comp);

    // s on the raw tensor coordinates: (alpha,beta)(x)e_l -> e_alpha (x) (e_beta . e_l)
    std::vector<IntMatrix> s_raw;  // per l: (kn*km) x (kn*km)
    for (int l = 0; l < rk; ++l) {
        IntMatrix sl(kn * km, kn * km);
        for (int a = 0; a < kn; ++a)
            for (int b = 0; b < km; ++b)
                for (int q = 0; q < km; ++q) sl.at(a * km + b, a * km + q) = ract_c[l].at(b, q);
        s_raw.push_back(std::move(sl));
    }

    IntMatrix smat(tc * rk, kn * km);
    for (int a = 0; a < tc; ++a) {
        IntVec lift = f.c0.from_comp.row(a);
        for (int l = 0; l < rk; ++l) smat.set_row(a * rk + l, apply_row(lift, s_raw[l]));
    }
    GroupMap s = make_map(f.t1, f.t0.group, smat);

    IntMatrix spmat(tc * rk * rk, tc * rk);
    for (int a = 0; a < tc; ++a)
        for (int l = 0; l < rk; ++l) {
            IntVec moved = apply_row(apply_row(f.c0.from_comp.row(a), s_raw[l]), f.c0.to_comp);
            for (int lp = 0; lp < rk; ++lp) {
                IntVec row(static_cast<std::size_t>(tc) * rk);
                for (int c = 0; c < tc; ++c) row[c * rk + lp] = moved[c];
                spmat.set_row((a * rk + l) * rk + lp, row);
            }
        }
    GroupMap sp = make_map(f.t2, f.t1, spmat);

    if (!maps_equal(compose(f.i, s), identity_map(f.t0.group)))
        throw std::logic_error("bimodule_sections: s o i != id");
    if (!maps_equal(compose(f.p2, sp), identity_map(f.t1)))
        throw std::logic_error("bimodule_sections: s' o p2 != id");
    if (!maps_equal(compose(f.p1, sp), compose(s, f.i)))
        throw std::logic_error("bimodule_sections: s' o p1 != i o s");
    return ForkSections{std::move(f), std::move(s), std::move(sp)};
}

// Flip a module to the other side over the opposite ring; the underlying
// data is unchanged, only the bookkeeping of which ring acts is renamed.
inline FpModule flip_side(const FpModule& m) {
    FpModule out = m;
    out.ring = ring_opposite(m.ring);
    out.left = !m.left;
    return out;
}

// The kernel extension computed from (N, M) and the one computed in the
// mirrored orientation through the opposite ring describe the same group:
// the swap n(x)m(x)r -> m(x)n(x)r carries one kernel onto the other.
struct SymmetryCheck {
    bool isomorphic;        // invariant factors agree
    bool kernels_match;     // the swap identifies the kernels exactly
    KernelExtension direct, mirrored;
};

inline SymmetryCheck check_kernel_symmetry(const FpModule& n, const FpModule& m) {
    SymmetryCheck out{false, false, kernel_extension(n, m), kernel_extension(flip_side(m), flip_side(n))};
    out.isomorphic = out.direct.group.isomorphic_to(out.mirrored.group);

    const int kn = n.comp.comp.ambient();
    const int km = m.comp.comp.ambient();
    const int rk = m.ring.rank();
    // swap on raw tensor coordinates, then bridge the two compressions
    IntMatrix swap(kn * km, km * kn);
    for (int a = 0; a < kn; ++a)
        for (int b = 0; b < km; ++b) swap.at(a * km + b, b * kn + a) = 1;
    IntMatrix bridge0 = out.direct.fork.c0.from_comp * swap * out.mirrored.fork.c0.to_comp;
    IntMatrix bridge1 = kron(bridge0, IntMatrix::identity(rk));
    GroupMap swap1 = make_map(out.direct.fork.t1, out.mirrored.fork.t1, bridge1);

    IntMatrix mapped = out.direct.inclusion.matrix * swap1.matrix;
    Subgroup image_of_kernel = subgroup(out.mirrored.fork.t1, mapped);
    Subgroup mirrored_kernel =
        subgroup(out.mirrored.fork.t1, out.mirrored.inclusion.matrix);
    out.kernels_match = subgroups_equal(image_of_kernel, mirrored_kernel);
    return out;
}

}  // namespace modref
