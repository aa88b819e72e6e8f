#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modref/tensoralg.hpp"

namespace modref {

enum class Verdict { holds, fails, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        default: return "inconclusive";
    }
}

struct GroupInfo {
    std::string name;
    std::vector<std::string> invariant_factors;
};

inline GroupInfo group_info(const std::string& name, const FgAbGroup& g) {
    GroupInfo gi{name, {}};
    for (const Int& d : g.invariant_factors()) gi.invariant_factors.push_back(d.get_str());
    return gi;
}

// A failure witness with everything needed to replay it: the vector, the map
// it must die under (with per-column target orders), and the lattice it must
// not belong to.
struct WitnessData {
    std::string context;
    std::vector<std::string> vec;
    std::vector<std::string> map_flat;
    int map_rows = 0, map_cols = 0;
    std::vector<std::string> target_orders;
    std::vector<std::string> lattice_flat;
    int lattice_rows = 0, lattice_cols = 0;
};

inline WitnessData make_witness(std::string context, const IntVec& vec, const IntMatrix& map,
                                const IntVec& target_orders, const IntMatrix& lattice) {
    WitnessData w;
    w.context = std::move(context);
    for (const Int& x : vec) w.vec.push_back(x.get_str());
    w.map_rows = map.rows();
    w.map_cols = map.cols();
    for (int i = 0; i < map.rows(); ++i)
        for (int j = 0; j < map.cols(); ++j) w.map_flat.push_back(map.at(i, j).get_str());
    for (const Int& x : target_orders) w.target_orders.push_back(x.get_str());
    w.lattice_rows = lattice.rows();
    w.lattice_cols = lattice.cols();
    for (int i = 0; i < lattice.rows(); ++i)
        for (int j = 0; j < lattice.cols(); ++j) w.lattice_flat.push_back(lattice.at(i, j).get_str());
    return w;
}

// Recompute the two facts a witness claims: its image under the stored map
// vanishes modulo the stored orders, and it lies outside the stored lattice.
inline bool replay_witness(const WitnessData& w) {
    IntVec vec;
    for (const auto& s : w.vec) vec.push_back(Int(s));
    IntMatrix map(w.map_rows, w.map_cols);
    for (int i = 0; i < w.map_rows; ++i)
        for (int j = 0; j < w.map_cols; ++j) map.at(i, j) = Int(w.map_flat[i * w.map_cols + j]);
    IntMatrix lat(w.lattice_rows, w.lattice_cols);
    for (int i = 0; i < w.lattice_rows; ++i)
        for (int j = 0; j < w.lattice_cols; ++j) lat.at(i, j) = Int(w.lattice_flat[i * w.lattice_cols + j]);
    IntVec img = apply_row(vec, map);
    for (int j = 0; j < w.map_cols; ++j)
        if (mod_order(img[j], Int(w.target_orders[j])) != 0) return false;
    return !solve_left(lat, vec).has_value();
}

struct VerificationReport {
    std::string statement;
    std::string instance;
    Verdict verdict = Verdict::inconclusive;
    std::vector<GroupInfo> groups;
    std::vector<std::pair<std::string, std::string>> details;
    std::vector<WitnessData> witnesses;
    int cap = 0;
    double millis = 0;  // wall time; excluded from deterministic serializations

    void note(const std::string& k, const std::string& v) { details.push_back({k, v}); }
    void note(const std::string& k, bool v) { details.push_back({k, v ? "true" : "false"}); }
};

namespace detail {

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
};

inline void attach_fork_witnesses(VerificationReport& rep, const TensorFork& f, const ExactnessReport& ex) {
    if (!ex.i_injective) {
        for (const auto& v : ex.witnesses_i)
            rep.witnesses.push_back(make_witness("nonzero element of Ker i", v, f.i.matrix,
                                                 f.t1.coord_orders(), f.t0.group.rels()));
    }
    if (!ex.middle_exact) {
        IntMatrix im_lattice = image_of(f.i).canon;
        GroupMap diff = map_sub(f.p1, f.p2);
        for (const auto& v : ex.witnesses_mid)
            rep.witnesses.push_back(make_witness("kernel generator outside Im i", v, diff.matrix,
                                                 f.t2.coord_orders(), im_lattice));
    }
}

}  // namespace detail

// --- sufficiency statements ---------------------------------------------------

// Exactness of the fork under the declared sufficiency route: a verified
// bimodule structure on M (whose sections are also validated) or an asserted
// flatness flag.
inline VerificationReport verify_bimodule_flat_case(const std::string& instance, const FpModule& n,
                                                    const FpModule& m,
                                                    const std::optional<BimoduleStructure>& bimodule_on_m,
                                                    bool flat_asserted) {
    if (!bimodule_on_m && !flat_asserted)
        throw std::invalid_argument("verify_bimodule_flat_case: declare a bimodule or assert flatness");
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "bimodule_flat";
    rep.instance = instance;
    TensorFork f = build_fork(n, m);
    ExactnessReport ex = check_fork_exactness(f);
    rep.groups.push_back(group_info("tensor", f.t0.group));
    rep.groups.push_back(group_info("middle", f.t1));
    rep.note("i_injective", ex.i_injective);
    rep.note("middle_exact", ex.middle_exact);
    bool sections_ok = true;
    if (bimodule_on_m) {
        try {
            bimodule_sections(n, *bimodule_on_m);
            rep.note("section_identities", true);
        } catch (const std::logic_error& e) {
            sections_ok = false;
            rep.note("section_identities", false);
            rep.note("section_error", e.what());
        }
    } else {
        rep.note("flat_asserted", true);
    }
    rep.verdict = (ex.exact() && sections_ok) ? Verdict::holds : Verdict::fails;
    detail::attach_fork_witnesses(rep, f, ex);
    rep.millis = sw.ms();
    return rep;
}

// Exactness for every pair over a ring with a split central subring. When
// the split criterion fails the verdict is inconclusive: the criterion is
// only sufficient.
inline VerificationReport verify_central_split_case(
    const std::string& instance, const StructureRing& r, const std::vector<RingElt>& central_gens,
    const std::vector<std::pair<FpModule, FpModule>>& pairs) {
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "central_split";
    rep.instance = instance;
    bool split = false;
    try {
        split = is_central_subring_split(r, central_gens);
    } catch (const std::invalid_argument& e) {
        rep.verdict = Verdict::inconclusive;
        rep.note("error", e.what());
        rep.millis = sw.ms();
        return rep;
    }
    rep.note("central_split", split);
    if (!split) {
        rep.verdict = Verdict::inconclusive;
        rep.note("reason", "criterion inconclusive: subring is not central or does not split");
        rep.millis = sw.ms();
        return rep;
    }
    bool all = true;
    int idx = 0;
    for (const auto& [n, m] : pairs) {
        TensorFork f = build_fork(n, m);
        ExactnessReport ex = check_fork_exactness(f);
        rep.note("pair_" + std::to_string(idx) + "_exact", ex.exact());
        if (!ex.exact()) {
            all = false;
            detail::attach_fork_witnesses(rep, f, ex);
        }
        ++idx;
    }
    rep.verdict = all ? Verdict::holds : Verdict::fails;
    rep.millis = sw.ms();
    return rep;
}

// --- extension statements -------------------------------------------------------

// The biconditional: the fork is exact iff the canonical map from the tensor
// onto the extension kernel is an isomorphism. Both directions are asserted.
inline VerificationReport verify_extension_formula(const std::string& instance, const FpModule& n,
                                                   const FpModule& m) {
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "extension_formula";
    rep.instance = instance;
    KernelExtension ke = kernel_extension(n, m);
    ExactnessReport ex = check_fork_exactness(ke.fork);
    GroupMap canonical = canonical_into_kernel(ke);
    bool iso = map_is_isomorphism(canonical);
    rep.groups.push_back(group_info("tensor", ke.fork.t0.group));
    rep.groups.push_back(group_info("extension_value", ke.group));
    rep.note("fork_exact", ex.exact());
    rep.note("canonical_iso", iso);
    rep.verdict = (ex.exact() == iso) ? Verdict::holds : Verdict::fails;
    if (!ex.exact()) detail::attach_fork_witnesses(rep, ke.fork, ex);
    rep.millis = sw.ms();
    return rep;
}

// The two orientations compute the same kernel.
inline VerificationReport verify_symmetry(const std::string& instance, const FpModule& n,
                                          const FpModule& m) {
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "symmetry";
    rep.instance = instance;
    SymmetryCheck sc = check_kernel_symmetry(n, m);
    rep.groups.push_back(group_info("kernel", sc.direct.group));
    rep.groups.push_back(group_info("mirrored_kernel", sc.mirrored.group));
    rep.note("isomorphic", sc.isomorphic);
    rep.note("kernels_match", sc.kernels_match);
    rep.verdict = (sc.isomorphic && sc.kernels_match) ? Verdict::holds : Verdict::fails;
    rep.millis = sw.ms();
    return rep;
}

// Truncated kernel comparison at caps d and d+1 for d in {2, .., cap}.
inline VerificationReport verify_kernel_compare(const std::string& instance, const FpModule& n,
                                                const FpModule& m, int cap) {
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "kernel_compare";
    rep.instance = instance;
    rep.cap = cap;
    bool all = true;
    try {
        for (int d = 2; d <= cap; ++d) {
            KernelComparison cmp = compare_truncated_kernels(n, m, d);
            rep.note("cap_" + std::to_string(d) + "_concentrated", cmp.at_cap.concentrated);
            rep.note("cap_" + std::to_string(d) + "_matches", cmp.at_cap.matches_fork);
            if (d == 2) rep.groups.push_back(group_info("kernel", cmp.at_cap.group));
            all = all && cmp.holds;
        }
    } catch (const std::logic_error& e) {
        rep.verdict = Verdict::fails;
        rep.note("instability", e.what());
        rep.millis = sw.ms();
        return rep;
    }
    rep.verdict = all ? Verdict::holds : Verdict::fails;
    rep.millis = sw.ms();
    return rep;
}

// --- natural transformations ---------------------------------------------------

// Everything fixed about an instance that the kernel-element-to-morphism
// construction needs: the duals Hom_R(M, S) with their right actions, the
// values N (x)_R S with theirs, and the expansion of kernel elements into
// raw tensor coordinates.
struct NatHarness {
    FpModule n, m;
    AlgebraDiagram diagram;
    KernelExtension ke;
    IntMatrix w_to_raw;  // kernel ambient -> (kN_c * kM_c * rk) coefficients

    struct PerAlgebra {
        DualModule dual;
        ActionModule s_left;                 // shared with dual.s_as_left_module
        TensorGroup value;                   // N (x)_R S
        std::vector<IntMatrix> value_ract;   // right S-action on value ambient
        std::vector<IntMatrix> rmul_und;     // right mult by rho(e_l) on S-module underlying
    };
    std::vector<PerAlgebra> at;
};

inline NatHarness make_nat_harness(const FpModule& n, const FpModule& m, const AlgebraDiagram& diagram) {
    validate_diagram(diagram);
    NatHarness h;
    h.n = n;
    h.m = m;
    h.diagram = diagram;
    h.ke = kernel_extension(n, m);
    const int rk = m.ring.rank();
    h.w_to_raw = h.ke.inclusion.matrix * kron(h.ke.fork.c0.from_comp, IntMatrix::identity(rk));

    for (const auto& alg : diagram.algebras) {
        NatHarness::PerAlgebra pa;
        pa.dual = dual_at(m, alg);
        pa.s_left = pa.dual.s_as_left_module;
        pa.value = tensor_over_R(n, pa.s_left.module);
        const StructureRing& s = alg.ring;
        const int kn = n.comp.comp.ambient();
        for (int t = 0; t < s.rank(); ++t) {
            IntMatrix rm_und = pa.s_left.underlying_to_coords * s.right_mult_matrix(s.basis_elt(t)) *
                               pa.s_left.coords_to_underlying;
            IntMatrix rm_c = pa.s_left.module.comp.from_comp * rm_und * pa.s_left.module.comp.to_comp;
            pa.value_ract.push_back(kron(IntMatrix::identity(kn), rm_c));
        }
        for (int l = 0; l < rk; ++l) {
            RingElt rho = ring_map_apply(alg.structure_map, m.ring.basis_elt(l));
            pa.rmul_und.push_back(pa.s_left.underlying_to_coords * s.right_mult_matrix(rho) *
                                  pa.s_left.coords_to_underlying);
        }
        h.at.push_back(std::move(pa));
    }
    return h;
}

// Component at one algebra of the natural transformation attached to a
// kernel element w = sum n_j (x) m_j (x) r_j: the map f |-> sum n_j (x)
// f(m_j).rho(r_j) from Hom_R(M, S) to N (x)_R S.
inline IntMatrix nat_component(const NatHarness& h, int algebra_index, const IntVec& w_coords) {
    const auto& pa = h.at[algebra_index];
    IntVec raw = apply_row(w_coords, h.w_to_raw);
    const int kn = h.n.comp.comp.ambient();
    const int km = h.m.comp.comp.ambient();
    const int rk = h.m.ring.rank();
    const int damb = pa.dual.hom.group.ambient();
    IntMatrix comp(damb, pa.value.group.ambient());
    for (int b = 0; b < damb; ++b) {
        IntMatrix f = hom_R_lift(pa.dual.hom, basis_vec(damb, b));
        IntVec acc(pa.value.group.ambient());
        for (int alpha = 0; alpha < kn; ++alpha)
            for (int beta = 0; beta < km; ++beta)
                for (int l = 0; l < rk; ++l) {
                    const Int& c = raw[(alpha * km + beta) * rk + l];
                    if (c == 0) continue;
                    IntVec m_lift = h.m.comp.from_comp.row(beta);
                    IntVec fs = apply_row(apply_row(m_lift, f), pa.rmul_und[l]);
                    IntVec n_lift = h.n.comp.from_comp.row(alpha);
                    IntVec pure = tensor_pure_R(pa.value, n_lift, fs);
                    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += c * pure[p];
                }
        comp.set_row(b, acc);
    }
    return comp;
}

struct NatTransformation {
    IntVec w;                            // kernel coordinates
    std::vector<IntMatrix> components;   // per algebra
};

// Build the transformation and verify right-S-linearity of every component
// and every naturality square; failures are implementation bugs or invalid
// input and therefore throw.
inline NatTransformation kernel_element_to_nat(const NatHarness& h, const IntVec& w_coords) {
    NatTransformation nt;
    nt.w = w_coords;
    for (std::size_t s = 0; s < h.at.size(); ++s) nt.components.push_back(nat_component(h, static_cast<int>(s), w_coords));

    // right-S-linearity of each component
    for (std::size_t s = 0; s < h.at.size(); ++s) {
        const auto& pa = h.at[s];
        for (int t = 0; t < pa.dual.algebra.ring.rank(); ++t) {
            IntMatrix lhs = pa.dual.action[t] * nt.components[s];
            IntMatrix rhs = nt.components[s] * pa.value_ract[t];
            IntMatrix d = lhs - rhs;
            for (int p = 0; p < d.rows(); ++p)
                if (!pa.value.group.is_zero_elt(d.row(p)))
                    throw std::logic_error("kernel_element_to_nat: component is not right-linear");
        }
    }
    // naturality over the diagram arrows
    for (const auto& ar : h.diagram.arrows) {
        const auto& from = h.at[ar.from];
        const auto& to = h.at[ar.to];
        // dual side: f |-> phi o f
        IntMatrix phi_und = from.s_left.underlying_to_coords * ar.map.matrix * to.s_left.coords_to_underlying;
        IntMatrix dual_push(from.dual.hom.group.ambient(), to.dual.hom.group.ambient());
        for (int b = 0; b < from.dual.hom.group.ambient(); ++b) {
            IntMatrix f = hom_R_lift(from.dual.hom, basis_vec(from.dual.hom.group.ambient(), b));
            auto c = hom_R_coords_of(to.dual.hom, f * phi_und);
            if (!c) throw std::logic_error("kernel_element_to_nat: pushforward leaves the hom lattice");
            dual_push.set_row(b, *c);
        }
        // value side: id (x) phi on compressed coordinates
        IntMatrix phi_c = from.s_left.module.comp.from_comp * phi_und * to.s_left.module.comp.to_comp;
        IntMatrix value_push = kron(IntMatrix::identity(h.n.comp.comp.ambient()), phi_c);
        IntMatrix lhs = nt.components[ar.from] * value_push;
        IntMatrix rhs = dual_push * nt.components[ar.to];
        IntMatrix d = lhs - rhs;
        for (int p = 0; p < d.rows(); ++p)
            if (!to.value.group.is_zero_elt(d.row(p)))
                throw std::logic_error("kernel_element_to_nat: naturality square fails");
    }
    return nt;
}

// Whether w |-> (components over the whole diagram) has trivial kernel.
inline bool nat_assignment_injective(const NatHarness& h) {
    const int t = h.ke.group.ambient();
    // the big map: rows = kernel ambient, cols = sum over algebras of
    // dual_amb * value_amb, with block-diagonal value relations
    long long cols = 0;
    for (const auto& pa : h.at)
        cols += static_cast<long long>(pa.dual.hom.group.ambient()) * pa.value.group.ambient();
    IntMatrix big(t, static_cast<int>(cols));
    for (int g = 0; g < t; ++g) {
        long long at = 0;
        for (std::size_t s = 0; s < h.at.size(); ++s) {
            IntMatrix c = nat_component(h, static_cast<int>(s), basis_vec(t, g));
            for (int i = 0; i < c.rows(); ++i)
                for (int j = 0; j < c.cols(); ++j) big.at(g, static_cast<int>(at++)) = c.at(i, j);
        }
    }
    // target: one copy of the value group per dual generator, per algebra
    std::vector<IntVec> rel_rows;
    {
        long long at = 0;
        for (std::size_t s = 0; s < h.at.size(); ++s) {
            const auto& pa = h.at[s];
            const int damb = pa.dual.hom.group.ambient();
            const int vamb = pa.value.group.ambient();
            for (int b = 0; b < damb; ++b) {
                for (int rr = 0; rr < pa.value.group.rels().rows(); ++rr) {
                    IntVec row(cols);
                    for (int j = 0; j < vamb; ++j) row[at + j] = pa.value.group.rels().at(rr, j);
                    rel_rows.push_back(std::move(row));
                }
                at += vamb;
            }
        }
    }
    FgAbGroup target = FgAbGroup::from_presentation(static_cast<int>(cols),
                                                    IntMatrix::from_rows(rel_rows, static_cast<int>(cols)));
    GroupMap bigmap = make_map(h.ke.group, target, std::move(big));
    return subgroup_is_trivial(kernel_of(bigmap));
}

inline VerificationReport verify_nat_transformations(const std::string& instance, const FpModule& n,
                                                     const FpModule& m, const AlgebraDiagram& diagram) {
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "nat_transform";
    rep.instance = instance;
    NatHarness h = make_nat_harness(n, m, diagram);
    rep.groups.push_back(group_info("extension_value", h.ke.group));
    rep.note("algebras", std::to_string(diagram.algebras.size()));
    rep.note("arrows", std::to_string(diagram.arrows.size()));
    const int t = h.ke.group.ambient();
    bool ok = true;
    try {
        std::vector<NatTransformation> gens;
        for (int g = 0; g < t; ++g) gens.push_back(kernel_element_to_nat(h, basis_vec(t, g)));
        // additivity on generator pairs
        for (int g = 0; g + 1 < t && ok; ++g) {
            IntVec sum = vec_add(basis_vec(t, g), basis_vec(t, g + 1));
            NatTransformation both = kernel_element_to_nat(h, sum);
            for (std::size_t s = 0; s < h.at.size(); ++s) {
                IntMatrix d = both.components[s] - (gens[g].components[s] + gens[g + 1].components[s]);
                if (!d.is_zero()) ok = false;
            }
        }
        rep.note("additive", ok);
        bool inj = nat_assignment_injective(h);
        rep.note("injective", inj);
        ok = ok && inj;
    } catch (const std::logic_error& e) {
        ok = false;
        rep.note("error", e.what());
    }
    rep.verdict = ok ? Verdict::holds : Verdict::fails;
    rep.millis = sw.ms();
    return rep;
}

// --- reflexivity -----------------------------------------------------------------

// For each algebra S of the diagram: the canonical map S (x)_R M into the
// functorial double-dual value (the kernel extension over S with N = S and
// M = S (x)_R M) must be an isomorphism; the classical pointwise double dual
// is computed alongside with its evaluation map, as the contrast datum.
struct ReflexivityAtAlgebra {
    std::string algebra;
    FpModule m_s;                  // S (x)_R M
    KernelExtension functorial;    // over the ring S
    bool functorial_iso = false;
    FgAbGroup classical_value;     // Hom_S(Hom_S(M_S, S), S)
    bool classical_iso = false;
    bool classical_injective = false;
};

inline ReflexivityAtAlgebra reflexivity_at(const FpModule& m, const Algebra& alg) {
    ReflexivityAtAlgebra out;
    out.algebra = alg.name;
    out.m_s = base_change(m, alg);
    const StructureRing& s = alg.ring;
    Algebra self = algebra_self(s);

    // functorial branch: kernel extension over S with N = S
    ActionModule ns = algebra_as_right_module(self);
    out.functorial = kernel_extension(ns.module, out.m_s);
    // canonical map M_S -> t0 = S (x)_S M_S -> kernel
    IntVec unit_und = apply_row(s.unit(), ns.coords_to_underlying);
    IntMatrix into_t0(out.m_s.underlying.ambient(), out.functorial.fork.t0.group.ambient());
    for (int b = 0; b < out.m_s.underlying.ambient(); ++b)
        into_t0.set_row(b, tensor_pure_R(out.functorial.fork.t0, unit_und,
                                         basis_vec(out.m_s.underlying.ambient(), b)));
    GroupMap canonical = compose(make_map(out.m_s.underlying, out.functorial.fork.t0.group, into_t0),
                                 canonical_into_kernel(out.functorial));
    out.functorial_iso = map_is_isomorphism(canonical);

    // classical branch: D2 = Hom_S(Hom_S(M_S, S), S) with evaluation
    DualModule d1 = dual_at(out.m_s, self);
    Compression d1c = compress(d1.hom.group);
    IntVec ords = d1c.comp.coord_orders();
    std::vector<IntMatrix> act_c;
    for (const auto& a : d1.action) act_c.push_back(d1c.from_comp * a * d1c.to_comp);
    ActionModule d1_mod = module_from_action(s, false, ords, act_c);
    ActionModule s_right = algebra_as_right_module(self);
    HomRGroup d2 = hom_R(d1_mod.module, s_right.module);
    out.classical_value = d2.group;

    // evaluation map M_S -> D2
    ActionModule s_left = d1.s_as_left_module;
    const int tc = d1c.comp.ambient();
    const int sk = s.rank();
    IntMatrix eval_rows(out.m_s.underlying.ambient(), d2.group.ambient());
    bool ok = true;
    for (int b = 0; b < out.m_s.underlying.ambient() && ok; ++b) {
        IntVec mb = basis_vec(out.m_s.underlying.ambient(), b);
        IntMatrix ev(d1_mod.module.underlying.ambient(), s_right.module.underlying.ambient());
        for (int g = 0; g < tc; ++g) {
            IntMatrix fg = hom_R_lift(d1.hom, d1c.from_comp.row(g));
            IntVec val_und = apply_row(mb, fg);  // f_g(m_b) in S-left-module underlying
            IntVec val_s = apply_row(val_und, s_left.underlying_to_coords);
            for (int i = 0; i < sk; ++i) {
                RingElt scaled = s.mul(val_s, s.basis_elt(i));
                ev.set_row(g * sk + i, apply_row(scaled, s_right.coords_to_underlying));
            }
        }
        auto c = hom_R_coords_of(d2, ev);
        if (!c) { ok = false; break; }
        eval_rows.set_row(b, *c);
    }
    if (!ok) throw std::logic_error("reflexivity_at: evaluation escapes the double-dual lattice");
    GroupMap eval = make_map(out.m_s.underlying, d2.group, std::move(eval_rows));
    out.classical_iso = map_is_isomorphism(eval);
    out.classical_injective = subgroup_is_trivial(kernel_of(eval));
    return out;
}

inline VerificationReport verify_reflexivity(const std::string& instance, const FpModule& m,
                                             const AlgebraDiagram& diagram) {
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "reflexivity";
    rep.instance = instance;
    bool all = true;
    for (const auto& alg : diagram.algebras) {
        ReflexivityAtAlgebra ra = reflexivity_at(m, alg);
        rep.groups.push_back(group_info("functorial(" + ra.algebra + ")", ra.functorial.group));
        rep.groups.push_back(group_info("classical(" + ra.algebra + ")", ra.classical_value));
        rep.note("functorial_iso(" + ra.algebra + ")", ra.functorial_iso);
        rep.note("classical_iso(" + ra.algebra + ")", ra.classical_iso);
        all = all && ra.functorial_iso;
    }
    rep.verdict = all ? Verdict::holds : Verdict::fails;
    rep.millis = sw.ms();
    return rep;
}

// Extended-dual reflexivity: the extension value of S |-> S (x)_R M over the
// base ring, computed through the truncated definition with N = S as a right
// module, must be isomorphic to S (x)_R M via the canonical map, and
// truncation-stable.
inline VerificationReport verify_vee_reflexivity(const std::string& instance, const FpModule& m,
                                                 const AlgebraDiagram& diagram, int cap) {
    detail::Stopwatch sw;
    VerificationReport rep;
    rep.statement = "vee_reflexivity";
    rep.instance = instance;
    rep.cap = cap;
    bool all = true;
    for (const auto& alg : diagram.algebras) {
        ActionModule ns = algebra_as_right_module(alg);
        ExtensionValue v = extension_value_qc(ns.module, m, cap);
        rep.groups.push_back(group_info("value(" + alg.name + ")", v.group));
        rep.note("stable(" + alg.name + ")", v.stable);
        rep.note("matches_direct(" + alg.name + ")", v.matches_direct);

        // canonical map S (x)_R M -> kernel through the tensor identification
        FpModule bc = base_change(m, alg);
        KernelExtension ke = kernel_extension(ns.module, m);
        IntMatrix into_t0(bc.underlying.ambient(), ke.fork.t0.group.ambient());
        const int sk = alg.ring.rank();
        for (int g = 0; g < m.gens; ++g)
            for (int i = 0; i < sk; ++i) {
                // generator g with coefficient e_i corresponds to e_i (x) gen_g
                IntVec n_elt = apply_row(alg.ring.basis_elt(i), ns.coords_to_underlying);
                IntVec pure = tensor_pure_R(ke.fork.t0, n_elt, module_generator(m, g));
                into_t0.set_row(g * sk + i, pure);
            }
        GroupMap canonical = compose(make_map(bc.underlying, ke.fork.t0.group, into_t0),
                                     canonical_into_kernel(ke));
        bool iso = map_is_isomorphism(canonical);
        rep.note("canonical_iso(" + alg.name + ")", iso);
        all = all && v.stable && v.matches_direct && iso;
    }
    rep.verdict = all ? Verdict::holds : Verdict::fails;
    rep.millis = sw.ms();
    return rep;
}

// --- counterexample search --------------------------------------------------------

struct SearchBounds {
    int max_rank = 2;
    std::vector<Int> orders = {2, 3};  // allowed additive orders (0 = infinite)
    int max_gens = 1;
    int max_rels = 1;
    Int coeff_bound = 1;  // bound on |c| for infinite-order coordinates
};

struct SearchSummary {
    long long ring_candidates = 0;
    long long rings_valid = 0;
    long long pairs_checked = 0;
    long long covered = 0;  // skipped: a sufficiency criterion applies
    long long exact = 0;
    long long failed = 0;
    std::vector<VerificationReport> failures;
};

namespace detail {

inline void enumerate_elements_of(const IntVec& orders, const Int& coeff_bound,
                                  const std::function<void(const IntVec&)>& f) {
    IntVec cur(orders.size(), Int(0));
    std::vector<Int> lo(orders.size()), hi(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] == 0) {
            lo[i] = -coeff_bound;
            hi[i] = coeff_bound;
        } else {
            lo[i] = 0;
            hi[i] = orders[i] - 1;
        }
        cur[i] = lo[i];
    }
    if (orders.empty()) {
        f(cur);
        return;
    }
    for (;;) {
        f(cur);
        std::size_t i = 0;
        for (; i < orders.size(); ++i) {
            cur[i] += 1;
            if (cur[i] <= hi[i]) break;
            cur[i] = lo[i];
        }
        if (i == orders.size()) break;
    }
}

}  // namespace detail

// Enumerate rings within bounds (unit normalized to the first generator),
// then module pairs; skip pairs covered by a sufficiency criterion and run
// the exactness check on the rest. Every reported failure carries replayable
// witnesses. An empty failure set is an honest result.
inline SearchSummary search_counterexamples(const SearchBounds& b,
                                            const std::function<void(const VerificationReport&)>& sink = {}) {
    SearchSummary sum;
    // additive types: non-decreasing order tuples
    std::vector<IntVec> types;
    std::function<void(IntVec&, std::size_t)> gen_types = [&](IntVec& cur, std::size_t start) {
        if (!cur.empty()) types.push_back(cur);
        if (static_cast<int>(cur.size()) >= b.max_rank) return;
        for (std::size_t i = start; i < b.orders.size(); ++i) {
            cur.push_back(b.orders[i]);
            gen_types(cur, i);
            cur.pop_back();
        }
    };
    IntVec cur;
    gen_types(cur, 0);

    for (const IntVec& type : types) {
        const int rk = static_cast<int>(type.size());
        // free product cells: c[i][j] for i,j >= 1; unit = e_0 pins the rest
        std::vector<std::pair<int, int>> cells;
        for (int i = 1; i < rk; ++i)
            for (int j = 1; j < rk; ++j) cells.push_back({i, j});
        // iterate over assignments of ring elements to cells
        std::vector<IntVec> assignment(cells.size(), IntVec(rk, Int(0)));
        std::function<void(std::size_t)> rec = [&](std::size_t cell) {
            if (cell == cells.size()) {
                ++sum.ring_candidates;
                std::vector<std::vector<RingElt>> mult(rk, std::vector<RingElt>(rk, IntVec(rk, Int(0))));
                RingElt unit(rk);
                unit[0] = 1;
                for (int j = 0; j < rk; ++j) {
                    mult[0][j] = IntVec(rk, Int(0));
                    mult[0][j][j] = 1;
                    mult[j][0] = mult[0][j];
                }
                for (std::size_t c = 0; c < cells.size(); ++c) mult[cells[c].first][cells[c].second] = assignment[c];
                StructureRing r;
                try {
                    r = ring_validate(type, mult, unit);
                } catch (const RingAxiomError&) {
                    return;
                }
                ++sum.rings_valid;
                std::string rdesc = "ring[orders=";
                for (const Int& d : type) rdesc += d.get_str() + ",";
                rdesc += " cells=";
                for (std::size_t c = 0; c < cells.size(); ++c) {
                    for (const Int& x : assignment[c]) rdesc += x.get_str();
                    rdesc += "|";
                }
                rdesc += "]";

                bool ring_covered = r.is_commutative();
                if (!ring_covered) {
                    try {
                        ring_covered = is_central_subring_split(r, {r.unit()});
                    } catch (const std::invalid_argument&) {
                        ring_covered = false;
                    }
                }

                // enumerate modules: presentations with <= max_gens generators
                // and <= max_rels relations
                struct Pres {
                    int gens;
                    std::vector<std::vector<RingElt>> rels;
                    bool free;
                };
                std::vector<Pres> presentations;
                for (int g = 1; g <= b.max_gens; ++g) {
                    std::vector<std::vector<RingElt>> rel_pool;
                    IntVec flat_orders;
                    for (int gg = 0; gg < g; ++gg)
                        for (int i = 0; i < rk; ++i) flat_orders.push_back(type[i]);
                    detail::enumerate_elements_of(flat_orders, b.coeff_bound, [&](const IntVec& v) {
                        if (vec_is_zero(v)) return;
                        std::vector<RingElt> rel(g, IntVec(rk, Int(0)));
                        for (int gg = 0; gg < g; ++gg)
                            for (int i = 0; i < rk; ++i) rel[gg][i] = v[gg * rk + i];
                        rel_pool.push_back(std::move(rel));
                    });
                    presentations.push_back({g, {}, true});
                    for (int nrels = 1; nrels <= b.max_rels; ++nrels) {
                        // combinations with strictly increasing pool indices
                        std::vector<int> pick(nrels);
                        std::function<void(int, int)> comb = [&](int pos, int start) {
                            if (pos == nrels) {
                                std::vector<std::vector<RingElt>> rels;
                                for (int p = 0; p < nrels; ++p) rels.push_back(rel_pool[pick[p]]);
                                presentations.push_back({g, std::move(rels), false});
                                return;
                            }
                            for (int i = start; i < static_cast<int>(rel_pool.size()); ++i) {
                                pick[pos] = i;
                                comb(pos + 1, i + 1);
                            }
                        };
                        comb(0, 0);
                    }
                }

                for (std::size_t ni = 0; ni < presentations.size(); ++ni)
                    for (std::size_t mi = 0; mi < presentations.size(); ++mi) {
                        ++sum.pairs_checked;
                        bool covered = ring_covered || presentations[ni].free || presentations[mi].free;
                        if (covered) {
                            ++sum.covered;
                            continue;
                        }
                        FpModule n = module_from_presentation(r, false, presentations[ni].gens,
                                                              presentations[ni].rels);
                        FpModule m = module_from_presentation(r, true, presentations[mi].gens,
                                                              presentations[mi].rels);
                        TensorFork f = build_fork(n, m);
                        ExactnessReport ex = check_fork_exactness(f);
                        if (ex.exact()) {
                            ++sum.exact;
                        } else {
                            ++sum.failed;
                            VerificationReport rep;
                            rep.statement = "hypothesis_search";
                            rep.instance = rdesc + " N#" + std::to_string(ni) + " M#" + std::to_string(mi);
                            rep.verdict = Verdict::fails;
                            rep.note("i_injective", ex.i_injective);
                            rep.note("middle_exact", ex.middle_exact);
                            detail::attach_fork_witnesses(rep, f, ex);
                            sum.failures.push_back(rep);
                            if (sink) sink(rep);
                        }
                    }
                return;
            }
            detail::enumerate_elements_of(type, b.coeff_bound, [&](const IntVec& v) {
                assignment[cell] = v;
                rec(cell + 1);
            });
        };
        rec(0);
    }
    return sum;
}

}  // namespace modref
