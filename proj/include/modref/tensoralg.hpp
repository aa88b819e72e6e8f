#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "modref/tensorfork.hpp"

namespace modref {

// --- letters and word bookkeeping -------------------------------------------
//
// Degree-truncated model of the word algebra on a module M: degree n is
// spanned by words (j_1 ... j_n, l) over the compressed coordinates of M
// with a trailing ring coordinate. All components are plain Z-tensors of
// cyclic groups, so they stay diagonal and are never normalized.

// The letter space of a module: its compressed coordinates, the ring action
// on them, and bridges to the underlying ambient coordinates. x_base >= 0
// marks the block of an adjoined free rank-1 summand holding the variable x.
struct Letters {
    IntVec orders;
    std::vector<IntMatrix> act;  // per ring basis element, on letter coords
    IntMatrix from_letters;      // letters -> underlying ambient
    IntMatrix to_letters;        // underlying ambient -> letters
    int x_base = -1;

    int count() const { return static_cast<int>(orders.size()); }
};

inline Letters letters_of(const FpModule& m) {
    Letters l;
    l.orders = m.comp.comp.coord_orders();
    l.act = m.action_c;
    l.from_letters = m.comp.from_comp;
    l.to_letters = m.comp.to_comp;
    return l;
}

// M + Rx: the module with one adjoined free generator, with a block
// compression that keeps the x coordinates identifiable.
struct AdjoinedModule {
    FpModule module;
    int m_letters;          // letters of the original module
    IntMatrix inclusion;    // M underlying -> module underlying
    IntMatrix projection;   // module underlying -> M underlying
    IntVec x_letter;        // the element x in letter coordinates
};

inline AdjoinedModule adjoin_x(const FpModule& m) {
    const StructureRing& r = m.ring;
    const int rk = r.rank();
    std::vector<std::vector<RingElt>> rels;
    for (const auto& rel : m.relations) {
        auto padded = rel;
        padded.push_back(r.zero());
        rels.push_back(std::move(padded));
    }
    AdjoinedModule out;
    out.module = module_from_presentation(r, m.left, m.gens + 1, rels);

    // block compression: (compressed M) ++ (raw ring coordinates)
    const int tm = m.comp.comp.ambient();
    const int amb_m = m.underlying.ambient();
    const int amb = out.module.underlying.ambient();
    Compression c;
    IntVec orders = m.comp.comp.coord_orders();
    for (int i = 0; i < rk; ++i) orders.push_back(r.orders()[i]);
    c.comp = FgAbGroup::diagonal(orders);
    c.to_comp = IntMatrix(amb, tm + rk);
    c.from_comp = IntMatrix(tm + rk, amb);
    for (int a = 0; a < amb_m; ++a)
        for (int b = 0; b < tm; ++b) c.to_comp.at(a, b) = m.comp.to_comp.at(a, b);
    for (int i = 0; i < rk; ++i) c.to_comp.at(amb_m + i, tm + i) = 1;
    for (int b = 0; b < tm; ++b)
        for (int a = 0; a < amb_m; ++a) c.from_comp.at(b, a) = m.comp.from_comp.at(b, a);
    for (int i = 0; i < rk; ++i) c.from_comp.at(tm + i, amb_m + i) = 1;
    out.module.comp = c;
    out.module.action_c.clear();
    for (const auto& a : out.module.action)
        out.module.action_c.push_back(c.from_comp * a * c.to_comp);

    out.m_letters = tm;
    out.inclusion = IntMatrix(amb_m, amb);
    out.projection = IntMatrix(amb, amb_m);
    for (int a = 0; a < amb_m; ++a) {
        out.inclusion.at(a, a) = 1;
        out.projection.at(a, a) = 1;
    }
    out.x_letter = IntVec(tm + rk);
    for (int i = 0; i < rk; ++i) out.x_letter[tm + i] = r.unit()[i];
    return out;
}

inline Letters letters_with_x(const AdjoinedModule& mx) {
    Letters l = letters_of(mx.module);
    l.x_base = mx.m_letters;
    return l;
}

// An explicit direct sum of diagonal components indexed by degree.
struct ConcatSpace {
    std::vector<std::vector<Int>> orders;  // per degree (may be implicit for big spaces)
    std::vector<long long> dim;            // per degree
    std::vector<long long> offset;         // prefix sums
    long long total = 0;

    void finish() {
        offset.assign(dim.size() + 1, 0);
        for (std::size_t n = 0; n < dim.size(); ++n) offset[n + 1] = offset[n] + dim[n];
        total = offset[dim.size()];
    }
};

// sparse graded element: (degree, word index) -> coefficient
using GradedElt = std::map<std::pair<int, long long>, Int>;

inline IntVec basis_vec(int n, long long i) {
    IntVec v(n);
    v[i] = 1;
    return v;
}

inline void graded_add(GradedElt& g, int deg, long long idx, const Int& c) {
    if (c == 0) return;
    auto key = std::make_pair(deg, idx);
    auto it = g.find(key);
    if (it == g.end())
        g.emplace(key, c);
    else {
        it->second += c;
        if (it->second == 0) g.erase(it);
    }
}

// --- plain truncated word algebra -------------------------------------------

// T(M) truncated at a degree cap: component n = M (x) ... (x) M (x) R on the
// compressed coordinates of M. Words are mixed-radix indices, letters first,
// trailing ring coordinate last (fastest).
struct WordAlgebra {
    StructureRing ring;
    Letters let;
    int cap = 0;
    ConcatSpace space;

    long long word_dim(int n) const {
        long long d = ring.rank();
        for (int k = 0; k < n; ++k) d *= let.count();
        return d;
    }
    // digits of a degree-n word: n letter indices then the ring index
    std::vector<int> unpack(int n, long long idx) const {
        std::vector<int> digits(n + 1);
        digits[n] = static_cast<int>(idx % ring.rank());
        idx /= ring.rank();
        for (int k = n - 1; k >= 0; --k) {
            digits[k] = static_cast<int>(idx % let.count());
            idx /= let.count();
        }
        return digits;
    }
    long long pack(const std::vector<int>& digits) const {
        long long idx = 0;
        for (std::size_t k = 0; k + 1 < digits.size(); ++k) idx = idx * let.count() + digits[k];
        return idx * ring.rank() + digits.back();
    }
    Int order_of(int n, long long idx) const {
        auto d = unpack(n, idx);
        Int o = ring.orders()[d[n]];
        for (int k = 0; k < n; ++k) o = cyclic_tensor_order(o, let.orders[d[k]]);
        return o;
    }
};

inline WordAlgebra trunc_algebra(const StructureRing& r, const FpModule& m, int cap) {
    if (cap < 0) throw std::invalid_argument("trunc_algebra: negative cap");
    if (!rings_equal(r, m.ring)) throw std::invalid_argument("trunc_algebra: module over a different ring");
    WordAlgebra w;
    w.ring = r;
    w.let = letters_of(m);
    w.cap = cap;
    for (int n = 0; n <= cap; ++n) {
        w.space.dim.push_back(w.word_dim(n));
        if (w.space.dim.back() <= (1 << 14)) {
            std::vector<Int> ords;
            for (long long i = 0; i < w.space.dim.back(); ++i) ords.push_back(w.order_of(n, i));
            w.space.orders.push_back(std::move(ords));
        } else {
            w.space.orders.push_back({});
        }
    }
    w.space.finish();
    return w;
}

// Product of two basis words: (w . r) * (w' . r') moves r onto the first
// letter of w' (or multiplies into r' when w' is empty).
inline GradedElt word_product(const WordAlgebra& alg, int n, long long wi, int np, long long wj) {
    if (n + np > alg.cap) throw std::invalid_argument("word_product: degree exceeds cap");
    auto a = alg.unpack(n, wi);
    auto b = alg.unpack(np, wj);
    const int rk = alg.ring.rank();
    GradedElt out;
    if (np == 0) {
        const RingElt& prod = alg.ring.basis_product(a[n], b[0]);
        for (int l = 0; l < rk; ++l) {
            if (prod[l] == 0) continue;
            auto digits = a;
            digits[n] = l;
            graded_add(out, n, alg.pack(digits), prod[l]);
        }
        return out;
    }
    IntVec moved = alg.let.act[a[n]].row(b[0]);  // e_l . first letter
    for (int s = 0; s < alg.let.count(); ++s) {
        if (moved[s] == 0) continue;
        std::vector<int> digits;
        digits.reserve(n + np + 1);
        for (int k = 0; k < n; ++k) digits.push_back(a[k]);
        digits.push_back(s);
        for (int k = 1; k <= np; ++k) digits.push_back(b[k]);
        graded_add(out, n + np, alg.pack(digits), moved[s]);
    }
    return out;
}

// The algebra endomorphism h of the adjoined-variable algebra determined by
// m |-> m.x on original letters and x |-> x: inserts the x letter after each
// non-x letter. A word with k non-x letters moves up k degrees.
inline GradedElt hx_image(const WordAlgebra& alg, int n, long long idx) {
    if (alg.let.x_base < 0) throw std::invalid_argument("hx_image: algebra has no adjoined variable");
    auto digits = alg.unpack(n, idx);
    const int rk = alg.ring.rank();
    std::vector<std::pair<std::vector<int>, Int>> words{{std::vector<int>{}, Int(1)}};
    for (int k = 0; k < n; ++k) {
        std::vector<std::pair<std::vector<int>, Int>> next;
        for (auto& [w, c] : words) {
            if (digits[k] >= alg.let.x_base) {
                auto w2 = w;
                w2.push_back(digits[k]);
                next.push_back({std::move(w2), c});
                continue;
            }
            // m-letter: emit the letter then the x letter (unit expansion)
            for (int l = 0; l < rk; ++l) {
                const Int& ul = alg.ring.unit()[l];
                if (ul == 0) continue;
                auto w2 = w;
                w2.push_back(digits[k]);
                w2.push_back(alg.let.x_base + l);
                next.push_back({std::move(w2), c * ul});
            }
        }
        words = std::move(next);
    }
    GradedElt out;
    for (auto& [w, c] : words) {
        auto full = w;
        full.push_back(digits[n]);
        graded_add(out, static_cast<int>(w.size()), alg.pack(full), c);
    }
    return out;
}

// Right multiplication by x: append the letter (0, r) and reset the trailing
// coordinate to the unit.
inline GradedElt append_x_image(const WordAlgebra& alg, int n, long long idx) {
    if (alg.let.x_base < 0) throw std::invalid_argument("append_x_image: algebra has no adjoined variable");
    auto digits = alg.unpack(n, idx);
    const int rk = alg.ring.rank();
    GradedElt out;
    int l_old = digits[n];
    for (int l = 0; l < rk; ++l) {
        const Int& ul = alg.ring.unit()[l];
        if (ul == 0) continue;
        auto w2 = digits;
        w2[n] = alg.let.x_base + l_old;
        w2.push_back(l);
        graded_add(out, n + 1, alg.pack(w2), ul);
    }
    return out;
}

// The evaluation morphism of the word algebra on an algebra S: the word
// s_1 ... s_n . r multiplies out to s_1 * ... * s_n * rho(r) in S.
struct PiMap {
    WordAlgebra alg;           // words over S as a module
    Algebra s;
    IntMatrix letter_to_s;     // letter coords -> S coords
};

inline PiMap pi_map(const Algebra& s, int cap) {
    ActionModule am = algebra_as_left_module(s);
    PiMap p;
    p.alg = trunc_algebra(s.structure_map.source, am.module, cap);
    p.s = s;
    p.letter_to_s = p.alg.let.from_letters * am.underlying_to_coords;
    return p;
}

inline RingElt pi_image(const PiMap& p, int n, long long idx) {
    auto digits = p.alg.unpack(n, idx);
    RingElt acc = ring_map_apply(p.s.structure_map, p.s.structure_map.source.basis_elt(digits[n]));
    for (int k = n - 1; k >= 0; --k)
        acc = p.s.ring.mul(p.letter_to_s.row(digits[k]), acc);
    return acc;
}

// --- the N-tensored truncation ----------------------------------------------
//
// N (x)_R T(M), truncated: degree 0 is N itself (via N (x)_R R = N), degree
// n >= 1 is (N (x)_R M') (x) letters^(n-1) (x) R where the balanced head
// absorbs the R-action on the first letter. The head of the source reuses
// the tensor fork over (N, M), so its degree-1 block literally is the middle
// group of the fork.
struct NAlgebraTruncation {
    FpModule n, m;
    AdjoinedModule mx;
    TensorFork fork;        // over (n, m): c0 = source head
    TensorGroup head_x;     // N (x)_R (M + Rx)
    Compression hxc;        // its compression: target head
    IntMatrix head_embed;   // source head coords -> target head coords
    Letters slet, tlet;     // source letters (M), target letters (M + Rx)
    int cap;
    ConcatSpace src, tgt;   // src: degrees 0..cap, tgt: degrees 0..2cap

    int tn() const { return n.comp.comp.ambient(); }
    int sh() const { return fork.c0.comp.ambient(); }
    int th() const { return hxc.comp.ambient(); }
    int rk() const { return m.ring.rank(); }

    long long src_dim(int deg) const {
        if (deg == 0) return tn();
        long long d = static_cast<long long>(sh()) * rk();
        for (int k = 1; k < deg; ++k) d *= slet.count();
        return d;
    }
    long long tgt_dim(int deg) const {
        if (deg == 0) return tn();
        long long d = static_cast<long long>(th()) * rk();
        for (int k = 1; k < deg; ++k) d *= tlet.count();
        return d;
    }
    // digits of a degree-n (n>=1) word: head, n-1 letters, ring index
    std::vector<long long> unpack(bool target, int deg, long long idx) const {
        const int rk_ = rk();
        const int lc = target ? tlet.count() : slet.count();
        std::vector<long long> d(deg + 1);
        d[deg] = idx % rk_;
        idx /= rk_;
        for (int k = deg - 1; k >= 1; --k) {
            d[k] = idx % lc;
            idx /= lc;
        }
        d[0] = idx;
        return d;
    }
    long long pack(bool target, const std::vector<long long>& d) const {
        const int lc = target ? tlet.count() : slet.count();
        long long idx = d[0];
        for (std::size_t k = 1; k + 1 < d.size(); ++k) idx = idx * lc + d[k];
        return idx * rk() + d.back();
    }
    Int src_order(int deg, long long idx) const {
        if (deg == 0) return n.comp.comp.coord_orders()[idx];
        auto d = unpack(false, deg, idx);
        Int o = cyclic_tensor_order(fork.c0.comp.coord_orders()[d[0]], m.ring.orders()[d[deg]]);
        for (int k = 1; k < deg; ++k) o = cyclic_tensor_order(o, slet.orders[d[k]]);
        return o;
    }
    Int tgt_order(int deg, long long idx) const {
        if (deg == 0) return n.comp.comp.coord_orders()[idx];
        auto d = unpack(true, deg, idx);
        Int o = cyclic_tensor_order(hxc.comp.coord_orders()[d[0]], m.ring.orders()[d[deg]]);
        for (int k = 1; k < deg; ++k) o = cyclic_tensor_order(o, tlet.orders[d[k]]);
        return o;
    }
};

inline NAlgebraTruncation make_truncation(const FpModule& n, const FpModule& m, int cap) {
    if (cap < 1) throw std::invalid_argument("make_truncation: cap must be >= 1");
    NAlgebraTruncation t;
    t.n = n;
    t.m = m;
    t.mx = adjoin_x(m);
    t.fork = build_fork(n, m);
    t.head_x = tensor_over_R(n, t.mx.module);
    t.hxc = t.head_x.comp;
    t.slet = letters_of(m);
    t.tlet = letters_with_x(t.mx);
    t.cap = cap;

    // head embedding: N (x) M -> N (x) (M + Rx) on compressed coordinates
    const int tn = t.tn();
    const int sm = t.slet.count();
    const int tm = t.tlet.count();
    IntMatrix raw(tn * sm, tn * tm);
    for (int a = 0; a < tn; ++a)
        for (int b = 0; b < sm; ++b) raw.at(a * sm + b, a * tm + b) = 1;
    t.head_embed = t.fork.c0.from_comp * raw * t.hxc.to_comp;

    for (int deg = 0; deg <= cap; ++deg) t.src.dim.push_back(t.src_dim(deg));
    t.src.finish();
    for (int deg = 0; deg <= 2 * cap; ++deg) t.tgt.dim.push_back(t.tgt_dim(deg));
    t.tgt.finish();
    return t;
}

// q1: substitute every letter m by m.x. Degree n -> 2n.
inline GradedElt q1_image(const NAlgebraTruncation& t, int deg, long long idx) {
    GradedElt out;
    if (deg == 0) {
        graded_add(out, 0, idx, Int(1));
        return out;
    }
    auto d = t.unpack(false, deg, idx);
    const int rk = t.rk();
    const IntVec& unit = t.m.ring.unit();
    // expansion of the head through the embedding
    IntVec h = t.head_embed.row(static_cast<int>(d[0]));
    // words: partial letter strings after the head's x insertion
    struct Partial {
        std::vector<long long> digits;  // head, then letters
        Int coeff;
    };
    std::vector<Partial> parts;
    for (int hb = 0; hb < t.th(); ++hb) {
        if (h[hb] == 0) continue;
        for (int l = 0; l < rk; ++l) {
            if (unit[l] == 0) continue;
            parts.push_back({{hb, t.tlet.x_base + l}, h[hb] * unit[l]});
        }
    }
    for (int k = 1; k < deg; ++k) {
        std::vector<Partial> next;
        for (auto& p : parts)
            for (int l = 0; l < rk; ++l) {
                if (unit[l] == 0) continue;
                auto d2 = p.digits;
                d2.push_back(d[k]);
                d2.push_back(t.tlet.x_base + l);
                next.push_back({std::move(d2), p.coeff * unit[l]});
            }
        parts = std::move(next);
    }
    for (auto& p : parts) {
        p.digits.push_back(d[deg]);
        graded_add(out, 2 * deg, t.pack(true, p.digits), p.coeff);
    }
    return out;
}

// q2: right-multiply by x. Degree n -> n + 1.
inline GradedElt q2_image(const NAlgebraTruncation& t, int deg, long long idx) {
    GradedElt out;
    const int rk = t.rk();
    const IntVec& unit = t.m.ring.unit();
    if (deg == 0) {
        // n (x) 1 |-> (n (x) x-letter) . unit
        IntVec nraw = kron_vec(t.n.comp.comp.canon(basis_vec(t.tn(), idx)), t.mx.x_letter);
        IntVec hh = apply_row(nraw, t.hxc.to_comp);
        for (int hb = 0; hb < t.th(); ++hb) {
            if (hh[hb] == 0) continue;
            for (int l = 0; l < rk; ++l)
                if (unit[l] != 0) graded_add(out, 1, static_cast<long long>(hb) * rk + l, hh[hb] * unit[l]);
        }
        return out;
    }
    auto d = t.unpack(false, deg, idx);
    IntVec h = t.head_embed.row(static_cast<int>(d[0]));
    const int l_old = static_cast<int>(d[deg]);
    for (int hb = 0; hb < t.th(); ++hb) {
        if (h[hb] == 0) continue;
        for (int l = 0; l < rk; ++l) {
            if (unit[l] == 0) continue;
            std::vector<long long> d2;
            d2.push_back(hb);
            for (int k = 1; k < deg; ++k) d2.push_back(d[k]);
            d2.push_back(t.tlet.x_base + l_old);
            d2.push_back(l);
            graded_add(out, deg + 1, t.pack(true, d2), h[hb] * unit[l]);
        }
    }
    return out;
}

// Kernel of q1 - q2 on the truncated source, with the two verdicts the
// comparison statement needs: concentration in degree 1 and equality with
// the kernel of p1 - p2 in the fork.
struct TruncatedKernel {
    int cap = 0;
    bool concentrated = false;  // every kernel generator lives in degree 1
    bool matches_fork = false;  // degree-1 part equals Ker(p1 - p2)
    IntMatrix basis;            // rows over the concatenated source coordinates
    Subgroup deg1;              // the degree-1 part inside fork.t1
    FgAbGroup group;            // abstract group of the degree-1 part
};

inline TruncatedKernel truncated_q_kernel(const NAlgebraTruncation& t) {
    const long long k = t.src.total;
    LatticeRestrictor lr(static_cast<int>(k));

    // assemble sparse conditions grouped by target coordinate
    std::map<std::pair<int, long long>, std::vector<std::pair<long long, Int>>> conds;
    for (int deg = 0; deg <= t.cap; ++deg)
        for (long long i = 0; i < t.src.dim[deg]; ++i) {
            GradedElt img = q1_image(t, deg, i);
            GradedElt img2 = q2_image(t, deg, i);
            for (auto& [key, c] : img2) graded_add(img, key.first, key.second, -c);
            for (auto& [key, c] : img) conds[key].push_back({t.src.offset[deg] + i, c});
        }
    for (auto& [key, col] : conds) {
        Int ord = t.tgt_order(key.first, key.second);
        if (ord == 1) continue;
        std::vector<std::pair<int, Int>> sparse;
        for (auto& [i, c] : col) {
            Int cc = mod_order(c, ord);
            if (cc != 0) sparse.push_back({static_cast<int>(i), cc});
        }
        if (!sparse.empty()) lr.restrict_sparse(sparse, ord);
    }

    // relation lattice of the source: diagonal orders
    std::vector<IntVec> diag;
    for (int deg = 0; deg <= t.cap; ++deg)
        for (long long i = 0; i < t.src.dim[deg]; ++i) {
            Int o = t.src_order(deg, i);
            if (o == 0) continue;
            IntVec row(k);
            row[t.src.offset[deg] + i] = o;
            diag.push_back(row);
        }
    TruncatedKernel out;
    out.cap = t.cap;
    out.basis = lr.basis_with(IntMatrix::from_rows(diag, static_cast<int>(k)));

    // concentration: outside the degree-1 block every row must vanish mod orders
    out.concentrated = true;
    const long long d1lo = t.src.offset[1], d1hi = t.src.offset[2];
    for (int r = 0; r < out.basis.rows() && out.concentrated; ++r)
        for (int deg = 0; deg <= t.cap && out.concentrated; ++deg) {
            if (deg == 1) continue;
            for (long long i = 0; i < t.src.dim[deg]; ++i) {
                const Int& c = out.basis.at(r, static_cast<int>(t.src.offset[deg] + i));
                if (mod_order(c, t.src_order(deg, i)) != 0) {
                    out.concentrated = false;
                    break;
                }
            }
        }

    // degree-1 part as a subgroup of the fork's middle group
    std::vector<IntVec> rows;
    for (int r = 0; r < out.basis.rows(); ++r) {
        IntVec v(static_cast<std::size_t>(d1hi - d1lo));
        bool nzrow = false;
        for (long long i = d1lo; i < d1hi; ++i) {
            v[i - d1lo] = out.basis.at(r, static_cast<int>(i));
            if (v[i - d1lo] != 0) nzrow = true;
        }
        if (nzrow) rows.push_back(std::move(v));
    }
    out.deg1 = subgroup(t.fork.t1, IntMatrix::from_rows(rows, static_cast<int>(d1hi - d1lo)));
    Subgroup pker = kernel_of(map_sub(t.fork.p1, t.fork.p2));
    out.matches_fork = out.concentrated && subgroups_equal(out.deg1, pker);
    out.group = subgroup_as_group(out.deg1).group;
    return out;
}

// The comparison statement: within every cap, Ker(q1 - q2) is concentrated
// in degree 1 and equals Ker(p1 - p2); results must agree across caps d and
// d+1. Instability is an error, never silently accepted.
struct KernelComparison {
    bool holds = false;
    TruncatedKernel at_cap, at_next;
    Subgroup common;  // the kernel inside the fork's middle group
};

inline KernelComparison compare_truncated_kernels(const FpModule& n, const FpModule& m, int cap) {
    if (cap < 2) throw std::invalid_argument("compare_truncated_kernels: cap must be >= 2");
    KernelComparison out;
    out.at_cap = truncated_q_kernel(make_truncation(n, m, cap));
    out.at_next = truncated_q_kernel(make_truncation(n, m, cap + 1));
    bool stable = subgroups_equal(out.at_cap.deg1, out.at_next.deg1);
    if (!stable)
        throw std::logic_error("compare_truncated_kernels: kernel changed between caps " +
                               std::to_string(cap) + " and " + std::to_string(cap + 1));
    out.holds = out.at_cap.concentrated && out.at_cap.matches_fork && out.at_next.concentrated &&
                out.at_next.matches_fork;
    out.common = out.at_cap.deg1;
    return out;
}

// Extension value of the functor S |-> N (x)_R S at the module M, computed
// from the truncated defining kernel; `stable` records invariance under
// cap -> cap + 1 and must hold for the value to be used.
struct ExtensionValue {
    FgAbGroup group;
    GroupMap embedding;  // group -> fork.t1
    bool stable = false;
    bool matches_direct = false;  // equals the untruncated kernel of p1 - p2
    int cap = 0;
    TensorFork fork;
};

inline ExtensionValue extension_value_qc(const FpModule& n, const FpModule& m, int cap) {
    if (cap < 2) throw std::invalid_argument("extension_value_qc: cap must be >= 2");
    TruncatedKernel a = truncated_q_kernel(make_truncation(n, m, cap));
    TruncatedKernel b = truncated_q_kernel(make_truncation(n, m, cap + 1));
    ExtensionValue out;
    out.cap = cap;
    out.stable = a.concentrated && b.concentrated && subgroups_equal(a.deg1, b.deg1);
    auto emb = subgroup_as_group(a.deg1);
    out.group = std::move(emb.group);
    out.embedding = std::move(emb.inclusion);
    KernelExtension direct = kernel_extension(n, m);
    out.matches_direct = subgroups_equal(a.deg1, subgroup(direct.fork.t1, direct.inclusion.matrix));
    out.fork = direct.fork;
    return out;
}

// --- extension values on algebras -------------------------------------------

// For S an algebra, the extension of N (x)_R - evaluated at S carries a
// right S-module structure: s acts through the algebra-map lift of right
// multiplication. extension_right_action returns that action on the
// abstract extension value; extension_to_value composes the inclusion with
// the evaluation morphism of the word algebra and reports whether it is an
// isomorphism onto N (x)_R S.
struct ExtensionOnAlgebra {
    Algebra s;
    ActionModule s_mod;       // S as a left module over the base
    ExtensionValue value;     // extension value at S (degree-1 kernel)
    TensorGroup value_group;  // N (x)_R S
    GroupMap to_value;        // value.group -> value_group.group via the evaluation map
    bool value_iso = false;
};

inline ExtensionOnAlgebra extension_on_algebra(const FpModule& n, const Algebra& s, int cap) {
    ExtensionOnAlgebra out;
    out.s = s;
    out.s_mod = algebra_as_left_module(s);
    out.value = extension_value_qc(n, out.s_mod.module, cap);
    out.value_group = out.value.fork.t0;

    // evaluation on the degree-1 block: n (x) s (x) r |-> n (x) s.rho(r)
    const FpModule& sm = out.s_mod.module;
    const int rk = s.structure_map.source.rank();
    const int tc = out.value.fork.c0.comp.ambient();
    IntMatrix letter_to_und = sm.comp.from_comp;  // letters -> S-module underlying
    IntMatrix eval(tc * rk, out.value_group.group.ambient());
    for (int a = 0; a < tc; ++a)
        for (int l = 0; l < rk; ++l) {
            // lift the head, right-multiply the S factor by rho(e_l)
            IntVec lift = out.value.fork.c0.from_comp.row(a);
            RingElt rho = ring_map_apply(s.structure_map, s.structure_map.source.basis_elt(l));
            IntMatrix move = sm.comp.from_comp *
                             (out.s_mod.underlying_to_coords * s.ring.right_mult_matrix(rho) *
                              out.s_mod.coords_to_underlying) *
                             sm.comp.to_comp;
            const int kn = n.comp.comp.ambient();
            const int km = sm.comp.comp.ambient();
            IntVec img(kn * km);
            for (int p = 0; p < kn; ++p)
                for (int q = 0; q < km; ++q) {
                    if (lift[p * km + q] == 0) continue;
                    for (int q2 = 0; q2 < km; ++q2)
                        img[p * km + q2] += lift[p * km + q] * move.at(q, q2);
                }
            eval.set_row(a * rk + l, img);
        }
    GroupMap evmap = make_map(out.value.fork.t1, out.value_group.group, std::move(eval));
    out.to_value = compose(out.value.embedding, evmap);
    out.value_iso = map_is_isomorphism(out.to_value);
    return out;
}

// Action of an algebra element on the extension value, induced by the lift
// of right multiplication; checked against the transported action on
// N (x)_R S through the evaluation map.
inline GroupMap extension_right_action(const ExtensionOnAlgebra& ext, const RingElt& s_elt) {
    const FpModule& sm = ext.s_mod.module;
    const StructureRing& s = ext.s.ring;
    IntMatrix rm_und = ext.s_mod.underlying_to_coords * s.right_mult_matrix(s_elt) *
                       ext.s_mod.coords_to_underlying;
    IntMatrix rm_letters = sm.comp.from_comp * rm_und * sm.comp.to_comp;

    // on the degree-1 block: head transforms by id_N (x) (.s), trailing fixed
    const int kn = ext.value.fork.t0.n.comp.comp.ambient();
    const int km = sm.comp.comp.ambient();
    IntMatrix raw(kn * km, kn * km);
    for (int p = 0; p < kn; ++p)
        for (int q = 0; q < km; ++q)
            for (int q2 = 0; q2 < km; ++q2) raw.at(p * km + q, p * km + q2) = rm_letters.at(q, q2);
    const int rk = sm.ring.rank();
    IntMatrix head_act = ext.value.fork.c0.from_comp * raw * ext.value.fork.c0.to_comp;
    GroupMap t1_act = make_map(ext.value.fork.t1, ext.value.fork.t1,
                               kron(head_act, IntMatrix::identity(rk)));

    // restrict to the kernel: solve images back into the kernel basis
    const IntMatrix& basis = ext.value.embedding.matrix;
    IntMatrix act(basis.rows(), basis.rows());
    for (int r = 0; r < basis.rows(); ++r) {
        IntVec img = apply_row(basis.row(r), t1_act.matrix);
        auto c = solve_left(basis, img);
        if (!c) throw std::logic_error("extension_right_action: action leaves the kernel");
        act.set_row(r, *c);
    }
    GroupMap out = make_map(ext.value.group, ext.value.group, std::move(act));

    // must coincide with the right action on N (x)_R S through the value map
    IntMatrix rm_value_raw(kn * km, kn * km);
    for (int p = 0; p < kn; ++p)
        for (int q = 0; q < km; ++q)
            for (int q2 = 0; q2 < km; ++q2) rm_value_raw.at(p * km + q, p * km + q2) = rm_letters.at(q, q2);
    GroupMap value_act = make_map(ext.value_group.group, ext.value_group.group, std::move(rm_value_raw));
    if (!maps_equal(compose(out, ext.to_value), compose(ext.to_value, value_act)))
        throw std::logic_error("extension_right_action: disagrees with the transported action");
    return out;
}

// --- extension values of extended duals --------------------------------------
//
// For the functor A |-> Hom_R(M_F, A), the extension at a module Q is the
// kernel of f |-> (x-insertion) o f - f.x inside (+)_n Hom_R(M_F, T^n(Q)).
// Components of f in degree n land in degree 2n under the insertion but in
// degree n+1 under the append, which forces concentration in degree <= 1;
// the solver encodes this degree argument as exact per-coordinate
// constraints, and cap stability is the safety net.

inline WordAlgebra trunc_algebra_x(const AdjoinedModule& mx, int cap) {
    WordAlgebra w;
    w.ring = mx.module.ring;
    w.let = letters_with_x(mx);
    w.cap = cap;
    for (int n = 0; n <= cap; ++n) {
        w.space.dim.push_back(w.word_dim(n));
        w.space.orders.push_back({});
    }
    w.space.finish();
    return w;
}

struct DualExtensionValue {
    FgAbGroup group;           // abstract extension value
    bool stable = false;       // unchanged under cap -> cap + 1
    bool matches_hom = false;  // canonical map Hom_R(M_F, Q) -> value is an isomorphism
    HomRGroup hom_mq;          // Hom_R(M_F, Q)
    int cap = 0;
};

namespace detail {

struct DualExtensionSlice {
    std::vector<HomRGroup> homs;           // per degree 0..cap
    std::vector<ActionModule> components;  // per degree 1..cap (word modules)
    FgAbGroup concat;                      // direct sum of the hom groups
    IntMatrix kernel_basis;                // rows over the concat ambient
    std::vector<long long> offsets;
    bool concentrated = false;             // kernel lives in the degree-1 block
};

inline DualExtensionSlice dual_extension_slice(const FpModule& mf, const FpModule& q, int cap) {
    const StructureRing& r = mf.ring;
    WordAlgebra wq = trunc_algebra(r, q, cap);
    AdjoinedModule qx = adjoin_x(q);
    WordAlgebra wx = trunc_algebra_x(qx, 2 * cap);

    DualExtensionSlice sl;
    sl.homs.push_back(hom_R(mf, free_module(r, true, 1)));  // degree 0: Hom(M_F, R)
    for (int n = 1; n <= cap; ++n) {
        const long long wd = wq.word_dim(n);
        IntVec orders(wd);
        for (long long i = 0; i < wd; ++i) orders[i] = wq.order_of(n, static_cast<int>(i));
        std::vector<IntMatrix> act;
        for (int i = 0; i < r.rank(); ++i) {
            IntMatrix a(static_cast<int>(wd), static_cast<int>(wd));
            for (long long w = 0; w < wd; ++w) {
                auto digits = wq.unpack(n, w);
                IntVec moved = wq.let.act[i].row(digits[0]);
                for (int s = 0; s < wq.let.count(); ++s) {
                    if (moved[s] == 0) continue;
                    auto d2 = digits;
                    d2[0] = s;
                    a.at(static_cast<int>(w), static_cast<int>(wq.pack(d2))) += moved[s];
                }
            }
            act.push_back(std::move(a));
        }
        sl.components.push_back(module_from_action(r, true, orders, act));
        sl.homs.push_back(hom_R(mf, sl.components.back().module));
    }

    // concatenated coordinate space of the unknowns
    sl.offsets.assign(cap + 2, 0);
    for (int n = 0; n <= cap; ++n) sl.offsets[n + 1] = sl.offsets[n] + sl.homs[n].group.ambient();
    const long long total = sl.offsets[cap + 1];
    std::vector<IntVec> rels;
    for (int n = 0; n <= cap; ++n)
        for (int rr = 0; rr < sl.homs[n].group.rels().rows(); ++rr) {
            IntVec row(total);
            for (int c = 0; c < sl.homs[n].group.ambient(); ++c)
                row[sl.offsets[n] + c] = sl.homs[n].group.rels().at(rr, c);
            rels.push_back(std::move(row));
        }
    sl.concat = FgAbGroup::from_presentation(static_cast<int>(total),
                                             IntMatrix::from_rows(rels, static_cast<int>(total)));

    // conditions: for every module generator g, (insert-x) o f - f.x must
    // vanish; one congruence per (g, target degree, target word)
    struct CKey {
        int gen;
        int deg;
        long long word;
        bool operator<(const CKey& o) const {
            if (gen != o.gen) return gen < o.gen;
            if (deg != o.deg) return deg < o.deg;
            return word < o.word;
        }
    };
    std::map<CKey, std::vector<std::pair<long long, Int>>> conds;
    for (int g = 0; g < mf.gens; ++g) {
        IntVec gen = module_generator(mf, g);
        for (int n = 0; n <= cap; ++n)
            for (int b = 0; b < sl.homs[n].group.ambient(); ++b) {
                IntVec val_und = apply_row(gen, hom_R_lift(sl.homs[n], basis_vec(sl.homs[n].group.ambient(), b)));
                IntVec word = (n == 0) ? val_und
                                       : apply_row(val_und, sl.components[n - 1].underlying_to_coords);
                GradedElt img;
                for (long long w = 0; w < static_cast<long long>(word.size()); ++w) {
                    if (word[w] == 0) continue;
                    // the degree-n source word embeds with unchanged digits:
                    // original letters form the leading block of the adjoined ones
                    auto digits = wq.unpack(n, w);
                    long long we = wx.pack(digits);
                    for (auto& [key, c] : hx_image(wx, n, we)) graded_add(img, key.first, key.second, word[w] * c);
                    for (auto& [key, c] : append_x_image(wx, n, we))
                        graded_add(img, key.first, key.second, -word[w] * c);
                }
                for (auto& [key, c] : img)
                    conds[CKey{g, key.first, key.second}].push_back({sl.offsets[n] + b, c});
            }
    }
    LatticeRestrictor lr(static_cast<int>(total));
    for (auto& [key, col] : conds) {
        Int ord = wx.order_of(key.deg, key.word);
        if (ord == 1) continue;
        std::map<long long, Int> merged;
        for (auto& [i, c] : col) merged[i] += c;
        std::vector<std::pair<int, Int>> sparse;
        for (auto& [i, c] : merged) {
            Int cc = mod_order(c, ord);
            if (cc != 0) sparse.push_back({static_cast<int>(i), cc});
        }
        if (!sparse.empty()) lr.restrict_sparse(sparse, ord);
    }
    sl.kernel_basis = lr.basis_with(sl.concat.rels());

    sl.concentrated = true;
    for (int rr = 0; rr < sl.kernel_basis.rows() && sl.concentrated; ++rr) {
        IntVec row = sl.kernel_basis.row(rr);
        IntVec masked = row;
        for (long long c = sl.offsets[1]; c < sl.offsets[2]; ++c) masked[c] = 0;
        if (!sl.concat.is_zero_elt(masked)) sl.concentrated = false;
    }
    return sl;
}

}  // namespace detail

// Degree-1 part of a slice's kernel as a subgroup of Hom_R(M_F, T^1(Q)).
inline Subgroup dual_slice_deg1(const detail::DualExtensionSlice& sl) {
    std::vector<IntVec> rows;
    const long long lo = sl.offsets[1], hi = sl.offsets[2];
    for (int r = 0; r < sl.kernel_basis.rows(); ++r) {
        IntVec v(static_cast<std::size_t>(hi - lo));
        bool nz = false;
        for (long long c = lo; c < hi; ++c) {
            v[c - lo] = sl.kernel_basis.at(r, static_cast<int>(c));
            if (v[c - lo] != 0) nz = true;
        }
        if (nz) rows.push_back(std::move(v));
    }
    return subgroup(sl.homs[1].group, IntMatrix::from_rows(rows, static_cast<int>(hi - lo)));
}

inline DualExtensionValue extension_value_dual(const FpModule& mf, const FpModule& q, int cap) {
    if (cap < 2) throw std::invalid_argument("extension_value_dual: cap must be >= 2");
    auto a = detail::dual_extension_slice(mf, q, cap);
    auto b = detail::dual_extension_slice(mf, q, cap + 1);

    DualExtensionValue out;
    out.cap = cap;
    Subgroup a1 = dual_slice_deg1(a), b1 = dual_slice_deg1(b);
    out.stable = a.concentrated && b.concentrated && subgroups_equal(a1, b1);
    auto emb = subgroup_as_group(a1);
    out.group = emb.group;
    out.hom_mq = hom_R(mf, q);

    // canonical map Hom_R(M_F, Q) -> value: postcompose with q |-> q (x) 1
    const StructureRing& r = mf.ring;
    const ActionModule& comp1 = a.components[0];
    // Q underlying -> degree-1 words -> component-1 module underlying
    const int km = q.comp.comp.ambient();
    const int rk = r.rank();
    IntMatrix to_words(km, km * rk);
    for (int j = 0; j < km; ++j)
        for (int l = 0; l < rk; ++l) to_words.at(j, j * rk + l) = r.unit()[l];
    IntMatrix iota = q.comp.to_comp * to_words * comp1.coords_to_underlying;
    IntMatrix canon_rows(out.hom_mq.group.ambient(), out.group.ambient());
    bool ok = true;
    for (int bidx = 0; bidx < out.hom_mq.group.ambient(); ++bidx) {
        IntMatrix f = hom_R_lift(out.hom_mq, basis_vec(out.hom_mq.group.ambient(), bidx)) * iota;
        auto hc = hom_R_coords_of(a.homs[1], f);
        if (!hc) { ok = false; break; }
        auto vc = solve_left(emb.inclusion.matrix, *hc);
        if (!vc) { ok = false; break; }
        canon_rows.set_row(bidx, *vc);
    }
    if (ok) {
        GroupMap canon = make_map(out.hom_mq.group, out.group, std::move(canon_rows));
        out.matches_hom = map_is_isomorphism(canon);
    }
    return out;
}

}  // namespace modref
