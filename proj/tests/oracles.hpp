#pragma once

// Independent oracles used by the test suites. Everything here recomputes
// expected values by routes that do not share code with the library
// implementations they check (permutation-expansion determinants, gcd's of
// minors, prime-power bookkeeping, literal enumeration).

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "modref/intmatrix.hpp"

namespace oracles {

using modref::Int;
using modref::IntMatrix;
using modref::IntVec;

// Determinant by permutation expansion; fine up to ~6x6.
inline Int perm_det(const IntMatrix& a) {
    int n = a.rows();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    Int total = 0;
    do {
        int inv = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inv;
        Int term = (inv % 2 == 0) ? 1 : -1;
        for (int i = 0; i < n; ++i) term *= a.at(i, perm[i]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// gcd of all k x k minors (0 if there are none or all vanish).
inline Int gcd_of_minors(const IntMatrix& a, int k) {
    std::vector<int> ri(k), ci(k);
    Int g = 0;
    std::vector<int> rsel, csel;

    // enumerate k-subsets of rows and of columns
    std::vector<std::vector<int>> rsets, csets;
    std::vector<int> cur;
    auto gen = [&](int n, auto&& self, std::vector<std::vector<int>>& out, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(n, self, out, i + 1);
            cur.pop_back();
        }
    };
    gen(a.rows(), gen, rsets, 0);
    gen(a.cols(), gen, csets, 0);
    for (const auto& rs : rsets)
        for (const auto& cs : csets) {
            IntMatrix sub(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) sub.at(i, j) = a.at(rs[i], cs[j]);
            g = modref::gcd(g, perm_det(sub));
        }
    return g;
}

// Invariant factors of A as expected from the gcd-of-minors formula:
// d_1 ... d_k = gcd of all k x k minors.
inline std::vector<Int> invariant_factors_by_minors(const IntMatrix& a) {
    int n = std::min(a.rows(), a.cols());
    std::vector<Int> out;
    Int prev = 1;
    for (int k = 1; k <= n; ++k) {
        Int g = gcd_of_minors(a, k);
        if (g == 0) break;  // rank reached; remaining factors are 0
        out.push_back(g / prev);
        prev = g;
    }
    return out;
}

// Invariant-factor chain of a direct sum of cyclic groups given by arbitrary
// orders (0 = infinite), computed by per-prime exponent bookkeeping.
inline std::vector<Int> chain_of_cyclics(std::vector<Int> orders) {
    int free_rank = 0;
    std::map<Int, std::vector<int>> exps;  // prime -> exponents, one per cyclic factor
    for (Int d : orders) {
        if (d == 0) { ++free_rank; continue; }
        if (d < 0) d = -d;
        if (d == 1) continue;
        Int p = 2;
        while (d > 1) {
            int e = 0;
            while (d % p == 0) { d /= p; ++e; }
            if (e > 0) exps[p].push_back(e);
            p = (p == 2) ? Int(3) : Int(p + 2);
            if (p * p > d && d > 1) { exps[d].push_back(1); break; }
        }
    }
    std::size_t slots = 0;
    for (auto& [p, v] : exps) {
        std::sort(v.rbegin(), v.rend());
        slots = std::max(slots, v.size());
    }
    std::vector<Int> chain(slots, Int(1));
    for (auto& [p, v] : exps)
        for (std::size_t i = 0; i < v.size(); ++i) {
            Int pk = 1;
            for (int e = 0; e < v[i]; ++e) pk *= p;
            chain[i] *= pk;
        }
    std::reverse(chain.begin(), chain.end());  // ascending divisibility
    std::vector<Int> out;
    for (const Int& d : chain)
        if (d > 1) out.push_back(d);
    for (int i = 0; i < free_rank; ++i) out.push_back(0);
    return out;
}

// Hom(Z/a, Z/b) = Z/gcd with the conventions of infinite cyclic groups:
// Hom(Z, Z/b) = Z/b, Hom(Z/a, Z) = 0 for a > 0, Hom(Z, Z) = Z.
inline Int hom_cyclic_order(const Int& a, const Int& b) {
    if (a == 0) return b;        // free source: target itself
    if (b == 0) return 1;        // torsion into free: trivial
    return modref::gcd(a, b);
}

// Z/a (x) Z/b = Z/gcd(a,b) with gcd(0,b) = b.
inline Int tensor_cyclic_order(const Int& a, const Int& b) {
    if (a == 0) return b;
    if (b == 0) return a;
    return modref::gcd(a, b);
}

inline std::vector<Int> hom_factors(const std::vector<Int>& as, const std::vector<Int>& bs) {
    std::vector<Int> orders;
    for (const Int& a : as)
        for (const Int& b : bs) orders.push_back(hom_cyclic_order(a, b));
    return chain_of_cyclics(orders);
}

inline std::vector<Int> tensor_factors(const std::vector<Int>& as, const std::vector<Int>& bs) {
    std::vector<Int> orders;
    for (const Int& a : as)
        for (const Int& b : bs) orders.push_back(tensor_cyclic_order(a, b));
    return chain_of_cyclics(orders);
}

inline IntMatrix random_matrix(std::mt19937_64& rng, int rows, int cols, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
    return m;
}

}  // namespace oracles
