#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace modref {

// Exact arbitrary-precision integer. All arithmetic in this library is exact;
// fixed-width integers are never used for matrix or group data.
using Int = mpz_class;

using IntVec = std::vector<Int>;

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int abs_int(const Int& a) {
    Int r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

// Floor division, matching the convention used for normal-form reduction.
inline Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Quotient rounded to nearest; keeps entries small during elimination.
// Floor division leaves a remainder with the divisor's sign, so moving to
// the nearer multiple is always one step up: a - (q+1)b = r - b.
inline Int ndiv(const Int& a, const Int& b) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (2 * abs_int(r) > abs_int(b)) q += 1;
    return q;
}

// x mod m in [0, m) for m > 0; x unchanged for m == 0 (infinite order).
inline Int mod_order(const Int& x, const Int& m) {
    if (m == 0) return x;
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

// gcd(a, m) treating m == 0 as "no modulus": returns |a|.
inline Int gcd_mod(const Int& a, const Int& m) {
    if (m == 0) return abs_int(a);
    return gcd(a, m);
}

inline std::string to_string(const Int& a) { return a.get_str(); }

inline IntVec vec_add(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline IntVec vec_sub(const IntVec& a, const IntVec& b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline IntVec vec_scale(const Int& c, const IntVec& a) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline bool vec_is_zero(const IntVec& a) {
    for (const Int& x : a)
        if (x != 0) return false;
    return true;
}

}  // namespace modref
