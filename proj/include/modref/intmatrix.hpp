#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>

#include "modref/numeric.hpp"

namespace modref {

// Dense matrix over Z with exact entries, row-major. Empty matrices (0 rows
// or 0 columns) are legal and stand for zero maps between trivial spaces.
//
// Convention used throughout the library: elements are row vectors and maps
// act on the right, x |-> x*A, so composition of maps is plain matrix
// multiplication in application order.
class IntMatrix {
  public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("IntMatrix: negative dimension");
    }
    IntMatrix(int rows, int cols, std::vector<Int> entries)
        : rows_(rows), cols_(cols), e_(std::move(entries)) {
        if (e_.size() != static_cast<std::size_t>(rows) * cols)
            throw std::invalid_argument("IntMatrix: entry count mismatch");
    }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static IntMatrix zero(int r, int c) { return IntMatrix(r, c); }

    static IntMatrix from_rows(const std::vector<IntVec>& rows, int cols) {
        IntMatrix m(static_cast<int>(rows.size()), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (static_cast<int>(rows[i].size()) != cols)
                throw std::invalid_argument("IntMatrix::from_rows: ragged row");
            for (int j = 0; j < cols; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Int& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

    IntVec row(int i) const {
        IntVec r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }
    void set_row(int i, const IntVec& v) {
        for (int j = 0; j < cols_; ++j) at(i, j) = v[j];
    }

    bool is_zero() const {
        for (const Int& x : e_)
            if (x != 0) return false;
        return true;
    }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch in product");
        IntMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Int& aik = a.at(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    const Int& bkj = b.at(k, j);
                    if (bkj != 0) c.at(i, j) += aik * bkj;
                }
            }
        return c;
    }

    friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("IntMatrix: dimension mismatch in sum");
        IntMatrix c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.e_.size(); ++i) c.e_[i] = a.e_[i] + b.e_[i];
        return c;
    }
    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("IntMatrix: dimension mismatch in difference");
        IntMatrix c(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.e_.size(); ++i) c.e_[i] = a.e_[i] - b.e_[i];
        return c;
    }
    IntMatrix operator-() const {
        IntMatrix c(rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) c.e_[i] = -e_[i];
        return c;
    }

  private:
    int rows_, cols_;
    std::vector<Int> e_;
};

inline IntVec apply_row(const IntVec& x, const IntMatrix& a) {
    if (static_cast<int>(x.size()) != a.rows()) throw std::invalid_argument("apply_row: dimension mismatch");
    IntVec y(a.cols());
    for (int i = 0; i < a.rows(); ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < a.cols(); ++j) y[j] += x[i] * a.at(i, j);
    }
    return y;
}

inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
    IntMatrix m(a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, j) = b.at(i, j);
    return m;
}

inline IntMatrix kron(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (a.at(i, j) == 0) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    m.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
    return m;
}

inline IntVec kron_vec(const IntVec& x, const IntVec& y) {
    IntVec r(x.size() * y.size());
    std::size_t p = 0;
    for (const Int& a : x)
        for (const Int& b : y) r[p++] = a * b;
    return r;
}

// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("det: square matrix required");
    int n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m.at(i, j) = t;
            }
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

struct HnfResult {
    IntMatrix H;  // row Hermite normal form
    IntMatrix U;  // unimodular, H = U * A
};

// Row Hermite normal form: row echelon, positive pivots, entries above each
// pivot reduced into [0, pivot). Pivot choice: smallest nonzero magnitude,
// lowest row index on ties, so the reduction is deterministic.
inline HnfResult hnf(const IntMatrix& a) {
    IntMatrix h = a;
    IntMatrix u = IntMatrix::identity(a.rows());
    int r = 0;
    for (int c = 0; c < h.cols() && r < h.rows(); ++c) {
        // Reduce the column below r to a single nonzero entry.
        for (;;) {
            int piv = -1;
            for (int i = r; i < h.rows(); ++i) {
                if (h.at(i, c) == 0) continue;
                if (piv < 0 || abs_int(h.at(i, c)) < abs_int(h.at(piv, c))) piv = i;
            }
            if (piv < 0) break;
            bool others = false;
            for (int i = r; i < h.rows(); ++i) {
                if (i == piv || h.at(i, c) == 0) continue;
                others = true;
                Int q = ndiv(h.at(i, c), h.at(piv, c));
                if (q != 0)
                    for (int j = 0; j < h.cols(); ++j) h.at(i, j) -= q * h.at(piv, j);
                for (int j = 0; j < u.cols(); ++j) u.at(i, j) -= q * u.at(piv, j);
            }
            if (!others) {
                if (piv != r) {
                    for (int j = 0; j < h.cols(); ++j) std::swap(h.at(piv, j), h.at(r, j));
                    for (int j = 0; j < u.cols(); ++j) std::swap(u.at(piv, j), u.at(r, j));
                }
                break;
            }
        }
        if (r < h.rows() && h.at(r, c) != 0) {
            if (h.at(r, c) < 0) {
                for (int j = 0; j < h.cols(); ++j) h.at(r, j) = -h.at(r, j);
                for (int j = 0; j < u.cols(); ++j) u.at(r, j) = -u.at(r, j);
            }
            for (int i = 0; i < r; ++i) {
                Int q = fdiv(h.at(i, c), h.at(r, c));
                if (q == 0) continue;
                for (int j = 0; j < h.cols(); ++j) h.at(i, j) -= q * h.at(r, j);
                for (int j = 0; j < u.cols(); ++j) u.at(i, j) -= q * u.at(r, j);
            }
            ++r;
        }
    }
    return {std::move(h), std::move(u)};
}

// HNF with zero rows dropped: the canonical form of the row lattice.
inline IntMatrix hnf_canonical(const IntMatrix& a) {
    IntMatrix h = hnf(a).H;
    int nz = 0;
    for (int i = 0; i < h.rows(); ++i) {
        bool z = true;
        for (int j = 0; j < h.cols(); ++j)
            if (h.at(i, j) != 0) { z = false; break; }
        if (!z) nz = i + 1;
    }
    IntMatrix out(nz, h.cols());
    for (int i = 0; i < nz; ++i)
        for (int j = 0; j < h.cols(); ++j) out.at(i, j) = h.at(i, j);
    return out;
}

struct SnfResult {
    IntMatrix D;  // diagonal, d1 | d2 | ...
    IntMatrix U;  // unimodular row transform
    IntMatrix V;  // unimodular column transform, D = U * A * V
};

// Smith normal form. Pivot strategy: smallest nonzero magnitude over the
// remaining submatrix, lexicographically lowest index on ties; rows/columns
// are reduced by nearest-quotient steps, which bounds entry growth.
inline SnfResult snf(const IntMatrix& a) {
    IntMatrix d = a;
    IntMatrix u = IntMatrix::identity(a.rows());
    IntMatrix v = IntMatrix::identity(a.cols());
    const int n = std::min(d.rows(), d.cols());

    auto row_sub = [&](int i, int k, const Int& q) {  // row_i -= q * row_k
        for (int j = 0; j < d.cols(); ++j) d.at(i, j) -= q * d.at(k, j);
        for (int j = 0; j < u.cols(); ++j) u.at(i, j) -= q * u.at(k, j);
    };
    auto col_sub = [&](int j, int k, const Int& q) {  // col_j -= q * col_k
        for (int i = 0; i < d.rows(); ++i) d.at(i, j) -= q * d.at(i, k);
        for (int i = 0; i < v.rows(); ++i) v.at(i, j) -= q * v.at(i, k);
    };
    auto row_swap = [&](int i, int k) {
        if (i == k) return;
        for (int j = 0; j < d.cols(); ++j) std::swap(d.at(i, j), d.at(k, j));
        for (int j = 0; j < u.cols(); ++j) std::swap(u.at(i, j), u.at(k, j));
    };
    auto col_swap = [&](int j, int k) {
        if (j == k) return;
        for (int i = 0; i < d.rows(); ++i) std::swap(d.at(i, j), d.at(i, k));
        for (int i = 0; i < v.rows(); ++i) std::swap(v.at(i, j), v.at(i, k));
    };

    for (int t = 0; t < n; ++t) {
        for (;;) {
            int pi = -1, pj = -1;
            for (int i = t; i < d.rows(); ++i)
                for (int j = t; j < d.cols(); ++j) {
                    if (d.at(i, j) == 0) continue;
                    if (pi < 0 || abs_int(d.at(i, j)) < abs_int(d.at(pi, pj))) { pi = i; pj = j; }
                }
            if (pi < 0) { pi = -1; break; }
            row_swap(t, pi);
            col_swap(t, pj);

            bool dirty = false;
            for (int i = t + 1; i < d.rows(); ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = ndiv(d.at(i, t), d.at(t, t));
                row_sub(i, t, q);
                if (d.at(i, t) != 0) dirty = true;
            }
            if (dirty) continue;
            for (int j = t + 1; j < d.cols(); ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = ndiv(d.at(t, j), d.at(t, t));
                col_sub(j, t, q);
                if (d.at(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // Pivot must divide every remaining entry for the chain d1 | d2 | ...
            int bi = -1;
            for (int i = t + 1; i < d.rows() && bi < 0; ++i)
                for (int j = t + 1; j < d.cols(); ++j)
                    if (d.at(i, j) % d.at(t, t) != 0) { bi = i; break; }
            if (bi < 0) break;
            row_sub(t, bi, Int(-1));  // fold the offending row into row t
        }
        if (d.at(t, t) < 0) {
            for (int j = 0; j < d.cols(); ++j) d.at(t, j) = -d.at(t, j);
            for (int j = 0; j < u.cols(); ++j) u.at(t, j) = -u.at(t, j);
        }
        if (d.at(t, t) == 0) break;  // remaining submatrix is zero
    }
    return {std::move(d), std::move(u), std::move(v)};
}

// One integer solution of x * A = b, if any.
inline std::optional<IntVec> solve_left(const IntMatrix& a, const IntVec& b) {
    if (static_cast<int>(b.size()) != a.cols()) throw std::invalid_argument("solve_left: size mismatch");
    HnfResult f = hnf(a);
    IntVec res = b;
    IntVec z(a.rows());
    int col = 0;
    for (int i = 0; i < f.H.rows(); ++i) {
        int piv = -1;
        for (int j = col; j < f.H.cols(); ++j)
            if (f.H.at(i, j) != 0) { piv = j; break; }
        if (piv < 0) break;
        col = piv;
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), res[piv].get_mpz_t(), f.H.at(i, piv).get_mpz_t());
        if (r != 0) {
            // Entries left of the pivot are zero in echelon form, so res[piv]
            // can only be produced by this row; non-divisibility means no solution.
            return std::nullopt;
        }
        if (q != 0)
            for (int j = 0; j < f.H.cols(); ++j) res[j] -= q * f.H.at(i, j);
        z[i] = q;
    }
    if (!vec_is_zero(res)) return std::nullopt;
    return apply_row(z, f.U);
}

// Solve X * A = B row by row.
inline std::optional<IntMatrix> solve_left(const IntMatrix& a, const IntMatrix& b) {
    if (b.cols() != a.cols()) throw std::invalid_argument("solve_left: size mismatch");
    IntMatrix x(b.rows(), a.rows());
    for (int i = 0; i < b.rows(); ++i) {
        auto r = solve_left(a, b.row(i));
        if (!r) return std::nullopt;
        x.set_row(i, *r);
    }
    return x;
}

// Basis of { x : x * A = 0 }, as rows.
inline IntMatrix left_kernel(const IntMatrix& a) {
    HnfResult f = hnf(a);
    std::vector<IntVec> rows;
    for (int i = 0; i < f.H.rows(); ++i) {
        bool z = true;
        for (int j = 0; j < f.H.cols(); ++j)
            if (f.H.at(i, j) != 0) { z = false; break; }
        if (z) rows.push_back(f.U.row(i));
    }
    return IntMatrix::from_rows(rows, a.rows());
}

// Maintains a basis of a sublattice of Z^k and intersects it with congruence
// conditions { x : x . col == 0 (mod m) } one at a time (m == 0 means the
// exact condition x . col == 0). This is the workhorse behind kernels of
// maps into groups in diagonal form: one call per touched target coordinate.
class LatticeRestrictor {
  public:
    explicit LatticeRestrictor(int k) : k_(k), basis_(IntMatrix::identity(k)) {}
    LatticeRestrictor(int k, IntMatrix seed) : k_(k), basis_(std::move(seed)) {
        if (basis_.cols() != k_) throw std::invalid_argument("LatticeRestrictor: seed width mismatch");
    }

    int dim() const { return basis_.rows(); }
    const IntMatrix& basis() const { return basis_; }

    void restrict(const IntVec& col, const Int& m) {
        std::vector<std::pair<int, Int>> sparse;
        for (int j = 0; j < static_cast<int>(col.size()); ++j)
            if (col[j] != 0) sparse.push_back({j, col[j]});
        restrict_sparse(sparse, m);
    }

    void restrict_sparse(const std::vector<std::pair<int, Int>>& col, const Int& m) {
        const int q = basis_.rows();
        IntVec g(q);
        for (const auto& [j, c] : col) {
            if (j < 0 || j >= k_) throw std::invalid_argument("restrict: index out of range");
            for (int i = 0; i < q; ++i)
                if (basis_.at(i, j) != 0) g[i] += basis_.at(i, j) * c;
        }
        for (int i = 0; i < q; ++i) g[i] = mod_order(g[i], m);
        // Euclidean chain across rows: leave a single nonzero value.
        int p = -1;
        for (;;) {
            p = -1;
            int live = 0;
            for (int i = 0; i < q; ++i) {
                if (g[i] == 0) continue;
                ++live;
                if (p < 0 || abs_int(g[i]) < abs_int(g[p])) p = i;
            }
            if (live <= 1) break;
            for (int i = 0; i < q; ++i) {
                if (i == p || g[i] == 0) continue;
                Int qq = ndiv(g[i], g[p]);
                if (qq == 0) continue;
                g[i] -= qq * g[p];
                for (int j = 0; j < k_; ++j) basis_.at(i, j) -= qq * basis_.at(p, j);
            }
        }
        if (p < 0 || g[p] == 0) return;  // condition already satisfied
        if (m == 0) {
            drop_row(p);
        } else {
            Int scale = m / gcd(g[p], m);
            if (scale != 1)
                for (int j = 0; j < k_; ++j) basis_.at(p, j) *= scale;
        }
        maybe_normalize();
    }

    // Final basis including an extra lattice known to satisfy all conditions
    // (typically the relation lattice of the source group).
    IntMatrix basis_with(const IntMatrix& extra) const {
        return hnf_canonical(vstack(basis_, extra));
    }

  private:
    void drop_row(int p) {
        IntMatrix b(basis_.rows() - 1, k_);
        int r = 0;
        for (int i = 0; i < basis_.rows(); ++i) {
            if (i == p) continue;
            for (int j = 0; j < k_; ++j) b.at(r, j) = basis_.at(i, j);
            ++r;
        }
        basis_ = std::move(b);
    }

    void maybe_normalize() {
        if (++ops_ % 64 != 0) return;
        std::size_t worst = 0;
        for (int i = 0; i < basis_.rows(); ++i)
            for (int j = 0; j < k_; ++j) worst = std::max(worst, mpz_sizeinbase(basis_.at(i, j).get_mpz_t(), 2));
        if (worst > 512) basis_ = hnf_canonical(basis_);
    }

    int k_;
    IntMatrix basis_;
    unsigned ops_ = 0;
};

// Solve x * A == b where column j is read modulo orders[j] (0 = exact).
inline std::optional<IntVec> solve_congruences(const IntMatrix& a, const IntVec& b, const IntVec& orders) {
    if (static_cast<int>(orders.size()) != a.cols()) throw std::invalid_argument("solve_congruences: size mismatch");
    std::vector<IntVec> slack;
    for (int j = 0; j < a.cols(); ++j) {
        if (orders[j] == 0) continue;
        IntVec row(a.cols());
        row[j] = orders[j];
        slack.push_back(row);
    }
    IntMatrix full = vstack(a, IntMatrix::from_rows(slack, a.cols()));
    auto sol = solve_left(full, b);
    if (!sol) return std::nullopt;
    IntVec x(a.rows());
    for (int i = 0; i < a.rows(); ++i) x[i] = (*sol)[i];
    return x;
}

}  // namespace modref
