#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qtorus/integer_matrix.hpp"

// Exact integer lattice algorithms: Hermite and Smith normal forms with
// unimodular transforms, kernels, membership, and canonical sublattice
// bases.  Conventions:
//   * HNF is row-style and upper echelon: nonzero rows first, pivots
//     positive and strictly right of the pivot above, entries above each
//     pivot reduced into [0, pivot).
//   * A Sublattice is stored by its HNF basis with zero rows dropped, so
//     subgroup equality is basis identity.
namespace qtorus {

struct HNFResult {
    IntegerMatrix H;  // U * A = H
    IntegerMatrix U;  // unimodular
    std::size_t rank = 0;
};

struct SNFResult {
    IntegerMatrix U;  // U * A * V = D
    IntegerMatrix D;  // diagonal, d_1 | d_2 | ... | d_r > 0
    IntegerMatrix V;
};

inline HNFResult hnf(const IntegerMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    HNFResult res{A, IntegerMatrix::identity(m), 0};
    IntegerMatrix& H = res.H;
    IntegerMatrix& U = res.U;

    std::size_t r = 0;  // next pivot row
    for (std::size_t j = 0; j < n && r < m; ++j) {
        // Euclid on column j below row r until one nonzero entry remains.
        for (;;) {
            std::size_t piv = m;
            for (std::size_t i = r; i < m; ++i) {
                if (H(i, j) == 0) continue;
                if (piv == m || mpz_cmpabs(H(i, j).get_mpz_t(), H(piv, j).get_mpz_t()) < 0)
                    piv = i;
            }
            if (piv == m) break;  // column clear
            if (piv != r) { H.swap_rows(piv, r); U.swap_rows(piv, r); }
            bool reduced = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (H(i, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), H(i, j).get_mpz_t(), H(r, j).get_mpz_t());
                H.submul_row(i, r, q);
                U.submul_row(i, r, q);
                if (H(i, j) != 0) reduced = false;
            }
            if (reduced) break;
        }
        if (H(r, j) == 0) continue;
        if (H(r, j) < 0) { H.negate_row(r); U.negate_row(r); }
        // reduce entries above the pivot into [0, pivot)
        for (std::size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), H(i, j).get_mpz_t(), H(r, j).get_mpz_t());
            H.submul_row(i, r, q);
            U.submul_row(i, r, q);
        }
        ++r;
    }
    res.rank = r;
    return res;
}

// Rational rank; HNF pivot count, which equals the count of nonzero
// diagonal entries of snf(A).
inline std::size_t rank(const IntegerMatrix& A) { return hnf(A).rank; }

inline SNFResult snf(const IntegerMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    SNFResult res{IntegerMatrix::identity(m), A, IntegerMatrix::identity(n)};
    IntegerMatrix& U = res.U;
    IntegerMatrix& D = res.D;
    IntegerMatrix& V = res.V;

    const std::size_t bound = m < n ? m : n;
    bool done = false;
    for (std::size_t t = 0; t < bound && !done; ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing submatrix into (t, t)
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    if (D(i, j) == 0) continue;
                    if (pi == m || mpz_cmpabs(D(i, j).get_mpz_t(), D(pi, pj).get_mpz_t()) < 0) {
                        pi = i; pj = j;
                    }
                }
            if (pi == m) { done = true; break; }  // trailing submatrix is zero
            if (pi != t) { D.swap_rows(pi, t); U.swap_rows(pi, t); }
            if (pj != t) { D.swap_cols(pj, t); V.swap_cols(pj, t); }
            if (D(t, t) < 0) { D.negate_row(t); U.negate_row(t); }

            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (D(i, t) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
                D.submul_row(i, t, q);
                U.submul_row(i, t, q);
                if (D(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (D(t, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
                D.submul_col(j, t, q);
                V.submul_col(j, t, q);
                if (D(t, j) != 0) dirty = true;
            }
            if (dirty) continue;

            // pivot divides the rest of the submatrix, or absorb a witness row
            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i)
                for (std::size_t j = t + 1; j < n && divides; ++j)
                    if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
                        Int minus_one(-1);
                        D.submul_row(t, i, minus_one);  // row t += row i
                        U.submul_row(t, i, minus_one);
                        divides = false;
                    }
            if (divides) break;
        }
    }
    return res;
}

// Canonical basis of a subgroup of Z^ambient: the HNF of the generating
// rows with zero rows dropped.  Two sublattices are equal iff the stored
// bases are identical.
class Sublattice {
  public:
    Sublattice() = default;

    static Sublattice zero(std::size_t ambient) {
        Sublattice s;
        s.ambient_ = ambient;
        s.basis_ = IntegerMatrix(0, ambient);
        return s;
    }

    static Sublattice full(std::size_t ambient) {
        Sublattice s;
        s.ambient_ = ambient;
        s.basis_ = IntegerMatrix::identity(ambient);
        return s;
    }

    static Sublattice from_generators(const IntegerMatrix& gens) {
        HNFResult h = hnf(gens);
        Sublattice s;
        s.ambient_ = gens.cols();
        s.basis_ = IntegerMatrix(h.rank, gens.cols());
        for (std::size_t i = 0; i < h.rank; ++i)
            for (std::size_t j = 0; j < gens.cols(); ++j) s.basis_(i, j) = h.H(i, j);
        return s;
    }

    std::size_t ambient_rank() const noexcept { return ambient_; }
    std::size_t rank() const noexcept { return basis_.rows(); }
    const IntegerMatrix& basis() const noexcept { return basis_; }

    friend bool operator==(const Sublattice& a, const Sublattice& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Sublattice& a, const Sublattice& b) { return !(a == b); }
    friend bool operator<(const Sublattice& a, const Sublattice& b) {
        if (a.ambient_ != b.ambient_) return a.ambient_ < b.ambient_;
        return a.basis_ < b.basis_;
    }

  private:
    std::size_t ambient_ = 0;
    IntegerMatrix basis_;
};

// Full integer kernel {v : A.v = 0}, always saturated.  The rows of the
// HNF transform of A^T aligned with zero rows of H form a lattice basis
// of the kernel: v.A^T = 0 iff v is an integer combination of them.
inline Sublattice kernel(const IntegerMatrix& A) {
    HNFResult h = hnf(A.transpose());
    const std::size_t c = A.cols();
    IntegerMatrix gens(c - h.rank, c);
    for (std::size_t i = h.rank; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) gens(i - h.rank, j) = h.U(i, j);
    return Sublattice::from_generators(gens);
}

// true iff rowspan(A) and rowspan(B) meet only in 0; both live in the
// same ambient exponent space.
inline bool intersect_trivially(const IntegerMatrix& A, const IntegerMatrix& B) {
    if (A.cols() != B.cols())
        fail(ErrorKind::length_mismatch,
             "intersect_trivially needs matching ambient dimensions");
    return rank(stack_rows(A, B)) == rank(A) + rank(B);
}

// Back-substitution against the HNF basis.
inline bool member(const std::vector<Int>& v, const Sublattice& L) {
    if (v.size() != L.ambient_rank())
        fail(ErrorKind::length_mismatch, "vector length does not match ambient rank");
    std::vector<Int> w = v;
    const IntegerMatrix& B = L.basis();
    for (std::size_t i = 0; i < B.rows(); ++i) {
        std::size_t p = 0;
        while (p < B.cols() && B(i, p) == 0) ++p;
        if (p == B.cols()) continue;
        if (w[p] == 0) continue;
        if (!mpz_divisible_p(w[p].get_mpz_t(), B(i, p).get_mpz_t())) return false;
        Int c;
        mpz_divexact(c.get_mpz_t(), w[p].get_mpz_t(), B(i, p).get_mpz_t());
        for (std::size_t j = p; j < B.cols(); ++j) w[j] -= c * B(i, j);
    }
    for (const Int& x : w)
        if (x != 0) return false;
    return true;
}

// Smallest saturated sublattice containing L (the rational span of L
// intersected with the integer lattice), obtained as the kernel of the
// kernel of L's basis.
inline Sublattice saturate(const Sublattice& L) {
    if (L.rank() == 0) return L;
    Sublattice orth = kernel(L.basis());
    return kernel(orth.basis());
}

}  // namespace qtorus
