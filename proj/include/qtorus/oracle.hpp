#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "qtorus/algebra.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/integer_matrix.hpp"
#include "qtorus/lattice.hpp"

// Brute-force certifiers, deliberately kept independent of the production
// algorithms they cross-check: rank by rational elimination instead of
// echelon forms, the Smith diagonal straight from minor gcds instead of
// pivoting, membership by coefficient search plus a divisor-chain
// comparison.  Everything here is desk-scale only.
namespace qtorus::oracle {

// exact rational Gaussian elimination; shares nothing with hnf()
inline std::size_t rank_elimination(const IntegerMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    std::vector<std::vector<Rat>> w(m, std::vector<Rat>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = Rat(A(i, j));
    std::size_t r = 0;
    for (std::size_t j = 0; j < n && r < m; ++j) {
        std::size_t piv = r;
        while (piv < m && w[piv][j] == 0) ++piv;
        if (piv == m) continue;
        std::swap(w[r], w[piv]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || w[i][j] == 0) continue;
            const Rat f = w[i][j] / w[r][j];
            for (std::size_t k = j; k < n; ++k) w[i][k] -= f * w[r][k];
        }
        ++r;
    }
    return r;
}

// determinant by the same elimination (square input); used to certify
// unimodularity of transformation matrices
inline Rat det_elimination(const IntegerMatrix& A) {
    if (!A.is_square()) fail(ErrorKind::internal, "determinant of a non-square matrix");
    const std::size_t n = A.rows();
    std::vector<std::vector<Rat>> w(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = Rat(A(i, j));
    Rat det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && w[piv][c] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != c) {
            std::swap(w[c], w[piv]);
            det = -det;
        }
        det *= w[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (w[i][c] == 0) continue;
            const Rat f = w[i][c] / w[c][c];
            for (std::size_t k = c; k < n; ++k) w[i][k] -= f * w[c][k];
        }
    }
    return det;
}

// Largest r <= max_rank admitting r linearly independent, pairwise
// orthogonal vectors with entries in [-bound, bound] (all forms at once).
// Depth-first over candidates in lexicographic order, indices increasing;
// restricting to primitive vectors with positive leading entry loses
// nothing (scaling a member of an orthogonal independent set preserves
// both properties).  The result is a lower bound on the true maximum,
// exact whenever a witness with such small entries exists.
inline std::size_t isotropic_rank_enum(const PairingForms& forms, std::size_t bound,
                                       std::size_t max_rank,
                                       std::size_t node_budget = 10'000'000) {
    const std::size_t n = forms.n;
    if (max_rank > n) max_rank = n;
    if (max_rank == 0 || n == 0) return 0;

    std::vector<std::vector<Int>> pool;
    {
        const long b = static_cast<long>(bound);
        std::vector<long> v(n, -b);
        for (;;) {
            long lead = 0;
            for (long x : v)
                if (x != 0) {
                    lead = x;
                    break;
                }
            if (lead > 0) {
                Int g = 0;
                for (long x : v) g = gcd(g, Int(x));
                if (g == 1) {
                    std::vector<Int> w(n);
                    for (std::size_t i = 0; i < n; ++i) w[i] = v[i];
                    pool.push_back(std::move(w));
                }
            }
            std::size_t i = n;
            while (i > 0 && v[i - 1] == b) v[--i] = -b;
            if (i == 0) break;
            ++v[i - 1];
        }
    }

    std::size_t best = 0;
    std::size_t nodes = 0;
    std::vector<std::size_t> chosen;

    auto orthogonal_to_chosen = [&](const std::vector<Int>& w) {
        for (const auto& C : forms.C) {
            const std::vector<Int> Cw = C.mul_vec(w);
            for (std::size_t idx : chosen) {
                Int acc = 0;
                for (std::size_t i = 0; i < n; ++i) acc += pool[idx][i] * Cw[i];
                if (acc != 0) return false;
            }
        }
        return true;
    };
    auto independent_with_chosen = [&](const std::vector<Int>& w) {
        std::vector<std::vector<Int>> rows;
        rows.reserve(chosen.size() + 1);
        for (std::size_t idx : chosen) rows.push_back(pool[idx]);
        rows.push_back(w);
        const std::size_t k = rows.size();
        return rank_elimination(IntegerMatrix::from_rows(std::move(rows), n)) == k;
    };

    auto dfs = [&](auto&& self, std::size_t start) -> void {
        if (chosen.size() > best) best = chosen.size();
        if (best >= max_rank) return;
        for (std::size_t idx = start; idx < pool.size(); ++idx) {
            if (++nodes > node_budget)
                fail(ErrorKind::budget_exceeded,
                     "isotropic enumeration exceeded its node budget");
            if (!orthogonal_to_chosen(pool[idx])) continue;
            if (!independent_with_chosen(pool[idx])) continue;
            chosen.push_back(idx);
            self(self, idx + 1);
            chosen.pop_back();
            if (best >= max_rank) return;
        }
    };
    dfs(dfs, 0);
    return best;
}

// determinant straight from the Leibniz sum — every permutation, sign by
// inversion count, no elimination and no division anywhere
inline Int det_leibniz(const IntegerMatrix& A) {
    if (!A.is_square()) fail(ErrorKind::internal, "determinant of a non-square matrix");
    const std::size_t n = A.rows();
    if (n == 0) return Int(1);
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    Int det = 0;
    do {
        std::size_t inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (p[i] > p[j]) ++inversions;
        Int term = inversions % 2 == 0 ? 1 : -1;
        for (std::size_t i = 0; i < n; ++i) term *= A(i, p[i]);
        det += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return det;
}

// Smith diagonal through determinantal divisors: d_k is the gcd of all
// k x k minors and the k-th entry equals d_k / d_{k-1}.  Only minors of
// the input are ever formed, so intermediate growth cannot occur.
inline std::vector<Int> snf_diagonal_oracle(const IntegerMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    const std::size_t bound = m < n ? m : n;
    std::vector<Int> diag(bound, Int(0));

    auto next_combination = [](std::vector<std::size_t>& ix, std::size_t limit) {
        const std::size_t k = ix.size();
        std::size_t i = k;
        while (i > 0 && ix[i - 1] == limit - k + (i - 1)) --i;
        if (i == 0) return false;
        ++ix[i - 1];
        for (std::size_t j = i; j < k; ++j) ix[j] = ix[j - 1] + 1;
        return true;
    };

    Int prev(1);
    for (std::size_t k = 1; k <= bound; ++k) {
        Int dk(0);
        std::vector<std::size_t> ri(k);
        std::iota(ri.begin(), ri.end(), std::size_t{0});
        bool settled = false;
        do {
            std::vector<std::size_t> ci(k);
            std::iota(ci.begin(), ci.end(), std::size_t{0});
            do {
                IntegerMatrix M(k, k);
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b) M(a, b) = A(ri[a], ci[b]);
                dk = gcd(dk, det_leibniz(M));
                // d_{k-1} divides every k x k minor, so the gcd cannot
                // drop below it; stop scanning once it is reached
                settled = dk == prev;
            } while (!settled && next_combination(ci, n));
        } while (!settled && next_combination(ri, m));
        if (dk == 0) break;  // all k x k minors vanish, rank is k - 1
        mpz_divexact(diag[k - 1].get_mpz_t(), dk.get_mpz_t(), prev.get_mpz_t());
        prev = std::move(dk);
    }
    return diag;
}

// Is v an integer combination of the generating rows?  Tries small
// coefficients first, then decides exactly by divisor chains: appending v
// can only enlarge the lattice, equal ranks force equal saturations, and
// an equal divisor product then forces index one — so the chains match
// precisely when v was already inside.
inline bool membership_oracle(const std::vector<Int>& v, const IntegerMatrix& gens) {
    if (gens.cols() != v.size())
        fail(ErrorKind::length_mismatch, "vector and generators have different lengths");
    const std::size_t r = gens.rows();
    bool v_zero = true;
    for (const Int& x : v) v_zero = v_zero && x == 0;
    if (v_zero) return true;
    if (r == 0) return false;

    for (long b = 1; b <= 2; ++b) {
        std::vector<long> c(r, -b);
        for (;;) {
            bool match = true;
            for (std::size_t j = 0; j < v.size() && match; ++j) {
                Int acc = 0;
                for (std::size_t i = 0; i < r; ++i) acc += Int(c[i]) * gens(i, j);
                match = acc == v[j];
            }
            if (match) return true;
            std::size_t i = r;
            while (i > 0 && c[i - 1] == b) c[--i] = -b;
            if (i == 0) break;
            ++c[i - 1];
        }
    }

    std::vector<std::vector<Int>> rows;
    rows.reserve(r + 1);
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<Int> row(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) row[j] = gens(i, j);
        rows.push_back(std::move(row));
    }
    rows.push_back(v);
    const auto before = snf_diagonal_oracle(gens);
    const auto after =
        snf_diagonal_oracle(IntegerMatrix::from_rows(std::move(rows), v.size()));
    auto nonzero_prefix = [](const std::vector<Int>& d) {
        std::vector<Int> out;
        for (const Int& x : d) {
            if (x == 0) break;
            out.push_back(x);
        }
        return out;
    };
    return nonzero_prefix(before) == nonzero_prefix(after);
}

}  // namespace qtorus::oracle
