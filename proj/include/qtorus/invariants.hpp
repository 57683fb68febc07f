#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qtorus/algebra.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/integer_matrix.hpp"
#include "qtorus/lattice.hpp"
#include "qtorus/scalars.hpp"

// Algebra-level invariants of a quantum torus: rank of the group generated
// by the multiparameters, the central sublattice, the Krull dimension
// (= global dimension = maximal rank of a sublattice on which all pairing
// forms vanish), the GK dimension of the algebra itself, and the resulting
// lower bound on GK dimensions of finitely generated modules.
namespace qtorus {

inline std::size_t lambda_group_rank(const QTorusPresentation& pres) {
    std::vector<ExponentVector> gens = multiparameter_generators(pres);
    if (gens.empty()) return 0;
    return subgroup_rank(gens);
}

// Z = {a : lambda(a, e_i) = 0 for all i} = joint kernel of the C_k;
// saturated, basis in HNF.  The center of the algebra is the commutative
// Laurent ring spanned by X^a, a in Z.
inline Sublattice center_lattice(const QTorusPresentation& pres) {
    const PairingForms forms = pairing(pres);
    if (forms.m == 0) return Sublattice::full(forms.n);
    IntegerMatrix stacked = forms.C[0];
    for (std::size_t k = 1; k < forms.m; ++k) stacked = stack_rows(stacked, forms.C[k]);
    return kernel(stacked);
}

struct KdimEstimate {
    std::size_t lower = 0;
    std::size_t upper = 0;
    Sublattice witness;

    bool exact() const noexcept { return lower == upper; }

    friend bool operator==(const KdimEstimate& a, const KdimEstimate& b) {
        return a.lower == b.lower && a.upper == b.upper && a.witness == b.witness;
    }
    friend bool operator!=(const KdimEstimate& a, const KdimEstimate& b) { return !(a == b); }
};

namespace detail {

// Alternating integer forms have even rank.
inline std::size_t half_rank(const IntegerMatrix& C) {
    const std::size_t r = rank(C);
    if (r % 2 != 0) fail(ErrorKind::internal, "alternating form with odd rank");
    return r / 2;
}

// sampled-combination certificate: isotropy for all forms implies isotropy
// for every integer combination, so each combination yields an upper bound
inline std::size_t kdim_upper_bound(const PairingForms& forms) {
    const std::size_t n = forms.n;
    std::size_t ub = n;
    for (const auto& C : forms.C) {
        const std::size_t hr = half_rank(C);
        if (n - hr < ub) ub = n - hr;
    }
    if (forms.m >= 2) {
        std::mt19937_64 rng(0x71c0de5eedULL);
        for (int t = 0; t < 64; ++t) {
            IntegerMatrix Cc(n, n);
            for (std::size_t k = 0; k < forms.m; ++k) {
                const long c = static_cast<long>(rng() % 17) - 8;
                if (c == 0) continue;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) Cc(i, j) += c * forms.C[k](i, j);
            }
            const std::size_t hr = half_rank(Cc);
            if (n - hr < ub) ub = n - hr;
        }
    }
    return ub;
}

// does w pair to zero with every basis row of L, under every form?
inline bool extends_isotropically(const Sublattice& L, const std::vector<Int>& w,
                                  const PairingForms& forms) {
    for (const auto& C : forms.C) {
        const std::vector<Int> Cw = C.mul_vec(w);
        const IntegerMatrix& B = L.basis();
        for (std::size_t r = 0; r < B.rows(); ++r) {
            Int acc = 0;
            for (std::size_t i = 0; i < B.cols(); ++i) acc += B(r, i) * Cw[i];
            if (acc != 0) return false;
        }
    }
    return true;
}

// candidate vectors for the isotropic search: nonzero, primitive, first
// nonzero entry positive, entries in [-bound, bound]; ordered by (L1, lex)
inline std::vector<std::vector<Int>> candidate_pool(std::size_t n, std::size_t bound) {
    const long b = static_cast<long>(bound);
    std::vector<std::vector<Int>> pool;
    std::vector<long> v(n, -b);
    for (;;) {
        long l1 = 0;
        for (long x : v) l1 += x < 0 ? -x : x;
        if (l1 > 0) {
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
        }
        std::size_t i = n;
        while (i > 0 && v[i - 1] == b) v[--i] = -b;
        if (i == 0) break;
        ++v[i - 1];
    }
    std::sort(pool.begin(), pool.end(),
              [](const std::vector<Int>& a, const std::vector<Int>& c) {
                  Int la = 0, lc = 0;
                  for (const Int& x : a) la += abs(x);
                  for (const Int& x : c) lc += abs(x);
                  if (la != lc) return la < lc;
                  return a < c;
              });
    return pool;
}

// m = 1: the closed form n - rank/2 is exact; grow a witness from the
// center, always staying saturated (so the extension step never stalls)
inline Sublattice single_form_witness(const IntegerMatrix& C, std::size_t target) {
    Sublattice L = kernel(C);
    while (L.rank() < target) {
        // vectors pairing to zero with everything chosen so far
        IntegerMatrix conditions(L.rank(), C.cols());
        for (std::size_t r = 0; r < L.rank(); ++r) {
            const std::vector<Int> Cb = C.mul_vec(L.basis().row(r));
            for (std::size_t j = 0; j < C.cols(); ++j) conditions(r, j) = Cb[j];
        }
        const Sublattice K = kernel(conditions);
        bool grew = false;
        for (std::size_t r = 0; r < K.rank(); ++r) {
            if (member(K.basis().row(r), L)) continue;
            L = saturate(Sublattice::from_generators(
                stack_rows(L.basis(), IntegerMatrix::from_rows({K.basis().row(r)}, C.cols()))));
            grew = true;
            break;
        }
        if (!grew) fail(ErrorKind::internal, "isotropic extension stalled below the closed form");
    }
    return L;
}

struct IsotropicSearch {
    const PairingForms& forms;
    const std::vector<std::vector<Int>>& pool;
    std::size_t target;        // stop as soon as this rank is reached
    std::size_t budget;        // candidate-evaluation allowance
    std::set<std::string> seen;
    std::size_t best_rank = 0;
    Sublattice best;
    bool exhausted = true;     // false if the budget cut the search short

    void run(const Sublattice& start) {
        best = start;
        best_rank = start.rank();
        visit(start);
    }

  private:
    void visit(const Sublattice& L) {
        if (L.rank() > best_rank ||
            (L.rank() == best_rank && L.basis() < best.basis())) {
            best_rank = L.rank();
            best = L;
        }
        if (best_rank >= target) return;
        if (!seen.insert(L.basis().to_string()).second) return;
        for (const auto& w : pool) {
            if (budget == 0) {
                exhausted = false;
                return;
            }
            --budget;
            if (!extends_isotropically(L, w, forms)) continue;
            if (member(w, L)) continue;
            Sublattice next = saturate(Sublattice::from_generators(
                stack_rows(L.basis(), IntegerMatrix::from_rows({w}, forms.n))));
            visit(next);
            if (best_rank >= target) return;
        }
    }
};

}  // namespace detail

// Maximal rank of a sublattice on which every pairing form vanishes.  For
// at most one effective form the answer is a closed formula; otherwise a
// bounded search produces certified lower/upper bounds that coincide on
// every instance small enough to close.
inline KdimEstimate kdim(const QTorusPresentation& pres, std::size_t search_bound = 2) {
    if (search_bound < 1) fail(ErrorKind::internal, "kdim search bound must be at least 1");
    const std::size_t n = pres.n();
    PairingForms forms = pairing(pres);
    // forms that vanish identically constrain nothing
    std::erase_if(forms.C, [](const IntegerMatrix& C) { return C.is_zero(); });
    forms.m = forms.C.size();

    KdimEstimate est;
    if (forms.m == 0) {
        est.lower = est.upper = n;
        est.witness = Sublattice::full(n);
        return est;
    }
    est.upper = detail::kdim_upper_bound(forms);
    if (forms.m == 1) {
        est.lower = est.upper = n - detail::half_rank(forms.C[0]);
        est.witness = detail::single_form_witness(forms.C[0], est.lower);
        return est;
    }

    const auto pool = detail::candidate_pool(n, search_bound);
    detail::IsotropicSearch search{forms, pool, est.upper, 5'000'000, {}, 0, {}, true};
    search.run(center_lattice(pres));
    // if the budget cut the search short the bounds simply stay open;
    // an inconclusive search never produces a wrong exact claim
    est.lower = search.best_rank;
    est.witness = search.best;
    return est;
}

// gk of the torus itself: a twisted group algebra of Z^n grows like
// a commutative Laurent ring in n variables
inline std::size_t gk_algebra(const QTorusPresentation& pres) { return pres.n(); }

// Least possible GK dimension of a nonzero finitely generated module:
// n - K.dim.  Only meaningful when the Krull dimension is pinned down.
inline std::size_t holonomic_bound(const QTorusPresentation& pres, const KdimEstimate& kd) {
    if (!kd.exact())
        fail(ErrorKind::inexact_kdim,
             "Krull dimension bounds did not close (lower " + std::to_string(kd.lower) +
                 ", upper " + std::to_string(kd.upper) + "); cannot certify the module bound");
    return pres.n() - kd.lower;
}

}  // namespace qtorus
