#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qtorus/algebra.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/integer_matrix.hpp"
#include "qtorus/invariants.hpp"
#include "qtorus/lattice.hpp"
#include "qtorus/oracle.hpp"
#include "qtorus/scalars.hpp"

// Seeded randomized certification of the exact-arithmetic core against the
// independent oracles.  Each case derives its own generator from the suite
// seed and the case index, so results are identical for any thread count;
// shard outputs are merged in case order.
namespace qtorus::selftest {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;  // "case <i>: <detail>" for the smallest failing index
};

struct Options {
    bool quick = false;      // divide case counts by 10
    unsigned threads = 1;
};

namespace detail {

using Rng = std::mt19937_64;

// modulo-based draw: identical on every platform, unlike the standard
// distributions
inline long rnd(Rng& g, long lo, long hi) {
    return lo + static_cast<long>(g() % static_cast<unsigned long long>(hi - lo + 1));
}

inline Rng case_rng(std::uint64_t suite_seed, std::size_t index) {
    return Rng(suite_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

template <typename Fn>
SuiteResult run_cases(std::string name, std::size_t count, unsigned threads, Fn&& fn) {
    SuiteResult result;
    result.name = std::move(name);
    result.cases = count;
    if (threads < 1) threads = 1;
    std::vector<std::vector<std::pair<std::size_t, std::string>>> shard_failures(threads);
    auto worker = [&](unsigned t) {
        for (std::size_t i = t; i < count; i += threads) {
            std::optional<std::string> bad = fn(i);
            if (bad) shard_failures[t].emplace_back(i, *bad);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    std::vector<std::pair<std::size_t, std::string>> all;
    for (auto& sf : shard_failures) all.insert(all.end(), sf.begin(), sf.end());
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    result.failures = all.size();
    if (!all.empty())
        result.first_failure = "case " + std::to_string(all.front().first) + ": " + all.front().second;
    return result;
}

inline ExponentVector rnd_exponents(Rng& g, std::size_t m, long lo, long hi) {
    ExponentVector e = ExponentVector::zero(m);
    for (std::size_t k = 0; k < m; ++k) e[k] = rnd(g, lo, hi);
    return e;
}

inline QTorusPresentation rnd_presentation(Rng& g, std::size_t max_n, std::size_t max_m) {
    const std::size_t n = static_cast<std::size_t>(rnd(g, 1, static_cast<long>(max_n)));
    const std::size_t m = static_cast<std::size_t>(rnd(g, 0, static_cast<long>(max_m)));
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < m; ++k) labels.push_back("g" + std::to_string(k + 1));
    std::map<std::pair<std::size_t, std::size_t>, ExponentVector> upper;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) upper[{i, j}] = rnd_exponents(g, m, -3, 3);
    return QTorusPresentation::from_upper(n, GeneratorBasis::symbolic(std::move(labels)), upper);
}

inline Monomial rnd_monomial(Rng& g, std::size_t n, long lo, long hi) {
    Monomial a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = rnd(g, lo, hi);
    return a;
}

inline IntegerMatrix rnd_matrix(Rng& g, std::size_t rows, std::size_t cols, long lo, long hi) {
    IntegerMatrix M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) M(i, j) = rnd(g, lo, hi);
    return M;
}

inline IntegerMatrix rnd_antisymmetric(Rng& g, std::size_t n, long lo, long hi) {
    IntegerMatrix C(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            C(i, j) = rnd(g, lo, hi);
            C(j, i) = -C(i, j);
        }
    return C;
}

inline bool hnf_shape_ok(const HNFResult& h) {
    // pivots strictly to the right as rows descend, positive, entries above
    // reduced into [0, pivot); rows beyond rank all zero
    std::size_t prev_col = 0;
    bool have_prev = false;
    for (std::size_t i = 0; i < h.rank; ++i) {
        std::size_t p = 0;
        while (p < h.H.cols() && h.H(i, p) == 0) ++p;
        if (p == h.H.cols()) return false;
        if (have_prev && p <= prev_col) return false;
        if (h.H(i, p) <= 0) return false;
        for (std::size_t r = 0; r < i; ++r)
            if (h.H(r, p) < 0 || h.H(r, p) >= h.H(i, p)) return false;
        prev_col = p;
        have_prev = true;
    }
    for (std::size_t i = h.rank; i < h.H.rows(); ++i)
        for (std::size_t j = 0; j < h.H.cols(); ++j)
            if (h.H(i, j) != 0) return false;
    return true;
}

inline bool snf_shape_ok(const SNFResult& s) {
    const std::size_t m = s.D.rows(), n = s.D.cols();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && s.D(i, j) != 0) return false;
    const std::size_t bound = m < n ? m : n;
    for (std::size_t t = 0; t + 1 < bound; ++t) {
        const Int &a = s.D(t, t), &b = s.D(t + 1, t + 1);
        if (a < 0 || b < 0) return false;
        if (a == 0 && b != 0) return false;
        if (a != 0 && b != 0 && !mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) return false;
    }
    if (bound > 0 && s.D(bound - 1, bound - 1) < 0) return false;
    return true;
}

}  // namespace detail

// gamma(x,y) gamma(x+y,z) = gamma(y,z) gamma(x,y+z): the identity that
// makes the twisted multiplication associative
inline SuiteResult suite_cocycle_identity(const Options& opt) {
    const std::size_t count = opt.quick ? 100 : 1000;
    return detail::run_cases("cocycle_identity", count, opt.threads,
                             [](std::size_t i) -> std::optional<std::string> {
        auto g = detail::case_rng(0xC0CFC1E1D10ULL, i);
        const QTorusPresentation pres = detail::rnd_presentation(g, 5, 3);
        const std::size_t n = pres.n();
        const Monomial x = detail::rnd_monomial(g, n, -4, 4);
        const Monomial y = detail::rnd_monomial(g, n, -4, 4);
        const Monomial z = detail::rnd_monomial(g, n, -4, 4);
        Monomial xy(n), yz(n);
        for (std::size_t k = 0; k < n; ++k) {
            xy[k] = x[k] + y[k];
            yz[k] = y[k] + z[k];
        }
        const ExponentVector lhs = cocycle(x, y, pres).exps + cocycle(xy, z, pres).exps;
        const ExponentVector rhs = cocycle(y, z, pres).exps + cocycle(x, yz, pres).exps;
        if (lhs == rhs) return std::nullopt;
        return "cocycle identity violated for n=" + std::to_string(n);
    });
}

// X_i X_j = q_ij X_j X_i for every generator pair, and
// X^a X^b = lambda(a,b) X^b X^a for a random (a,b)
inline SuiteResult suite_defining_relations(const Options& opt) {
    const std::size_t count = opt.quick ? 10 : 100;
    return detail::run_cases("defining_relations", count, opt.threads,
                             [](std::size_t i) -> std::optional<std::string> {
        auto g = detail::case_rng(0xDEF1A110A5ULL, i);
        const QTorusPresentation pres = detail::rnd_presentation(g, 4, 3);
        const std::size_t n = pres.n();
        const std::size_t m = pres.basis().size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const LaurentElement Xa = LaurentElement::generator(n, a, m);
                const LaurentElement Xb = LaurentElement::generator(n, b, m);
                const LaurentElement lhs = multiply(Xa, Xb, pres);
                const LaurentElement rhs =
                    scale(UnitMonomial(Rat(1), pres.q(a, b)), multiply(Xb, Xa, pres));
                if (lhs != rhs)
                    return "generator relation failed at pair (" + std::to_string(a + 1) + "," +
                           std::to_string(b + 1) + ")";
            }
        const Monomial a = detail::rnd_monomial(g, n, -4, 4);
        const Monomial b = detail::rnd_monomial(g, n, -4, 4);
        const LaurentElement Xa = LaurentElement::monomial(a, UnitMonomial::one(m));
        const LaurentElement Xb = LaurentElement::monomial(b, UnitMonomial::one(m));
        const LaurentElement lhs = multiply(Xa, Xb, pres);
        const LaurentElement rhs = scale(UnitMonomial(Rat(1), commutator_lambda(a, b, pres)),
                                         multiply(Xb, Xa, pres));
        if (lhs != rhs) return "commutation rule failed for random exponents";
        return std::nullopt;
    });
}

// associativity of the twisted product on random three-term elements
inline SuiteResult suite_associativity(const Options& opt) {
    const std::size_t count = opt.quick ? 30 : 300;
    return detail::run_cases("product_associativity", count, opt.threads,
                             [](std::size_t i) -> std::optional<std::string> {
        auto g = detail::case_rng(0xA550C1A71F1ULL, i);
        const QTorusPresentation pres = detail::rnd_presentation(g, 4, 3);
        const std::size_t n = pres.n();
        const std::size_t m = pres.basis().size();
        auto rnd_element = [&]() {
            LaurentElement f(n);
            const long terms = detail::rnd(g, 1, 3);
            for (long t = 0; t < terms; ++t) {
                Rat c(detail::rnd(g, -3, 3), detail::rnd(g, 1, 3));
                c.canonicalize();  // mpq_class(num, den) does not reduce
                if (c == 0) continue;
                f.add_term(detail::rnd_monomial(g, n, -2, 2),
                           ScalarSum(c, detail::rnd_exponents(g, m, -2, 2)));
            }
            return f;
        };
        const LaurentElement x = rnd_element(), y = rnd_element(), z = rnd_element();
        if (multiply(multiply(x, y, pres), z, pres) != multiply(x, multiply(y, z, pres), pres))
            return "product not associative";
        return std::nullopt;
    });
}

// Hermite and Smith forms certified: transformations unimodular, products
// exact, shapes canonical, Smith diagonal agreeing with the oracle, rank
// agreeing with rational elimination
inline SuiteResult suite_normal_forms(const Options& opt) {
    const std::size_t count = opt.quick ? 50 : 500;
    return detail::run_cases("normal_forms", count, opt.threads,
                             [](std::size_t i) -> std::optional<std::string> {
        auto g = detail::case_rng(0x5F0F0F0F5ULL, i);
        const std::size_t rows = static_cast<std::size_t>(detail::rnd(g, 1, 6));
        const std::size_t cols = static_cast<std::size_t>(detail::rnd(g, 1, 6));
        const IntegerMatrix A = detail::rnd_matrix(g, rows, cols, -9, 9);

        const HNFResult h = hnf(A);
        const Rat du = oracle::det_elimination(h.U);
        if (du != 1 && du != -1) return "hnf transform is not unimodular";
        if (h.U * A != h.H) return "hnf product U*A != H";
        if (!detail::hnf_shape_ok(h)) return "hnf shape not canonical";
        if (h.rank != oracle::rank_elimination(A)) return "hnf rank disagrees with elimination";

        const SNFResult s = snf(A);
        const Rat su = oracle::det_elimination(s.U);
        const Rat sv = oracle::det_elimination(s.V);
        if ((su != 1 && su != -1) || (sv != 1 && sv != -1))
            return "snf transforms are not unimodular";
        if (s.U * A * s.V != s.D) return "snf product U*A*V != D";
        if (!detail::snf_shape_ok(s)) return "snf diagonal shape invalid";

        const std::vector<Int> so = oracle::snf_diagonal_oracle(A);
        for (std::size_t t = 0; t < so.size(); ++t)
            if (s.D(t, t) != so[t]) return "snf diagonal disagrees with the minor-gcd oracle";
        return std::nullopt;
    });
}

// single alternating form: the closed-form maximal isotropic rank
// n - rank/2 must be reproduced by blunt enumeration with entries <= 2
inline SuiteResult suite_isotropic_closed_form(const Options& opt) {
    const std::size_t count = opt.quick ? 20 : 100;
    return detail::run_cases("isotropic_closed_form", count, opt.threads,
                             [](std::size_t i) -> std::optional<std::string> {
        auto g = detail::case_rng(0x150780B1CULL, i);
        const std::size_t n = static_cast<std::size_t>(detail::rnd(g, 1, 6));
        const IntegerMatrix C = detail::rnd_antisymmetric(g, n, -3, 3);
        const std::size_t r = oracle::rank_elimination(C);
        if (r % 2 != 0) return "alternating form has odd rank";
        const std::size_t expected = n - r / 2;
        PairingForms forms;
        forms.n = n;
        forms.m = 1;
        forms.C = {C};
        const std::size_t found = oracle::isotropic_rank_enum(forms, 2, expected);
        if (found != expected)
            return "enumeration reached " + std::to_string(found) + ", closed form says " +
                   std::to_string(expected);
        return std::nullopt;
    });
}

// center basis vectors pair to zero with every generator; vectors outside
// the center violate at least one pairing condition
inline SuiteResult suite_center_conditions(const Options& opt) {
    const std::size_t count = opt.quick ? 40 : 200;
    return detail::run_cases("center_conditions", count, opt.threads,
                             [](std::size_t i) -> std::optional<std::string> {
        auto g = detail::case_rng(0xCE27E2C0DULL, i);
        const QTorusPresentation pres = detail::rnd_presentation(g, 4, 3);
        const std::size_t n = pres.n();
        const PairingForms forms = pairing(pres);
        const Sublattice Z = center_lattice(pres);
        for (std::size_t r = 0; r < Z.rank(); ++r) {
            const Monomial z = Z.basis().row(r);
            for (std::size_t e = 0; e < n; ++e) {
                Monomial ei(n);
                ei[e] = 1;
                if (!forms.lambda(z, ei).is_zero())
                    return "center vector fails to centralize generator " + std::to_string(e + 1);
            }
        }
        // a handful of vectors outside the span must each break a condition
        for (int attempt = 0; attempt < 8; ++attempt) {
            const Monomial v = detail::rnd_monomial(g, n, -5, 5);
            if (member(v, Z)) continue;
            bool violates = false;
            for (std::size_t e = 0; e < n && !violates; ++e) {
                Monomial ei(n);
                ei[e] = 1;
                violates = !forms.lambda(v, ei).is_zero();
            }
            if (!violates) return "vector outside the center centralizes everything";
        }
        return std::nullopt;
    });
}

// lattice membership against the enumeration + diagonal-solve oracle
inline SuiteResult suite_membership(const Options& opt) {
    const std::size_t count = opt.quick ? 50 : 500;
    return detail::run_cases("membership", count, opt.threads,
                             [](std::size_t i) -> std::optional<std::string> {
        auto g = detail::case_rng(0x3E3B3243EULL, i);
        const std::size_t dim = static_cast<std::size_t>(detail::rnd(g, 1, 5));
        const std::size_t rows = static_cast<std::size_t>(detail::rnd(g, 0, 4));
        const IntegerMatrix gens = detail::rnd_matrix(g, rows, dim, -4, 4);
        std::vector<Int> v(dim);
        if (detail::rnd(g, 0, 1) == 0 && rows > 0) {
            // an actual combination, so true cases occur often
            for (std::size_t r = 0; r < rows; ++r) {
                const long c = detail::rnd(g, -3, 3);
                for (std::size_t j = 0; j < dim; ++j) v[j] += c * gens(r, j);
            }
        } else {
            for (std::size_t j = 0; j < dim; ++j) v[j] = detail::rnd(g, -6, 6);
        }
        const bool fast = member(v, Sublattice::from_generators(gens));
        const bool slow = oracle::membership_oracle(v, gens);
        if (fast != slow)
            return std::string("membership disagrees with oracle (fast=") +
                   (fast ? "true" : "false") + ")";
        return std::nullopt;
    });
}

inline std::vector<SuiteResult> run_selftest(const Options& opt) {
    return {suite_cocycle_identity(opt), suite_defining_relations(opt),
            suite_associativity(opt),    suite_normal_forms(opt),
            suite_isotropic_closed_form(opt), suite_center_conditions(opt),
            suite_membership(opt)};
}

inline bool all_passed(const std::vector<SuiteResult>& results) {
    for (const auto& r : results)
        if (r.failures != 0) return false;
    return true;
}

inline std::string render_results(const std::vector<SuiteResult>& results) {
    std::ostringstream os;
    std::size_t cases = 0, failures = 0;
    for (const auto& r : results) {
        os << "suite " << r.name << ": " << r.cases << " cases, " << r.failures << " failures\n";
        if (r.failures != 0) os << "  first failure: " << r.first_failure << "\n";
        cases += r.cases;
        failures += r.failures;
    }
    os << "selftest: " << (failures == 0 ? "PASS" : "FAIL") << " (" << cases << " cases, "
       << failures << " failures)\n";
    return os.str();
}

}  // namespace qtorus::selftest
