#pragma once

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qtorus/errors.hpp"
#include "qtorus/integer_matrix.hpp"
#include "qtorus/lattice.hpp"
#include "qtorus/scalars.hpp"

// The quantum torus Lambda_q on generators X_1..X_n with relations
// X_i X_j = q_ij X_j X_i, realized as a twisted group algebra of Z^n.
// Monomials are exponent vectors a in Z^n; the 2-cocycle gamma pins down
// the normal form X^a = X_1^{a_1} ... X_n^{a_n}.
namespace qtorus {

using Monomial = std::vector<Int>;

class QTorusPresentation {
  public:
    QTorusPresentation() = default;
    QTorusPresentation(std::size_t n, GeneratorBasis basis,
                       std::vector<std::vector<ExponentVector>> q)
        : n_(n), basis_(std::move(basis)), q_(std::move(q)) {}

    // build from strict-upper-triangle data; the rest follows by antisymmetry
    static QTorusPresentation from_upper(
        std::size_t n, GeneratorBasis basis,
        const std::map<std::pair<std::size_t, std::size_t>, ExponentVector>& upper) {
        const std::size_t m = basis.size();
        std::vector<std::vector<ExponentVector>> q(
            n, std::vector<ExponentVector>(n, ExponentVector::zero(m)));
        for (const auto& [ij, e] : upper) {
            auto [i, j] = ij;
            if (i >= j || j >= n) fail(ErrorKind::internal, "bad upper-triangle index");
            if (e.size() != m) fail(ErrorKind::length_mismatch, "scalar over wrong basis");
            q[i][j] = e;
            q[j][i] = -e;
        }
        return QTorusPresentation(n, std::move(basis), std::move(q));
    }

    std::size_t n() const noexcept { return n_; }
    const GeneratorBasis& basis() const noexcept { return basis_; }
    const ExponentVector& q(std::size_t i, std::size_t j) const { return q_[i][j]; }
    const std::vector<std::vector<ExponentVector>>& q_grid() const noexcept { return q_; }

    // q_ii = 1 and q_ji = q_ij^{-1}; anything else is not a quantum torus
    void validate() const {
        if (q_.size() != n_) fail(ErrorKind::length_mismatch, "q grid has wrong row count");
        for (std::size_t i = 0; i < n_; ++i) {
            if (q_[i].size() != n_) fail(ErrorKind::length_mismatch, "q grid has wrong column count");
            for (std::size_t j = 0; j < n_; ++j)
                if (q_[i][j].size() != basis_.size())
                    fail(ErrorKind::length_mismatch, "q entry over wrong basis");
            if (!q_[i][i].is_zero())
                fail(ErrorKind::non_unit_diagonal,
                     "q_" + std::to_string(i + 1) + std::to_string(i + 1) + " must be 1");
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (q_[j][i] != -q_[i][j])
                    fail(ErrorKind::not_antisymmetric,
                         "q_" + std::to_string(j + 1) + std::to_string(i + 1) +
                             " is not the inverse of q_" + std::to_string(i + 1) +
                             std::to_string(j + 1));
    }

    friend bool operator==(const QTorusPresentation& a, const QTorusPresentation& b) {
        return a.n_ == b.n_ && a.basis_ == b.basis_ && a.q_ == b.q_;
    }
    friend bool operator!=(const QTorusPresentation& a, const QTorusPresentation& b) {
        return !(a == b);
    }

  private:
    std::size_t n_ = 0;
    GeneratorBasis basis_;
    std::vector<std::vector<ExponentVector>> q_;  // q_[i][j] = exponents of q_{i+1,j+1}
};

// The commutator pairing lambda(a,b) = prod_k g_k^{a^T C_k b}, one integer
// alternating form per scalar generator.
struct PairingForms {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<IntegerMatrix> C;  // m alternating n x n matrices

    ExponentVector lambda(const Monomial& a, const Monomial& b) const {
        if (a.size() != n || b.size() != n)
            fail(ErrorKind::length_mismatch, "pairing arguments must lie in Z^n");
        ExponentVector out = ExponentVector::zero(m);
        for (std::size_t k = 0; k < m; ++k) {
            const std::vector<Int> Cb = C[k].mul_vec(b);
            Int acc = 0;
            for (std::size_t i = 0; i < n; ++i) acc += a[i] * Cb[i];
            out[k] = acc;
        }
        return out;
    }
};

inline PairingForms pairing(const QTorusPresentation& pres) {
    PairingForms forms;
    forms.n = pres.n();
    forms.m = pres.basis().size();
    forms.C.reserve(forms.m);
    for (std::size_t k = 0; k < forms.m; ++k) {
        IntegerMatrix Ck(forms.n, forms.n);
        for (std::size_t i = 0; i < forms.n; ++i)
            for (std::size_t j = 0; j < forms.n; ++j) Ck(i, j) = pres.q(i, j)[k];
        forms.C.push_back(std::move(Ck));
    }
    return forms;
}

// gamma(a,b) = prod_{i>j} q_ij^{a_i b_j}; the coefficient is always +1, the
// twist lives entirely in the scalar exponents.
inline UnitMonomial cocycle(const Monomial& a, const Monomial& b, const QTorusPresentation& pres) {
    if (a.size() != pres.n() || b.size() != pres.n())
        fail(ErrorKind::length_mismatch, "cocycle arguments must lie in Z^n");
    ExponentVector exps = ExponentVector::zero(pres.basis().size());
    for (std::size_t i = 1; i < pres.n(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < i; ++j) {
            if (b[j] == 0) continue;
            exps += (a[i] * b[j]) * pres.q(i, j);
        }
    }
    return UnitMonomial(Rat(1), std::move(exps));
}

// lambda(a,b) = gamma(a,b) / gamma(b,a); agrees with PairingForms::lambda
// and satisfies X^a X^b = lambda(a,b) X^b X^a
inline ExponentVector commutator_lambda(const Monomial& a, const Monomial& b,
                                        const QTorusPresentation& pres) {
    return cocycle(a, b, pres).exps - cocycle(b, a, pres).exps;
}

// ---------------------------------------------------------------------------
// formal k-linear combinations

// An element of the scalar group ring: sum of rational coefficients against
// distinct scalar-group elements.  This is the coefficient domain of a
// Laurent element; it collapses to a single term exactly when the scalars
// involved coincide.
class ScalarSum {
  public:
    ScalarSum() = default;
    explicit ScalarSum(const UnitMonomial& u) { terms_[u.exps] = u.coeff; }
    ScalarSum(Rat c, const ExponentVector& e) {
        if (c != 0) terms_[e] = std::move(c);
    }

    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    const std::map<ExponentVector, Rat>& terms() const noexcept { return terms_; }

    void add_term(const ExponentVector& e, const Rat& c) {
        if (c == 0) return;
        Rat& slot = terms_[e];
        slot += c;
        if (slot == 0) terms_.erase(e);
    }

    ScalarSum& operator+=(const ScalarSum& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    friend ScalarSum operator+(ScalarSum a, const ScalarSum& b) { return a += b; }

    friend ScalarSum operator*(const ScalarSum& a, const ScalarSum& b) {
        ScalarSum out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
        return out;
    }
    friend ScalarSum operator*(const UnitMonomial& u, const ScalarSum& s) {
        return ScalarSum(u) * s;
    }

    friend bool operator==(const ScalarSum& a, const ScalarSum& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const ScalarSum& a, const ScalarSum& b) { return !(a == b); }

  private:
    std::map<ExponentVector, Rat> terms_;
};

class LaurentElement {
  public:
    explicit LaurentElement(std::size_t n = 0) : n_(n) {}

    static LaurentElement monomial(Monomial a, const UnitMonomial& c) {
        LaurentElement f(a.size());
        f.add_term(std::move(a), ScalarSum(c));
        return f;
    }
    // X_i as an element of the rank-n torus (i is 0-based), scalar basis size m
    static LaurentElement generator(std::size_t n, std::size_t i, std::size_t m) {
        Monomial a(n, Int(0));
        a[i] = 1;
        return monomial(std::move(a), UnitMonomial(Rat(1), ExponentVector::zero(m)));
    }

    std::size_t n() const noexcept { return n_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    const std::map<Monomial, ScalarSum>& terms() const noexcept { return terms_; }

    void add_term(Monomial a, const ScalarSum& s) {
        if (a.size() != n_) fail(ErrorKind::length_mismatch, "monomial of wrong rank");
        if (s.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(std::move(a), s);
        if (!inserted) {
            it->second += s;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    LaurentElement& operator+=(const LaurentElement& o) {
        if (n_ != o.n_) fail(ErrorKind::length_mismatch, "elements of different rank");
        for (const auto& [a, s] : o.terms_) add_term(a, s);
        return *this;
    }
    friend LaurentElement operator+(LaurentElement a, const LaurentElement& b) { return a += b; }

    LaurentElement operator-() const {
        LaurentElement out(n_);
        for (const auto& [a, s] : terms_) {
            ScalarSum neg;
            for (const auto& [e, c] : s.terms()) neg.add_term(e, -c);
            out.terms_[a] = std::move(neg);
        }
        return out;
    }
    friend LaurentElement operator-(const LaurentElement& a, const LaurentElement& b) {
        return a + (-b);
    }

    friend bool operator==(const LaurentElement& a, const LaurentElement& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const LaurentElement& a, const LaurentElement& b) { return !(a == b); }

  private:
    std::size_t n_;
    std::map<Monomial, ScalarSum> terms_;
};

inline LaurentElement scale(const UnitMonomial& u, const LaurentElement& f) {
    LaurentElement out(f.n());
    for (const auto& [a, s] : f.terms()) out.add_term(a, u * s);
    return out;
}

// X^a X^b = gamma(a,b) X^{a+b}, extended bilinearly
inline LaurentElement multiply(const LaurentElement& f, const LaurentElement& g,
                               const QTorusPresentation& pres) {
    if (f.n() != pres.n() || g.n() != pres.n())
        fail(ErrorKind::length_mismatch, "elements do not match the presentation rank");
    LaurentElement out(pres.n());
    for (const auto& [a, sa] : f.terms()) {
        for (const auto& [b, sb] : g.terms()) {
            Monomial ab(pres.n());
            for (std::size_t i = 0; i < pres.n(); ++i) ab[i] = a[i] + b[i];
            out.add_term(std::move(ab), cocycle(a, b, pres) * (sa * sb));
        }
    }
    return out;
}

// Does the sublattice generate a commutative subalgebra?  True iff lambda
// vanishes on every pair of basis vectors.
inline bool is_commutative_sublattice(const Sublattice& L, const QTorusPresentation& pres) {
    if (L.ambient_rank() != pres.n())
        fail(ErrorKind::length_mismatch, "sublattice of wrong ambient rank");
    const PairingForms forms = pairing(pres);
    const IntegerMatrix& B = L.basis();
    for (std::size_t r = 0; r < B.rows(); ++r)
        for (std::size_t s = r + 1; s < B.rows(); ++s)
            if (!forms.lambda(B.row(r), B.row(s)).is_zero()) return false;
    return true;
}

// A scalar automorphism sigma(X_i) = p_i X_i, the twisting data of the
// skew extension.  The p_i are expressed over the same generator basis as
// the presentation they extend.
struct ScalarAutomorphismSpec {
    std::vector<ExponentVector> p;

    void validate(const QTorusPresentation& pres) const {
        if (p.size() != pres.n())
            fail(ErrorKind::length_mismatch, "automorphism must scale each of the n generators");
        for (const auto& e : p)
            if (e.size() != pres.basis().size())
                fail(ErrorKind::length_mismatch, "automorphism scalar over wrong basis");
    }
};

// Lambda* = Lambda_sigma[Y^{+-1}]: one new generator Y = X_{n+1} with
// Y X_i = p_i X_i Y, i.e. q*_{i,n+1} = p_i^{-1} and q*_{n+1,i} = p_i.
inline QTorusPresentation skew_extension(const QTorusPresentation& pres,
                                         const ScalarAutomorphismSpec& sigma) {
    pres.validate();
    sigma.validate(pres);
    const std::size_t n = pres.n();
    const std::size_t m = pres.basis().size();
    std::vector<std::vector<ExponentVector>> q(
        n + 1, std::vector<ExponentVector>(n + 1, ExponentVector::zero(m)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i][j] = pres.q(i, j);
    for (std::size_t i = 0; i < n; ++i) {
        q[i][n] = -sigma.p[i];
        q[n][i] = sigma.p[i];
    }
    return QTorusPresentation(n + 1, pres.basis(), std::move(q));
}

// The subgroup of k^x generated by all multiparameters q_ij.
inline std::vector<ExponentVector> multiparameter_generators(const QTorusPresentation& pres) {
    std::vector<ExponentVector> gens;
    for (std::size_t i = 0; i < pres.n(); ++i)
        for (std::size_t j = i + 1; j < pres.n(); ++j)
            if (!pres.q(i, j).is_zero()) gens.push_back(pres.q(i, j));
    return gens;
}

}  // namespace qtorus
