#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qtorus/errors.hpp"
#include "qtorus/integer_matrix.hpp"
#include "qtorus/lattice.hpp"

// The multiplicative scalar model.  A scalar is an element of the subgroup
// of k^x generated by a fixed finite basis, written additively as a vector
// of generator exponents.  Two basis modes:
//   * symbolic: abstract labels, declared multiplicatively independent by
//     the user (the library cannot verify independence of abstract field
//     elements; reports echo this assumption);
//   * rational: k = Q, the basis is a set of primes and independence is
//     unique factorization.
namespace qtorus {

enum class ScalarMode { symbolic, rational };

inline const char* mode_name(ScalarMode m) {
    return m == ScalarMode::symbolic ? "symbolic" : "rational";
}

class GeneratorBasis {
  public:
    GeneratorBasis() = default;

    static GeneratorBasis symbolic(std::vector<std::string> labels) {
        GeneratorBasis b;
        b.mode_ = ScalarMode::symbolic;
        b.labels_ = std::move(labels);
        for (std::size_t i = 0; i < b.labels_.size(); ++i)
            for (std::size_t j = i + 1; j < b.labels_.size(); ++j)
                if (b.labels_[i] == b.labels_[j])
                    fail(ErrorKind::parse, "duplicate generator label '" + b.labels_[i] + "'");
        return b;
    }

    // primes must be distinct and are stored in increasing order
    static GeneratorBasis rational(std::vector<Int> primes) {
        GeneratorBasis b;
        b.mode_ = ScalarMode::rational;
        std::sort(primes.begin(), primes.end());
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (primes[i] < 2 || mpz_probab_prime_p(primes[i].get_mpz_t(), 40) == 0)
                fail(ErrorKind::parse, "rational basis entry " + primes[i].get_str() + " is not prime");
            if (i > 0 && primes[i] == primes[i - 1])
                fail(ErrorKind::parse, "duplicate prime " + primes[i].get_str() + " in basis");
        }
        b.primes_ = std::move(primes);
        return b;
    }

    ScalarMode mode() const noexcept { return mode_; }
    std::size_t size() const noexcept {
        return mode_ == ScalarMode::symbolic ? labels_.size() : primes_.size();
    }

    std::string label(std::size_t i) const {
        return mode_ == ScalarMode::symbolic ? labels_[i] : primes_[i].get_str();
    }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::vector<Int>& primes() const noexcept { return primes_; }

    std::optional<std::size_t> index_of_label(const std::string& name) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == name) return i;
        return std::nullopt;
    }
    std::optional<std::size_t> index_of_prime(const Int& p) const {
        auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it != primes_.end() && *it == p)
            return static_cast<std::size_t>(it - primes_.begin());
        return std::nullopt;
    }

    friend bool operator==(const GeneratorBasis& a, const GeneratorBasis& b) {
        return a.mode_ == b.mode_ && a.labels_ == b.labels_ && a.primes_ == b.primes_;
    }
    friend bool operator!=(const GeneratorBasis& a, const GeneratorBasis& b) { return !(a == b); }

  private:
    ScalarMode mode_ = ScalarMode::symbolic;
    std::vector<std::string> labels_;
    std::vector<Int> primes_;
};

// Exponent vector of a scalar in a fixed generator basis.  Addition is
// multiplication in k^x; the zero vector is the scalar 1.
class ExponentVector {
  public:
    ExponentVector() = default;
    explicit ExponentVector(std::vector<Int> e) : e_(std::move(e)) {}

    static ExponentVector zero(std::size_t m) { return ExponentVector(std::vector<Int>(m)); }
    static ExponentVector unit(std::size_t m, std::size_t i) {
        auto v = zero(m);
        v.e_[i] = 1;
        return v;
    }

    std::size_t size() const noexcept { return e_.size(); }
    const Int& operator[](std::size_t i) const { return e_[i]; }
    Int& operator[](std::size_t i) { return e_[i]; }
    const std::vector<Int>& entries() const noexcept { return e_; }

    bool is_zero() const {
        for (const Int& x : e_)
            if (x != 0) return false;
        return true;
    }

    ExponentVector& operator+=(const ExponentVector& o) {
        check_same_size(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
        return *this;
    }
    friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }

    ExponentVector& operator-=(const ExponentVector& o) {
        check_same_size(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
        return *this;
    }
    friend ExponentVector operator-(ExponentVector a, const ExponentVector& b) { return a -= b; }

    ExponentVector operator-() const {
        ExponentVector r = *this;
        for (Int& x : r.e_) x = -x;
        return r;
    }

    friend ExponentVector operator*(const Int& c, ExponentVector v) {
        for (Int& x : v.e_) x *= c;
        return v;
    }

    friend bool operator==(const ExponentVector& a, const ExponentVector& b) { return a.e_ == b.e_; }
    friend bool operator!=(const ExponentVector& a, const ExponentVector& b) { return !(a == b); }
    friend bool operator<(const ExponentVector& a, const ExponentVector& b) { return a.e_ < b.e_; }

  private:
    void check_same_size(const ExponentVector& o) const {
        if (e_.size() != o.e_.size())
            fail(ErrorKind::length_mismatch, "exponent vectors over different bases");
    }
    std::vector<Int> e_;
};

inline ExponentVector mul(const ExponentVector& a, const ExponentVector& b) { return a + b; }
inline ExponentVector inv(const ExponentVector& a) { return -a; }

// mu * g^e with mu a nonzero exact rational.  In rational mode all content
// lives in the exponents and mu is +-1.
struct UnitMonomial {
    Rat coeff;
    ExponentVector exps;

    UnitMonomial() : coeff(1) {}
    UnitMonomial(Rat c, ExponentVector e) : coeff(std::move(c)), exps(std::move(e)) {
        if (coeff == 0) fail(ErrorKind::non_unit_rational, "unit monomial with zero coefficient");
    }

    static UnitMonomial one(std::size_t m) { return UnitMonomial(Rat(1), ExponentVector::zero(m)); }

    bool is_one() const { return coeff == 1 && exps.is_zero(); }

    friend UnitMonomial operator*(const UnitMonomial& a, const UnitMonomial& b) {
        return UnitMonomial(a.coeff * b.coeff, a.exps + b.exps);
    }
    friend bool operator==(const UnitMonomial& a, const UnitMonomial& b) {
        return a.coeff == b.coeff && a.exps == b.exps;
    }
    friend bool operator!=(const UnitMonomial& a, const UnitMonomial& b) { return !(a == b); }
};

// ---------------------------------------------------------------------------
// prime factorization (trial division, probable-prime early exit)

inline std::map<Int, Int> factor_positive(Int n) {
    std::map<Int, Int> out;
    if (n <= 1) return out;
    Int p = 2;
    while (p * p <= n) {
        if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            Int& e = out[p];
            do {
                mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
                ++e;
            } while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()));
            if (n == 1) return out;
            if (mpz_probab_prime_p(n.get_mpz_t(), 40) != 0) break;
        }
        p += (p == 2) ? 1 : 2;
    }
    ++out[n];
    return out;
}

// ---------------------------------------------------------------------------
// scalar grammar
//
//   scalar   := rational | monomial
//   monomial := term ('*' term)*
//   term     := label ('^' signed-integer)?
//   rational := signed-integer ('/' positive-integer)?
//
// Whitespace-insensitive.  In rational mode a term label is an integer
// >= 2 (factored into primes); in symbolic mode it is an identifier.

namespace detail {

struct ScalarTerm {
    std::string label;  // empty for the rational alternative
    Int exponent{1};
    Rat value{0};  // rational alternative
};

struct ParsedScalar {
    bool is_rational = false;
    Rat value{0};
    std::vector<ScalarTerm> terms;
};

inline bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline ParsedScalar parse_scalar_text(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty()) fail(ErrorKind::parse, "empty scalar");

    ParsedScalar out;
    std::size_t pos = 0;
    auto read_signed_int = [&]() -> Int {
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        while (pos < s.size() && is_digit(s[pos])) ++pos;
        if (pos == start || (pos == start + 1 && !is_digit(s[start])))
            fail(ErrorKind::parse, "expected integer in scalar '" + raw + "'");
        return Int(s.substr(start, pos - start));
    };

    const bool has_structure = s.find('*') != std::string::npos || s.find('^') != std::string::npos;
    const bool starts_numeric = s[0] == '+' || s[0] == '-' || is_digit(s[0]);

    if (starts_numeric && !has_structure) {
        Int num = read_signed_int();
        Int den = 1;
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            den = read_signed_int();
            if (den <= 0) fail(ErrorKind::parse, "denominator must be positive in '" + raw + "'");
        }
        if (pos != s.size()) fail(ErrorKind::parse, "trailing characters in scalar '" + raw + "'");
        out.is_rational = true;
        out.value = Rat(num, den);
        out.value.canonicalize();
        return out;
    }

    for (;;) {
        ScalarTerm t;
        std::size_t start = pos;
        if (pos < s.size() && is_ident_start(s[pos])) {
            while (pos < s.size() && is_ident_char(s[pos])) ++pos;
        } else {
            while (pos < s.size() && is_digit(s[pos])) ++pos;
        }
        if (pos == start) fail(ErrorKind::parse, "expected generator in scalar '" + raw + "'");
        t.label = s.substr(start, pos - start);
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            t.exponent = read_signed_int();
        }
        out.terms.push_back(std::move(t));
        if (pos == s.size()) break;
        if (s[pos] != '*') fail(ErrorKind::parse, "unexpected '" + std::string(1, s[pos]) +
                                                      "' in scalar '" + raw + "'");
        ++pos;
    }
    return out;
}

// rational ingestion: signed value -> prime exponent map; rejects 0 and
// torsion (negative) inputs
inline std::map<Int, Int> rational_exponents(const Rat& value) {
    if (value == 0) fail(ErrorKind::non_unit_rational, "scalar 0 is not a unit of the field");
    if (value < 0)
        fail(ErrorKind::torsion_scalar,
             "negative scalar " + value.get_str() + " introduces 2-torsion; multiparameters must be torsion-free");
    std::map<Int, Int> exps = factor_positive(Int(value.get_num()));
    for (const auto& [p, e] : factor_positive(Int(value.get_den()))) exps[p] -= e;
    return exps;
}

// all primes a scalar text mentions (rational mode first ingestion pass)
inline void collect_scalar_primes(const std::string& text, std::vector<Int>& primes) {
    ParsedScalar ps = parse_scalar_text(text);
    auto add = [&primes](const std::map<Int, Int>& exps) {
        for (const auto& [p, e] : exps)
            if (e != 0) primes.push_back(p);
    };
    if (ps.is_rational) {
        add(rational_exponents(ps.value));
        return;
    }
    for (const auto& t : ps.terms) {
        if (is_ident_start(t.label[0]))
            fail(ErrorKind::parse, "symbolic generator '" + t.label + "' in a rational-mode file");
        Int base(t.label);
        if (base < 2)
            fail(ErrorKind::non_unit_rational, "base " + t.label + " is not a unit generator");
        add(factor_positive(base));
    }
}

}  // namespace detail

inline ExponentVector parse_scalar(const std::string& text, const GeneratorBasis& basis) {
    detail::ParsedScalar ps = detail::parse_scalar_text(text);
    ExponentVector v = ExponentVector::zero(basis.size());

    if (basis.mode() == ScalarMode::rational) {
        std::map<Int, Int> exps;
        if (ps.is_rational) {
            exps = detail::rational_exponents(ps.value);
        } else {
            for (const auto& t : ps.terms) {
                if (detail::is_ident_start(t.label[0]))
                    fail(ErrorKind::parse,
                         "symbolic generator '" + t.label + "' in a rational-mode file");
                Int base(t.label);
                if (base < 2)
                    fail(ErrorKind::non_unit_rational, "base " + t.label + " is not a unit generator");
                for (const auto& [p, e] : factor_positive(base)) exps[p] += e * t.exponent;
            }
        }
        for (const auto& [p, e] : exps) {
            if (e == 0) continue;
            auto idx = basis.index_of_prime(p);
            if (!idx)
                fail(ErrorKind::internal,
                     "prime " + p.get_str() + " missing from basis (ingestion must extend first)");
            v[*idx] += e;
        }
        return v;
    }

    if (ps.is_rational) {
        // only the identity is representable as a bare number over symbolic generators
        if (ps.value == 0) fail(ErrorKind::non_unit_rational, "scalar 0 is not a unit of the field");
        if (ps.value < 0)
            fail(ErrorKind::torsion_scalar,
                 "negative scalar " + ps.value.get_str() + " introduces 2-torsion");
        if (ps.value != 1)
            fail(ErrorKind::parse, "numeric scalar " + ps.value.get_str() +
                                       " is outside the symbolic generator group; declare a generator "
                                       "or use rational mode");
        return v;
    }

    for (const auto& t : ps.terms) {
        auto idx = basis.index_of_label(t.label);
        if (!idx)
            fail(ErrorKind::unknown_generator, "generator '" + t.label + "' is not declared");
        v[*idx] += t.exponent;
    }
    return v;
}

// Canonical renderer; parse_scalar(render_scalar(v)) == v.
inline std::string render_scalar(const ExponentVector& v, const GeneratorBasis& basis) {
    if (basis.mode() == ScalarMode::rational) {
        Rat value(1);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (v[i] == 0) continue;
            Int pw;
            Int e = v[i] > 0 ? v[i] : Int(-v[i]);
            mpz_pow_ui(pw.get_mpz_t(), basis.primes()[i].get_mpz_t(), e.get_ui());
            if (v[i] > 0)
                value *= Rat(pw);
            else
                value /= Rat(pw);
        }
        value.canonicalize();
        return value.get_str();
    }
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (v[i] == 0) continue;
        if (!first) os << "*";
        os << basis.labels()[i];
        if (v[i] != 1) os << "^" << v[i].get_str();
        first = false;
    }
    if (first) return "1";
    return os.str();
}

// Torsion-free rank of the subgroup generated by the given scalars.
inline std::size_t subgroup_rank(const std::vector<ExponentVector>& gens) {
    if (gens.empty()) return 0;
    std::vector<std::vector<Int>> rows;
    rows.reserve(gens.size());
    for (const auto& g : gens) rows.push_back(g.entries());
    return rank(IntegerMatrix::from_rows(std::move(rows), gens.front().size()));
}

}  // namespace qtorus
