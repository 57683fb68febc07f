#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qtorus/algebra.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/scalars.hpp"

// Line-oriented presentation files.
//
//   # comment to end of line
//   [torus]
//   n = 4
//   mode = symbolic            # or rational; defaults to symbolic
//   generators = q1 q2 q3     # symbolic mode only
//   q 1 4 = q1                 # sparse entries, i < j, 1-indexed,
//   q 2 4 = q2                 # unspecified entries default to 1
//   q 3 4 = q3
//
//   [sigma]                    # optional scalar automorphism block
//   generators = p1 p2 p3 p4   # fresh symbolic labels (optional)
//   p 1 = p1                   # sigma(X_i) = p_i X_i, default p_i = 1
//
// Entries with i >= j are rejected: the lower triangle is determined by
// antisymmetry, and accepting both halves would invite contradictions.
// In rational mode the generator basis is the sorted set of primes
// occurring in any scalar of the file (q and sigma jointly).
namespace qtorus {

struct ParsedInput {
    QTorusPresentation presentation;
    std::optional<ScalarAutomorphismSpec> sigma;
    std::vector<std::string> assumptions;
};

namespace detail {

[[noreturn]] inline void fail_at(ErrorKind kind, const std::string& message, std::size_t line,
                                 std::size_t column) {
    throw QtError(kind, message, line, column);
}

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::size_t parse_index(const std::string& tok, std::size_t line, std::size_t col,
                               const char* what) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) {
            return c >= '0' && c <= '9';
        }))
        fail_at(ErrorKind::parse, std::string("expected a positive ") + what + ", got '" + tok + "'",
                line, col);
    std::size_t v = 0;
    for (char c : tok) {
        v = v * 10 + static_cast<std::size_t>(c - '0');
        if (v > 1000000) fail_at(ErrorKind::parse, std::string(what) + " out of range", line, col);
    }
    if (v == 0) fail_at(ErrorKind::parse, std::string(what) + " must be at least 1", line, col);
    return v;
}

inline void check_label(const std::string& s, std::size_t line, std::size_t col) {
    if (s.empty() || !is_ident_start(s[0]) ||
        !std::all_of(s.begin(), s.end(), [](char c) { return is_ident_char(c); }))
        fail_at(ErrorKind::parse,
                "generator label '" + s + "' must be an identifier (letters, digits, _)", line, col);
}

}  // namespace detail

inline ParsedInput parse_presentation(const std::string& text) {
    using detail::fail_at;

    struct Entry {
        std::size_t i = 0, j = 0;
        std::string scalar;
        std::size_t line = 0, col = 0;
    };
    std::optional<std::size_t> n;
    std::optional<ScalarMode> mode;
    std::vector<std::string> torus_labels, sigma_labels;
    std::vector<Entry> q_entries, p_entries;
    bool saw_torus = false, saw_sigma = false;
    enum class Section { none, torus, sigma } section = Section::none;

    std::istringstream input(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(input, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t col0 = raw.find_first_not_of(" \t") + 1;

        if (line == "[torus]") {
            if (saw_torus) fail_at(ErrorKind::parse, "duplicate [torus] section", lineno, col0);
            saw_torus = true;
            section = Section::torus;
            continue;
        }
        if (line == "[sigma]") {
            if (saw_sigma) fail_at(ErrorKind::parse, "duplicate [sigma] section", lineno, col0);
            if (!saw_torus)
                fail_at(ErrorKind::parse, "[sigma] must follow the [torus] section", lineno, col0);
            saw_sigma = true;
            section = Section::sigma;
            continue;
        }
        if (line.front() == '[')
            fail_at(ErrorKind::parse, "unknown section '" + line + "'", lineno, col0);
        if (section == Section::none)
            fail_at(ErrorKind::parse, "expected a [torus] section before any entries", lineno, col0);

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail_at(ErrorKind::parse, "expected 'key = value'", lineno, col0);
        const std::vector<std::string> keys = detail::split_ws(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (keys.empty()) fail_at(ErrorKind::parse, "missing key before '='", lineno, col0);
        const std::size_t vcol = raw.find('=') + 2;

        if (section == Section::torus) {
            if (keys.size() == 1 && keys[0] == "n") {
                if (n) fail_at(ErrorKind::parse, "duplicate n", lineno, col0);
                n = detail::parse_index(value, lineno, vcol, "rank n");
            } else if (keys.size() == 1 && keys[0] == "mode") {
                if (mode) fail_at(ErrorKind::parse, "duplicate mode", lineno, col0);
                if (value == "symbolic")
                    mode = ScalarMode::symbolic;
                else if (value == "rational")
                    mode = ScalarMode::rational;
                else
                    fail_at(ErrorKind::parse, "mode must be 'symbolic' or 'rational'", lineno, vcol);
            } else if (keys.size() == 1 && keys[0] == "generators") {
                torus_labels = detail::split_ws(value);
                for (const auto& l : torus_labels) detail::check_label(l, lineno, vcol);
            } else if (keys[0] == "q" && keys.size() == 3) {
                Entry e;
                e.i = detail::parse_index(keys[1], lineno, col0, "row index");
                e.j = detail::parse_index(keys[2], lineno, col0, "column index");
                e.scalar = value;
                e.line = lineno;
                e.col = vcol;
                if (e.i >= e.j)
                    fail_at(ErrorKind::parse,
                            "entries must satisfy i < j (the rest follows by antisymmetry)", lineno,
                            col0);
                for (const auto& prev : q_entries)
                    if (prev.i == e.i && prev.j == e.j)
                        fail_at(ErrorKind::parse,
                                "duplicate entry q " + keys[1] + " " + keys[2], lineno, col0);
                q_entries.push_back(std::move(e));
            } else {
                fail_at(ErrorKind::parse, "unknown [torus] line; expected n, mode, generators, or q i j",
                        lineno, col0);
            }
        } else {
            if (keys.size() == 1 && keys[0] == "generators") {
                sigma_labels = detail::split_ws(value);
                for (const auto& l : sigma_labels) detail::check_label(l, lineno, vcol);
            } else if (keys[0] == "p" && keys.size() == 2) {
                Entry e;
                e.i = detail::parse_index(keys[1], lineno, col0, "index");
                e.scalar = value;
                e.line = lineno;
                e.col = vcol;
                for (const auto& prev : p_entries)
                    if (prev.i == e.i)
                        fail_at(ErrorKind::parse, "duplicate entry p " + keys[1], lineno, col0);
                p_entries.push_back(std::move(e));
            } else {
                fail_at(ErrorKind::parse, "unknown [sigma] line; expected generators or p i", lineno,
                        col0);
            }
        }
    }

    if (!saw_torus) fail(ErrorKind::parse, "missing [torus] section");
    if (!n) fail(ErrorKind::parse, "missing 'n = <rank>' in [torus]");
    const ScalarMode m = mode.value_or(ScalarMode::symbolic);
    for (const auto& e : q_entries)
        if (e.j > *n)
            fail_at(ErrorKind::parse, "column index exceeds n = " + std::to_string(*n), e.line, e.col);
    for (const auto& e : p_entries)
        if (e.i > *n)
            fail_at(ErrorKind::parse, "index exceeds n = " + std::to_string(*n), e.line, e.col);

    GeneratorBasis basis;
    if (m == ScalarMode::symbolic) {
        for (const auto& l : sigma_labels)
            if (std::find(torus_labels.begin(), torus_labels.end(), l) != torus_labels.end())
                fail(ErrorKind::overlapping_generators,
                     "sigma generator '" + l +
                         "' is already a torus generator; use fresh labels (shared scalars may "
                         "still be written as expressions in torus generators)");
        std::vector<std::string> all = torus_labels;
        all.insert(all.end(), sigma_labels.begin(), sigma_labels.end());
        basis = GeneratorBasis::symbolic(std::move(all));
    } else {
        if (!torus_labels.empty() || !sigma_labels.empty())
            fail(ErrorKind::parse, "generator lists are for symbolic mode; rational mode derives "
                                   "its basis from the primes in the entries");
        std::vector<Int> primes;
        auto scan = [&primes](const Entry& e) {
            try {
                detail::collect_scalar_primes(e.scalar, primes);
            } catch (const QtError& err) {
                throw QtError(err.kind(), err.message(), e.line, e.col);
            }
        };
        for (const auto& e : q_entries) scan(e);
        for (const auto& e : p_entries) scan(e);
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        basis = GeneratorBasis::rational(std::move(primes));
    }

    auto parse_entry = [&basis](const Entry& e) {
        try {
            return parse_scalar(e.scalar, basis);
        } catch (const QtError& err) {
            throw QtError(err.kind(), err.message(), e.line, e.col);
        }
    };

    std::map<std::pair<std::size_t, std::size_t>, ExponentVector> upper;
    for (const auto& e : q_entries) upper[{e.i - 1, e.j - 1}] = parse_entry(e);
    ParsedInput out;
    out.presentation = QTorusPresentation::from_upper(*n, basis, upper);
    out.presentation.validate();

    if (saw_sigma) {
        ScalarAutomorphismSpec sigma;
        sigma.p.assign(*n, ExponentVector::zero(basis.size()));
        for (const auto& e : p_entries) sigma.p[e.i - 1] = parse_entry(e);
        out.sigma = std::move(sigma);
    }

    if (m == ScalarMode::symbolic && basis.size() > 0)
        out.assumptions.push_back(
            "declared generators are taken to be multiplicatively independent in the base field");
    return out;
}

}  // namespace qtorus
