#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"
#include "sparserow.hpp"

namespace rowfall {

using BigInt = mpz_class;
using Rational = mpq_class;

// mpq_class does not canonicalize raw numerator/denominator pairs on its own.
inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0)
        throw InvalidArgumentError("rational with zero denominator");
    Rational q;
    q.get_num() = num;
    q.get_den() = den;
    q.canonicalize();
    return q;
}

// Arbitrary-precision integers. No division, so row elimination over this
// domain must go through the fraction-free kernel.
struct IntDomain {
    using value_type = BigInt;
    static constexpr bool exact = true;
    static constexpr bool has_division = false;

    bool is_zero(const BigInt& v) const { return sgn(v) == 0; }

    // |a| < |b|
    bool abs_less(const BigInt& a, const BigInt& b) const {
        return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()) < 0;
    }

    // |v| >= gamma * |b|, with gamma in [0, 1] compared exactly.
    bool abs_ge_scaled(const BigInt& v, double gamma, const BigInt& b) const {
        Rational lhs(abs(v));
        Rational rhs = Rational(gamma) * Rational(abs(b));
        return lhs >= rhs;
    }

    std::string to_text(const BigInt& v) const { return v.get_str(); }

    std::optional<BigInt> parse(const std::string& tok) const {
        try {
            return BigInt(tok, 10);
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }
};

// Exact rationals, always kept canonical.
struct RatDomain {
    using value_type = Rational;
    static constexpr bool exact = true;
    static constexpr bool has_division = true;

    bool is_zero(const Rational& v) const { return sgn(v) == 0; }

    bool abs_less(const Rational& a, const Rational& b) const {
        return Rational(abs(a)) < Rational(abs(b));
    }

    bool abs_ge_scaled(const Rational& v, double gamma, const Rational& b) const {
        return Rational(abs(v)) >= Rational(gamma) * Rational(abs(b));
    }

    std::string to_text(const Rational& v) const {
        if (v.get_den() == 1)
            return v.get_num().get_str();
        return v.get_num().get_str() + "/" + v.get_den().get_str();
    }

    std::optional<Rational> parse(const std::string& tok) const {
        auto slash = tok.find('/');
        try {
            if (slash == std::string::npos) {
                Rational q(BigInt(tok, 10));
                return q;
            }
            BigInt num(tok.substr(0, slash), 10);
            BigInt den(tok.substr(slash + 1), 10);
            if (den == 0)
                return std::nullopt;
            return make_rational(num, den);
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }
};

// IEEE doubles with an absolute zero threshold: |v| <= epsilon counts as zero.
struct F64Domain {
    using value_type = double;
    static constexpr bool exact = false;
    static constexpr bool has_division = true;

    double epsilon = 1e-10;

    bool is_zero(double v) const { return std::fabs(v) <= epsilon; }

    bool abs_less(double a, double b) const { return std::fabs(a) < std::fabs(b); }

    bool abs_ge_scaled(double v, double gamma, double b) const {
        return std::fabs(v) >= gamma * std::fabs(b);
    }

    std::string to_text(double v) const {
        // Shortest representation that parses back to the same double.
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    }

    std::optional<double> parse(const std::string& tok) const {
        if (tok.empty())
            return std::nullopt;
        const char* begin = tok.c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end != begin + tok.size())
            return std::nullopt;
        return v;
    }
};

// Field elimination step at the shared start column c:
//   r' = r - (r[c]/u[c]) * u
// Both rows must start at c. The result starts strictly past c (or is null);
// entries that fall below the domain's zero threshold are dropped.
template <typename D>
SparseRow<typename D::value_type>
eliminate_field(const SparseRow<typename D::value_type>& r,
                const SparseRow<typename D::value_type>& u,
                std::int64_t c, const D& dom) {
    using V = typename D::value_type;
    if constexpr (!D::has_division) {
        (void)r; (void)u; (void)c; (void)dom;
        throw DomainError("field elimination needs division; "
                          "use the fraction-free kernel over integers");
        // unreachable, keeps the return type checker happy
    } else {
        if (r.width() != u.width())
            throw InvalidArgumentError("eliminate: row widths differ");
        if (r.start_column() != c || u.start_column() != c)
            throw InvalidArgumentError("eliminate: both rows must start at the pivot column");

        V alpha = r.leading() / u.leading();
        const auto& re = r.entries();
        const auto& ue = u.entries();
        std::vector<typename SparseRow<V>::Entry> out;
        out.reserve(re.size() + ue.size());
        std::size_t i = 1, j = 1; // both position 0 sit at column c, which cancels exactly
        while (i < re.size() || j < ue.size()) {
            if (j >= ue.size() || (i < re.size() && re[i].col < ue[j].col)) {
                out.push_back(re[i]);
                ++i;
            } else if (i >= re.size() || ue[j].col < re[i].col) {
                V v = -alpha * ue[j].val;
                if (!dom.is_zero(v))
                    out.push_back({ue[j].col, std::move(v)});
                ++j;
            } else {
                V v = re[i].val - alpha * ue[j].val;
                if (!dom.is_zero(v))
                    out.push_back({re[i].col, std::move(v)});
                ++i;
                ++j;
            }
        }
        return SparseRow<V>::from_sorted(r.width(), std::move(out));
    }
}

struct FfOptions {
    // Scale the combination by gcd(u[c], r[c]) to keep entries small.
    // With use_gcd off the plain multipliers u[c] and -r[c] are used instead.
    bool use_gcd = true;
    // Divide the result by the gcd of its entries. Off by default; trades
    // divisions for smaller numbers on workloads that suffer from growth.
    bool strip_content = false;
};

// Fraction-free elimination step over the integers at shared start column c:
//   g  = gcd(u[c], r[c])
//   r' = (u[c]/g) * r - (r[c]/g) * u
// Exact cancellation at column c by construction; stays in the integers.
inline SparseRow<BigInt>
eliminate_fraction_free(const SparseRow<BigInt>& r, const SparseRow<BigInt>& u,
                        std::int64_t c, const FfOptions& opt = {}) {
    if (r.width() != u.width())
        throw InvalidArgumentError("eliminate: row widths differ");
    if (r.start_column() != c || u.start_column() != c)
        throw InvalidArgumentError("eliminate: both rows must start at the pivot column");

    BigInt g = 1;
    if (opt.use_gcd)
        g = gcd(u.leading(), r.leading()); // gcd() is non-negative, both args non-zero
    BigInt a = u.leading() / g;
    BigInt b = r.leading() / g;

    const auto& re = r.entries();
    const auto& ue = u.entries();
    std::vector<typename SparseRow<BigInt>::Entry> out;
    out.reserve(re.size() + ue.size());
    std::size_t i = 1, j = 1;
    while (i < re.size() || j < ue.size()) {
        if (j >= ue.size() || (i < re.size() && re[i].col < ue[j].col)) {
            out.push_back({re[i].col, a * re[i].val});
            ++i;
        } else if (i >= re.size() || ue[j].col < re[i].col) {
            out.push_back({ue[j].col, -b * ue[j].val});
            ++j;
        } else {
            BigInt v = a * re[i].val - b * ue[j].val;
            if (v != 0)
                out.push_back({re[i].col, std::move(v)});
            ++i;
            ++j;
        }
    }

    if (opt.strip_content && !out.empty()) {
        BigInt content = 0;
        for (const auto& e : out)
            content = gcd(content, e.val);
        if (content > 1)
            for (auto& e : out)
                e.val /= content;
    }
    return SparseRow<BigInt>::from_sorted(r.width(), std::move(out));
}

} // namespace rowfall
