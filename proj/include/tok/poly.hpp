#pragma once

#include "tok/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tok {

/// Exponent vector over the mark variables, trailing zeros trimmed.
class Monomial {
public:
    Monomial() = default;

    static Monomial variable(std::size_t index)
    {
        Monomial m;
        m.exps_.assign(index + 1, 0);
        m.exps_[index] = 1;
        return m;
    }

    unsigned exponent(std::size_t var) const { return var < exps_.size() ? exps_[var] : 0; }
    std::size_t width() const { return exps_.size(); }
    unsigned degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0u); }
    bool is_one() const { return exps_.empty(); }

    friend Monomial operator*(const Monomial& a, const Monomial& b)
    {
        Monomial r;
        r.exps_.assign(std::max(a.width(), b.width()), 0);
        for (std::size_t i = 0; i < r.exps_.size(); ++i)
            r.exps_[i] = static_cast<std::uint16_t>(a.exponent(i) + b.exponent(i));
        return r;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;

    // Graded lexicographic order.
    friend bool operator<(const Monomial& a, const Monomial& b)
    {
        unsigned da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        std::size_t w = std::max(a.width(), b.width());
        for (std::size_t i = 0; i < w; ++i) {
            if (a.exponent(i) != b.exponent(i)) return a.exponent(i) > b.exponent(i);
        }
        return false;
    }

private:
    std::vector<std::uint16_t> exps_;
};

/// Multivariate polynomial with arbitrary-precision integer coefficients.
/// Zero coefficients are never stored.
class Poly {
public:
    using Terms = std::map<Monomial, Integer>;

    Poly() = default;
    Poly(long long c) { if (c != 0) terms_.emplace(Monomial{}, Integer(c)); }  // NOLINT
    Poly(const Integer& c) { if (c != 0) terms_.emplace(Monomial{}, c); }      // NOLINT

    static Poly variable(std::size_t index)
    {
        Poly p;
        p.terms_.emplace(Monomial::variable(index), Integer(1));
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// The constant term if the polynomial is constant.
    std::optional<Integer> constant() const
    {
        if (terms_.empty()) return Integer(0);
        if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
        return std::nullopt;
    }

    Poly& operator+=(const Poly& o)
    {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o)
    {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Integer& s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    Poly operator-() const
    {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Integer& s) { return a *= s; }
    friend Poly operator*(const Integer& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b)
    {
        Poly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    void add_term(const Monomial& m, const Integer& c)
    {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    /// Coefficients reduced modulo 2 (result has coefficients in {0,1}).
    Poly mod2() const
    {
        Poly r;
        for (const auto& [m, c] : terms_)
            if (boost::multiprecision::bit_test(boost::multiprecision::abs(c), 0)) r.terms_.emplace(m, 1);
        return r;
    }

    std::string str(std::span<const std::string> names = {}) const
    {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Integer mag = boost::multiprecision::abs(c);
            if (first) {
                if (c < 0) out += "-";
            } else {
                out += c < 0 ? " - " : " + ";
            }
            first = false;
            std::string mono;
            for (std::size_t v = 0; v < m.width(); ++v) {
                for (unsigned e = 0; e < m.exponent(v); ++e) {
                    if (!mono.empty()) mono += "*";
                    mono += v < names.size() ? names[v] : "x" + std::to_string(v + 1);
                }
            }
            if (mono.empty()) out += mag.str();
            else if (mag == 1) out += mono;
            else out += mag.str() + "*" + mono;
        }
        return out;
    }

private:
    Terms terms_;
};

/// Ring homomorphism Z[x] -> Q given by a total assignment of the variables.
inline Rational evaluate(const Poly& p, std::span<const Rational> values)
{
    Rational total = 0;
    for (const auto& [m, c] : p.terms()) {
        Rational term(c);
        for (std::size_t v = 0; v < m.width(); ++v) {
            if (m.exponent(v) == 0) continue;
            if (v >= values.size())
                throw InputError("evaluation is missing variable x" + std::to_string(v + 1));
            for (unsigned e = 0; e < m.exponent(v); ++e) term *= values[v];
        }
        total += term;
    }
    return total;
}

}  // namespace tok
