#pragma once

#include "tok/poly.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace tok {

/// An exterior monomial a_{i1} a_{i2} ... with i1 < i2 < ..., stored as a
/// bitmask over circle indices.
using ExtMono = std::uint32_t;

inline int ext_degree(ExtMono m) { return std::popcount(m); }

/// Sign of a_i * m relative to the sorted monomial m | a_i: one transposition
/// for every generator of m with a smaller index. Requires bit i clear in m.
inline int insert_sign(unsigned i, ExtMono m)
{
    ExtMono below = (ExtMono(1) << i) - 1;
    return (std::popcount(m & below) & 1) ? -1 : 1;
}

/// Product of two sorted monomials: the sign of the merge permutation, or
/// nothing when they share a generator.
inline std::optional<int> mono_mul(ExtMono a, ExtMono b)
{
    if (a & b) return std::nullopt;
    int sign = 1;
    // Each generator of a passes every generator of b with a smaller index.
    for (ExtMono rest = a; rest; rest &= rest - 1) {
        unsigned i = static_cast<unsigned>(std::countr_zero(rest));
        if (std::popcount(b & ((ExtMono(1) << i) - 1)) & 1) sign = -sign;
    }
    return sign;
}

/// Applies a map of generators (old index -> new index) to a monomial,
/// returning the sorted image and its Koszul sign, or nothing if two
/// generators collide.
inline std::optional<std::pair<ExtMono, int>> relabel(ExtMono m, const std::vector<int>& image)
{
    std::vector<int> seq;
    for (ExtMono rest = m; rest; rest &= rest - 1) seq.push_back(image[std::countr_zero(rest)]);
    int sign = 1;
    // insertion sort counting transpositions
    for (std::size_t i = 1; i < seq.size(); ++i) {
        for (std::size_t j = i; j > 0 && seq[j - 1] >= seq[j]; --j) {
            if (seq[j - 1] == seq[j]) return std::nullopt;
            std::swap(seq[j - 1], seq[j]);
            sign = -sign;
        }
    }
    ExtMono out = 0;
    for (int v : seq) out |= ExtMono(1) << v;
    return std::make_pair(out, sign);
}

/// Element of the exterior algebra on k circle generators with polynomial
/// coefficients.
class ExtElement {
public:
    using Terms = std::map<ExtMono, Poly>;

    explicit ExtElement(unsigned k = 0) : k_(k) {}

    static ExtElement one(unsigned k) { return monomial(k, 0, Poly(1)); }

    static ExtElement monomial(unsigned k, ExtMono m, const Poly& c)
    {
        if (k < 32 && (m >> k) != 0) throw std::out_of_range("monomial exceeds ambient circle count");
        ExtElement e(k);
        e.add(m, c);
        return e;
    }

    /// The generator a_i (0-based index).
    static ExtElement generator(unsigned k, unsigned i)
    {
        if (i >= k) throw std::out_of_range("circle index out of range");
        return monomial(k, ExtMono(1) << i, Poly(1));
    }

    unsigned ambient() const { return k_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(ExtMono m, const Poly& c)
    {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    ExtElement& operator+=(const ExtElement& o)
    {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    ExtElement operator-() const
    {
        ExtElement r(k_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend ExtElement operator+(ExtElement a, const ExtElement& b) { return a += b; }
    friend ExtElement operator-(ExtElement a, const ExtElement& b) { return a += -b; }
    friend ExtElement operator*(const Poly& s, const ExtElement& v)
    {
        ExtElement r(v.k_);
        for (const auto& [m, c] : v.terms_) r.add(m, s * c);
        return r;
    }
    friend bool operator==(const ExtElement& a, const ExtElement& b)
    {
        return a.k_ == b.k_ && a.terms_ == b.terms_;
    }

    void check_same(const ExtElement& o) const
    {
        if (o.k_ != k_) throw std::invalid_argument("exterior elements over different circle counts");
    }

private:
    unsigned k_;
    Terms terms_;
};

/// Graded-anticommutative product.
inline ExtElement ext_mul(const ExtElement& u, const ExtElement& v)
{
    u.check_same(v);
    ExtElement r(u.ambient());
    for (const auto& [mu, cu] : u.terms()) {
        for (const auto& [mv, cv] : v.terms()) {
            auto s = mono_mul(mu, mv);
            if (!s) continue;
            r.add(mu | mv, cu * cv * Integer(*s));
        }
    }
    return r;
}

/// Left multiplication by w * a_i (0-based circle index).
inline ExtElement left_mult(const Poly& w, unsigned i, const ExtElement& v)
{
    if (i >= v.ambient()) throw std::out_of_range("circle index out of range");
    ExtElement r(v.ambient());
    ExtMono bit = ExtMono(1) << i;
    for (const auto& [m, c] : v.terms()) {
        if (m & bit) continue;
        r.add(m | bit, w * c * Integer(insert_sign(i, m)));
    }
    return r;
}

}  // namespace tok
