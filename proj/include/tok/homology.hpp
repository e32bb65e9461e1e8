#pragma once

#include "tok/linalg.hpp"
#include "tok/numeric.hpp"
#include "tok/poly.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

namespace tok {

template <class R>
using Column = std::map<std::size_t, R>;

/// A finite complex with a single grading. The differential lowers delta by
/// two; d[j] holds the image of basis element j.
template <class R>
struct GradedComplex {
    std::vector<int> delta;
    std::vector<long> position;       // bookkeeping order (cube vertex for twisted complexes)
    std::vector<std::size_t> origin;  // index of the generator in the complex this was derived from
    std::vector<Column<R>> d;

    std::size_t size() const { return delta.size(); }

    std::size_t add_generator(int deg, long pos = 0)
    {
        delta.push_back(deg);
        position.push_back(pos);
        origin.push_back(origin.size());
        d.emplace_back();
        return delta.size() - 1;
    }

    void add_entry(std::size_t src, std::size_t dst, const R& v)
    {
        if (src >= size() || dst >= size()) throw std::out_of_range("complex entry out of range");
        if (v == R(0)) return;
        auto [it, inserted] = d[src].try_emplace(dst, v);
        if (!inserted) {
            it->second += v;
            if (it->second == R(0)) d[src].erase(it);
        }
    }

    R entry(std::size_t src, std::size_t dst) const
    {
        auto it = d.at(src).find(dst);
        return it == d[src].end() ? R(0) : it->second;
    }

    std::size_t nonzeros() const
    {
        std::size_t n = 0;
        for (const auto& c : d) n += c.size();
        return n;
    }
};

/// Column-sparse product A∘B (apply B first).
template <class R>
std::vector<Column<R>> compose(const std::vector<Column<R>>& a, const std::vector<Column<R>>& b)
{
    std::vector<Column<R>> out(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        for (const auto& [mid, bv] : b[j]) {
            for (const auto& [row, av] : a.at(mid)) {
                R prod = av * bv;
                auto [it, inserted] = out[j].try_emplace(row, prod);
                if (!inserted) {
                    it->second += prod;
                    if (it->second == R(0)) out[j].erase(it);
                }
            }
        }
    }
    return out;
}

template <class R>
std::vector<Column<R>> add_columns(std::vector<Column<R>> a, const std::vector<Column<R>>& b)
{
    for (std::size_t j = 0; j < b.size(); ++j) {
        for (const auto& [row, v] : b[j]) {
            auto [it, inserted] = a.at(j).try_emplace(row, v);
            if (!inserted) {
                it->second += v;
                if (it->second == R(0)) a[j].erase(it);
            }
        }
    }
    return a;
}

template <class R>
bool all_zero(const std::vector<Column<R>>& m)
{
    return std::all_of(m.begin(), m.end(), [](const Column<R>& c) { return c.empty(); });
}

/// First nonzero entry of d∘d as (source, target), if any.
template <class R>
std::optional<std::pair<std::size_t, std::size_t>> d_squared_witness(const GradedComplex<R>& c)
{
    auto sq = compose(c.d, c.d);
    for (std::size_t j = 0; j < sq.size(); ++j)
        if (!sq[j].empty()) return std::make_pair(j, sq[j].begin()->first);
    return std::nullopt;
}

template <class R>
bool d_squared_check(const GradedComplex<R>& c)
{
    return !d_squared_witness(c).has_value();
}

/// Every nonzero entry lowers delta by exactly two.
template <class R>
bool is_homogeneous(const GradedComplex<R>& c)
{
    for (std::size_t j = 0; j < c.size(); ++j)
        for (const auto& [i, v] : c.d[j])
            if (c.delta[i] != c.delta[j] - 2) return false;
    return true;
}

// ---------------------------------------------------------------------------

struct DeltaHomology {
    int delta = 0;
    std::size_t rank = 0;
    std::vector<Integer> torsion;
    friend bool operator==(const DeltaHomology&, const DeltaHomology&) = default;
};

struct HomologyResult {
    std::vector<DeltaHomology> groups;  // ascending delta, nonzero groups only

    std::size_t total_rank() const
    {
        std::size_t t = 0;
        for (const auto& g : groups) t += g.rank;
        return t;
    }
    bool torsion_free() const
    {
        return std::all_of(groups.begin(), groups.end(), [](const DeltaHomology& g) { return g.torsion.empty(); });
    }
    std::map<int, std::size_t> ranks() const
    {
        std::map<int, std::size_t> out;
        for (const auto& g : groups)
            if (g.rank) out[g.delta] = g.rank;
        return out;
    }
    friend bool operator==(const HomologyResult&, const HomologyResult&) = default;
};

/// Sign attached to delta in the Euler characteristic; flips across each
/// differential step of -2.
inline int euler_sign(int delta)
{
    int half = delta >= 0 ? delta / 2 : -((-delta + 1) / 2);
    return (half % 2 == 0) ? 1 : -1;
}

inline long euler_characteristic(const HomologyResult& h)
{
    long chi = 0;
    for (const auto& g : h.groups) chi += euler_sign(g.delta) * static_cast<long>(g.rank);
    return chi;
}

template <class R>
long euler_characteristic(const GradedComplex<R>& c)
{
    long chi = 0;
    for (int deg : c.delta) chi += euler_sign(deg);
    return chi;
}

inline nlohmann::json homology_to_json(const HomologyResult& h)
{
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : h.groups) {
        nlohmann::json tors = nlohmann::json::array();
        for (const auto& t : g.torsion) {
            if (t <= Integer(std::numeric_limits<long long>::max())) tors.push_back(static_cast<long long>(t));
            else tors.push_back(t.str());
        }
        groups.push_back({{"delta", g.delta}, {"rank", g.rank}, {"torsion", tors}});
    }
    return {{"delta_graded", groups}};
}

namespace detail {

/// The differential restricted to C_delta -> C_{delta-2}, rows indexed by
/// targets.
template <class R>
SparseMatrix<R> block(const GradedComplex<R>& c, const std::map<int, std::vector<std::size_t>>& by_delta, int deg)
{
    static const std::vector<std::size_t> none;
    auto src_it = by_delta.find(deg);
    auto dst_it = by_delta.find(deg - 2);
    const auto& src = src_it == by_delta.end() ? none : src_it->second;
    const auto& dst = dst_it == by_delta.end() ? none : dst_it->second;
    std::map<std::size_t, std::size_t> row_of;
    for (std::size_t r = 0; r < dst.size(); ++r) row_of[dst[r]] = r;
    SparseMatrix<R> m(dst.size(), src.size());
    for (std::size_t col = 0; col < src.size(); ++col)
        for (const auto& [target, v] : c.d[src[col]]) m.set(row_of.at(target), col, v);
    return m;
}

template <class R>
std::map<int, std::vector<std::size_t>> group_by_delta(const GradedComplex<R>& c)
{
    if (!is_homogeneous(c)) throw std::invalid_argument("differential is not homogeneous of delta-degree -2");
    if (!d_squared_check(c)) throw std::invalid_argument("differential does not square to zero");
    std::map<int, std::vector<std::size_t>> by;
    for (std::size_t j = 0; j < c.size(); ++j) by[c.delta[j]].push_back(j);
    return by;
}

}  // namespace detail

/// Delta-graded homology over Z via Smith normal forms.
inline HomologyResult homology_z(const GradedComplex<Integer>& c)
{
    auto by = detail::group_by_delta(c);
    std::map<int, SmithForm> out;  // SNF of the map leaving C_delta
    for (const auto& [deg, idx] : by) out[deg] = smith_normal_form(detail::block(c, by, deg));
    HomologyResult h;
    for (const auto& [deg, idx] : by) {
        DeltaHomology g;
        g.delta = deg;
        std::size_t in_rank = 0;
        auto in = out.find(deg + 2);
        if (in != out.end()) {
            in_rank = in->second.rank;
            for (const auto& dv : in->second.divisors)
                if (dv > 1) g.torsion.push_back(dv);
        }
        g.rank = idx.size() - out[deg].rank - in_rank;
        if (g.rank || !g.torsion.empty()) h.groups.push_back(g);
    }
    return h;
}

/// Delta-graded homology over Q by rank-nullity.
inline HomologyResult homology_q(const GradedComplex<Rational>& c)
{
    auto by = detail::group_by_delta(c);
    std::map<int, std::size_t> out;
    for (const auto& [deg, idx] : by) out[deg] = rank_q(detail::block(c, by, deg));
    HomologyResult h;
    for (const auto& [deg, idx] : by) {
        auto in = out.find(deg + 2);
        std::size_t rank = idx.size() - out[deg] - (in == out.end() ? 0 : in->second);
        if (rank) h.groups.push_back({deg, rank, {}});
    }
    return h;
}

using PivotFilter = std::function<bool(std::size_t src, std::size_t dst)>;

/// Gaussian elimination of the complex. Repeatedly takes the entry accepted
/// by `filter` that is smallest in (delta, position, source, target) order,
/// removes its two generators and adds the zig-zag correction
/// d(z->w) -= d(z->y) d(x->y)^{-1} d(x->w) to every other entry.
template <class R>
GradedComplex<R> cancel(const GradedComplex<R>& input, const PivotFilter& filter)
{
    const std::size_t n = input.size();
    std::vector<Column<R>> cols = input.d;
    std::vector<std::set<std::size_t>> sources(n);
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [i, v] : cols[j]) sources[i].insert(j);
    std::vector<bool> alive(n, true);

    auto set_entry = [&](std::size_t src, std::size_t dst, const R& v) {
        if (v == R(0)) {
            cols[src].erase(dst);
            sources[dst].erase(src);
        } else {
            cols[src][dst] = v;
            sources[dst].insert(src);
        }
    };

    while (true) {
        std::optional<std::tuple<int, long, std::size_t, std::size_t>> best;
        for (std::size_t x = 0; x < n; ++x) {
            if (!alive[x]) continue;
            for (const auto& [y, v] : cols[x]) {
                if (!filter(x, y)) continue;
                auto key = std::make_tuple(input.delta[x], input.position[x], x, y);
                if (!best || key < *best) best = key;
            }
        }
        if (!best) break;
        const std::size_t x = std::get<2>(*best), y = std::get<3>(*best);
        const R pivot = cols[x].at(y);
        if (!is_unit(pivot)) throw std::invalid_argument("cancel: selected pivot is not invertible");
        const R inv = unit_inverse(pivot);

        const Column<R> out_x = cols[x];
        const std::vector<std::size_t> into_y(sources[y].begin(), sources[y].end());
        for (std::size_t z : into_y) {
            if (z == x) continue;
            const R zy = cols[z].at(y);
            for (const auto& [w, xw] : out_x) {
                if (w == y) continue;
                auto it = cols[z].find(w);
                R cur = it == cols[z].end() ? R(0) : it->second;
                set_entry(z, w, cur - zy * inv * xw);
            }
        }
        for (std::size_t g : {x, y}) {
            for (const auto& [t, v] : Column<R>(cols[g])) set_entry(g, t, R(0));
            for (std::size_t s : std::vector<std::size_t>(sources[g].begin(), sources[g].end())) set_entry(s, g, R(0));
            alive[g] = false;
        }
    }

    GradedComplex<R> out;
    std::vector<std::size_t> new_index(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!alive[j]) continue;
        new_index[j] = out.size();
        out.delta.push_back(input.delta[j]);
        out.position.push_back(input.position[j]);
        out.origin.push_back(j);
        out.d.emplace_back();
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!alive[j]) continue;
        for (const auto& [i, v] : cols[j]) out.d[new_index[j]][new_index.at(i)] = v;
    }
    return out;
}

inline GradedComplex<Rational> evaluate(const GradedComplex<Poly>& c, std::span<const Rational> values)
{
    GradedComplex<Rational> out;
    out.delta = c.delta;
    out.position = c.position;
    out.origin = c.origin;
    out.d.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (const auto& [i, p] : c.d[j]) {
            Rational v = evaluate(p, values);
            if (v != 0) out.d[j][i] = v;
        }
    }
    return out;
}

/// The same complex over Z when every coefficient is a constant.
inline std::optional<GradedComplex<Integer>> to_integer(const GradedComplex<Poly>& c)
{
    GradedComplex<Integer> out;
    out.delta = c.delta;
    out.position = c.position;
    out.origin = c.origin;
    out.d.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (const auto& [i, p] : c.d[j]) {
            auto k = p.constant();
            if (!k) return std::nullopt;
            out.d[j][i] = *k;
        }
    }
    return out;
}

inline GradedComplex<Rational> to_rational(const GradedComplex<Integer>& c)
{
    GradedComplex<Rational> out;
    out.delta = c.delta;
    out.position = c.position;
    out.origin = c.origin;
    out.d.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j)
        for (const auto& [i, v] : c.d[j]) out.d[j][i] = Rational(v);
    return out;
}

}  // namespace tok
