#pragma once

#include "tok/cube.hpp"
#include "tok/homology.hpp"

#include <json.hpp>

#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace tok {

/// Values substituted for the mark variables. Positive values make every
/// subset sum of weights invertible.
struct Evaluation {
    std::vector<Rational> values;  // indexed like the diagram's marks

    /// x_j -> j (1-based), or x_j -> j + offset.
    static Evaluation generic(std::size_t marks, long offset = 0)
    {
        Evaluation e;
        for (std::size_t j = 0; j < marks; ++j) e.values.emplace_back(static_cast<long>(j + 1) + offset);
        return e;
    }

    /// Parses "x1=1,x2=3/2,..." against the diagram's mark ids.
    static Evaluation parse(const std::string& spec, const MarkedDiagram& d)
    {
        const auto names = d.variable_names();
        Evaluation e;
        e.values.assign(names.size(), Rational(0));
        std::vector<bool> seen(names.size(), false);
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            auto eq = item.find('=');
            if (eq == std::string::npos) throw InputError("evaluation entry '" + item + "' is not name=value");
            std::string name = item.substr(0, eq);
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end()) throw InputError("evaluation names unknown mark '" + name + "'");
            std::size_t k = static_cast<std::size_t>(it - names.begin());
            e.values[k] = parse_rational(item.substr(eq + 1));
            seen[k] = true;
        }
        for (std::size_t k = 0; k < names.size(); ++k)
            if (!seen[k]) throw InputError("evaluation misses mark '" + names[k] + "'");
        e.require_positive();
        return e;
    }

    void require_positive() const
    {
        for (const auto& v : values)
            if (v <= 0) throw InputError("evaluation values must be positive");
    }

    Rational weight(const Poly& w) const { return evaluate(w, values); }
};

/// Homology of (V_rho, sum_i w_i a_i) after evaluation; true when it
/// vanishes. In the reduced case the basepoint circle is divided out.
inline bool koszul_acyclicity_check(const MarkedDiagram& d, Vertex v, const Evaluation& ev, bool reduced)
{
    if (reduced && !d.basepoint()) throw InputError("reduced Koszul check needs a basepoint");
    const Resolution r = resolve(d, v);
    const auto w = circle_weights(d, r);
    const int bp = reduced ? r.circle_of_edge(*d.basepoint()) : -1;
    std::vector<Rational> val(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (static_cast<int>(i) == bp) continue;
        val[i] = ev.weight(w[i]);
        if (val[i] == 0) throw InputError("evaluation kills the weight of circle " + std::to_string(i));
    }

    GradedComplex<Rational> k;
    std::map<ExtMono, std::size_t> idx;
    const ExtMono count = ExtMono(1) << r.size();
    for (ExtMono m = 0; m < count; ++m) {
        if (bp >= 0 && ((m >> bp) & 1u)) continue;
        idx[m] = k.add_generator(-2 * ext_degree(m));
    }
    for (const auto& [m, j] : idx) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            const ExtMono bit = ExtMono(1) << i;
            if ((m & bit) || static_cast<int>(i) == bp) continue;
            k.add_entry(j, idx.at(m | bit), val[i] * insert_sign(static_cast<unsigned>(i), m));
        }
    }
    return homology_q(k).total_rank() == 0;
}

struct SpanningTreeComplex {
    std::vector<Vertex> trees;         // one generator per connected resolution
    GradedComplex<Rational> complex;   // position = vertex
    Evaluation evaluation;
    std::size_t crossings = 0;

    std::size_t index_of(Vertex v) const
    {
        auto it = std::find(trees.begin(), trees.end(), v);
        if (it == trees.end()) throw std::invalid_argument("vertex is not a connected resolution");
        return static_cast<std::size_t>(it - trees.begin());
    }
    Rational coefficient(Vertex from, Vertex to) const { return complex.entry(index_of(from), index_of(to)); }
};

inline std::string rational_string(const Rational& r)
{
    std::ostringstream os;
    os << r;
    return os.str();
}

/// Evaluated reduced twisted complex of a diagram.
inline GradedComplex<Rational> evaluated_complex(const TwistedComplex& c, const Evaluation& ev)
{
    return evaluate(c.total(), ev.values);
}

/// Cancels every vertical entry at a disconnected resolution.
inline SpanningTreeComplex build_tree_complex(const TwistedComplex& c, const Evaluation& ev)
{
    const MarkedDiagram& d = c.diagram;
    if (!c.reduced) throw InputError("spanning-tree complex needs the reduced complex");
    if (d.component_count() != 1) throw InputError("spanning-tree complex needs a knot diagram");
    if (!d.every_edge_marked()) throw InputError("spanning-tree complex needs a mark on every edge");
    if (ev.values.size() != d.marks().size()) throw InputError("evaluation does not match the marks");
    ev.require_positive();

    const auto& res = c.cube->resolutions;
    GradedComplex<Rational> full = evaluated_complex(c, ev);
    GradedComplex<Rational> reduced = cancel(full, [&](std::size_t s, std::size_t t) {
        return full.position[s] == full.position[t] && res[full.position[s]].size() > 1;
    });

    SpanningTreeComplex out;
    out.evaluation = ev;
    out.crossings = d.crossing_count();
    for (std::size_t j = 0; j < reduced.size(); ++j) {
        const Vertex v = static_cast<Vertex>(reduced.position[j]);
        if (res[v].size() != 1) throw InputError("a vertical pivot vanished under the evaluation");
        out.trees.push_back(v);
    }
    std::set<Vertex> distinct(out.trees.begin(), out.trees.end());
    if (distinct.size() != out.trees.size()) throw InvariantError("connected resolution with several generators");
    out.complex = std::move(reduced);
    return out;
}

inline SpanningTreeComplex build_tree_complex(const MarkedDiagram& d, const Evaluation& ev, unsigned jobs = 1)
{
    if (!d.basepoint()) throw InputError("spanning-tree complex needs a basepoint");
    return build_tree_complex(build_complex(d, true, jobs), ev);
}

struct TreeCoefficientReport {
    Vertex from = 0, to = 0;
    std::size_t i = 0, j = 0;
    FaceType face = FaceType::Commute;
    Rational w, w_prime;
    Rational actual;
    Rational predicted;        // |1/w + 1/w'| for X, |1/w - 1/w'| for Y
    bool match = false;        // |actual| == predicted
    int sign = 0;              // actual / predicted, 0 when both vanish
    bool same_side = false;    // non-basepoint circles on the same side of their arcs
    Rational side_predicted;   // prediction with that side parity folded in
    bool side_match = false;
};

/// Compares the induced coefficient between two trees two crossings apart
/// with the sum or difference of the inverse weights.
inline TreeCoefficientReport tree_coefficient_check(const SpanningTreeComplex& t, const TwistedComplex& c, Vertex from,
                                                    Vertex to)
{
    using boost::multiprecision::abs;
    const Vertex diff = from ^ to;
    if (std::popcount(diff) != 2 || (from & diff) != 0)
        throw std::invalid_argument("trees must differ by turning on exactly two crossings");
    const auto& res = c.cube->resolutions;
    if (res[from].size() != 1 || res[to].size() != 1) throw std::invalid_argument("endpoints must be connected resolutions");

    TreeCoefficientReport r;
    r.from = from;
    r.to = to;
    r.i = static_cast<std::size_t>(std::countr_zero(diff));
    r.j = static_cast<std::size_t>(std::countr_zero(diff ^ (Vertex(1) << r.i)));
    const Vertex rho = from | (Vertex(1) << r.i), rho2 = from | (Vertex(1) << r.j);
    if (res[rho].size() != 2 || res[rho2].size() != 2) throw std::invalid_argument("intermediate resolutions must have two circles");

    auto off_base = [&](Vertex v, std::size_t crossing) {
        const int bp = c.basepoint_circle[v];
        const int other = 1 - bp;
        const EdgeMap& e = c.cube->edge(from, crossing);
        return std::make_pair(t.evaluation.weight(circle_weights(c.diagram, res[v])[other]), other == e.left);
    };
    auto [w, left] = off_base(rho, r.i);
    auto [w2, left2] = off_base(rho2, r.j);
    r.w = w;
    r.w_prime = w2;
    if (w == 0 || w2 == 0) throw InputError("evaluation kills a circle weight");
    r.face = classify_face(*c.cube, from, r.i, r.j);
    const bool x = r.face == FaceType::ZeroX;
    if (r.face != FaceType::ZeroX && r.face != FaceType::ZeroY) throw InvariantError("tree face is not a vanishing configuration");

    r.actual = t.coefficient(from, to);
    const Rational sum = abs(1 / w + 1 / w2), difference = abs(1 / w - 1 / w2);
    r.predicted = x ? sum : difference;
    r.match = abs(r.actual) == r.predicted;
    r.sign = r.actual == 0 ? 0 : (r.actual > 0 ? 1 : -1);
    r.same_side = left == left2;
    r.side_predicted = (x == r.same_side) ? sum : difference;
    r.side_match = abs(r.actual) == r.side_predicted;
    return r;
}

/// All pairs of trees that differ by turning on two crossings through
/// two-circle intermediate resolutions.
inline std::vector<std::pair<Vertex, Vertex>> adjacent_tree_pairs(const SpanningTreeComplex& t, const TwistedComplex& c)
{
    std::vector<std::pair<Vertex, Vertex>> out;
    const auto& res = c.cube->resolutions;
    for (Vertex a : t.trees)
        for (Vertex b : t.trees) {
            const Vertex diff = a ^ b;
            if (std::popcount(diff) != 2 || (a & diff) != 0) continue;
            const std::size_t i = static_cast<std::size_t>(std::countr_zero(diff));
            const Vertex rest = diff ^ (Vertex(1) << i);
            if (res[a | (Vertex(1) << i)].size() == 2 && res[a | rest].size() == 2) out.emplace_back(a, b);
        }
    return out;
}

inline nlohmann::json tree_complex_to_json(const SpanningTreeComplex& t)
{
    nlohmann::json j;
    j["generators"] = nlohmann::json::array();
    for (std::size_t k = 0; k < t.trees.size(); ++k)
        j["generators"].push_back({{"resolution", vertex_string(t.trees[k], t.crossings)}, {"delta", t.complex.delta[k]}});
    j["differential"] = nlohmann::json::array();
    for (std::size_t s = 0; s < t.complex.size(); ++s)
        for (const auto& [d, v] : t.complex.d[s])
            j["differential"].push_back({vertex_string(t.trees[s], t.crossings), vertex_string(t.trees[d], t.crossings),
                                         rational_string(v)});
    nlohmann::json ev = nlohmann::json::array();
    for (const auto& v : t.evaluation.values) ev.push_back(rational_string(v));
    j["evaluation"] = ev;
    return j;
}

}  // namespace tok
