#include "tok/corpus.hpp"
#include "tok/diagram_json.hpp"
#include "tok/exterior.hpp"
#include "tok/linalg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <map>
#include <random>
#include <set>

using namespace tok;

namespace {

// Sign of the permutation sorting `seq`, by counting inversions.
int inversion_sign(const std::vector<unsigned>& seq)
{
    int inv = 0;
    for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = a + 1; b < seq.size(); ++b)
            if (seq[a] > seq[b]) ++inv;
    return inv % 2 ? -1 : 1;
}

std::vector<unsigned> bits_of(ExtMono m)
{
    std::vector<unsigned> out;
    for (unsigned i = 0; i < 32; ++i)
        if ((m >> i) & 1u) out.push_back(i);
    return out;
}

struct UnionFind {
    std::map<int, int> parent;
    int find(int x)
    {
        parent.try_emplace(x, x);
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Circle count from edge connectivity alone: at resolution r the strands
// hug corners u+r and u+r+2, joining ends (t, t+1) for each hugged corner t.
std::size_t circles_by_union_find(const MarkedDiagram& d, Vertex v)
{
    UnionFind uf;
    for (int e : d.edges()) uf.find(e);
    for (std::size_t i = 0; i < d.crossing_count(); ++i) {
        const Crossing& c = d.crossing(i);
        const int t = mod4(c.under_end() + vertex_bit(v, i));
        uf.unite(c.ends[t], c.ends[mod4(t + 1)]);
        uf.unite(c.ends[mod4(t + 2)], c.ends[mod4(t + 3)]);
    }
    std::set<int> roots;
    for (int e : d.edges())
        if (!d.is_free_edge(e)) roots.insert(uf.find(e));
    return roots.size() + static_cast<std::size_t>(d.free_loops());
}

Integer leibniz_det(const std::vector<std::vector<long long>>& a)
{
    std::vector<unsigned> p(a.size());
    std::iota(p.begin(), p.end(), 0u);
    Integer total = 0;
    do {
        Integer term = inversion_sign(p);
        for (std::size_t r = 0; r < a.size(); ++r) term *= a[r][p[r]];
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

}  // namespace

TEST(Rational, ParsesFractionsAndIntegers)
{
    EXPECT_EQ(parse_rational("3/2"), Rational(3) / 2);
    EXPECT_EQ(parse_rational("-4"), Rational(-4));
    EXPECT_EQ(parse_rational("6/4"), Rational(3) / 2);
    EXPECT_THROW(parse_rational("1/0"), InputError);
    EXPECT_THROW(parse_rational("abc"), InputError);
}

TEST(Poly, RingArithmetic)
{
    const Poly x = Poly::variable(0), y = Poly::variable(1);
    const Poly sq = (x + y) * (x + y);
    EXPECT_EQ(sq, x * x + Poly(2) * x * y + y * y);
    EXPECT_EQ((x - y) * (x + y), x * x - y * y);
    EXPECT_TRUE((x - x).is_zero());
    EXPECT_EQ(sq.mod2(), x * x + y * y);
    const std::vector<Rational> vals{Rational(2), Rational(1) / 3};
    EXPECT_EQ(evaluate(sq, vals), (Rational(7) / 3) * (Rational(7) / 3));
    EXPECT_EQ(Poly(5).constant(), Integer(5));
    EXPECT_FALSE(x.constant().has_value());
}

TEST(Exterior, InsertSignMatchesPermutationSign)
{
    for (ExtMono m = 0; m < 64; ++m)
        for (unsigned i = 0; i < 6; ++i) {
            if ((m >> i) & 1u) continue;
            std::vector<unsigned> seq{i};
            for (unsigned b : bits_of(m)) seq.push_back(b);
            EXPECT_EQ(insert_sign(i, m), inversion_sign(seq)) << m << " " << i;
        }
}

TEST(Exterior, ProductIsGradedAnticommutative)
{
    const unsigned k = 4;
    for (ExtMono a = 0; a < 16; ++a)
        for (ExtMono b = 0; b < 16; ++b) {
            const ExtElement u = ExtElement::monomial(k, a, Poly(1)), v = ExtElement::monomial(k, b, Poly(1));
            const ExtElement uv = ext_mul(u, v), vu = ext_mul(v, u);
            if (a & b) {
                EXPECT_TRUE(uv.is_zero());
                continue;
            }
            const int sign = (ext_degree(a) * ext_degree(b)) % 2 ? -1 : 1;
            EXPECT_EQ(uv, Integer(sign) * vu);
            std::vector<unsigned> seq = bits_of(a);
            for (unsigned x : bits_of(b)) seq.push_back(x);
            EXPECT_EQ(uv, ExtElement::monomial(k, a | b, Poly(inversion_sign(seq))));
        }
}

TEST(Exterior, RelabelFollowsTheImageOrder)
{
    const std::vector<int> image{2, 0, 1};
    for (ExtMono m = 0; m < 8; ++m) {
        auto r = relabel(m, image);
        ASSERT_TRUE(r.has_value());
        std::vector<unsigned> seq;
        ExtMono target = 0;
        for (unsigned b : bits_of(m)) {
            seq.push_back(static_cast<unsigned>(image[b]));
            target |= ExtMono(1) << image[b];
        }
        EXPECT_EQ(r->first, target);
        EXPECT_EQ(r->second, inversion_sign(seq));
    }
    EXPECT_FALSE(relabel(0b11, {0, 0}).has_value());
}

TEST(Exterior, LeftMultiplicationSquaresToZero)
{
    const ExtElement v = ExtElement::monomial(3, 0b010, Poly::variable(0));
    const ExtElement once = left_mult(Poly(3), 0, v);
    EXPECT_EQ(once, ExtElement::monomial(3, 0b011, Poly(3) * Poly::variable(0)));
    EXPECT_TRUE(left_mult(Poly(1), 0, once).is_zero());
}

TEST(Smith, KnownSmallMatrix)
{
    const SmithForm s = smith_normal_form(IntMatrix::from_rows({{2, 4}, {4, 8}}));
    EXPECT_EQ(s.rank, 1u);
    ASSERT_EQ(s.divisors.size(), 1u);
    EXPECT_EQ(s.divisors[0], 2);
}

TEST(Smith, DivisorChainAndDeterminant)
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> entry(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<long long>> rows(4, std::vector<long long>(4));
        for (auto& r : rows)
            for (auto& x : r) x = entry(rng);
        const SmithForm s = smith_normal_form(IntMatrix::from_rows(rows));
        RatMatrix q(4, 4);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) q.set(r, c, Rational(rows[r][c]));
        EXPECT_EQ(s.rank, rank_q(q));
        for (std::size_t i = 0; i + 1 < s.divisors.size(); ++i) EXPECT_EQ(s.divisors[i + 1] % s.divisors[i], 0);
        const Integer det = leibniz_det(rows);
        if (det != 0) {
            Integer prod = 1;
            for (const auto& d : s.divisors) prod *= d;
            EXPECT_EQ(prod, boost::multiprecision::abs(det));
        } else {
            EXPECT_LT(s.rank, 4u);
        }
    }
}

TEST(Diagram, CorpusSignsAndComponents)
{
    EXPECT_EQ(corpus::trefoil().n_plus() + corpus::trefoil().n_minus(), 3);
    EXPECT_EQ(std::abs(corpus::trefoil().n_plus() - corpus::trefoil().n_minus()), 3);
    EXPECT_EQ(corpus::figure_eight().n_plus(), 2);
    EXPECT_EQ(corpus::figure_eight().n_minus(), 2);
    EXPECT_EQ(corpus::hopf().component_count(), 2u);
    EXPECT_EQ(corpus::unknot0().component_count(), 1u);
    EXPECT_EQ(braid_closure(2, {1, 1, 1}).n_plus(), 3);
    EXPECT_EQ(braid_closure(2, {-1, -1, -1}).n_minus(), 3);
    for (const auto& e : corpus::standard()) EXPECT_EQ(e.knot, e.diagram.component_count() == 1) << e.name;
}

TEST(Diagram, InferredSignsAgreeWithBraidSigns)
{
    std::mt19937 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const MarkedDiagram b = corpus::random_braid(rng, 6);
        const MarkedDiagram inferred(b.crossings(), {}, std::nullopt, b.free_loops());
        if (inferred.component_count() != 1) continue;  // orientation of a link is a choice
        EXPECT_EQ(inferred.n_plus(), b.n_plus());
        EXPECT_EQ(inferred.n_minus(), b.n_minus());
    }
}

TEST(Diagram, CircleCountsMatchUnionFind)
{
    std::mt19937 rng(9);
    std::vector<MarkedDiagram> ds;
    for (const auto& e : corpus::standard()) ds.push_back(e.diagram);
    for (int k = 0; k < 20; ++k) ds.push_back(corpus::random_braid(rng, 6));
    for (const auto& d : ds)
        for (Vertex v = 0; v < (Vertex(1) << d.crossing_count()); ++v)
            EXPECT_EQ(resolve(d, v).size(), circles_by_union_find(d, v));
}

TEST(Diagram, TaitTreesCountConnectedResolutions)
{
    EXPECT_EQ(tait_graph(corpus::trefoil()).spanning_tree_count(), 3);
    EXPECT_EQ(tait_graph(corpus::figure_eight()).spanning_tree_count(), 5);
    EXPECT_EQ(tait_graph(corpus::knot_5_1()).spanning_tree_count(), 5);
    EXPECT_EQ(tait_graph(corpus::knot_5_2()).spanning_tree_count(), 7);
    std::mt19937 rng(13);
    for (int k = 0; k < 20; ++k) {
        const MarkedDiagram d = corpus::random_braid(rng, 6);
        std::size_t connected = 0;
        for (Vertex v = 0; v < (Vertex(1) << d.crossing_count()); ++v)
            connected += circles_by_union_find(d, v) == 1;
        EXPECT_EQ(tait_graph(d).spanning_tree_count(), Integer(connected));
        EXPECT_EQ(connected_vertices(d).size(), connected);
    }
}

TEST(Diagram, CircleWeightsSumMarks)
{
    const MarkedDiagram d = corpus::trefoil().with_auto_marks();
    for (Vertex v = 0; v < 8; ++v) {
        const Resolution r = resolve(d, v);
        Poly total;
        for (const Poly& w : circle_weights(d, r)) total += w;
        Poly expect;
        for (std::size_t j = 0; j < d.marks().size(); ++j) expect += Poly::variable(j);
        EXPECT_EQ(total, expect);
    }
}

TEST(Diagram, KinkChangesWrithe)
{
    const MarkedDiagram t = corpus::trefoil();
    EXPECT_EQ(add_kink(t, 1, 0, 0).n_plus(), t.n_plus() + 1);
    EXPECT_EQ(add_kink(t, 1, 1, 0).n_minus(), t.n_minus() + 1);
    EXPECT_EQ(add_kink(t, 1, 0, 0).component_count(), 1u);
}

TEST(DiagramJson, RoundTrip)
{
    const MarkedDiagram d = corpus::trefoil().with_auto_marks().with_basepoint(2).with_arrow(1, 1);
    const MarkedDiagram e = parse_diagram(diagram_to_json(d).dump());
    EXPECT_EQ(diagram_to_json(e), diagram_to_json(d));
    EXPECT_EQ(e.n_plus(), d.n_plus());
}

TEST(DiagramJson, RejectsBadInput)
{
    EXPECT_THROW(parse_diagram("{"), InputError);
    EXPECT_THROW(parse_diagram("[]"), InputError);
    EXPECT_THROW(parse_diagram(R"({"crossings":[{"ends":[1,2,3],"over":0,"arrow":0}]})"), InputError);
    EXPECT_THROW(parse_diagram(R"({"crossings":[{"ends":[1,1,2,2],"over":2,"arrow":0}]})"), InputError);
    // Edge 3 appears only once.
    EXPECT_THROW(parse_diagram(R"({"crossings":[{"ends":[1,2,3,4],"over":0,"arrow":0}]})"), InputError);
    EXPECT_THROW(parse_diagram(R"({"crossings":[], "free_loops":1, "marks":[{"id":"x1","edge":7}]})"), InputError);
    EXPECT_THROW(parse_diagram(R"({"crossings":[], "free_loops":1, "basepoint":9})"), InputError);
}
