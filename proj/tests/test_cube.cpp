#include "tok/checks.hpp"
#include "tok/corpus.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace tok;

namespace {

std::vector<MarkedDiagram> corpus_marked()
{
    std::vector<MarkedDiagram> out;
    for (const auto& e : corpus::standard()) out.push_back(fully_marked(e.diagram));
    return out;
}

// Reduced odd Khovanov complex over Z: no marks, d_odd only.
HomologyResult odd_reduced(const MarkedDiagram& d)
{
    const MarkedDiagram plain = d.with_marks({}).with_basepoint(d.edges().front());
    return homology_z(*to_integer(build_complex(plain, true).as_graded(true, false)));
}

}  // namespace

TEST(Homology, TorsionFromSmithForm)
{
    GradedComplex<Integer> c;
    const auto a = c.add_generator(2), b = c.add_generator(0);
    c.add_entry(a, b, Integer(2));
    const HomologyResult h = homology_z(c);
    EXPECT_EQ(h.total_rank(), 0u);
    ASSERT_EQ(h.groups.size(), 1u);
    EXPECT_EQ(h.groups[0].delta, 0);
    EXPECT_EQ(h.groups[0].torsion, std::vector<Integer>{2});
    EXPECT_EQ(homology_q(to_rational(c)).total_rank(), 0u);
}

TEST(Homology, RejectsNonComplexes)
{
    GradedComplex<Integer> c;
    const auto a = c.add_generator(4), b = c.add_generator(2), z = c.add_generator(0);
    c.add_entry(a, b, Integer(1));
    c.add_entry(b, z, Integer(1));
    EXPECT_THROW(homology_z(c), std::invalid_argument);
    GradedComplex<Integer> skew;
    const auto p = skew.add_generator(4), q = skew.add_generator(0);
    skew.add_entry(p, q, Integer(1));
    EXPECT_THROW(homology_z(skew), std::invalid_argument);
}

TEST(Homology, EulerCharacteristicOfChainsEqualsHomology)
{
    for (const auto& d : corpus_marked()) {
        const TwistedComplex c = build_complex(d, true);
        const GradedComplex<Rational> q = evaluate(c.total(), Evaluation::generic(d.marks().size()).values);
        EXPECT_EQ(euler_characteristic(homology_q(q)), euler_characteristic(q));
        const GradedComplex<Integer> odd = *to_integer(c.as_graded(true, false));
        EXPECT_EQ(euler_characteristic(homology_z(odd)), euler_characteristic(odd));
    }
}

TEST(Homology, CancellationPreservesHomology)
{
    const MarkedDiagram d = fully_marked(corpus::figure_eight());
    const GradedComplex<Rational> q = evaluate(build_complex(d, true).total(), Evaluation::generic(8, 1).values);
    const GradedComplex<Rational> small = cancel(q, [](std::size_t, std::size_t) { return true; });
    EXPECT_LT(small.size(), q.size());
    EXPECT_TRUE(d_squared_check(small));
    EXPECT_EQ(homology_q(small), homology_q(q));
    // Full cancellation leaves a complex with zero differential.
    EXPECT_TRUE(all_zero(small.d));
    EXPECT_EQ(small.size(), homology_q(q).total_rank());
}

TEST(Cube, GeneratorCounts)
{
    for (const auto& d : corpus_marked()) {
        std::size_t full = 0, reduced = 0;
        for (Vertex v = 0; v < (Vertex(1) << d.crossing_count()); ++v) {
            const std::size_t k = resolve(d, v).size();
            full += std::size_t(1) << k;
            reduced += std::size_t(1) << (k - 1);
        }
        EXPECT_EQ(build_complex(d, false).size(), full);
        EXPECT_EQ(build_complex(d, true).size(), reduced);
    }
}

TEST(Cube, SignSolvesOnCorpus)
{
    for (const auto& d : corpus_marked()) {
        for (Convention conv : {Convention::Standard, Convention::Mirrored}) {
            const Cube cube = build_cube(d, 1, conv);
            EXPECT_TRUE(tau_is_cocycle(cube.signs));
            EXPECT_TRUE(psi_plus_one_is_cocycle(cube.signs));
            EXPECT_TRUE(sigma_solves_tau(cube.signs));
            EXPECT_TRUE(eps_solves_psi(cube.signs));
            EXPECT_TRUE(signed_faces_check(cube).pass);
        }
    }
}

TEST(Cube, SplitsHaveTauZero)
{
    const Cube cube = build_cube(corpus::figure_eight());
    for_each_cube_edge(cube.n(), [&](Vertex v, std::size_t i) {
        const bool split = cube.edge(v, i).kind == EdgeKind::Split;
        EXPECT_EQ(cube.signs.tau[cube.signs.edge(v, i)], split ? 0 : 1);
        EXPECT_EQ(resolve(cube.diagram, v | (Vertex(1) << i)).size(),
                  resolve(cube.diagram, v).size() + (split ? 1 : std::size_t(-1)));
    });
}

TEST(Cube, MirroredConventionSwapsOnlyLadybugs)
{
    const MarkedDiagram d = corpus::nonalternating6();
    const Cube a = build_cube(d), b = build_cube(d, 1, Convention::Mirrored);
    std::size_t ladybugs = 0;
    for_each_cube_face(a.n(), [&](Vertex v, std::size_t i, std::size_t j) {
        const FaceType x = a.face(v, i, j), y = b.face(v, i, j);
        if (x == FaceType::ZeroX || x == FaceType::ZeroY) {
            ++ladybugs;
            EXPECT_NE(x, y);
            EXPECT_TRUE(y == FaceType::ZeroX || y == FaceType::ZeroY);
        } else {
            EXPECT_EQ(x, y);
        }
    });
    EXPECT_GT(ladybugs, 0u);
}

TEST(Cube, NaiveVerticalMapAgainstEdgeMaps)
{
    for (const auto& d : corpus_marked()) {
        const NaiveVerticalReport r = naive_vertical_check(build_cube(d), d);
        EXPECT_TRUE(r.ok()) << r.witness;
    }
}

TEST(Cube, TooManyCrossings)
{
    std::vector<int> word(17, 1);
    EXPECT_THROW(build_cube(braid_closure(2, word)), InputError);
}

TEST(TwistedComplex, SquaresToZeroOnCorpusAndRandomDiagrams)
{
    std::vector<MarkedDiagram> ds = corpus_marked();
    std::mt19937 rng(21);
    for (int k = 0; k < 10; ++k) {
        MarkedDiagram d = corpus::random_marks(corpus::random_braid(rng, 5), rng);
        ds.push_back(d.with_basepoint(d.edges().front()));
    }
    for (const auto& d : ds)
        for (bool reduced : {false, true}) {
            const TwistedComplex c = build_complex(d, reduced, 1, false);
            const ComplexCheck k = check_complex(c);
            EXPECT_TRUE(k.ok());
            EXPECT_TRUE(d_squared_check(c.total()));
            EXPECT_TRUE(is_homogeneous(c.total()));
        }
}

TEST(TwistedComplex, ParallelBuildIsIdentical)
{
    const MarkedDiagram d = fully_marked(corpus::nonalternating6());
    const TwistedComplex a = build_complex(d, true, 1), b = build_complex(d, true, 3);
    EXPECT_EQ(a.d_odd, b.d_odd);
    EXPECT_EQ(a.d_v, b.d_v);
    EXPECT_EQ(complex_to_json(a).dump(), complex_to_json(b).dump());
}

TEST(TwistedComplex, ModTwoIsTheUnsignedComplex)
{
    for (const auto& d : corpus_marked())
        for (bool reduced : {false, true}) EXPECT_TRUE(mod2_matches_unsigned(build_complex(d, reduced)));
}

TEST(TwistedComplex, VerticalDifferentialVanishesWithoutMarks)
{
    const TwistedComplex c = build_complex(corpus::trefoil(), false);
    EXPECT_TRUE(c.vertical_is_zero());
}

TEST(OddKhovanov, ReducedRanksOfSmallKnots)
{
    const std::vector<std::pair<MarkedDiagram, std::size_t>> cases{
        {corpus::unknot1(), 1},      {corpus::unknot2(), 1},  {corpus::trefoil(), 3},
        {corpus::figure_eight(), 5}, {corpus::knot_5_1(), 5}, {corpus::knot_5_2(), 7}};
    for (const auto& [d, rank] : cases) {
        const HomologyResult h = odd_reduced(d);
        EXPECT_EQ(h.total_rank(), rank);
        EXPECT_TRUE(h.torsion_free());
        EXPECT_EQ(h.groups.size(), 1u);  // alternating diagrams are thin
        EXPECT_EQ(Integer(rank), tait_graph(d).spanning_tree_count());
    }
}

TEST(OddKhovanov, MirrorsReflectDelta)
{
    // The PD corpus entries are the mirrors of the braid closures.
    auto reflected = [](const HomologyResult& h) {
        std::map<int, std::size_t> out;
        for (const auto& [delta, rank] : h.ranks()) out[2 - delta] = rank;
        return out;
    };
    EXPECT_EQ(odd_reduced(corpus::nonalternating6()).ranks(), reflected(odd_reduced(corpus::knot_5_2())));
    EXPECT_EQ(odd_reduced(braid_closure(2, {1, 1, 1})).ranks(), reflected(odd_reduced(corpus::trefoil())));
}

TEST(OddKhovanov, IndependentOfArrowsAndBasepoint)
{
    const MarkedDiagram d = corpus::figure_eight();
    const HomologyResult base = odd_reduced(d);
    EXPECT_EQ(odd_reduced(d.with_arrows({1, 0, 1, 1})), base);
    for (int e : d.edges()) {
        const MarkedDiagram b = d.with_basepoint(e);
        EXPECT_EQ(homology_z(*to_integer(build_complex(b, true).as_graded(true, false))), base);
    }
}

TEST(OddKhovanov, ConventionsGiveTheSameHomology)
{
    for (const auto& d : corpus_marked()) {
        const Evaluation ev = Evaluation::generic(d.marks().size());
        const auto a = homology_q(evaluate(build_complex(d, true).total(), ev.values));
        const auto b = homology_q(evaluate(build_complex(d, true, 1, true, Convention::Mirrored).total(), ev.values));
        EXPECT_EQ(a, b);
    }
}

TEST(Export, ComplexJsonShape)
{
    const TwistedComplex c = build_complex(fully_marked(corpus::unknot1()), true);
    const nlohmann::json j = complex_to_json(c);
    EXPECT_TRUE(j.contains("vertices"));
    EXPECT_TRUE(j.contains("d_odd"));
    EXPECT_TRUE(j.contains("d_v"));
}
