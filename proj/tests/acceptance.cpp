// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "tok/checks.hpp"
#include "tok/corpus.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace tok;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream note;
    void require(bool ok, const std::string& what)
    {
        if (!ok && pass) note << " first failure: " << what << ";";
        pass = pass && ok;
    }
};

std::vector<corpus::Entry> corpus_marked()
{
    std::vector<corpus::Entry> out;
    for (auto& e : corpus::standard()) out.push_back({e.name, fully_marked(e.diagram), e.knot});
    return out;
}

std::vector<corpus::Entry> corpus_knots()
{
    std::vector<corpus::Entry> out;
    for (auto& e : corpus_marked())
        if (e.knot && e.diagram.crossing_count() > 0) out.push_back(e);
    return out;
}

std::vector<int> reversed_arrows(const MarkedDiagram& d)
{
    std::vector<int> a;
    for (const auto& c : d.crossings()) a.push_back(1 - c.arrow);
    return a;
}

void criterion_1(Outcome& o)
{
    const auto t0 = Clock::now();
    std::size_t diagrams = 0;
    auto check = [&](const std::string& name, const MarkedDiagram& d) {
        ++diagrams;
        for (bool reduced : {false, true}) {
            if (reduced && !d.basepoint()) continue;
            const TwistedComplex c = build_complex(d, reduced, 1, false);
            o.require(d_squared_check(c.total()), name + (reduced ? " reduced" : ""));
        }
    };
    for (const auto& e : corpus_marked()) check(e.name, e.diagram);
    std::mt19937 rng(2024);
    for (int k = 0; k < 100; ++k) {
        MarkedDiagram d = corpus::random_marks(corpus::random_braid(rng, 6), rng);
        std::uniform_int_distribution<std::size_t> pick(0, d.edges().size() - 1);
        d = d.with_basepoint(d.edges()[pick(rng)]);
        check("random " + std::to_string(k), d);
    }
    const double t = seconds_since(t0);
    o.require(t < 60.0, "runtime");
    o.note << " " << diagrams << " diagrams in " << t << " s;";
}

void criterion_2(Outcome& o)
{
    std::size_t faces = 0;
    for (const auto& e : corpus_marked()) {
        const Cube cube = build_cube(e.diagram);
        o.require(tau_is_cocycle(cube.signs), e.name + " tau");
        o.require(psi_plus_one_is_cocycle(cube.signs), e.name + " psi+1");
        o.require(sigma_solves_tau(cube.signs), e.name + " sigma");
        o.require(eps_solves_psi(cube.signs), e.name + " epsilon");
        for_each_cube_face(cube.n(), [&](Vertex, std::size_t, std::size_t) { ++faces; });
    }
    o.note << " " << faces << " faces;";
}

void criterion_3(Outcome& o)
{
    std::size_t edges = 0;
    for (const auto& e : corpus_marked()) {
        const NaiveVerticalReport r = naive_vertical_check(build_cube(e.diagram), e.diagram);
        o.require(r.ok(), e.name + " " + r.witness);
        edges += r.edges;
    }
    o.note << " " << edges << " edge maps;";
}

void criterion_4(Outcome& o)
{
    std::size_t instances = 0, vanishing = 0;
    for (const auto& e : corpus_marked()) {
        if (e.diagram.crossing_count() > 6) continue;
        for (const MarkedDiagram& d : {e.diagram, e.diagram.with_arrows(reversed_arrows(e.diagram))}) {
            const ScanSummary s = config_pair_scan(build_cube(d));
            o.require(s.failures == 0, e.name);
            instances += s.instances;
            vanishing += s.vanishing;
        }
    }
    o.note << " " << instances << " (rho, c, e) instances, " << vanishing << " with vanishing forward faces;";
}

void criterion_5(Outcome& o)
{
    std::size_t slides = 0, trips = 0;
    for (const auto& e : corpus_knots()) {
        const auto instances = slide_instances(e.diagram);
        for (bool reduced : {false, true})
            for (const auto& in : instances) {
                const SlideMap m = slide_isomorphism(e.diagram, in.mark, in.crossing, in.direction, reduced,
                                                     SlideSigns::Table, in.end);
                o.require(m.ok(), e.name + " " + m.witness);
                ++slides;
            }
        for (const auto& in : instances) {
            o.require(slide_round_trip(e.diagram, in, true, SlideSigns::Table), e.name + " round trip");
            ++trips;
        }
    }
    o.note << " " << slides << " slides, " << trips << " round trips;";
}

void criterion_6(Outcome& o)
{
    const auto t0 = Clock::now();
    const std::vector<std::pair<std::string, MarkedDiagram>> cases{{"trefoil", corpus::trefoil()},
                                                                   {"figure_eight", corpus::figure_eight()}};
    const std::vector<std::size_t> expected{3, 5};
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& [name, d] = cases[k];
        const ReductionReport r = reduction_to_odd_kh(fully_marked(d));
        o.require(r.ok(), name + " " + r.witness);
        o.require(r.vertical_zero, name + " d_v after slides");
        o.require(r.after_slides.total_rank() == expected[k], name + " rank");
        o.require(r.after_slides.torsion_free(), name + " torsion");
        o.require(r.after_slides.groups.size() == 1, name + " thin");
        o.require(tait_graph(d).spanning_tree_count() == Integer(expected[k]), name + " matrix-tree");
        o.note << " " << name << " rank " << r.after_slides.total_rank() << ";";
    }
    const double t = seconds_since(t0);
    o.require(t < 30.0, "runtime");
    o.note << " " << t << " s;";
}

void criterion_7(Outcome& o)
{
    for (const auto& e : corpus_knots()) {
        const TwistedComplex c = build_complex(e.diagram, true);
        const Integer trees = tait_graph(e.diagram).spanning_tree_count();
        for (long offset : {0L, 5L}) {
            const Evaluation ev = Evaluation::generic(e.diagram.marks().size(), offset);
            const SpanningTreeComplex t = build_tree_complex(c, ev);
            o.require(Integer(t.trees.size()) == trees, e.name + " generator count");
            o.require(homology_q(t.complex).ranks() == homology_q(evaluated_complex(c, ev)).ranks(),
                      e.name + " ranks");
        }
    }
    std::size_t pairs = 0;
    for (const auto& d : {corpus::trefoil(), corpus::figure_eight()}) {
        const MarkedDiagram m = fully_marked(d);
        const TwistedComplex c = build_complex(m, true);
        for (long offset : {0L, 5L}) {
            const SpanningTreeComplex t = build_tree_complex(c, Evaluation::generic(m.marks().size(), offset));
            for (auto [a, b] : adjacent_tree_pairs(t, c)) {
                ++pairs;
                o.require(tree_coefficient_check(t, c, a, b).match, "adjacent coefficient");
            }
        }
    }
    o.note << " " << pairs << " adjacent pairs in the trefoil and figure-eight;";
}

void criterion_8(Outcome& o)
{
    std::size_t count = 0;
    for (const auto& p : corpus::move_pairs()) {
        const InvarianceReport r = move_invariance_check(p.first, p.second);
        o.require(r.equal, p.name);
        ++count;
    }
    o.note << " " << count << " move pairs;";
}

void criterion_9(Outcome& o)
{
    std::size_t complexes = 0;
    for (const auto& e : corpus_marked())
        for (bool reduced : {false, true}) {
            o.require(mod2_matches_unsigned(build_complex(e.diagram, reduced)), e.name);
            ++complexes;
        }
    o.note << " " << complexes << " complexes;";
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"d-squared suite", criterion_1},     {"cocycle suite", criterion_2},
        {"naive vertical map suite", criterion_3}, {"configuration pair suite", criterion_4},
        {"slide isomorphism suite", criterion_5},  {"reduction suite", criterion_6},
        {"spanning-tree suite", criterion_7}, {"invariance suite", criterion_8},
        {"mod-2 consistency", criterion_9}};
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            criteria[k].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.note << " exception: " << e.what();
        }
        failed += !o.pass;
        std::printf("criterion %zu %s: %s.%s\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.note.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
