#pragma once

#include "tok/diagram.hpp"

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

namespace tok {

/// Closure of a braid word on `strands` strands. Generator +k crosses
/// strands k and k+1 with the strand coming from the left passing over;
/// -k is its inverse. Strands are oriented upward, so +k is a positive
/// crossing. Untouched strands become free loops.
inline MarkedDiagram braid_closure(int strands, const std::vector<int>& word)
{
    if (strands < 1) throw InputError("braid needs at least one strand");
    std::vector<int> current(strands);
    for (int p = 0; p < strands; ++p) current[p] = p + 1;
    int next = strands + 1;
    std::vector<Crossing> cs;
    std::vector<int> signs;
    for (int g : word) {
        const int k = std::abs(g) - 1;
        if (g == 0 || k + 1 >= strands) throw InputError("braid generator out of range: " + std::to_string(g));
        const int bl = current[k], br = current[k + 1];
        const int tl = next++, tr = next++;
        Crossing c;
        c.ends = {br, tr, tl, bl};  // counterclockwise from bottom right
        c.over = g > 0 ? 1 : 0;
        cs.push_back(c);
        signs.push_back(g > 0 ? 1 : -1);
        current[k] = tl;
        current[k + 1] = tr;
    }
    int free_loops = 0;
    for (int p = 0; p < strands; ++p) {
        if (current[p] == p + 1) {
            ++free_loops;
            continue;
        }
        for (auto& c : cs)
            for (int& e : c.ends)
                if (e == current[p]) e = p + 1;
    }
    // Compact the labels to 1..2n in order of first appearance.
    std::map<int, int> relabel;
    for (auto& c : cs)
        for (int e : c.ends) relabel.try_emplace(e, 0);
    int label = 1;
    for (auto& [old, fresh] : relabel) fresh = label++;
    for (auto& c : cs)
        for (int& e : c.ends) e = relabel.at(e);
    return MarkedDiagram(std::move(cs), {}, std::nullopt, free_loops, signs);
}

/// Diagram from PD quadruples X[i,j,k,l] listed counterclockwise from the
/// incoming under strand, with consecutive labels along the orientation.
inline MarkedDiagram from_pd(const std::vector<std::array<int, 4>>& pd)
{
    std::vector<Crossing> cs;
    for (const auto& q : pd) {
        Crossing c;
        c.ends = q;
        c.over = 1;
        cs.push_back(c);
    }
    return MarkedDiagram(std::move(cs), {});
}

namespace corpus {

inline MarkedDiagram unknot0() { return MarkedDiagram({}, {}, std::nullopt, 1); }
inline MarkedDiagram unknot1() { return braid_closure(2, {1}); }
inline MarkedDiagram unknot2() { return braid_closure(3, {1, 2}); }
inline MarkedDiagram hopf() { return braid_closure(2, {1, 1}); }
inline MarkedDiagram trefoil() { return from_pd({{{1, 4, 2, 5}}, {{3, 6, 4, 1}}, {{5, 2, 6, 3}}}); }
inline MarkedDiagram figure_eight() { return from_pd({{{4, 2, 5, 1}}, {{8, 6, 1, 5}}, {{6, 3, 7, 4}}, {{2, 7, 3, 8}}}); }
inline MarkedDiagram knot_5_1()
{
    return from_pd({{{1, 6, 2, 7}}, {{3, 8, 4, 9}}, {{5, 10, 6, 1}}, {{7, 2, 8, 3}}, {{9, 4, 10, 5}}});
}
inline MarkedDiagram knot_5_2()
{
    return from_pd({{{1, 4, 2, 5}}, {{3, 8, 4, 9}}, {{5, 10, 6, 1}}, {{9, 6, 10, 7}}, {{7, 2, 8, 3}}});
}
/// A 6-crossing non-alternating closed braid of the knot 5_2.
inline MarkedDiagram nonalternating6() { return braid_closure(3, {1, 1, 1, 2, -1, 2}); }

struct Entry {
    std::string name;
    MarkedDiagram diagram;
    bool knot;
};

/// The named diagrams, with arrows at their defaults.
inline std::vector<Entry> standard()
{
    return {{"unknot0", unknot0(), true},       {"unknot1", unknot1(), true},
            {"unknot2", unknot2(), true},       {"hopf", hopf(), false},
            {"trefoil", trefoil(), true},       {"figure_eight", figure_eight(), true},
            {"5_1", knot_5_1(), true},          {"5_2", knot_5_2(), true},
            {"nonalt6", nonalternating6(), true}};
}

struct MovePair {
    std::string name;
    MarkedDiagram first, second;
};

/// Diagram pairs related by Reidemeister moves.
inline std::vector<MovePair> move_pairs()
{
    std::vector<MovePair> out;
    out.push_back({"unknot R1", unknot0(), unknot1()});
    out.push_back({"unknot R1 negative", unknot0(), braid_closure(2, {-1})});
    out.push_back({"trefoil R1", braid_closure(2, {1, 1, 1}), braid_closure(3, {1, 1, 1, 2})});
    out.push_back({"trefoil R1 negative", braid_closure(2, {1, 1, 1}), braid_closure(3, {1, 1, 1, -2})});
    out.push_back({"trefoil R1 kink", trefoil(), add_kink(trefoil(), 1, 0, 0)});
    out.push_back({"unknot R2", unknot2(), braid_closure(3, {1, 2, -2, 2})});
    out.push_back({"trefoil R2", braid_closure(2, {1, 1, 1}), braid_closure(2, {1, 1, 1, 1, -1})});
    out.push_back({"unknot R3", braid_closure(3, {1, 2, 1, -2}), braid_closure(3, {2, 1, 2, -2})});
    out.push_back({"trefoil R3", braid_closure(3, {1, 2, 1, -2, 1, 1}), braid_closure(3, {2, 1, 2, -2, 1, 1})});
    return out;
}

/// Random closed braid on 2..4 strands using every generator, with
/// random arrows.
inline MarkedDiagram random_braid(std::mt19937& rng, int max_crossings)
{
    std::uniform_int_distribution<int> strand_dist(2, 4);
    while (true) {
        const int strands = strand_dist(rng);
        if (strands - 1 > max_crossings) continue;
        std::uniform_int_distribution<int> len_dist(strands - 1, max_crossings);
        const int len = len_dist(rng);
        std::vector<int> word;
        std::uniform_int_distribution<int> gen(1, strands - 1), coin(0, 1);
        for (int i = 0; i < len; ++i) word.push_back(gen(rng) * (coin(rng) ? 1 : -1));
        std::vector<bool> used(strands, false);
        for (int g : word) used[std::abs(g)] = true;
        bool all = true;
        for (int k = 1; k < strands; ++k) all = all && used[k];
        if (!all) continue;
        MarkedDiagram d = braid_closure(strands, word);
        std::vector<int> arrows;
        for (int i = 0; i < len; ++i) arrows.push_back(coin(rng));
        return d.with_arrows(arrows);
    }
}

/// Random marks: every edge gets 0..2 marks, named x1, x2, ...
inline MarkedDiagram random_marks(const MarkedDiagram& d, std::mt19937& rng)
{
    std::uniform_int_distribution<int> count(0, 2);
    std::vector<Mark> marks;
    for (int e : d.edges())
        for (int k = count(rng); k > 0; --k) marks.push_back({"x" + std::to_string(marks.size() + 1), e});
    return d.with_marks(std::move(marks));
}

}  // namespace corpus

}  // namespace tok
