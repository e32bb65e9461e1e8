#pragma once

#include "tok/spantree.hpp"
#include "tok/verify.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tok {

struct CheckOptions {
    bool reduced = false;
    unsigned jobs = 1;
    std::optional<Evaluation> evaluation;   // generic when empty
    std::optional<MarkedDiagram> against;   // second diagram for "invariance"
    SlideSigns slide_signs = SlideSigns::Table;
};

/// Every signed 2-face of the cube anticommutes on every basis monomial.
inline CheckResult signed_faces_check(const Cube& cube)
{
    CheckResult r{"faces", "", true, ""};
    std::size_t count = 0;
    for_each_cube_face(cube.n(), [&](Vertex v, std::size_t i, std::size_t j) {
        if (!r.pass) return;
        ++count;
        const Vertex vi = v | (Vertex(1) << i), vj = v | (Vertex(1) << j);
        const EdgeMap &a1 = cube.edge(v, i), &a2 = cube.edge(vi, j);
        const EdgeMap &b1 = cube.edge(v, j), &b2 = cube.edge(vj, i);
        const int sa = cube.edge_sign(v, i) * cube.edge_sign(vi, j);
        const int sb = cube.edge_sign(v, j) * cube.edge_sign(vj, i);
        const ExtMono top = ExtMono(1) << a1.source_circles;
        for (ExtMono m = 0; m < top; ++m) {
            std::map<ExtMono, int> sum;
            auto run = [&](const EdgeMap& first, const EdgeMap& second, int s) {
                first.for_each_term(m, [&](ExtMono mid, int c1) {
                    second.for_each_term(mid, [&](ExtMono t, int c2) {
                        if ((sum[t] += s * c1 * c2) == 0) sum.erase(t);
                    });
                });
            };
            run(a1, a2, sa);
            run(b1, b2, sb);
            if (!sum.empty()) {
                r.pass = false;
                r.witness = "face at " + vertex_string(v, cube.n()) + " crossings " + std::to_string(i) + "," +
                            std::to_string(j) + " on " + mono_string(m);
                return;
            }
        }
    });
    r.instance = std::to_string(count) + " faces";
    return r;
}

namespace detail {

inline CheckResult from_bool(std::string name, std::string instance, bool pass, std::string witness)
{
    return {std::move(name), std::move(instance), pass, pass ? std::string() : std::move(witness)};
}

inline std::vector<CheckResult> d2_checks(const MarkedDiagram& d, const CheckOptions& o)
{
    const TwistedComplex c = build_complex(d, o.reduced, o.jobs, false);
    const ComplexCheck k = check_complex(c);
    std::vector<CheckResult> out;
    out.push_back(from_bool("d2", "d_odd", k.odd_squared, "d_odd squared is not zero"));
    out.push_back(from_bool("d2", "d_v", k.vertical_squared, "d_v squared is not zero"));
    out.push_back(from_bool("d2", "d_odd d_v + d_v d_odd", k.anticommute, "the differentials do not anticommute"));
    out.push_back(from_bool("d2", "homogeneous", k.homogeneous && k.descends, "differential is not delta-homogeneous"));
    const auto w = d_squared_witness(c.total());
    out.push_back(from_bool("d2", "total", !w,
                            w ? "entry " + std::to_string(w->first) + " -> " + std::to_string(w->second) : ""));
    return out;
}

inline std::vector<CheckResult> cocycle_checks(const Cube& cube)
{
    const SignData& s = cube.signs;
    return {from_bool("cocycles", "tau", tau_is_cocycle(s), "tau is not a cocycle"),
            from_bool("cocycles", "psi+1", psi_plus_one_is_cocycle(s), "psi+1 is not a cocycle"),
            from_bool("cocycles", "sigma", sigma_solves_tau(s), "delta sigma != tau"),
            from_bool("cocycles", "epsilon", eps_solves_psi(s), "delta epsilon != psi+1")};
}

inline std::vector<CheckResult> config_checks(const MarkedDiagram& d)
{
    std::vector<CheckResult> out;
    auto one = [&](const MarkedDiagram& x, const std::string& label) {
        const ScanSummary s = config_pair_scan(build_cube(x));
        std::string w;
        if (s.first_failure) {
            const ConfigReport& f = *s.first_failure;
            w = "vertex " + vertex_string(f.vertex, x.crossing_count()) + " c " + std::to_string(f.c) + " e " +
                std::to_string(f.e);
        }
        out.push_back(from_bool("config", label + ": " + std::to_string(s.instances) + " instances",
                                s.failures == 0, w));
    };
    one(d, "arrows as given");
    std::vector<int> flipped;
    for (std::size_t i = 0; i < d.crossing_count(); ++i) flipped.push_back(1 - d.crossing(i).arrow);
    one(d.with_arrows(flipped), "arrows reversed");
    return out;
}

inline std::string slide_label(const MarkedDiagram& d, const SlideInstance& in, bool reduced)
{
    return "mark " + d.marks()[in.mark].id + " crossing " + std::to_string(in.crossing) + " end " +
           std::to_string(in.end) + (in.direction == SlideDirection::Over ? " over" : " under") +
           (reduced ? " reduced" : "");
}

inline std::vector<CheckResult> slide_checks(const MarkedDiagram& d, const CheckOptions& o)
{
    std::vector<CheckResult> out;
    if (o.reduced && !d.basepoint()) throw InputError("reduced slide checks need a basepoint");
    const auto instances = slide_instances(d);
    std::vector<CheckResult> results(instances.size());
    parallel_for(instances.size(), o.jobs, [&](std::size_t k) {
        const SlideInstance& in = instances[k];
        const SlideMap m = slide_isomorphism(d, in.mark, in.crossing, in.direction, o.reduced, o.slide_signs, in.end);
        std::string w = m.witness;
        bool pass = m.ok();
        if (pass && !slide_matches_unsigned(m)) {
            pass = false;
            w = "F mod 2 differs from the unsigned map";
        }
        results[k] = from_bool("slide", slide_label(d, in, o.reduced), pass, w);
    });
    out.insert(out.end(), results.begin(), results.end());
    return out;
}

inline std::vector<CheckResult> round_trip_checks(const MarkedDiagram& d, const CheckOptions& o)
{
    if (o.reduced && !d.basepoint()) throw InputError("reduced slide checks need a basepoint");
    const auto instances = slide_instances(d);
    std::vector<CheckResult> out(instances.size());
    parallel_for(instances.size(), o.jobs, [&](std::size_t k) {
        const bool pass = slide_round_trip(d, instances[k], o.reduced, o.slide_signs);
        out[k] = from_bool("roundtrip", slide_label(d, instances[k], o.reduced), pass,
                           "sliding back does not give the identity");
    });
    return out;
}

inline CheckResult local_checks(const Cube& cube)
{
    std::size_t count = 0;
    for (Vertex v = 0; v < cube.vertex_count(); ++v)
        for (std::size_t c = 0; c < cube.n(); ++c) {
            if (vertex_bit(v, c)) continue;
            ++count;
            if (!local_relations_check(cube, v, c).ok())
                return from_bool("local", "", false,
                                 "vertex " + vertex_string(v, cube.n()) + " crossing " + std::to_string(c));
        }
    return from_bool("local", std::to_string(count) + " squares", true, "");
}

inline HomologyResult evaluated(const MarkedDiagram& d, const CheckOptions& o)
{
    const MarkedDiagram m = fully_marked(d);
    const Evaluation ev = o.evaluation && o.evaluation->values.size() == m.marks().size()
                              ? *o.evaluation
                              : Evaluation::generic(m.marks().size());
    return evaluated_homology(m, ev, o.jobs);
}

inline std::string ranks_string(const HomologyResult& h)
{
    std::string s;
    for (const auto& [delta, rank] : h.ranks()) s += (s.empty() ? "" : " ") + std::to_string(delta) + ":" + std::to_string(rank);
    return s.empty() ? "0" : s;
}

}  // namespace detail

/// Names accepted by run_checks, in the order they run for "all".
inline const std::vector<std::string>& check_names()
{
    static const std::vector<std::string> names{"d2",    "cocycles", "vertical", "faces",     "config", "local",
                                                "mod2",  "slide",    "roundtrip", "reduction", "koszul",  "spantree",
                                                "r1",    "invariance"};
    return names;
}

/// Runs the named checks on a diagram. Input problems throw InputError.
inline std::vector<CheckResult> run_checks(const MarkedDiagram& d, const std::vector<std::string>& names,
                                           const CheckOptions& o)
{
    using namespace detail;
    std::vector<CheckResult> out;
    std::optional<Cube> cube_store;
    auto cube = [&]() -> const Cube& {
        if (!cube_store) cube_store = build_cube(d, o.jobs);
        return *cube_store;
    };
    auto append = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };

    for (const std::string& name : names) {
        if (name == "d2") {
            append(d2_checks(d, o));
        } else if (name == "cocycles") {
            append(cocycle_checks(cube()));
        } else if (name == "vertical") {
            const NaiveVerticalReport r = naive_vertical_check(cube(), d);
            out.push_back(from_bool("vertical", std::to_string(r.edges) + " edges", r.ok(), r.witness));
        } else if (name == "faces") {
            out.push_back(signed_faces_check(cube()));
        } else if (name == "config") {
            append(config_checks(d));
        } else if (name == "local") {
            out.push_back(local_checks(cube()));
        } else if (name == "mod2") {
            out.push_back(from_bool("mod2", o.reduced ? "reduced" : "unreduced",
                                    mod2_matches_unsigned(build_complex(d, o.reduced, o.jobs)),
                                    "mod 2 reduction differs from the unsigned complex"));
        } else if (name == "slide") {
            append(slide_checks(d, o));
        } else if (name == "roundtrip") {
            append(round_trip_checks(d, o));
        } else if (name == "reduction") {
            for (bool backwards : {false, true}) {
                const ReductionReport r = reduction_to_odd_kh(d, backwards, o.slide_signs);
                out.push_back(from_bool("reduction",
                                        std::string(backwards ? "against" : "along") + " the orientation, " +
                                            std::to_string(r.slides) + " slides, ranks " + ranks_string(r.direct),
                                        r.ok(), r.witness));
            }
        } else if (name == "koszul") {
            const Evaluation ev = o.evaluation ? *o.evaluation : Evaluation::generic(d.marks().size());
            if (ev.values.size() != d.marks().size()) throw InputError("evaluation does not match the marks");
            std::size_t bad = 0;
            Vertex first_bad = 0;
            for (Vertex v = 0; v < (Vertex(1) << d.crossing_count()); ++v) {
                const Resolution r = resolve(d, v);
                const auto w = circle_weights(d, r);
                bool weighted = true;
                const int bp = o.reduced && d.basepoint() ? r.circle_of_edge(*d.basepoint()) : -1;
                for (std::size_t i = 0; i < w.size(); ++i)
                    if (static_cast<int>(i) != bp && w[i].is_zero()) weighted = false;
                if (!weighted) continue;
                if (!koszul_acyclicity_check(d, v, ev, o.reduced) && bad++ == 0) first_bad = v;
            }
            out.push_back(from_bool("koszul", "", bad == 0,
                                    "Koszul complex not acyclic at " + vertex_string(first_bad, d.crossing_count())));
        } else if (name == "spantree") {
            const MarkedDiagram m = fully_marked(d);
            const TwistedComplex c = build_complex(m, true, o.jobs);
            for (long offset : {0L, 3L}) {
                const Evaluation ev = Evaluation::generic(m.marks().size(), offset);
                const SpanningTreeComplex t = build_tree_complex(c, ev);
                const Integer trees = tait_graph(m).spanning_tree_count();
                const std::string label = "x_j = j + " + std::to_string(offset);
                out.push_back(from_bool("spantree", label + ": generators", Integer(t.trees.size()) == trees,
                                        std::to_string(t.trees.size()) + " generators, matrix-tree count " +
                                            trees.str()));
                const HomologyResult a = homology_q(t.complex), b = homology_q(evaluated_complex(c, ev));
                out.push_back(from_bool("spantree", label + ": ranks " + ranks_string(a), a.ranks() == b.ranks(),
                                        "full complex ranks " + ranks_string(b)));
            }
        } else if (name == "r1") {
            if (d.crossing_count() == 0) throw InputError("r1 check needs an edge between crossings");
            const MarkedDiagram plain = d.with_marks({});
            const int edge = plain.edges().front();
            for (int over : {0, 1}) {
                const InvarianceReport r = move_invariance_check(plain, add_kink(plain, edge, over, 0));
                out.push_back(from_bool("r1", std::string(over == 0 ? "positive" : "negative") + " kink on edge " +
                                                  std::to_string(edge),
                                        r.equal, ranks_string(r.first) + " vs " + ranks_string(r.second)));
            }
        } else if (name == "invariance") {
            if (!o.against) throw InputError("invariance check needs a second diagram");
            const HomologyResult a = evaluated(d.with_marks({}), o), b = evaluated(o.against->with_marks({}), o);
            out.push_back(from_bool("invariance", ranks_string(a), a.ranks() == b.ranks(), ranks_string(b)));
        } else {
            throw InputError("unknown check '" + name + "'");
        }
    }
    return out;
}

}  // namespace tok
