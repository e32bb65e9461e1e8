#pragma once

#include "tok/cube.hpp"
#include "tok/homology.hpp"
#include "tok/spantree.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tok {

// ---------------------------------------------------------------------------
// Check reports

struct CheckResult {
    std::string name;
    std::string instance;
    bool pass = false;
    std::string witness;  // empty on success
};

inline nlohmann::json check_to_json(const CheckResult& r)
{
    nlohmann::json j{{"name", r.name}, {"instance", r.instance}, {"result", r.pass ? "pass" : "fail"}};
    if (!r.pass) j["witness"] = r.witness;
    return j;
}

/// Describes the first entry where two column-sparse matrices differ.
inline std::optional<std::string> first_difference(const std::vector<Column<Poly>>& a, const std::vector<Column<Poly>>& b,
                                                   const TwistedComplex& c)
{
    const std::size_t n = c.cube->n();
    const auto names = c.diagram.variable_names();
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == b[j]) continue;
        std::set<std::size_t> rows;
        for (const auto& [i, v] : a[j]) rows.insert(i);
        for (const auto& [i, v] : b[j]) rows.insert(i);
        for (std::size_t i : rows) {
            Poly x = a[j].count(i) ? a[j].at(i) : Poly();
            Poly y = b[j].count(i) ? b[j].at(i) : Poly();
            if (x == y) continue;
            return "(" + vertex_string(c.basis[j].vertex, n) + "," + mono_string(c.basis[j].mono) + ") -> (" +
                   vertex_string(c.basis[i].vertex, n) + "," + mono_string(c.basis[i].mono) + "): " + x.str(names) +
                   " vs " + y.str(names);
        }
    }
    return std::nullopt;
}

inline std::vector<Column<Poly>> identity_columns(std::size_t n)
{
    std::vector<Column<Poly>> id(n);
    for (std::size_t j = 0; j < n; ++j) id[j][j] = Poly(1);
    return id;
}

// ---------------------------------------------------------------------------
// Mark slides

enum class SlideDirection { Under, Over };

/// How the sign of the backward map is chosen when the arc at the crossing
/// does not start at the mark's end. FlipArrow first reverses the crossing
/// arrow so that it does; Table keeps the arrow and corrects the sign.
enum class SlideSigns { FlipArrow, Table };

struct SlideMap {
    MarkedDiagram source_diagram, target_diagram;  // arrows as used for the map
    std::size_t mark = 0;
    int crossing = 0;
    int end = 0;  // position of the mark's end at the crossing
    SlideDirection direction = SlideDirection::Under;
    bool arrow_flipped = false;
    std::shared_ptr<const TwistedComplex> source, target;
    std::vector<Column<Poly>> forward, inverse;
    bool chain_map = false;
    bool invertible = false;
    bool descends = true;
    std::string witness;

    bool ok() const { return chain_map && invertible && descends; }
};

/// Sign exponent of the backward map for the arc tail at relative corner
/// `rel` = tail - end (mod 4).
inline int backward_sign(int rel, int eps, int sigma0, int sigma1)
{
    switch (mod4(rel)) {
    case 0: return (eps + sigma1) & 1;
    case 2: return (eps + sigma1 + 1) & 1;
    case 1: return (eps + sigma0) & 1;
    default: return (eps + sigma0 + 1) & 1;
    }
}

inline int find_slide_end(const MarkedDiagram& d, std::size_t mark, int crossing, SlideDirection dir)
{
    if (mark >= d.marks().size()) throw InputError("unknown mark index " + std::to_string(mark));
    if (crossing < 0 || static_cast<std::size_t>(crossing) >= d.crossing_count())
        throw InputError("unknown crossing " + std::to_string(crossing));
    const Crossing& c = d.crossing(static_cast<std::size_t>(crossing));
    for (int p = 0; p < 4; ++p)
        if (c.ends[p] == d.marks()[mark].edge && c.is_over_end(p) == (dir == SlideDirection::Over)) return p;
    throw InputError("mark '" + d.marks()[mark].id + "' is not adjacent to crossing " + std::to_string(crossing) +
                     (dir == SlideDirection::Over ? " on the over strand" : " on the under strand"));
}

/// F = id + x_m H: H runs backward along the crossing through the rotated arc.
inline SlideMap slide_isomorphism(const MarkedDiagram& d, std::size_t mark, int crossing, SlideDirection dir,
                                  bool reduced, SlideSigns mode = SlideSigns::Table, std::optional<int> end = {},
                                  std::shared_ptr<const Cube> cube = nullptr)
{
    SlideMap s;
    s.mark = mark;
    s.crossing = crossing;
    s.direction = dir;
    s.end = end ? *end : find_slide_end(d, mark, crossing, dir);
    const std::size_t cx = static_cast<std::size_t>(crossing);
    if (d.crossing(cx).ends.at(s.end) != d.marks().at(mark).edge ||
        d.crossing(cx).is_over_end(s.end) != (dir == SlideDirection::Over))
        throw InputError("slide end does not carry the mark on the requested strand");

    MarkedDiagram src = d;
    int rel = mod4(d.crossing(cx).arc_tail() - s.end);
    if (mode == SlideSigns::FlipArrow && rel >= 2) {
        src = d.with_arrow(cx, 1 - d.crossing(cx).arrow);
        rel -= 2;
        s.arrow_flipped = true;
        cube = nullptr;
    }
    auto marks = src.marks();
    marks[mark].edge = src.crossing(cx).ends[mod4(s.end + 2)];
    MarkedDiagram dst = src.with_marks(marks);
    s.source_diagram = src;
    s.target_diagram = dst;

    // Over slides live in the reflected picture, where the ladybug labels swap.
    const Convention conv = dir == SlideDirection::Over ? Convention::Mirrored : Convention::Standard;
    if (!cube || cube->convention != conv) cube = std::make_shared<const Cube>(build_cube(src, 1, conv));
    s.source = std::make_shared<const TwistedComplex>(build_complex(cube, src, reduced));
    s.target = std::make_shared<const TwistedComplex>(build_complex(cube, dst, reduced));
    const TwistedComplex& C = *s.source;
    const Vertex bit = Vertex(1) << cx;
    const Poly xm = Poly::variable(mark);

    s.forward = identity_columns(C.size());
    s.inverse = identity_columns(C.size());
    for (std::size_t j = 0; j < C.size(); ++j) {
        const auto [v, m, deg] = C.basis[j];
        if (!(v & bit)) continue;
        const Vertex v0 = v ^ bit;
        const EdgeMap h = naive_edge_map(cube->resolutions[v], cube->resolutions[v0], arc_for(src, cx, 1));
        const int sg = backward_sign(rel, cube->signs.eps[cube->signs.edge(v0, cx)], cube->signs.sigma[v0],
                                     cube->signs.sigma[v]);
        h.for_each_term(m, [&](ExtMono out, int k) {
            if (reduced && ((out >> C.basepoint_circle[v0]) & 1u)) return;
            const Poly coeff = xm * Integer(sg ? -k : k);
            detail::add_entry(s.forward[j], C.index[v0].at(out), coeff);
            detail::add_entry(s.inverse[j], C.index[v0].at(out), -coeff);
        });
        if (reduced) {
            // H must carry the basepoint ideal into itself.
            const ExtMono bp = ExtMono(1) << C.basepoint_circle[v];
            if (!(m & bp)) {
                h.for_each_term(m | bp, [&](ExtMono out, int) {
                    if (!((out >> C.basepoint_circle[v0]) & 1u)) s.descends = false;
                });
            }
        }
    }

    const auto D = C.total().d, Dp = s.target->total().d;
    auto lhs = compose(s.forward, D), rhs = compose(Dp, s.forward);
    auto diff = first_difference(lhs, rhs, C);
    s.chain_map = !diff;
    if (diff) s.witness = "F D != D' F at " + *diff;
    const auto id = identity_columns(C.size());
    s.invertible = compose(s.forward, s.inverse) == id && compose(s.inverse, s.forward) == id;
    if (!s.invertible && s.witness.empty()) s.witness = "F has no inverse of the form id - x H";
    if (!s.descends && s.witness.empty()) s.witness = "backward map leaves the basepoint ideal";
    return s;
}

/// Whether F mod 2 equals id + x_m times the unsigned backward surgery.
inline bool slide_matches_unsigned(const SlideMap& s)
{
    const TwistedComplex& C = *s.source;
    const auto& res = C.cube->resolutions;
    const std::size_t cx = static_cast<std::size_t>(s.crossing);
    const Vertex bit = Vertex(1) << cx;
    std::vector<Column<Poly>> expect = identity_columns(C.size());
    for (std::size_t j = 0; j < C.size(); ++j) {
        const auto [v, m, deg] = C.basis[j];
        if (!(v & bit)) continue;
        for (ExtMono out : unsigned_surgery(res[v], res[v ^ bit], arc_for(s.source_diagram, cx, 1), m)) {
            if (C.reduced && ((out >> C.basepoint_circle[v ^ bit]) & 1u)) continue;
            const std::size_t row = C.index[v ^ bit].at(out);
            Poly sum = (expect[j].count(row) ? expect[j][row] : Poly()) + Poly::variable(s.mark);
            sum = sum.mod2();
            if (sum.is_zero()) expect[j].erase(row);
            else expect[j][row] = sum;
        }
    }
    return mod2(s.forward) == expect;
}

/// Every slide instance of a diagram: each mark across each crossing it
/// touches, under or over.
struct SlideInstance {
    std::size_t mark;
    int crossing;
    int end;
    SlideDirection direction;
};

inline std::vector<SlideInstance> slide_instances(const MarkedDiagram& d)
{
    std::vector<SlideInstance> out;
    for (std::size_t k = 0; k < d.marks().size(); ++k)
        for (std::size_t x = 0; x < d.crossing_count(); ++x)
            for (int p = 0; p < 4; ++p)
                if (d.crossing(x).ends[p] == d.marks()[k].edge)
                    out.push_back({k, static_cast<int>(x), p,
                                   d.crossing(x).is_over_end(p) ? SlideDirection::Over : SlideDirection::Under});
    return out;
}

/// Slides a mark forward and back again; the composite must be the identity.
inline bool slide_round_trip(const MarkedDiagram& d, const SlideInstance& in, bool reduced, SlideSigns mode)
{
    SlideMap there = slide_isomorphism(d, in.mark, in.crossing, in.direction, reduced, mode, in.end);
    if (!there.ok()) return false;
    SlideMap back = slide_isomorphism(there.target_diagram, in.mark, in.crossing, in.direction, reduced, mode,
                                      mod4(in.end + 2));
    if (!back.ok() || back.arrow_flipped) return false;
    return compose(back.forward, there.forward) == identity_columns(there.source->size());
}

// ---------------------------------------------------------------------------
// Local relations at a crossing

struct LocalRelationReport {
    bool backward_then_forward = false;  // d H = dot(S1) - dot(S1')
    bool forward_then_backward = false;  // H d = dot(S0) - dot(S0')
    bool dots = false;                   // dot/H (anti)commutation and coinciding dots
    bool split = false;                  // forward map is a split
    bool ok() const { return backward_then_forward && forward_then_backward && dots; }
};

/// Relations between the forward map d, the backward map H along the rotated
/// arc, and the dot maps (left multiplication by a circle generator) at the
/// circles through the arc's tail end p and the opposite end p+2.
inline LocalRelationReport local_relations_check(const Cube& cube, Vertex v, std::size_t c)
{
    if (vertex_bit(v, c)) throw std::invalid_argument("local_relations_check: base vertex must have the crossing at 0");
    const Vertex v0 = v, v1 = v | (Vertex(1) << c);
    const Resolution &r0 = cube.resolutions[v0], &r1 = cube.resolutions[v1];
    const Crossing& x = cube.diagram.crossing(c);
    const int p = x.arc_tail();
    const EdgeMap d = naive_edge_map(r0, r1, arc_for(cube.diagram, c, 0));
    const EdgeMap h = naive_edge_map(r1, r0, arc_for(cube.diagram, c, 1));
    const int s0 = r0.circle_of_edge(x.ends[p]), s0p = r0.circle_of_edge(x.ends[mod4(p + 2)]);
    const int s1 = r1.circle_of_edge(x.ends[p]), s1p = r1.circle_of_edge(x.ends[mod4(p + 2)]);

    using Vec = std::map<ExtMono, int>;
    auto add = [](Vec& a, ExtMono m, int k) {
        if ((a[m] += k) == 0) a.erase(m);
    };
    auto dot = [&](int circle, const Vec& in) {
        Vec out;
        for (auto [m, k] : in)
            if (!((m >> circle) & 1u)) add(out, m | (ExtMono(1) << circle), k * insert_sign(static_cast<unsigned>(circle), m));
        return out;
    };
    auto apply = [&](const EdgeMap& e, const Vec& in) {
        Vec out;
        for (auto [m, k] : in) e.for_each_term(m, [&](ExtMono t, int c2) { add(out, t, k * c2); });
        return out;
    };
    auto minus = [&](Vec a, const Vec& b) {
        for (auto [m, k] : b) add(a, m, -k);
        return a;
    };

    LocalRelationReport rep;
    rep.split = d.kind == EdgeKind::Split;
    rep.backward_then_forward = rep.forward_then_backward = rep.dots = true;
    for (ExtMono m = 0; m < (ExtMono(1) << r1.size()); ++m) {
        const Vec e{{m, 1}};
        if (apply(d, apply(h, e)) != minus(dot(s1, e), dot(s1p, e))) rep.backward_then_forward = false;
        const Vec hd = apply(h, dot(s1, e)), dh = dot(s0p, apply(h, e));
        if (rep.split ? dh != hd : dh != minus(Vec{}, hd)) rep.dots = false;
    }
    for (ExtMono m = 0; m < (ExtMono(1) << r0.size()); ++m) {
        const Vec e{{m, 1}};
        if (apply(h, apply(d, e)) != minus(dot(s0, e), dot(s0p, e))) rep.forward_then_backward = false;
    }
    if (rep.split ? s0 != s0p : s1 != s1p) rep.dots = false;
    return rep;
}

// ---------------------------------------------------------------------------
// Forward and backward configurations

struct ConfigReport {
    Vertex vertex = 0;
    std::size_t c = 0, e = 0;
    FaceType forward = FaceType::Commute, backward = FaceType::Commute;
    int a_f = 0, a_b = 0;
    bool backward_split = false;  // e's arc splits in the backward configuration
    bool holds = false;
};

/// Forward square at v along c and e; backward square at v + e_c along the
/// rotated arc at c (back to 0) and e.
inline ConfigReport config_pair_check(const Cube& cube, Vertex v, std::size_t c, std::size_t e)
{
    if (c == e || vertex_bit(v, c) || vertex_bit(v, e))
        throw std::invalid_argument("config_pair_check: crossings must be distinct and unresolved");
    const MarkedDiagram& d = cube.diagram;
    ConfigReport r;
    r.vertex = v;
    r.c = c;
    r.e = e;
    const Vertex vb = v | (Vertex(1) << c);
    r.forward = classify_square(cube.resolutions, v, arc_for(d, c, 0), arc_for(d, e, 0), cube.convention);
    r.backward = classify_square(cube.resolutions, vb, arc_for(d, c, 1), arc_for(d, e, 0), cube.convention);
    r.a_f = face_label(r.forward);
    r.a_b = face_label(r.backward);
    r.backward_split = cube.edge(vb, e).kind == EdgeKind::Split;
    r.holds = r.backward_split ? r.a_f == ((r.a_b + 1) & 1) : r.a_f == r.a_b;
    return r;
}

inline ConfigReport config_pair_check(const MarkedDiagram& d, Vertex v, std::size_t c, std::size_t e)
{
    return config_pair_check(build_cube(d), v, c, e);
}

struct ScanSummary {
    std::size_t instances = 0, failures = 0, vanishing = 0;
    std::optional<ConfigReport> first_failure;
};

/// Every (v, c, e) with c != e both unresolved.
inline ScanSummary config_pair_scan(const Cube& cube)
{
    ScanSummary s;
    const std::size_t n = cube.n();
    for (Vertex v = 0; v < cube.vertex_count(); ++v)
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t e = 0; e < n; ++e) {
                if (c == e || vertex_bit(v, c) || vertex_bit(v, e)) continue;
                ConfigReport r = config_pair_check(cube, v, c, e);
                ++s.instances;
                if (r.forward == FaceType::ZeroX || r.forward == FaceType::ZeroY) ++s.vanishing;
                if (!r.holds) {
                    ++s.failures;
                    if (!s.first_failure) s.first_failure = r;
                }
            }
    return s;
}

// ---------------------------------------------------------------------------
// Reduction to reduced odd Khovanov homology

struct ReductionReport {
    std::size_t slides = 0;
    std::size_t failed_slides = 0;
    bool vertical_zero = false;
    HomologyResult after_slides, direct;
    bool equal = false;
    std::string witness;
    bool ok() const { return failed_slides == 0 && vertical_zero && equal; }
};

/// Walks every mark along the knot to the basepoint edge, checking each
/// slide, then compares the resulting complex with the reduced odd complex.
inline ReductionReport reduction_to_odd_kh(const MarkedDiagram& d, bool backwards = false,
                                          SlideSigns mode = SlideSigns::Table)
{
    if (!d.basepoint()) throw InputError("reduction needs a basepoint");
    if (d.component_count() != 1) throw InputError("reduction needs a knot diagram");
    ReductionReport rep;
    MarkedDiagram cur = d;
    const int target = *d.basepoint();
    std::shared_ptr<const Cube> cubes[2] = {std::make_shared<const Cube>(build_cube(cur)),
                                            std::make_shared<const Cube>(build_cube(cur, 1, Convention::Mirrored))};
    for (std::size_t k = 0; k < d.marks().size(); ++k) {
        std::size_t guard = 0;
        while (cur.marks()[k].edge != target) {
            if (++guard > 2 * cur.edges().size()) throw InputError("no slide path to the basepoint edge");
            const int e = cur.marks()[k].edge;
            Slot s{};
            for (const Slot& q : cur.slots(e))
                if (cur.slot_incoming(q) != backwards) s = q;
            const SlideDirection dir = cur.crossing(static_cast<std::size_t>(s.crossing)).is_over_end(s.pos)
                                           ? SlideDirection::Over
                                           : SlideDirection::Under;
            const int which = dir == SlideDirection::Over ? 1 : 0;
            SlideMap m = slide_isomorphism(cur, k, s.crossing, dir, true, mode, s.pos, cubes[which]);
            ++rep.slides;
            if (!m.ok()) {
                ++rep.failed_slides;
                if (rep.witness.empty()) rep.witness = m.witness;
            }
            if (m.arrow_flipped) {
                cubes[which] = m.source->cube;
                cubes[1 - which] = std::make_shared<const Cube>(
                    build_cube(m.source_diagram, 1, which ? Convention::Standard : Convention::Mirrored));
            }
            cur = m.target_diagram;
        }
    }
    TwistedComplex end = build_complex(cubes[0], cur, true);
    rep.vertical_zero = end.vertical_is_zero();
    auto z = to_integer(end.total());
    if (!z) throw InvariantError("complex with all marks at the basepoint has non-constant entries");
    rep.after_slides = homology_z(*z);

    const MarkedDiagram plain = d.with_marks({});
    TwistedComplex odd = build_complex(plain, true);
    rep.direct = homology_z(*to_integer(odd.as_graded(true, false)));
    rep.equal = rep.after_slides == rep.direct;
    if (!rep.equal && rep.witness.empty()) rep.witness = "homology after slides differs from the direct computation";
    return rep;
}

// ---------------------------------------------------------------------------
// Reidemeister pairs

/// The diagram with one mark per edge and the basepoint on its first edge,
/// unless it already has marks.
inline MarkedDiagram fully_marked(const MarkedDiagram& d)
{
    MarkedDiagram m = d.marks().empty() ? d.with_auto_marks() : d;
    if (!m.basepoint()) m = m.with_basepoint(m.edges().front());
    return m;
}

inline HomologyResult evaluated_homology(const MarkedDiagram& d, const Evaluation& ev, unsigned jobs = 1)
{
    TwistedComplex c = build_complex(d, true, jobs);
    return homology_q(evaluate(c.total(), ev.values));
}

struct InvarianceReport {
    HomologyResult first, second;
    bool equal = false;
};

/// Reduced twisted homology over Q at x_j -> j + offset for both diagrams.
inline InvarianceReport move_invariance_check(const MarkedDiagram& d1, const MarkedDiagram& d2, long offset = 0)
{
    InvarianceReport r;
    const MarkedDiagram a = fully_marked(d1), b = fully_marked(d2);
    r.first = evaluated_homology(a, Evaluation::generic(a.marks().size(), offset));
    r.second = evaluated_homology(b, Evaluation::generic(b.marks().size(), offset));
    r.equal = r.first.ranks() == r.second.ranks();
    return r;
}

}  // namespace tok
