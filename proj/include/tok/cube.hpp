#pragma once

#include "tok/diagram.hpp"
#include "tok/exterior.hpp"
#include "tok/homology.hpp"
#include "tok/parallel.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tok {

enum class EdgeKind { Merge, Split };

/// The unsigned map between adjacent resolutions obtained by surgery along
/// an oriented arc. Passive circles are relabelled with Koszul signs; a split
/// additionally multiplies on the left by (b - c), b left of the arrow.
struct EdgeMap {
    Vertex source = 0, target = 0;
    int crossing = 0;
    EdgeKind kind = EdgeKind::Merge;
    ArcRef arc;
    std::vector<int> image;      // source circle -> target circle
    int left = -1, right = -1;   // split: the new circles b (left) and c (right)
    int merged = -1;             // merge: the circle produced
    std::size_t source_circles = 0, target_circles = 0;

    /// Calls f(target monomial, coefficient) for each term of the image of m.
    template <class F>
    void for_each_term(ExtMono m, F&& f) const
    {
        auto moved = relabel(m, image);
        if (!moved) return;
        auto [mono, sign] = *moved;
        if (kind == EdgeKind::Merge) {
            f(mono, sign);
            return;
        }
        for (auto [circle, coeff] : {std::pair{left, 1}, std::pair{right, -1}}) {
            ExtMono bit = ExtMono(1) << circle;
            if (mono & bit) continue;
            f(mono | bit, sign * coeff * insert_sign(static_cast<unsigned>(circle), mono));
        }
    }

    std::map<ExtMono, int> apply(ExtMono m) const
    {
        std::map<ExtMono, int> out;
        for_each_term(m, [&](ExtMono t, int c) {
            if ((out[t] += c) == 0) out.erase(t);
        });
        return out;
    }

    ExtElement apply(const ExtElement& v) const
    {
        if (v.ambient() != source_circles) throw std::invalid_argument("edge map applied to the wrong module");
        ExtElement out(static_cast<unsigned>(target_circles));
        for (const auto& [m, c] : v.terms())
            for_each_term(m, [&](ExtMono t, int k) { out.add(t, c * Integer(k)); });
        return out;
    }
};

inline EdgeMap naive_edge_map(const Resolution& r0, const Resolution& r1, ArcRef arc)
{
    const int c = arc.crossing;
    if (r1.vertex != (r0.vertex ^ (Vertex(1) << c)))
        throw std::invalid_argument("naive_edge_map: resolutions are not adjacent at crossing " + std::to_string(c));
    if (!r0.has_strand(c, arc.tail) || !r0.has_strand(c, arc.head()) || !r1.has_strand(c, arc.tail + 1) ||
        !r1.has_strand(c, arc.tail + 3))
        throw std::invalid_argument("naive_edge_map: arc does not fit the resolutions");

    EdgeMap m;
    m.source = r0.vertex;
    m.target = r1.vertex;
    m.crossing = c;
    m.arc = arc;
    m.source_circles = r0.size();
    m.target_circles = r1.size();
    m.image.resize(r0.size());
    for (std::size_t s = 0; s < r0.size(); ++s) m.image[s] = r1.circle_of_edge(r0.circles[s].edges.front());

    const int a = r0.circle_at(c, arc.tail);
    if (a == r0.circle_at(c, arc.head())) {
        m.kind = EdgeKind::Split;
        m.left = r1.circle_at(c, arc.tail + 3);
        m.right = r1.circle_at(c, arc.tail + 1);
        if (m.left == m.right || r1.size() != r0.size() + 1) throw InvariantError("split does not produce two circles");
        m.image[a] = m.left;
    } else {
        m.kind = EdgeKind::Merge;
        m.merged = r1.circle_at(c, arc.tail + 1);
        if (r1.size() + 1 != r0.size()) throw InvariantError("merge does not join two circles");
    }
    return m;
}

// ---------------------------------------------------------------------------
// Faces

enum class FaceType { Commute, Anticommute, ZeroX, ZeroY };

inline int face_label(FaceType t) { return (t == FaceType::Anticommute || t == FaceType::ZeroX) ? 1 : 0; }

inline const char* face_name(FaceType t)
{
    switch (t) {
    case FaceType::Commute: return "commute";
    case FaceType::Anticommute: return "anticommute";
    case FaceType::ZeroX: return "zero_X";
    case FaceType::ZeroY: return "zero_Y";
    }
    return "?";
}

/// Ladybug pattern: walking the shared circle so that arc A lies on the
/// left, starting at A's tail, pattern 1 meets B's tail before A's head and
/// pattern 2 meets B's head first.
inline int ladybug_pattern(const Resolution& r, ArcRef a, ArcRef b)
{
    const int circle = r.circle_at(a.crossing, a.tail);
    for (auto [x, t] : {std::pair{a.crossing, a.head()}, std::pair{b.crossing, b.tail}, std::pair{b.crossing, b.head()}})
        if (r.circle_at(x, t) != circle) throw InvariantError("vanishing face is not a single-circle configuration");
    const int dir = r.dir_at(a.crossing, a.tail);
    if (r.dir_at(a.crossing, a.head()) != dir) throw InvariantError("arc attaches to both sides of its circle");

    const long len = static_cast<long>(r.circles[circle].steps.size());
    auto along = [&](int x, int t) {
        long p = r.pos_at(x, t);
        return dir > 0 ? p : len - p;
    };
    const long origin = along(a.crossing, a.tail);
    auto rel = [&](int x, int t) { return ((along(x, t) - origin) % len + len) % len; };
    const long ah = rel(a.crossing, a.head()), bt = rel(b.crossing, b.tail), bh = rel(b.crossing, b.head());
    if ((bt < ah) == (bh < ah)) throw InvariantError("vanishing face with non-interleaved arcs");
    return bt < ah ? 1 : 2;
}

/// Which ladybug pattern counts as the anticommuting configuration X. The
/// mirrored convention is the standard one seen in a reflected plane.
enum class Convention { Standard, Mirrored };

inline int pattern_x(Convention c) { return c == Convention::Standard ? 1 : 2; }

/// Compares the two naive composites around the square spanned by arcs a
/// and b at base vertex v (bits of a and b clear or set arbitrarily).
inline FaceType classify_square(const std::vector<Resolution>& res, Vertex v, ArcRef a, ArcRef b,
                                Convention conv = Convention::Standard)
{
    const Vertex va = v ^ (Vertex(1) << a.crossing), vb = v ^ (Vertex(1) << b.crossing);
    const Vertex vab = va ^ (Vertex(1) << b.crossing);
    const EdgeMap a0 = naive_edge_map(res.at(v), res.at(va), a);
    const EdgeMap b1 = naive_edge_map(res.at(va), res.at(vab), b);
    const EdgeMap b0 = naive_edge_map(res.at(v), res.at(vb), b);
    const EdgeMap a1 = naive_edge_map(res.at(vb), res.at(vab), a);

    auto composite = [](const EdgeMap& first, const EdgeMap& second, ExtMono m) {
        std::map<ExtMono, int> out;
        first.for_each_term(m, [&](ExtMono mid, int c1) {
            second.for_each_term(mid, [&](ExtMono t, int c2) {
                if ((out[t] += c1 * c2) == 0) out.erase(t);
            });
        });
        return out;
    };

    bool commute = true, anticommute = true;
    const ExtMono count = ExtMono(1) << res.at(v).size();
    for (ExtMono m = 0; m < count && (commute || anticommute); ++m) {
        auto p = composite(a0, b1, m), q = composite(b0, a1, m);
        if (p != q) commute = false;
        for (auto& [t, c] : q) c = -c;
        if (p != q) anticommute = false;
    }
    if (commute && anticommute) {
        return ladybug_pattern(res.at(v), a, b) == pattern_x(conv) ? FaceType::ZeroX : FaceType::ZeroY;
    }
    if (commute) return FaceType::Commute;
    if (anticommute) return FaceType::Anticommute;
    throw InvariantError("face neither commutes nor anticommutes");
}

// ---------------------------------------------------------------------------
// Sign assignments

/// Cochains on the n-cube. Edges are indexed v*n+i (bit i of v clear) and
/// faces (v*n+i)*n+j (i<j, bits clear).
struct SignData {
    std::size_t n = 0;
    std::vector<std::int8_t> eps, tau, psi, sigma;

    std::size_t edge(Vertex v, std::size_t i) const { return static_cast<std::size_t>(v) * n + i; }
    std::size_t face(Vertex v, std::size_t i, std::size_t j) const { return edge(v, i) * n + j; }
};

template <class F>
void for_each_cube_edge(std::size_t n, F&& f)
{
    const Vertex total = Vertex(1) << n;
    for (Vertex v = 0; v < total; ++v)
        for (std::size_t i = 0; i < n; ++i)
            if (!vertex_bit(v, i)) f(v, i);
}

template <class F>
void for_each_cube_face(std::size_t n, F&& f)
{
    const Vertex total = Vertex(1) << n;
    for (Vertex v = 0; v < total; ++v)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!vertex_bit(v, i) && !vertex_bit(v, j)) f(v, i, j);
}

inline int edge_sum(const std::vector<std::int8_t>& c, const SignData& s, Vertex v, std::size_t i, std::size_t j)
{
    const Vertex bi = Vertex(1) << i, bj = Vertex(1) << j;
    return (c[s.edge(v, i)] + c[s.edge(v, j)] + c[s.edge(v | bi, j)] + c[s.edge(v | bj, i)]) & 1;
}

/// tau sums to zero around every square.
inline bool tau_is_cocycle(const SignData& s)
{
    bool ok = true;
    for_each_cube_face(s.n, [&](Vertex v, std::size_t i, std::size_t j) { ok = ok && edge_sum(s.tau, s, v, i, j) == 0; });
    return ok;
}

/// psi + 1 sums to zero over the six squares of every 3-face.
inline bool psi_plus_one_is_cocycle(const SignData& s)
{
    const std::size_t n = s.n;
    const Vertex total = Vertex(1) << n;
    for (Vertex v = 0; v < total; ++v)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t l = j + 1; l < n; ++l) {
                    if (vertex_bit(v, i) || vertex_bit(v, j) || vertex_bit(v, l)) continue;
                    const Vertex bi = Vertex(1) << i, bj = Vertex(1) << j, bl = Vertex(1) << l;
                    int sum = s.psi[s.face(v, i, j)] + s.psi[s.face(v | bl, i, j)] + s.psi[s.face(v, i, l)] +
                              s.psi[s.face(v | bj, i, l)] + s.psi[s.face(v, j, l)] + s.psi[s.face(v | bi, j, l)] + 6;
                    if (sum & 1) return false;
                }
    return true;
}

inline bool sigma_solves_tau(const SignData& s)
{
    bool ok = s.sigma.empty() || s.sigma[0] == 0;
    for_each_cube_edge(s.n, [&](Vertex v, std::size_t i) {
        ok = ok && ((s.sigma[v] + s.sigma[v | (Vertex(1) << i)]) & 1) == s.tau[s.edge(v, i)];
    });
    return ok;
}

inline bool eps_solves_psi(const SignData& s)
{
    bool ok = true;
    for_each_cube_face(s.n, [&](Vertex v, std::size_t i, std::size_t j) {
        ok = ok && edge_sum(s.eps, s, v, i, j) == ((s.psi[s.face(v, i, j)] + 1) & 1);
    });
    return ok;
}

/// sigma along the tree where each vertex hangs off the vertex with its
/// lowest set bit cleared; sigma(0) = 0.
inline void solve_vertex_signs(SignData& s)
{
    const Vertex total = Vertex(1) << s.n;
    s.sigma.assign(total, 0);
    for (Vertex v = 1; v < total; ++v) {
        const std::size_t i = static_cast<std::size_t>(std::countr_zero(v));
        const Vertex parent = v ^ (Vertex(1) << i);
        s.sigma[v] = static_cast<std::int8_t>((s.sigma[parent] + s.tau[s.edge(parent, i)]) & 1);
    }
    if (!tau_is_cocycle(s) || !sigma_solves_tau(s)) throw InvariantError("tau is not a cocycle");
}

/// eps vanishes on the edges v -> v + e_i where v has no bit below i; each
/// remaining edge is fixed by the square it closes with a lower-index
/// direction.
inline void solve_edge_signs(SignData& s)
{
    if (!psi_plus_one_is_cocycle(s)) throw InvariantError("psi + 1 is not a cocycle");
    const std::size_t n = s.n;
    const Vertex total = Vertex(1) << n;
    s.eps.assign(total * n, 0);
    for (Vertex v = 0; v < total; ++v) {
        for (std::size_t i = 0; i < n; ++i) {
            if (vertex_bit(v, i)) continue;
            if ((v & ((Vertex(1) << i) - 1)) == 0) continue;
            const std::size_t j = static_cast<std::size_t>(std::countr_zero(v));
            const Vertex base = v ^ (Vertex(1) << j);
            s.eps[s.edge(v, i)] = static_cast<std::int8_t>((s.psi[s.face(base, j, i)] + 1 + s.eps[s.edge(base, i)]) & 1);
        }
    }
    if (!eps_solves_psi(s)) throw InvariantError("edge sign solve failed");
}

// ---------------------------------------------------------------------------
// Cube

/// Everything about the cube of resolutions that does not depend on marks.
class Cube {
public:
    MarkedDiagram diagram;
    std::vector<Resolution> resolutions;
    std::vector<EdgeMap> edges;     // SignData::edge indexing
    std::vector<FaceType> faces;    // SignData::face indexing
    SignData signs;
    Convention convention = Convention::Standard;

    std::size_t n() const { return diagram.crossing_count(); }
    Vertex vertex_count() const { return Vertex(1) << n(); }
    const EdgeMap& edge(Vertex v, std::size_t i) const { return edges.at(signs.edge(v, i)); }
    FaceType face(Vertex v, std::size_t i, std::size_t j) const { return faces.at(signs.face(v, i, j)); }
    int edge_sign(Vertex v, std::size_t i) const { return signs.eps[signs.edge(v, i)] ? -1 : 1; }
    int vertex_sign(Vertex v) const { return signs.sigma[v] ? -1 : 1; }
};

inline Cube build_cube(const MarkedDiagram& d, unsigned jobs = 1, Convention conv = Convention::Standard)
{
    Cube cube{d, {}, {}, {}, {}, conv};
    const std::size_t n = d.crossing_count();
    if (n > 16) throw InputError("cube construction is limited to 16 crossings");
    const Vertex total = Vertex(1) << n;
    cube.resolutions.resize(total);
    parallel_for(total, jobs, [&](std::size_t v) { cube.resolutions[v] = resolve(d, static_cast<Vertex>(v)); });

    SignData& s = cube.signs;
    s.n = n;
    cube.edges.resize(total * n);
    s.tau.assign(total * n, 0);
    for_each_cube_edge(n, [&](Vertex v, std::size_t i) {
        EdgeMap e = naive_edge_map(cube.resolutions[v], cube.resolutions[v | (Vertex(1) << i)], arc_for(d, i, 0));
        s.tau[s.edge(v, i)] = e.kind == EdgeKind::Merge ? 1 : 0;
        cube.edges[s.edge(v, i)] = std::move(e);
    });

    cube.faces.assign(total * n * n, FaceType::Commute);
    s.psi.assign(total * n * n, 0);
    std::vector<std::tuple<Vertex, std::size_t, std::size_t>> face_list;
    for_each_cube_face(n, [&](Vertex v, std::size_t i, std::size_t j) { face_list.emplace_back(v, i, j); });
    parallel_for(face_list.size(), jobs, [&](std::size_t k) {
        auto [v, i, j] = face_list[k];
        FaceType t = classify_square(cube.resolutions, v, arc_for(d, i, 0), arc_for(d, j, 0), conv);
        cube.faces[s.face(v, i, j)] = t;
        s.psi[s.face(v, i, j)] = static_cast<std::int8_t>(face_label(t));
    });

    solve_vertex_signs(s);
    solve_edge_signs(s);
    return cube;
}

inline FaceType classify_face(const Cube& cube, Vertex v, std::size_t i, std::size_t j)
{
    if (i == j || vertex_bit(v, i) || vertex_bit(v, j)) throw std::invalid_argument("classify_face: bits must be clear");
    return cube.face(v, std::min(i, j), std::max(i, j));
}

inline FaceType classify_face(const MarkedDiagram& d, Vertex v, std::size_t i, std::size_t j,
                              Convention conv = Convention::Standard)
{
    if (i == j || vertex_bit(v, i) || vertex_bit(v, j)) throw std::invalid_argument("classify_face: bits must be clear");
    std::vector<Resolution> res(Vertex(1) << d.crossing_count());
    const Vertex bi = Vertex(1) << i, bj = Vertex(1) << j;
    for (Vertex w : {v, v | bi, v | bj, v | bi | bj}) res[w] = resolve(d, w);
    return classify_square(res, v, arc_for(d, i, 0), arc_for(d, j, 0), conv);
}

/// (-1)^sigma * sum_i w_i a_i wedge v.
inline ExtElement vertical_map(const std::vector<Poly>& weights, int sigma, const ExtElement& v)
{
    if (weights.size() != v.ambient()) throw std::invalid_argument("vertical_map: weight count differs from circle count");
    ExtElement out(v.ambient());
    for (std::size_t i = 0; i < weights.size(); ++i) out += left_mult(weights[i], static_cast<unsigned>(i), v);
    return (sigma & 1) ? -out : out;
}

namespace detail {

inline bool same_crossings(const MarkedDiagram& a, const MarkedDiagram& b)
{
    if (a.crossing_count() != b.crossing_count() || a.free_loops() != b.free_loops()) return false;
    for (std::size_t i = 0; i < a.crossing_count(); ++i) {
        const auto &x = a.crossing(i), &y = b.crossing(i);
        if (x.ends != y.ends || x.over != y.over || x.arrow != y.arrow || x.sign != y.sign) return false;
    }
    return true;
}

inline void add_entry(Column<Poly>& col, std::size_t row, const Poly& v)
{
    if (v.is_zero()) return;
    auto [it, inserted] = col.try_emplace(row, v);
    if (!inserted) {
        it->second += v;
        if (it->second.is_zero()) col.erase(it);
    }
}

}  // namespace detail

struct NaiveVerticalReport {
    std::size_t edges = 0, failures = 0;
    std::string witness;
    bool ok() const { return failures == 0; }
};

/// Unsigned vertical map sum_i w_i a_i against every naive edge map:
/// splits must anticommute with it and merges commute.
inline NaiveVerticalReport naive_vertical_check(const Cube& cube, const MarkedDiagram& marked)
{
    if (!detail::same_crossings(cube.diagram, marked)) throw std::invalid_argument("marks belong to a different diagram");
    NaiveVerticalReport r;
    std::vector<std::vector<Poly>> weights(cube.resolutions.size());
    for (std::size_t v = 0; v < weights.size(); ++v) weights[v] = circle_weights(marked, cube.resolutions[v]);
    for_each_cube_edge(cube.n(), [&](Vertex v, std::size_t i) {
        const EdgeMap& e = cube.edge(v, i);
        const Vertex w = v | (Vertex(1) << i);
        const unsigned k = static_cast<unsigned>(e.source_circles);
        ++r.edges;
        for (ExtMono m = 0; m < (ExtMono(1) << k); ++m) {
            const ExtElement x = ExtElement::monomial(k, m, Poly(1));
            const ExtElement before = e.apply(vertical_map(weights[v], 0, x));
            const ExtElement after = vertical_map(weights[w], 0, e.apply(x));
            const bool good = e.kind == EdgeKind::Split ? before == -after : before == after;
            if (!good) {
                if (r.witness.empty())
                    r.witness = "edge " + std::to_string(v) + " crossing " + std::to_string(i) + " monomial " +
                                std::to_string(m);
                ++r.failures;
                break;
            }
        }
    });
    return r;
}

// ---------------------------------------------------------------------------
// Twisted complex

struct BasisElement {
    Vertex vertex = 0;
    ExtMono mono = 0;
    int delta = 0;
};

class TwistedComplex {
public:
    std::shared_ptr<const Cube> cube;
    MarkedDiagram diagram;
    bool reduced = false;
    std::vector<int> basepoint_circle;  // per vertex, -1 when unreduced
    std::vector<BasisElement> basis;
    std::vector<std::map<ExtMono, std::size_t>> index;  // per vertex
    std::vector<Column<Poly>> d_odd, d_v;

    std::size_t size() const { return basis.size(); }

    std::size_t find(Vertex v, ExtMono m) const
    {
        auto it = index.at(v).find(m);
        if (it == index[v].end()) throw std::out_of_range("monomial not in the basis");
        return it->second;
    }

    GradedComplex<Poly> as_graded(bool with_odd = true, bool with_vertical = true) const
    {
        GradedComplex<Poly> g;
        for (const auto& b : basis) g.add_generator(b.delta, static_cast<long>(b.vertex));
        if (with_odd) g.d = d_odd;
        else g.d.assign(size(), {});
        if (with_vertical) g.d = add_columns(g.d, d_v);
        return g;
    }
    GradedComplex<Poly> total() const { return as_graded(true, true); }

    bool vertical_is_zero() const { return all_zero(d_v); }
};

inline int delta_of(const MarkedDiagram& d, std::size_t circles, Vertex v, ExtMono m)
{
    return static_cast<int>(circles) - 2 * ext_degree(m) - std::popcount(v) + d.n_plus();
}

struct ComplexCheck {
    bool odd_squared = false, vertical_squared = false, anticommute = false, homogeneous = false, descends = true;
    bool ok() const { return odd_squared && vertical_squared && anticommute && homogeneous && descends; }
};

inline ComplexCheck check_complex(const TwistedComplex& c)
{
    ComplexCheck r;
    r.odd_squared = all_zero(compose(c.d_odd, c.d_odd));
    r.vertical_squared = all_zero(compose(c.d_v, c.d_v));
    r.anticommute = all_zero(add_columns(compose(c.d_v, c.d_odd), compose(c.d_odd, c.d_v)));
    r.homogeneous = is_homogeneous(c.as_graded(true, false)) && is_homogeneous(c.as_graded(false, true));
    return r;
}

/// Assembles the complex over a prebuilt cube; marks and basepoint come from d.
inline TwistedComplex build_complex(std::shared_ptr<const Cube> cube, const MarkedDiagram& d, bool reduced,
                                    bool verify = true)
{
    if (!detail::same_crossings(cube->diagram, d)) throw std::invalid_argument("cube was built for another diagram");
    if (reduced && !d.basepoint()) throw InputError("the reduced complex needs a basepoint");

    TwistedComplex c{cube, d, reduced, {}, {}, {}, {}, {}};
    const std::size_t n = cube->n();
    const Vertex total = cube->vertex_count();
    c.index.resize(total);
    c.basepoint_circle.assign(total, -1);
    for (Vertex v = 0; v < total; ++v) {
        const Resolution& r = cube->resolutions[v];
        if (r.size() > 30) throw InputError("too many circles in a resolution");
        if (reduced) c.basepoint_circle[v] = r.circle_of_edge(*d.basepoint());
        const ExtMono count = ExtMono(1) << r.size();
        for (ExtMono m = 0; m < count; ++m) {
            if (reduced && (m >> c.basepoint_circle[v]) & 1u) continue;
            c.index[v][m] = c.basis.size();
            c.basis.push_back({v, m, delta_of(d, r.size(), v, m)});
        }
    }
    c.d_odd.resize(c.size());
    c.d_v.resize(c.size());

    auto killed = [&](Vertex v, ExtMono m) { return reduced && ((m >> c.basepoint_circle[v]) & 1u); };
    bool descends = true;

    for (Vertex v = 0; v < total; ++v) {
        const Resolution& r = cube->resolutions[v];
        const std::vector<Poly> w = circle_weights(d, r);
        const int vsign = cube->vertex_sign(v);
        const ExtMono count = ExtMono(1) << r.size();
        for (ExtMono m = 0; m < count; ++m) {
            const bool in_ideal = killed(v, m);
            if (in_ideal && !verify) continue;
            for (std::size_t i = 0; i < n; ++i) {
                if (vertex_bit(v, i)) continue;
                const EdgeMap& e = cube->edge(v, i);
                const Vertex t = v | (Vertex(1) << i);
                const int esign = cube->edge_sign(v, i);
                e.for_each_term(m, [&](ExtMono out, int k) {
                    if (in_ideal) {
                        if (!killed(t, out)) descends = false;
                        return;
                    }
                    if (killed(t, out)) return;
                    detail::add_entry(c.d_odd[c.index[v].at(m)], c.index[t].at(out), Poly(static_cast<long long>(esign * k)));
                });
            }
            for (std::size_t i = 0; i < r.size(); ++i) {
                const ExtMono bit = ExtMono(1) << i;
                if ((m & bit) || w[i].is_zero()) continue;
                const ExtMono out = m | bit;
                if (in_ideal) {
                    if (!killed(v, out)) descends = false;
                    continue;
                }
                if (killed(v, out)) continue;
                detail::add_entry(c.d_v[c.index[v].at(m)], c.index[v].at(out),
                                  w[i] * Integer(vsign * insert_sign(static_cast<unsigned>(i), m)));
            }
        }
    }

    if (verify) {
        if (!descends) throw InvariantError("differential does not descend to the reduced complex");
        ComplexCheck chk = check_complex(c);
        if (!chk.odd_squared) throw InvariantError("d_odd does not square to zero");
        if (!chk.vertical_squared) throw InvariantError("d_v does not square to zero");
        if (!chk.anticommute) throw InvariantError("d_v and d_odd do not anticommute");
        if (!chk.homogeneous) throw InvariantError("differential is not delta-homogeneous");
    }
    return c;
}

inline TwistedComplex build_complex(const MarkedDiagram& d, bool reduced, unsigned jobs = 1, bool verify = true,
                                    Convention conv = Convention::Standard)
{
    return build_complex(std::make_shared<const Cube>(build_cube(d, jobs, conv)), d, reduced, verify);
}

// ---------------------------------------------------------------------------
// Mod-2 comparison

/// Surgery along an arc ignoring all signs: circles are followed through
/// their edges, the split circle continues on the left. A split then adds
/// either new circle. Empty when two generators land on one circle.
inline std::vector<ExtMono> unsigned_surgery(const Resolution& r0, const Resolution& r1, ArcRef arc, ExtMono m)
{
    const int x = arc.crossing;
    const int split = r0.circle_at(x, arc.tail) == r0.circle_at(x, arc.head()) ? r0.circle_at(x, arc.tail) : -1;
    ExtMono img = 0;
    for (ExtMono rest = m; rest; rest &= rest - 1) {
        const int k = std::countr_zero(rest);
        ExtMono bit = ExtMono(1) << (k == split ? r1.circle_at(x, arc.tail + 3) : r1.circle_of_edge(r0.circles[k].edges.front()));
        if (img & bit) return {};
        img |= bit;
    }
    if (split < 0) return {img};
    std::vector<ExtMono> out;
    for (int corner : {arc.tail + 1, arc.tail + 3}) {
        ExtMono bit = ExtMono(1) << r1.circle_at(x, corner);
        if (!(img & bit)) out.push_back(img | bit);
    }
    return out;
}

/// The unsigned complex over F2[x]: edge maps without any signs, vertical
/// map sum_i w_i a_i.
inline std::vector<Column<Poly>> unsigned_differential(const TwistedComplex& c)
{
    const Cube& cube = *c.cube;
    std::vector<Column<Poly>> out(c.size());
    auto keep = [&](Vertex t, ExtMono x) { return !c.reduced || !((x >> c.basepoint_circle[t]) & 1u); };
    for (std::size_t j = 0; j < c.size(); ++j) {
        const auto [v, m, deg] = c.basis[j];
        const Resolution& r = cube.resolutions[v];
        auto put = [&](std::size_t row, const Poly& p) {
            Poly sum = (out[j].count(row) ? out[j][row] + p : p).mod2();
            if (sum.is_zero()) out[j].erase(row);
            else out[j][row] = sum;
        };
        for (std::size_t i = 0; i < cube.n(); ++i) {
            if (vertex_bit(v, i)) continue;
            const Vertex t = v | (Vertex(1) << i);
            for (ExtMono img : unsigned_surgery(r, cube.resolutions[t], arc_for(cube.diagram, i, 0), m))
                if (keep(t, img)) put(c.index[t].at(img), Poly(1));
        }
        const auto w = circle_weights(c.diagram, r);
        for (std::size_t i = 0; i < r.size(); ++i) {
            ExtMono bit = ExtMono(1) << i;
            if ((m & bit) || !keep(v, m | bit)) continue;
            put(c.index[v].at(m | bit), w[i]);
        }
    }
    return out;
}

inline std::vector<Column<Poly>> mod2(const std::vector<Column<Poly>>& d)
{
    std::vector<Column<Poly>> out(d.size());
    for (std::size_t j = 0; j < d.size(); ++j)
        for (const auto& [i, p] : d[j]) {
            Poly q = p.mod2();
            if (!q.is_zero()) out[j][i] = q;
        }
    return out;
}

/// Whether the mod-2 reduction of d_odd + d_v equals the unsigned complex.
inline bool mod2_matches_unsigned(const TwistedComplex& c)
{
    return mod2(add_columns(c.d_odd, c.d_v)) == unsigned_differential(c);
}

// ---------------------------------------------------------------------------
// Export

inline std::string mono_string(ExtMono m)
{
    if (m == 0) return "1";
    std::string s;
    for (ExtMono rest = m; rest; rest &= rest - 1) s += "a" + std::to_string(std::countr_zero(rest) + 1);
    return s;
}

inline std::string vertex_string(Vertex v, std::size_t n)
{
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += vertex_bit(v, i) ? '1' : '0';
    return s;
}

inline nlohmann::json complex_to_json(const TwistedComplex& c)
{
    const std::size_t n = c.cube->n();
    const auto names = c.diagram.variable_names();
    nlohmann::json j;
    j["reduced"] = c.reduced;
    j["n_plus"] = c.diagram.n_plus();
    j["n_minus"] = c.diagram.n_minus();
    j["vertices"] = nlohmann::json::array();
    for (Vertex v = 0; v < c.cube->vertex_count(); ++v) {
        nlohmann::json basis = nlohmann::json::array();
        for (const auto& [m, idx] : c.index[v]) basis.push_back({{"monomial", mono_string(m)}, {"delta", c.basis[idx].delta}});
        j["vertices"].push_back({{"vertex", vertex_string(v, n)},
                                 {"circles", c.cube->resolutions[v].size()},
                                 {"sigma", c.cube->signs.sigma[v]},
                                 {"basis", basis}});
    }
    auto entries = [&](const std::vector<Column<Poly>>& d) {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t s = 0; s < d.size(); ++s)
            for (const auto& [t, p] : d[s])
                arr.push_back({vertex_string(c.basis[s].vertex, n), mono_string(c.basis[s].mono),
                               vertex_string(c.basis[t].vertex, n), mono_string(c.basis[t].mono), p.str(names)});
        return arr;
    };
    j["d_odd"] = entries(c.d_odd);
    j["d_v"] = entries(c.d_v);
    return j;
}

}  // namespace tok
