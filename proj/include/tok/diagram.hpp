#pragma once

#include "tok/linalg.hpp"
#include "tok/numeric.hpp"
#include "tok/poly.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tok {

/// A cube vertex: bit i is the resolution of crossing i.
using Vertex = std::uint32_t;

inline constexpr int kMaxCrossings = 24;

inline int mod4(int v) { return ((v % 4) + 4) % 4; }

/// One crossing of a planar diagram. The four edge-ends are listed
/// counterclockwise; corner t is the region between ends t and t+1.
struct Crossing {
    std::array<int, 4> ends{};
    int over = 0;   // 0: ends[0]-ends[2] is the over strand, 1: ends[1]-ends[3]
    int arrow = 0;  // which way the 0-resolution arc points
    int sign = 0;   // +1 / -1 under the link orientation

    /// Position of an end on the under strand.
    int under_end() const { return over == 0 ? 1 : 0; }

    /// Corners hugged by the two strands of the r-resolution. The
    /// 0-resolution joins ends (u, u+1) and (u+2, u+3), u an under end.
    std::array<int, 2> strand_corners(int r) const
    {
        int c = mod4(under_end() + r);
        return {c, mod4(c + 2)};
    }

    /// Tail corner of the oriented arc drawn in the 0-resolution; the head
    /// is the opposite corner.
    int arc_tail() const { return mod4(under_end() + 2 * arrow); }

    bool is_over_end(int pos) const { return (pos % 2) == (over == 0 ? 0 : 1); }
};

struct Slot {
    int crossing = -1;
    int pos = -1;
    friend bool operator==(const Slot&, const Slot&) = default;
    friend auto operator<=>(const Slot&, const Slot&) = default;
};

struct Mark {
    std::string id;
    int edge = 0;
};

/// Oriented link diagram with crossing arrows, marks and an optional basepoint.
/// Immutable once constructed; every constructor path validates.
class MarkedDiagram {
public:
    /// The empty diagram.
    MarkedDiagram() = default;

    MarkedDiagram(std::vector<Crossing> crossings, std::vector<Mark> marks, std::optional<int> basepoint = {},
                  int free_loops = 0, std::optional<std::vector<int>> signs = {})
        : crossings_(std::move(crossings)), marks_(std::move(marks)), basepoint_(basepoint), free_loops_(free_loops)
    {
        validate_crossings();
        index_edges();
        validate_planarity();
        orient(signs);
        validate_marks();
    }

    std::size_t crossing_count() const { return crossings_.size(); }
    const std::vector<Crossing>& crossings() const { return crossings_; }
    const Crossing& crossing(std::size_t i) const { return crossings_.at(i); }
    const std::vector<int>& edges() const { return edges_; }
    const std::vector<int>& free_loop_edges() const { return free_edges_; }
    int free_loops() const { return free_loops_; }
    const std::vector<Mark>& marks() const { return marks_; }
    std::optional<int> basepoint() const { return basepoint_; }
    int n_plus() const { return n_plus_; }
    int n_minus() const { return n_minus_; }
    std::size_t component_count() const { return component_count_; }
    bool explicit_signs() const { return explicit_signs_; }

    bool has_edge(int e) const { return edge_index_.count(e) != 0; }
    bool is_free_edge(int e) const
    {
        return std::find(free_edges_.begin(), free_edges_.end(), e) != free_edges_.end();
    }

    const std::array<Slot, 2>& slots(int edge) const
    {
        auto it = edge_index_.find(edge);
        if (it == edge_index_.end() || is_free_edge(edge)) throw InputError("edge " + std::to_string(edge) + " has no crossing slots");
        return slots_[it->second];
    }

    int edge_at(Slot s) const { return crossings_.at(s.crossing).ends[s.pos]; }

    /// The other end of the edge leaving through s.
    Slot partner(Slot s) const
    {
        const auto& pair = slots(edge_at(s));
        return pair[0] == s ? pair[1] : pair[0];
    }

    /// Whether the link orientation enters the crossing through s.
    bool slot_incoming(Slot s) const { return incoming_.at(s.crossing)[s.pos]; }

    std::vector<std::string> variable_names() const
    {
        std::vector<std::string> out;
        for (const auto& m : marks_) out.push_back(m.id);
        return out;
    }

    bool every_edge_marked() const
    {
        std::set<int> marked;
        for (const auto& m : marks_) marked.insert(m.edge);
        return std::all_of(edges_.begin(), edges_.end(), [&](int e) { return marked.count(e) != 0; });
    }

    MarkedDiagram with_marks(std::vector<Mark> marks) const
    {
        return MarkedDiagram(crossings_, std::move(marks), basepoint_, free_loops_, signs_if_explicit());
    }
    MarkedDiagram with_basepoint(std::optional<int> bp) const
    {
        return MarkedDiagram(crossings_, marks_, bp, free_loops_, signs_if_explicit());
    }
    MarkedDiagram with_arrow(std::size_t crossing, int arrow) const
    {
        auto cs = crossings_;
        cs.at(crossing).arrow = arrow;
        return MarkedDiagram(std::move(cs), marks_, basepoint_, free_loops_, signs_if_explicit());
    }
    MarkedDiagram with_arrows(const std::vector<int>& arrows) const
    {
        auto cs = crossings_;
        for (std::size_t i = 0; i < cs.size(); ++i) cs[i].arrow = arrows.at(i);
        return MarkedDiagram(std::move(cs), marks_, basepoint_, free_loops_, signs_if_explicit());
    }

    /// One mark per edge, named x1, x2, ... in edge order.
    MarkedDiagram with_auto_marks() const
    {
        std::vector<Mark> ms;
        for (std::size_t i = 0; i < edges_.size(); ++i) ms.push_back({"x" + std::to_string(i + 1), edges_[i]});
        return with_marks(std::move(ms));
    }

    std::optional<std::vector<int>> signs_if_explicit() const
    {
        if (!explicit_signs_) return std::nullopt;
        std::vector<int> s;
        for (const auto& c : crossings_) s.push_back(c.sign);
        return s;
    }

private:
    void validate_crossings()
    {
        if (crossings_.size() > static_cast<std::size_t>(kMaxCrossings))
            throw InputError("at most " + std::to_string(kMaxCrossings) + " crossings are supported");
        if (free_loops_ < 0) throw InputError("free_loops must be non-negative");
        for (std::size_t i = 0; i < crossings_.size(); ++i) {
            const auto& c = crossings_[i];
            if (c.over != 0 && c.over != 1)
                throw InputError("crossing " + std::to_string(i) + ": over must be 0 or 1");
            if (c.arrow != 0 && c.arrow != 1)
                throw InputError("crossing " + std::to_string(i) + ": arrow must be 0 or 1");
        }
    }

    void index_edges()
    {
        std::map<int, std::vector<Slot>> seen;
        for (std::size_t i = 0; i < crossings_.size(); ++i)
            for (int p = 0; p < 4; ++p) seen[crossings_[i].ends[p]].push_back({static_cast<int>(i), p});
        for (const auto& [e, where] : seen) {
            if (where.size() != 2) {
                std::string loc;
                for (const auto& s : where)
                    loc += " crossing " + std::to_string(s.crossing) + " slot " + std::to_string(s.pos) + ";";
                throw InputError("edge multiplicity: edge " + std::to_string(e) + " used " +
                                 std::to_string(where.size()) + " times (expected 2) at" + loc);
            }
        }
        int next = seen.empty() ? 1 : seen.rbegin()->first + 1;
        for (int j = 0; j < free_loops_; ++j) free_edges_.push_back(next + j);
        for (const auto& [e, where] : seen) {
            edge_index_[e] = slots_.size();
            slots_.push_back({where[0], where[1]});
            edges_.push_back(e);
        }
        for (int e : free_edges_) {
            edge_index_[e] = slots_.size();
            slots_.push_back({Slot{}, Slot{}});
            edges_.push_back(e);
        }
    }

    // Every connected component of the 4-valent graph must have
    // V - E + F = 2 under the rotation system.
    void validate_planarity()
    {
        const std::size_t n = crossings_.size();
        if (n == 0) return;
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (int p = 0; p < 4; ++p) parent[find(i)] = find(static_cast<std::size_t>(partner({static_cast<int>(i), p}).crossing));

        std::map<std::size_t, long> vertices, faces;
        for (std::size_t i = 0; i < n; ++i) ++vertices[find(i)];
        std::set<Slot> visited;
        for (std::size_t i = 0; i < n; ++i) {
            for (int p = 0; p < 4; ++p) {
                Slot s{static_cast<int>(i), p};
                if (visited.count(s)) continue;
                ++faces[find(i)];
                while (!visited.count(s)) {
                    visited.insert(s);
                    Slot q = partner(s);
                    s = {q.crossing, mod4(q.pos - 1)};
                }
            }
        }
        for (const auto& [root, v] : vertices) {
            long e = 2 * v;
            if (v - e + faces[root] != 2)
                throw InputError("rotation system is not planar: component containing crossing " +
                                 std::to_string(root) + " has " + std::to_string(faces[root]) + " faces, expected " +
                                 std::to_string(v + 2));
        }
    }

    // Orients each link component and derives crossing signs. Orientation
    // follows increasing edge labels from the component's smallest edge.
    void orient(const std::optional<std::vector<int>>& signs)
    {
        const std::size_t n = crossings_.size();
        incoming_.assign(n, {false, false, false, false});
        std::set<Slot> done;
        component_count_ = static_cast<std::size_t>(free_loops_);
        for (int e0 : edges_) {
            if (is_free_edge(e0)) continue;
            const auto& pr = slots(e0);
            if (done.count(pr[0])) continue;
            ++component_count_;
            // Candidate directions: leave through pr[0] and arrive at pr[1], or reverse.
            auto next_edge = [&](Slot arrive) { return edge_at({arrive.crossing, mod4(arrive.pos + 2)}); };
            Slot from = pr[0], to = pr[1];
            int fwd = next_edge(pr[1]), bwd = next_edge(pr[0]);
            if (bwd < fwd) std::swap(from, to);
            while (!done.count(from)) {
                done.insert(from);
                done.insert(to);
                incoming_[to.crossing][to.pos] = true;
                Slot out{to.crossing, mod4(to.pos + 2)};
                from = out;
                to = partner(out);
            }
        }
        explicit_signs_ = signs.has_value();
        if (signs && signs->size() != n)
            throw InputError("signs: expected " + std::to_string(n) + " entries, got " + std::to_string(signs->size()));
        n_plus_ = n_minus_ = 0;
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = crossings_[i];
            if (signs) {
                c.sign = (*signs)[i];
                if (c.sign != 1 && c.sign != -1) throw InputError("signs must be +1 or -1");
            } else {
                int u = c.under_end();
                int u_out = incoming_[i][u] ? mod4(u + 2) : u;
                int o_out = incoming_[i][u + 1] ? mod4(u + 3) : mod4(u + 1);
                c.sign = (u_out == mod4(o_out + 1)) ? 1 : -1;
            }
            (c.sign > 0 ? n_plus_ : n_minus_) += 1;
        }
    }

    void validate_marks()
    {
        std::set<std::string> ids;
        for (std::size_t i = 0; i < marks_.size(); ++i) {
            const auto& m = marks_[i];
            if (m.id.empty()) throw InputError("mark " + std::to_string(i) + " has an empty id");
            if (!ids.insert(m.id).second) throw InputError("duplicate mark id '" + m.id + "' at marks[" + std::to_string(i) + "]");
            if (!has_edge(m.edge))
                throw InputError("mark '" + m.id + "' at marks[" + std::to_string(i) + "] refers to unknown edge " +
                                 std::to_string(m.edge));
        }
        if (basepoint_ && !has_edge(*basepoint_))
            throw InputError("unknown basepoint edge " + std::to_string(*basepoint_));
    }

    std::vector<Crossing> crossings_;
    std::vector<Mark> marks_;
    std::optional<int> basepoint_;
    int free_loops_ = 0;
    std::vector<int> edges_;
    std::vector<int> free_edges_;
    std::map<int, std::size_t> edge_index_;
    std::vector<std::array<Slot, 2>> slots_;
    std::vector<std::array<bool, 4>> incoming_;
    std::size_t component_count_ = 0;
    bool explicit_signs_ = false;
    int n_plus_ = 0, n_minus_ = 0;
};

// ---------------------------------------------------------------------------
// Resolutions

struct CircleStep {
    int crossing;
    int corner;
    int dir;  // +1: traversed from end `corner` to end `corner+1` (crossing centre on the left)
};

struct Circle {
    std::vector<CircleStep> steps;  // cyclic
    std::vector<int> edges;         // sorted
};

/// An oriented surgery arc at a crossing, running from the strand hugging
/// `tail` to the strand hugging the opposite corner.
struct ArcRef {
    int crossing = 0;
    int tail = 0;
    int head() const { return mod4(tail + 2); }
    friend bool operator==(const ArcRef&, const ArcRef&) = default;
};

struct Arc {
    ArcRef ref;
    int tail_circle = -1, tail_pos = -1;
    int head_circle = -1, head_pos = -1;
};

class Resolution {
public:
    Vertex vertex = 0;
    std::vector<Circle> circles;
    std::vector<std::array<int, 4>> corner_circle;  // -1 where no strand hugs the corner
    std::vector<std::array<int, 4>> corner_pos;     // step index within its circle
    std::vector<Arc> arcs;                          // one per crossing
    std::map<int, int> edge_circle;

    std::size_t size() const { return circles.size(); }

    int circle_of_edge(int e) const { return edge_circle.at(e); }

    int circle_at(int crossing, int corner) const
    {
        int c = corner_circle.at(crossing)[mod4(corner)];
        if (c < 0) throw std::invalid_argument("no strand hugs that corner in this resolution");
        return c;
    }
    int pos_at(int crossing, int corner) const { return corner_pos.at(crossing)[mod4(corner)]; }
    int dir_at(int crossing, int corner) const
    {
        return circles[circle_at(crossing, corner)].steps[pos_at(crossing, corner)].dir;
    }
    bool has_strand(int crossing, int corner) const { return corner_circle.at(crossing)[mod4(corner)] >= 0; }
};

inline int vertex_bit(Vertex v, std::size_t i) { return static_cast<int>((v >> i) & 1u); }

/// The arc used for the edge leaving a vertex along crossing i when the
/// crossing sits at resolution r: the 0-resolution arc, or that arc turned a
/// quarter counterclockwise when r = 1.
inline ArcRef arc_for(const MarkedDiagram& d, std::size_t i, int r)
{
    int tail = d.crossing(i).arc_tail();
    return {static_cast<int>(i), r == 0 ? tail : mod4(tail + 1)};
}

/// Traces the circles of the complete resolution at vertex v.
inline Resolution resolve(const MarkedDiagram& d, Vertex v)
{
    const std::size_t n = d.crossing_count();
    if (n < 32 && (v >> n) != 0) throw std::invalid_argument("vertex has bits beyond the crossing count");
    Resolution res;
    res.vertex = v;
    res.corner_circle.assign(n, {-1, -1, -1, -1});
    res.corner_pos.assign(n, {-1, -1, -1, -1});

    std::vector<std::array<bool, 4>> present(n, {false, false, false, false});
    for (std::size_t i = 0; i < n; ++i)
        for (int c : d.crossing(i).strand_corners(vertex_bit(v, i))) present[i][c] = true;

    std::vector<Circle> raw;
    std::vector<std::array<int, 4>> raw_circle(n, {-1, -1, -1, -1});
    for (std::size_t i = 0; i < n; ++i) {
        for (int corner = 0; corner < 4; ++corner) {
            if (!present[i][corner] || raw_circle[i][corner] >= 0) continue;
            Circle circ;
            const int id = static_cast<int>(raw.size());
            int x = static_cast<int>(i), t = corner, dir = 1;
            while (raw_circle[x][t] < 0) {
                raw_circle[x][t] = id;
                res.corner_pos[x][t] = static_cast<int>(circ.steps.size());
                circ.steps.push_back({x, t, dir});
                Slot exit{x, dir > 0 ? mod4(t + 1) : t};
                circ.edges.push_back(d.edge_at(exit));
                Slot in = d.partner(exit);
                x = in.crossing;
                if (present[x][in.pos]) {
                    t = in.pos;
                    dir = 1;
                } else {
                    t = mod4(in.pos - 1);
                    dir = -1;
                }
            }
            std::sort(circ.edges.begin(), circ.edges.end());
            circ.edges.erase(std::unique(circ.edges.begin(), circ.edges.end()), circ.edges.end());
            raw.push_back(std::move(circ));
        }
    }
    for (int e : d.free_loop_edges()) raw.push_back(Circle{{}, {e}});

    // Canonical order: by smallest edge id.
    std::vector<int> order(raw.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return raw[a].edges.front() < raw[b].edges.front(); });
    std::vector<int> rank(raw.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        rank[order[k]] = static_cast<int>(k);
        res.circles.push_back(std::move(raw[order[k]]));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (int c = 0; c < 4; ++c)
            if (raw_circle[i][c] >= 0) res.corner_circle[i][c] = rank[raw_circle[i][c]];
    for (std::size_t k = 0; k < res.circles.size(); ++k)
        for (int e : res.circles[k].edges) res.edge_circle[e] = static_cast<int>(k);

    for (std::size_t i = 0; i < n; ++i) {
        ArcRef ref = arc_for(d, i, vertex_bit(v, i));
        res.arcs.push_back(Arc{ref, res.circle_at(ref.crossing, ref.tail), res.pos_at(ref.crossing, ref.tail),
                               res.circle_at(ref.crossing, ref.head()), res.pos_at(ref.crossing, ref.head())});
    }
    return res;
}

/// w_i: sum of the variables of the marks lying on circle i.
inline std::vector<Poly> circle_weights(const MarkedDiagram& d, const Resolution& r)
{
    std::vector<Poly> w(r.size());
    for (std::size_t j = 0; j < d.marks().size(); ++j) w[r.circle_of_edge(d.marks()[j].edge)] += Poly::variable(j);
    return w;
}

/// All vertices whose resolution is a single circle.
inline std::vector<Vertex> connected_vertices(const MarkedDiagram& d)
{
    std::vector<Vertex> out;
    const Vertex total = Vertex(1) << d.crossing_count();
    for (Vertex v = 0; v < total; ++v)
        if (resolve(d, v).size() == 1) out.push_back(v);
    return out;
}

// ---------------------------------------------------------------------------
// Tait graph

struct TaitGraph {
    struct Edge {
        int crossing;
        std::size_t a, b;  // shaded regions on either side
        int merged_in;     // resolution of the crossing that joins them
        int sign;          // +1 when merged_in == 0
    };
    std::size_t vertex_count = 0;
    std::size_t unshaded_count = 0;
    std::vector<Edge> edges;

    /// Matrix-tree theorem: determinant of a reduced Laplacian (loops ignored).
    Integer spanning_tree_count() const
    {
        if (vertex_count <= 1) return 1;
        const std::size_t m = vertex_count - 1;
        std::vector<std::vector<Integer>> lap(m, std::vector<Integer>(m));
        for (const auto& e : edges) {
            if (e.a == e.b) continue;
            if (e.a < m) lap[e.a][e.a] += 1;
            if (e.b < m) lap[e.b][e.b] += 1;
            if (e.a < m && e.b < m) {
                lap[e.a][e.b] -= 1;
                lap[e.b][e.a] -= 1;
            }
        }
        return bareiss_determinant(std::move(lap));
    }

    /// Edges whose crossing is resolved to join their shaded regions at v.
    std::vector<std::size_t> subgraph(Vertex v) const
    {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < edges.size(); ++k)
            if (vertex_bit(v, edges[k].crossing) == edges[k].merged_in) out.push_back(k);
        return out;
    }

    static Integer bareiss_determinant(std::vector<std::vector<Integer>> a)
    {
        const std::size_t n = a.size();
        Integer prev = 1;
        int sign = 1;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            if (p != k) {
                std::swap(a[p], a[k]);
                sign = -sign;
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            prev = a[k][k];
        }
        return sign * a[n - 1][n - 1];
    }
};

/// Checkerboard graph. Regions are traced from the rotation system; the
/// region on the counterclockwise side of the lowest edge's first slot is
/// shaded.
inline TaitGraph tait_graph(const MarkedDiagram& d)
{
    const std::size_t n = d.crossing_count();
    if (n == 0) throw InputError("tait_graph needs at least one crossing");
    if (d.free_loops() > 0) throw InputError("tait_graph: diagram is disconnected (free loops present)");

    // Region of corner (x, t) is the orbit of slot (x, t).
    std::map<Slot, std::size_t> region;
    std::size_t regions = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (int p = 0; p < 4; ++p) {
            Slot s{static_cast<int>(i), p};
            if (region.count(s)) continue;
            while (!region.count(s)) {
                region[s] = regions;
                Slot q = d.partner(s);
                s = {q.crossing, mod4(q.pos - 1)};
            }
            ++regions;
        }
    }
    if (regions != n + 2) throw InputError("tait_graph: diagram is disconnected");

    // Two-colour the regions: adjacent corners at a crossing differ.
    std::vector<int> color(regions, -1);
    std::vector<std::size_t> queue{region.at({0, 0})};
    color[queue.front()] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::size_t r = queue[qi];
        for (const auto& [s, reg] : region) {
            if (reg != r) continue;
            for (int delta : {1, 3}) {
                std::size_t nb = region.at({s.crossing, mod4(s.pos + delta)});
                if (color[nb] < 0) {
                    color[nb] = 1 - color[r];
                    queue.push_back(nb);
                } else if (color[nb] == color[r]) {
                    throw InputError("tait_graph: regions are not two-colourable");
                }
            }
        }
    }

    const int lowest = d.edges().front();
    const Slot first = std::min(d.slots(lowest)[0], d.slots(lowest)[1]);
    const int shaded = color[region.at(first)];

    std::map<std::size_t, std::size_t> vid;
    TaitGraph g;
    for (std::size_t r = 0; r < regions; ++r) {
        if (color[r] == shaded) vid[r] = vid.size();
        else ++g.unshaded_count;
    }
    g.vertex_count = vid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Crossing& c = d.crossing(i);
        int q0 = color[region.at({static_cast<int>(i), 0})] == shaded ? 0 : 1;
        std::size_t a = vid.at(region.at({static_cast<int>(i), q0}));
        std::size_t b = vid.at(region.at({static_cast<int>(i), q0 + 2}));
        // The r-resolution strands hug corners u+r, u+r+2 and open the other two.
        int merged_in = mod4(q0 - c.under_end() - 1) % 2;
        g.edges.push_back({static_cast<int>(i), a, b, merged_in, merged_in == 0 ? 1 : -1});
    }
    return g;
}

/// Inserts a one-crossing kink on `edge` (an R1 move). over = 0 gives a
/// positive kink. The new crossing is appended; edge ids past the current
/// maximum are allocated for the two new edges.
inline MarkedDiagram add_kink(const MarkedDiagram& d, int edge, int over, int arrow)
{
    if (d.is_free_edge(edge) || !d.has_edge(edge)) throw InputError("add_kink needs an edge between crossings");
    auto cs = d.crossings();
    const int loop = d.edges().back() + 1, tail = loop + 1;
    Slot s2 = d.slots(edge)[1];
    cs[s2.crossing].ends[s2.pos] = tail;
    Crossing k;
    k.ends = {edge, loop, loop, tail};
    k.over = over;
    k.arrow = arrow;
    cs.push_back(k);
    std::optional<std::vector<int>> signs;
    if (d.explicit_signs()) {
        signs = d.signs_if_explicit();
        signs->push_back(over == 0 ? 1 : -1);
    }
    if (d.free_loops() > 0) throw InputError("add_kink: free loops are not supported");
    return MarkedDiagram(std::move(cs), d.marks(), d.basepoint(), 0, signs);
}

}  // namespace tok
