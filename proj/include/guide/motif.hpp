#pragma once

// Node motif degrees (NMD) over undirected 3- and 4-node motifs.
//
// Instances are induced subgraphs counted as unordered node sets, so every
// node set belongs to exactly one motif class. Triangles come from sorted
// neighbor-list intersection, open wedges from a degree identity, and the
// six connected 4-node classes from a single ESU enumeration pass (each
// connected node set is visited once, anchored at its smallest id).

#include <guide/error.hpp>
#include <guide/graph.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace guide {

using Count = std::uint64_t;

namespace motif_detail {

/// Bit index of the unordered pair (a, b), a < b, over at most 4 vertices.
constexpr int pair_bit(int a, int b) {
    constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    return table[a][b];
}

inline std::uint8_t mask_of(int vertices, const std::vector<std::pair<int, int>>& edges) {
    std::uint8_t mask = 0;
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= vertices || b >= vertices || a == b) {
            throw Error("motif template edge (" + std::to_string(a) + "," + std::to_string(b) + ") is invalid");
        }
        mask |= static_cast<std::uint8_t>(1u << pair_bit(a, b));
    }
    return mask;
}

inline std::uint8_t permute_mask(std::uint8_t mask, int vertices, const std::array<int, 4>& perm) {
    std::uint8_t out = 0;
    for (int a = 0; a < vertices; ++a)
        for (int b = a + 1; b < vertices; ++b)
            if (mask & (1u << pair_bit(a, b))) {
                int pa = perm[a], pb = perm[b];
                out |= static_cast<std::uint8_t>(1u << pair_bit(std::min(pa, pb), std::max(pa, pb)));
            }
    return out;
}

/// Smallest mask over all vertex relabelings.
inline std::uint8_t canonical_mask(std::uint8_t mask, int vertices) {
    std::array<int, 4> perm{0, 1, 2, 3};
    std::uint8_t best = std::numeric_limits<std::uint8_t>::max();
    do {
        best = std::min(best, permute_mask(mask, vertices, perm));
    } while (std::next_permutation(perm.begin(), perm.begin() + vertices));
    return best;
}

inline bool connected(std::uint8_t mask, int vertices) {
    unsigned seen = 1, frontier = 1;
    while (frontier) {
        unsigned next = 0;
        for (int a = 0; a < vertices; ++a) {
            if (!(frontier & (1u << a))) continue;
            for (int b = 0; b < vertices; ++b)
                if (a != b && (mask & (1u << pair_bit(std::min(a, b), std::max(a, b))))) next |= 1u << b;
        }
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == (1u << vertices) - 1;
}

}  // namespace motif_detail

/// A connected 3- or 4-vertex pattern, stored in canonical form.
class MotifTemplate {
public:
    MotifTemplate(std::string name, int vertices, const std::vector<std::pair<int, int>>& edges)
        : name_(std::move(name)), vertices_(vertices) {
        if (vertices < 3 || vertices > 4) {
            throw Error("motif '" + name_ + "': only 3- and 4-vertex templates are supported, got " +
                        std::to_string(vertices));
        }
        auto mask = motif_detail::mask_of(vertices, edges);
        if (!motif_detail::connected(mask, vertices)) throw Error("motif '" + name_ + "' is not connected");
        code_ = motif_detail::canonical_mask(mask, vertices);
        for (int a = 0; a < vertices; ++a)
            for (int b = a + 1; b < vertices; ++b)
                if (code_ & (1u << motif_detail::pair_bit(a, b))) edges_.emplace_back(a, b);
    }

    const std::string& name() const noexcept { return name_; }
    int vertices() const noexcept { return vertices_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
    std::uint8_t code() const noexcept { return code_; }

    /// Same shape, regardless of name.
    bool same_shape(const MotifTemplate& other) const noexcept {
        return vertices_ == other.vertices_ && code_ == other.code_;
    }

private:
    std::string name_;
    int vertices_;
    std::vector<std::pair<int, int>> edges_;
    std::uint8_t code_ = 0;
};

namespace motifs {

inline MotifTemplate triangle() { return {"triangle", 3, {{0, 1}, {0, 2}, {1, 2}}}; }
inline MotifTemplate wedge() { return {"wedge", 3, {{0, 1}, {1, 2}}}; }
inline MotifTemplate clique4() { return {"clique4", 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}}; }
inline MotifTemplate diamond() { return {"diamond", 4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}}}; }
inline MotifTemplate cycle4() { return {"cycle4", 4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}}; }
inline MotifTemplate paw() { return {"paw", 4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}}; }
inline MotifTemplate star3() { return {"star3", 4, {{0, 1}, {0, 2}, {0, 3}}}; }
inline MotifTemplate path4() { return {"path4", 4, {{0, 1}, {1, 2}, {2, 3}}}; }

/// The six connected 4-node graphlets, sparsest first.
inline std::array<MotifTemplate, 6> four_node_classes() {
    return {path4(), star3(), cycle4(), paw(), diamond(), clique4()};
}

inline std::optional<MotifTemplate> by_name(const std::string& name) {
    for (auto t : {triangle(), wedge(), clique4(), diamond(), cycle4(), paw(), star3(), path4()})
        if (t.name() == name) return t;
    return std::nullopt;
}

}  // namespace motifs

/// Per-node counts for every connected 4-node class, indexed like
/// motifs::four_node_classes().
struct FourNodeCensus {
    std::array<std::vector<Count>, 6> per_node;

    std::array<Count, 6> totals() const {
        std::array<Count, 6> out{};
        for (std::size_t c = 0; c < 6; ++c) out[c] = std::accumulate(per_node[c].begin(), per_node[c].end(), Count{0}) / 4;
        return out;
    }
};

/// Triangles containing each node.
inline std::vector<Count> count_triangles(const AttributedGraph& g) {
    std::vector<Count> tri(g.num_nodes(), 0);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
        auto nu = g.neighbors(u);
        for (NodeId v : nu) {
            if (v <= u) continue;
            auto nv = g.neighbors(v);
            // Third vertex w > v so each triangle is seen once, at its smallest edge.
            auto a = std::upper_bound(nu.begin(), nu.end(), v);
            auto b = std::upper_bound(nv.begin(), nv.end(), v);
            while (a != nu.end() && b != nv.end()) {
                if (*a < *b) {
                    ++a;
                } else if (*b < *a) {
                    ++b;
                } else {
                    ++tri[u];
                    ++tri[v];
                    ++tri[*a];
                    ++a;
                    ++b;
                }
            }
        }
    }
    return tri;
}

/// Induced open wedges (3-paths) containing each node, as center or endpoint.
inline std::vector<Count> count_wedges(const AttributedGraph& g, const std::vector<Count>& triangles) {
    std::vector<Count> out(g.num_nodes(), 0);
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        const Count d = g.degree(i);
        Count as_center = d * (d - (d > 0 ? 1 : 0)) / 2 - triangles[i];
        Count paths_out = 0;
        for (NodeId j : g.neighbors(i)) paths_out += g.degree(j) - 1;
        out[i] = as_center + paths_out - 2 * triangles[i];
    }
    return out;
}

/// One pass over every connected induced 4-node subgraph.
inline FourNodeCensus count_four_node(const AttributedGraph& g) {
    const auto classes = motifs::four_node_classes();
    std::array<int, 64> class_of_mask;
    class_of_mask.fill(-1);
    for (unsigned mask = 0; mask < 64; ++mask) {
        auto m = static_cast<std::uint8_t>(mask);
        if (!motif_detail::connected(m, 4)) continue;
        auto code = motif_detail::canonical_mask(m, 4);
        for (int c = 0; c < 6; ++c)
            if (classes[static_cast<std::size_t>(c)].code() == code) class_of_mask[mask] = c;
    }

    FourNodeCensus census;
    for (auto& v : census.per_node) v.assign(g.num_nodes(), 0);

    auto adjacent_to_any = [&](NodeId u, const NodeId* sub, int size) {
        for (int s = 0; s < size; ++s)
            if (sub[s] == u || g.has_edge(sub[s], u)) return true;
        return false;
    };
    auto record = [&](const std::array<NodeId, 4>& nodes) {
        unsigned mask = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (g.has_edge(nodes[a], nodes[b])) mask |= 1u << motif_detail::pair_bit(a, b);
        const int c = class_of_mask[mask];
        for (NodeId v : nodes) ++census.per_node[static_cast<std::size_t>(c)][v];
    };

    std::vector<NodeId> ext1, ext2, ext3;
    std::array<NodeId, 4> sub{};
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        sub[0] = v;
        ext1.clear();
        for (NodeId u : g.neighbors(v))
            if (u > v) ext1.push_back(u);
        while (!ext1.empty()) {
            const NodeId w1 = ext1.back();
            ext1.pop_back();
            sub[1] = w1;
            ext2 = ext1;
            for (NodeId u : g.neighbors(w1))
                if (u > v && !adjacent_to_any(u, sub.data(), 1)) ext2.push_back(u);
            while (!ext2.empty()) {
                const NodeId w2 = ext2.back();
                ext2.pop_back();
                sub[2] = w2;
                ext3 = ext2;
                for (NodeId u : g.neighbors(w2))
                    if (u > v && !adjacent_to_any(u, sub.data(), 2)) ext3.push_back(u);
                for (NodeId w3 : ext3) {
                    sub[3] = w3;
                    record(sub);
                }
            }
        }
    }
    return census;
}

/// NMD of `t` for every node: the number of induced instances of `t` that
/// contain the node.
inline std::vector<Count> count_nmd(const AttributedGraph& g, const MotifTemplate& t) {
    if (t.vertices() == 3) {
        auto tri = count_triangles(g);
        if (t.same_shape(motifs::triangle())) return tri;
        return count_wedges(g, tri);
    }
    const auto classes = motifs::four_node_classes();
    auto census = count_four_node(g);
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (classes[c].same_shape(t)) return std::move(census.per_node[c]);
    throw Error("motif '" + t.name() + "' does not match any connected 4-node class");
}

inline Count total_motif_count(const AttributedGraph& g, const MotifTemplate& t) {
    auto nmd = count_nmd(g, t);
    return std::accumulate(nmd.begin(), nmd.end(), Count{0}) / static_cast<Count>(t.vertices());
}

/// Which template fills each of the five motif columns.
struct MotifAssignment {
    std::array<MotifTemplate, 5> columns{motifs::triangle(), motifs::wedge(), motifs::clique4(), motifs::diamond(),
                                         motifs::cycle4()};

    static constexpr std::array<const char*, 5> column_tags{"M31", "M32", "M41", "M42", "M43"};
};

enum class StructureTransform { raw, log1p };

inline const char* to_string(StructureTransform t) { return t == StructureTransform::raw ? "raw" : "log1p"; }

inline StructureTransform parse_structure_transform(const std::string& s) {
    if (s == "raw") return StructureTransform::raw;
    if (s == "log1p") return StructureTransform::log1p;
    throw ConfigError("unknown structure transform '" + s + "' (expected raw or log1p)");
}

/// n×6 matrix of [degree, M31, M32, M41, M42, M43] per node.
struct StructureMatrix {
    static constexpr std::array<const char*, 6> column_names{"degree", "M31", "M32", "M41", "M42", "M43"};

    Matrix values;
    StructureTransform transform = StructureTransform::raw;
    /// Instance totals per motif column (index 0 is the edge count).
    std::array<Count, 6> totals{};

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

struct Census {
    std::vector<Count> degree;
    std::vector<Count> triangles;
    std::vector<Count> wedges;
    FourNodeCensus four_node;
};

inline Census run_census(const AttributedGraph& g) {
    Census c;
    c.degree.resize(g.num_nodes());
    for (NodeId i = 0; i < g.num_nodes(); ++i) c.degree[i] = g.degree(i);
    c.triangles = count_triangles(g);
    c.wedges = count_wedges(g, c.triangles);
    c.four_node = count_four_node(g);
    return c;
}

inline const std::vector<Count>& nmd_column(const Census& c, const MotifTemplate& t) {
    if (t.same_shape(motifs::triangle())) return c.triangles;
    if (t.same_shape(motifs::wedge())) return c.wedges;
    const auto classes = motifs::four_node_classes();
    for (std::size_t k = 0; k < classes.size(); ++k)
        if (classes[k].same_shape(t)) return c.four_node.per_node[k];
    throw Error("motif '" + t.name() + "' is not covered by the census");
}

inline StructureMatrix build_structure_matrix(const Census& census, StructureTransform transform,
                                              const MotifAssignment& assignment = {}) {
    const auto n = static_cast<Eigen::Index>(census.degree.size());
    StructureMatrix s;
    s.transform = transform;
    s.values.resize(n, 6);
    std::array<const std::vector<Count>*, 6> cols{&census.degree};
    for (std::size_t c = 0; c < 5; ++c) cols[c + 1] = &nmd_column(census, assignment.columns[c]);
    for (std::size_t c = 0; c < 6; ++c) {
        Count sum = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Count raw = (*cols[c])[static_cast<std::size_t>(i)];
            sum += raw;
            const double x = static_cast<double>(raw);
            s.values(i, static_cast<Eigen::Index>(c)) = transform == StructureTransform::log1p ? std::log1p(x) : x;
        }
        const Count size = c == 0 ? 2 : static_cast<Count>(assignment.columns[c - 1].vertices());
        s.totals[c] = sum / size;
    }
    return s;
}

inline StructureMatrix build_structure_matrix(const AttributedGraph& g, StructureTransform transform,
                                              const MotifAssignment& assignment = {}) {
    return build_structure_matrix(run_census(g), transform, assignment);
}

/// Result of matching the six 4-node class totals against three reference totals.
struct Disambiguation {
    bool exact = false;
    std::array<std::size_t, 3> class_index{};  // into motifs::four_node_classes()
    std::array<Count, 3> totals{};
    double relative_error = 0.0;  // sum of |found - target| / target
};

/// Tries every ordered choice of three distinct 4-node classes and returns the
/// one whose totals best match `targets` (exact when the error is zero).
inline Disambiguation disambiguate_four_node(const std::array<Count, 6>& class_totals,
                                             const std::array<Count, 3>& targets) {
    Disambiguation best;
    best.relative_error = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b)
            for (std::size_t c = 0; c < 6; ++c) {
                if (a == b || b == c || a == c) continue;
                std::array<std::size_t, 3> pick{a, b, c};
                double err = 0.0;
                for (std::size_t k = 0; k < 3; ++k) {
                    const double found = static_cast<double>(class_totals[pick[k]]);
                    const double target = static_cast<double>(targets[k]);
                    err += std::abs(found - target) / std::max(1.0, target);
                }
                if (err < best.relative_error) {
                    best.relative_error = err;
                    best.class_index = pick;
                    for (std::size_t k = 0; k < 3; ++k) best.totals[k] = class_totals[pick[k]];
                }
            }
    best.exact = best.relative_error == 0.0;
    return best;
}

}  // namespace guide
