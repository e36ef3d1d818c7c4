#pragma once

#include <guide/error.hpp>
#include <guide/nn.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace guide {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected, unweighted graph in CSR form with an n×d attribute matrix.
/// Neighbor lists are sorted and never contain the node itself.
class AttributedGraph {
public:
    AttributedGraph() = default;

    /// Builds from an arbitrary edge list. Reversed and duplicate pairs
    /// collapse to one undirected edge; self-loops are dropped.
    static AttributedGraph from_edges(std::size_t n, std::span<const Edge> edges, Matrix attributes = {}) {
        if (attributes.size() == 0) attributes = Matrix::Zero(static_cast<Eigen::Index>(n), 0);
        if (static_cast<std::size_t>(attributes.rows()) != n) {
            throw ShapeError("attribute matrix has " + std::to_string(attributes.rows()) + " rows, graph has " +
                             std::to_string(n) + " nodes");
        }
        if (!attributes.allFinite()) throw Error("attribute matrix contains non-finite values");

        std::vector<Edge> directed;
        directed.reserve(edges.size() * 2);
        for (auto [u, v] : edges) {
            if (u >= n || v >= n) {
                throw BoundsError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range for n=" +
                                  std::to_string(n));
            }
            if (u == v) continue;
            directed.emplace_back(u, v);
            directed.emplace_back(v, u);
        }
        std::sort(directed.begin(), directed.end());
        directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

        AttributedGraph g;
        g.n_ = n;
        g.offsets_.assign(n + 1, 0);
        for (auto [u, v] : directed) ++g.offsets_[u + 1];
        for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
        g.neighbors_.reserve(directed.size());
        for (auto [u, v] : directed) g.neighbors_.push_back(v);
        g.attributes_ = std::move(attributes);
        return g;
    }

    std::size_t num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }
    std::size_t attribute_dim() const noexcept { return static_cast<std::size_t>(attributes_.cols()); }

    std::span<const NodeId> neighbors(NodeId i) const {
        check_node(i);
        return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
    }

    /// Number of distinct neighbors, excluding the node itself.
    std::size_t degree(NodeId i) const {
        check_node(i);
        return offsets_[i + 1] - offsets_[i];
    }

    bool has_edge(NodeId i, NodeId j) const {
        auto nb = neighbors(i);
        return std::binary_search(nb.begin(), nb.end(), j);
    }

    /// Each undirected edge once, as (u, v) with u < v, in sorted order.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(num_edges());
        for (NodeId u = 0; u < n_; ++u)
            for (NodeId v : neighbors(u))
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    const Matrix& attributes() const noexcept { return attributes_; }
    std::span<const std::size_t> offsets() const noexcept { return offsets_; }
    std::span<const NodeId> adjacency() const noexcept { return neighbors_; }

    AttributedGraph with_attributes(Matrix attributes) const {
        auto e = edges();
        return from_edges(n_, e, std::move(attributes));
    }

    AttributedGraph with_extra_edges(std::span<const Edge> extra) const {
        auto e = edges();
        e.insert(e.end(), extra.begin(), extra.end());
        return from_edges(n_, e, attributes_);
    }

    friend bool operator==(const AttributedGraph& a, const AttributedGraph& b) {
        return a.n_ == b.n_ && a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_ &&
               a.attributes_.rows() == b.attributes_.rows() && a.attributes_.cols() == b.attributes_.cols() &&
               a.attributes_ == b.attributes_;
    }

private:
    void check_node(NodeId i) const {
        if (i >= n_) throw BoundsError("node " + std::to_string(i) + " out of range for n=" + std::to_string(n_));
    }

    std::size_t n_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> neighbors_;
    Matrix attributes_;
};

inline std::size_t degree(const AttributedGraph& g, NodeId i) { return g.degree(i); }

/// D̃^{-1/2} (A + I) D̃^{-1/2}, stored sparse. Symmetric by construction:
/// both (i,j) and (j,i) are computed from the same expression.
class NormalizedAdjacency {
public:
    explicit NormalizedAdjacency(const AttributedGraph& g) {
        const auto n = static_cast<Eigen::Index>(g.num_nodes());
        std::vector<double> inv_sqrt(g.num_nodes());
        for (NodeId i = 0; i < g.num_nodes(); ++i) {
            inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i) + 1));
        }
        std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
        triplets.reserve(g.adjacency().size() + g.num_nodes());
        for (NodeId i = 0; i < g.num_nodes(); ++i) {
            auto nb = g.neighbors(i);
            // Keep the self-loop in sorted column position.
            auto split = std::lower_bound(nb.begin(), nb.end(), i);
            for (auto it = nb.begin(); it != split; ++it) triplets.emplace_back(i, *it, entry(inv_sqrt, i, *it));
            triplets.emplace_back(i, i, 1.0 / static_cast<double>(g.degree(i) + 1));
            for (auto it = split; it != nb.end(); ++it) triplets.emplace_back(i, *it, entry(inv_sqrt, i, *it));
        }
        matrix_.resize(n, n);
        matrix_.setFromTriplets(triplets.begin(), triplets.end());
        matrix_.makeCompressed();
    }

    const SparseMatrix& matrix() const noexcept { return matrix_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    double value(NodeId i, NodeId j) const { return matrix_.coeff(i, j); }

private:
    static double entry(const std::vector<double>& inv_sqrt, NodeId i, NodeId j) {
        // Ordered product so that entry(i,j) and entry(j,i) are bit-identical.
        return i < j ? inv_sqrt[i] * inv_sqrt[j] : inv_sqrt[j] * inv_sqrt[i];
    }

    SparseMatrix matrix_;
};

inline NormalizedAdjacency normalize_adjacency(const AttributedGraph& g) { return NormalizedAdjacency(g); }

struct DatasetBundle {
    std::string name;
    AttributedGraph graph;
    std::optional<std::vector<int>> labels;

    void validate() const {
        if (!labels) return;
        if (labels->size() != graph.num_nodes()) {
            throw ShapeError("dataset '" + name + "': " + std::to_string(labels->size()) + " labels for " +
                             std::to_string(graph.num_nodes()) + " nodes");
        }
        for (int l : *labels)
            if (l != 0 && l != 1) throw Error("dataset '" + name + "': labels must be 0 or 1");
    }
};

}  // namespace guide
