#pragma once

// Ground-truth anomaly injection.
//
// Structural anomalies: q disjoint random node sets of size p are made fully
// connected. Attribute anomalies: for each of another p·q nodes, k candidates
// are drawn and the node takes the attributes of the candidate farthest from
// it in Euclidean distance.

#include <guide/error.hpp>
#include <guide/graph.hpp>
#include <guide/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace guide {

/// How an attribute anomaly takes its new row. `copy` leaves the source node
/// untouched; `swap` also writes the target's old row into the source.
enum class AttributeExchange { copy, swap };

inline const char* to_string(AttributeExchange m) { return m == AttributeExchange::copy ? "copy" : "swap"; }

inline AttributeExchange parse_attribute_exchange(const std::string& s) {
    if (s == "copy") return AttributeExchange::copy;
    if (s == "swap") return AttributeExchange::swap;
    throw ConfigError("unknown attribute exchange mode '" + s + "' (expected copy or swap)");
}

/// q = round(0.025 n / p), at least 1: about 5% of nodes end up labeled.
inline std::size_t auto_clique_count(std::size_t n, std::size_t p) {
    if (p == 0) throw ConfigError("clique size must be positive");
    auto q = static_cast<std::size_t>(std::llround(0.025 * static_cast<double>(n) / static_cast<double>(p)));
    return std::max<std::size_t>(q, 1);
}

struct InjectionSpec {
    std::size_t clique_size = 15;                // p
    std::optional<std::size_t> clique_count;     // q; auto rule when empty
    std::size_t candidates = 50;                 // k
    std::uint64_t seed = 0;
    AttributeExchange exchange = AttributeExchange::copy;

    std::size_t resolved_clique_count(std::size_t n) const {
        return clique_count.value_or(auto_clique_count(n, clique_size));
    }

    void validate(std::size_t n) const {
        const std::size_t q = resolved_clique_count(n);
        if (clique_size < 2) throw ConfigError("inject: p must be at least 2");
        if (q < 1) throw ConfigError("inject: q must be at least 1");
        if (candidates < 1) throw ConfigError("inject: k must be at least 1");
        if (2 * clique_size * q > n) {
            throw ConfigError("inject: 2*p*q = " + std::to_string(2 * clique_size * q) + " exceeds n = " +
                              std::to_string(n));
        }
    }
};

struct StructuralInjection {
    AttributedGraph graph;
    std::vector<NodeId> ids;                    // clique members, clique by clique
    std::vector<std::vector<NodeId>> cliques;
};

struct AttributeInjection {
    AttributedGraph graph;
    std::vector<NodeId> ids;
    std::vector<NodeId> sources;  // sources[t] is the node whose row ids[t] received
};

struct InjectionResult {
    AttributedGraph graph;
    std::vector<int> labels;
    std::vector<NodeId> structural_ids;
    std::vector<NodeId> attribute_ids;
    std::vector<std::vector<NodeId>> cliques;
    std::vector<NodeId> attribute_sources;
};

inline StructuralInjection inject_structural(const AttributedGraph& g, std::size_t p, std::size_t q, Rng& rng) {
    const std::size_t n = g.num_nodes();
    if (p * q > n) {
        throw Error("inject_structural: need " + std::to_string(p * q) + " nodes, graph has " + std::to_string(n));
    }
    std::vector<NodeId> all(n);
    for (NodeId i = 0; i < n; ++i) all[i] = i;
    auto chosen = sample_without_replacement(std::move(all), p * q, rng);

    StructuralInjection out;
    std::vector<Edge> extra;
    extra.reserve(q * p * (p - 1) / 2);
    for (std::size_t c = 0; c < q; ++c) {
        std::vector<NodeId> clique(chosen.begin() + static_cast<std::ptrdiff_t>(c * p),
                                   chosen.begin() + static_cast<std::ptrdiff_t>((c + 1) * p));
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a + 1; b < p; ++b) extra.emplace_back(clique[a], clique[b]);
        out.cliques.push_back(std::move(clique));
    }
    out.ids = std::move(chosen);
    out.graph = g.with_extra_edges(extra);
    return out;
}

inline AttributeInjection inject_attribute(const AttributedGraph& g, std::size_t count, std::size_t k, Rng& rng,
                                           const std::vector<NodeId>& excluded = {},
                                           AttributeExchange exchange = AttributeExchange::copy) {
    const std::size_t n = g.num_nodes();
    std::vector<char> blocked(n, 0);
    for (NodeId e : excluded) {
        if (e >= n) throw BoundsError("inject_attribute: excluded node " + std::to_string(e) + " out of range");
        blocked[e] = 1;
    }
    std::vector<NodeId> eligible;
    for (NodeId i = 0; i < n; ++i)
        if (!blocked[i]) eligible.push_back(i);
    if (count > eligible.size()) {
        throw Error("inject_attribute: need " + std::to_string(count) + " targets, only " +
                    std::to_string(eligible.size()) + " nodes are eligible");
    }
    auto targets = sample_without_replacement(std::move(eligible), count, rng);
    for (NodeId t : targets) blocked[t] = 1;

    std::vector<NodeId> pool;
    for (NodeId i = 0; i < n; ++i)
        if (!blocked[i]) pool.push_back(i);
    if (count > 0 && k > pool.size()) {
        throw Error("inject_attribute: need " + std::to_string(k) + " candidates per target, only " +
                    std::to_string(pool.size()) + " nodes remain");
    }

    const Matrix& original = g.attributes();
    Matrix x = original;
    AttributeInjection out;
    out.ids = targets;
    for (NodeId target : targets) {
        auto candidates = sample_without_replacement(pool, k, rng);
        NodeId best = candidates.front();
        double best_dist = -1.0;
        for (NodeId c : candidates) {
            const double dist = (original.row(target) - original.row(c)).norm();
            if (dist > best_dist || (dist == best_dist && c < best)) {
                best = c;
                best_dist = dist;
            }
        }
        x.row(target) = original.row(best);
        if (exchange == AttributeExchange::swap) x.row(best) = original.row(target);
        out.sources.push_back(best);
    }
    out.graph = g.with_attributes(std::move(x));
    return out;
}

/// Structural injection first, then attribute injection on the remaining nodes.
inline InjectionResult inject(const AttributedGraph& g, const InjectionSpec& spec) {
    const std::size_t n = g.num_nodes();
    spec.validate(n);
    const std::size_t q = spec.resolved_clique_count(n);
    Rng rng(spec.seed);

    auto structural = inject_structural(g, spec.clique_size, q, rng);
    auto attribute = inject_attribute(structural.graph, spec.clique_size * q, spec.candidates, rng, structural.ids,
                                      spec.exchange);

    InjectionResult out;
    out.labels.assign(n, 0);
    for (NodeId i : structural.ids) out.labels[i] = 1;
    for (NodeId i : attribute.ids) out.labels[i] = 1;
    out.structural_ids = std::move(structural.ids);
    out.cliques = std::move(structural.cliques);
    out.attribute_ids = std::move(attribute.ids);
    out.attribute_sources = std::move(attribute.sources);
    out.graph = std::move(attribute.graph);
    return out;
}

}  // namespace guide
