#pragma once

// Exhaustive NMD reference: visits every node subset of the template's size
// and tests induced isomorphism by trying all vertex bijections. It shares no
// code with the fast census beyond the graph type, so it can serve as an
// oracle for it.

#include <guide/error.hpp>
#include <guide/graph.hpp>
#include <guide/motif.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

namespace guide {

inline constexpr std::size_t brute_force_max_nodes = 64;

inline std::vector<Count> brute_force_nmd(const AttributedGraph& g, const MotifTemplate& t) {
    const std::size_t n = g.num_nodes();
    if (n > brute_force_max_nodes) {
        throw Error("brute_force_nmd: graph has " + std::to_string(n) + " nodes, limit is " +
                    std::to_string(brute_force_max_nodes));
    }
    const auto k = static_cast<std::size_t>(t.vertices());
    std::vector<Count> out(n, 0);
    if (n < k) return out;

    std::vector<std::vector<bool>> pattern(k, std::vector<bool>(k, false));
    for (auto [a, b] : t.edges()) pattern[a][b] = pattern[b][a] = true;

    std::vector<NodeId> subset(k);
    std::iota(subset.begin(), subset.end(), NodeId{0});
    while (true) {
        std::vector<std::size_t> perm(k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        bool iso = false;
        do {
            bool match = true;
            for (std::size_t a = 0; a < k && match; ++a)
                for (std::size_t b = a + 1; b < k && match; ++b)
                    match = pattern[a][b] == g.has_edge(subset[perm[a]], subset[perm[b]]);
            iso = match;
        } while (!iso && std::next_permutation(perm.begin(), perm.end()));
        if (iso)
            for (NodeId v : subset) ++out[v];

        // Next k-combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && subset[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++subset[i - 1];
        for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
    return out;
}

}  // namespace guide
