#pragma once

#include <guide/error.hpp>
#include <guide/graph.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace guide {

/// Per-node anomaly scores plus the node order by descending score
/// (ties broken by ascending node id).
struct ScoredRanking {
    std::vector<double> scores;
    std::vector<NodeId> order;

    static ScoredRanking from_scores(std::vector<double> scores) {
        for (double s : scores)
            if (!std::isfinite(s)) throw NumericError("ranking: non-finite score");
        ScoredRanking r;
        r.order.resize(scores.size());
        std::iota(r.order.begin(), r.order.end(), NodeId{0});
        std::sort(r.order.begin(), r.order.end(), [&](NodeId a, NodeId b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return a < b;
        });
        r.scores = std::move(scores);
        return r;
    }

    std::size_t size() const noexcept { return scores.size(); }
};

}  // namespace guide
