#pragma once

// Ranking metrics over anomaly scores. Tied scores are always handled as one
// block: ROC interpolates linearly across a block (half credit for tied
// positive/negative pairs) and average precision takes one step per block.

#include <guide/error.hpp>
#include <guide/ranking.hpp>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace guide {

class MetricError : public Error {
public:
    using Error::Error;
};

struct CurvePoints {
    std::vector<std::pair<double, double>> points;
    double auc = 0.0;
};

namespace metric_detail {

struct Block {
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

/// Groups of equal score, highest score first.
inline std::vector<Block> tie_blocks(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw ShapeError("metrics: " + std::to_string(scores.size()) + " scores but " +
                         std::to_string(labels.size()) + " labels");
    }
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    std::vector<Block> blocks;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k == 0 || scores[idx[k]] != scores[idx[k - 1]]) blocks.emplace_back();
        if (labels[idx[k]]) {
            ++blocks.back().positives;
        } else {
            ++blocks.back().negatives;
        }
    }
    return blocks;
}

inline std::pair<std::size_t, std::size_t> class_counts(std::span<const int> labels) {
    std::size_t pos = 0;
    for (int l : labels) {
        if (l != 0 && l != 1) throw MetricError("metrics: labels must be 0 or 1");
        pos += static_cast<std::size_t>(l);
    }
    return {pos, labels.size() - pos};
}

}  // namespace metric_detail

/// ROC curve (fpr, tpr) over distinct score thresholds and its trapezoidal area.
inline CurvePoints roc_auc(std::span<const double> scores, std::span<const int> labels) {
    auto [pos, neg] = metric_detail::class_counts(labels);
    if (pos == 0 || neg == 0) throw MetricError("roc_auc: labels need at least one positive and one negative");
    CurvePoints c;
    c.points.emplace_back(0.0, 0.0);
    std::size_t tp = 0, fp = 0;
    for (const auto& b : metric_detail::tie_blocks(scores, labels)) {
        const double x0 = c.points.back().first, y0 = c.points.back().second;
        tp += b.positives;
        fp += b.negatives;
        const double x1 = static_cast<double>(fp) / static_cast<double>(neg);
        const double y1 = static_cast<double>(tp) / static_cast<double>(pos);
        c.auc += (x1 - x0) * (y0 + y1) / 2.0;
        c.points.emplace_back(x1, y1);
    }
    return c;
}

/// Average precision: Σ (R_k - R_{k-1}) P_k with one step per tie block.
/// Points are (recall, precision).
inline CurvePoints pr_auc(std::span<const double> scores, std::span<const int> labels) {
    auto [pos, neg] = metric_detail::class_counts(labels);
    (void)neg;
    if (pos == 0) throw MetricError("pr_auc: labels need at least one positive");
    CurvePoints c;
    std::size_t tp = 0, seen = 0;
    double prev_recall = 0.0;
    for (const auto& b : metric_detail::tie_blocks(scores, labels)) {
        tp += b.positives;
        seen += b.positives + b.negatives;
        const double recall = static_cast<double>(tp) / static_cast<double>(pos);
        const double precision = static_cast<double>(tp) / static_cast<double>(seen);
        c.auc += (recall - prev_recall) * precision;
        prev_recall = recall;
        c.points.emplace_back(recall, precision);
    }
    return c;
}

/// Fraction of all anomalies found among the first K ranked nodes.
inline double recall_at_k(const ScoredRanking& ranking, std::span<const int> labels, std::size_t k) {
    if (ranking.size() != labels.size()) throw ShapeError("recall_at_k: ranking and labels differ in length");
    if (k < 1 || k > ranking.size()) {
        throw MetricError("recall_at_k: K=" + std::to_string(k) + " outside [1, " + std::to_string(ranking.size()) +
                          "]");
    }
    auto [pos, neg] = metric_detail::class_counts(labels);
    (void)neg;
    if (pos == 0) throw MetricError("recall_at_k: labels need at least one positive");
    std::size_t hits = 0;
    for (std::size_t r = 0; r < k; ++r) hits += static_cast<std::size_t>(labels[ranking.order[r]]);
    return static_cast<double>(hits) / static_cast<double>(pos);
}

struct MetricsSummary {
    static constexpr int schema_version = 1;

    double roc_auc = 0.0;
    double pr_auc = 0.0;
    std::vector<std::pair<std::size_t, double>> recall_at;
    CurvePoints roc;
    CurvePoints pr;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["schema_version"] = schema_version;
        j["roc_auc"] = roc_auc;
        j["pr_auc"] = pr_auc;
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (auto [k, v] : recall_at) r[std::to_string(k)] = v;
        j["recall_at"] = r;
        return j;
    }
};

inline MetricsSummary evaluate_ranking(const ScoredRanking& ranking, std::span<const int> labels,
                                       std::span<const std::size_t> ks) {
    MetricsSummary m;
    m.roc = roc_auc(ranking.scores, labels);
    m.pr = pr_auc(ranking.scores, labels);
    m.roc_auc = m.roc.auc;
    m.pr_auc = m.pr.auc;
    for (auto k : ks) {
        if (k > ranking.size()) continue;
        m.recall_at.emplace_back(k, recall_at_k(ranking, labels, k));
    }
    return m;
}

inline void write_curve_csv(const CurvePoints& curve, const std::filesystem::path& path, const char* x_name,
                            const char* y_name) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << std::setprecision(17) << x_name << ',' << y_name << '\n';
    for (auto [x, y] : curve.points) out << x << ',' << y << '\n';
}

/// Writes roc.csv, pr.csv and metrics.json into `dir`.
inline void write_metrics(const MetricsSummary& m, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_curve_csv(m.roc, dir / "roc.csv", "fpr", "tpr");
    write_curve_csv(m.pr, dir / "pr.csv", "recall", "precision");
    std::ofstream out(dir / "metrics.json");
    if (!out) throw Error("cannot write '" + (dir / "metrics.json").string() + "'");
    out << m.to_json().dump(2) << '\n';
}

}  // namespace guide
