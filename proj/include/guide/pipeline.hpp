#pragma once

// End-to-end experiment: ingest -> inject -> census -> train -> score -> evaluate.
// Every artifact lands in the run's output directory and every number in the
// report follows from the config and its root seed.

#include <guide/checkpoint.hpp>
#include <guide/config.hpp>
#include <guide/error.hpp>
#include <guide/inject.hpp>
#include <guide/io.hpp>
#include <guide/metrics.hpp>
#include <guide/model.hpp>
#include <guide/motif.hpp>
#include <guide/structure_io.hpp>

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <string>
#include <utility>
#include <vector>

namespace guide {

inline constexpr int report_schema_version = 1;

/// Runs `body`, rethrowing any failure as a StageError naming `stage`.
template <typename F>
auto run_stage(const std::string& stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

class StageClock {
public:
    template <typename F>
    auto time(const std::string& stage, F&& body) -> decltype(body()) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(body())>) {
            run_stage(stage, std::forward<F>(body));
            record(stage, start);
        } else {
            auto out = run_stage(stage, std::forward<F>(body));
            record(stage, start);
            return out;
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto& [k, v] : seconds_) j[k] = v;
        return j;
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        seconds_.emplace_back(stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }

    std::vector<std::pair<std::string, double>> seconds_;
};

inline nlohmann::ordered_json motif_totals_json(const StructureMatrix& s, const MotifAssignment& assignment) {
    nlohmann::ordered_json j;
    j["edges"] = s.totals[0];
    for (std::size_t k = 0; k < 5; ++k) {
        j[MotifAssignment::column_tags[k]] = {{"motif", assignment.columns[k].name()}, {"count", s.totals[k + 1]}};
    }
    return j;
}

inline nlohmann::ordered_json four_node_totals_json(const Census& c) {
    nlohmann::ordered_json j;
    const auto classes = motifs::four_node_classes();
    const auto totals = c.four_node.totals();
    for (std::size_t k = 0; k < classes.size(); ++k) j[classes[k].name()] = totals[k];
    return j;
}

/// Inputs shared by every model trained on one injected dataset.
struct PreparedData {
    AttributedGraph raw;
    InjectionResult injection;
    Census raw_census;
    Census census;
    StructureMatrix structure_raw;   // untransformed counts on the injected graph
    StructureMatrix structure;       // what the model sees
};

inline AttributedGraph ingest(const RunConfig& cfg) {
    cfg.validate();
    return load_attributed_graph(cfg.edges, cfg.attributes, cfg.nodes, cfg.attribute_dim);
}

inline PreparedData prepare(const RunConfig& cfg, StageClock& clock) {
    PreparedData d;
    d.raw = clock.time("ingest", [&] { return ingest(cfg); });
    if (d.raw.attribute_dim() == 0) throw StageError("ingest", "the dataset has no attributes");
    d.injection = clock.time("inject", [&] { return inject(d.raw, cfg.injection); });
    clock.time("census", [&] {
        d.raw_census = run_census(d.raw);
        d.census = run_census(d.injection.graph);
        d.structure_raw = build_structure_matrix(d.census, StructureTransform::raw, cfg.motifs);
        d.structure = build_structure_matrix(d.census, cfg.transform, cfg.motifs);
    });
    return d;
}

struct ModelRun {
    TrainResult training;
    ScoredRanking ranking;
    MetricsSummary metrics;
    double score_sum = 0.0;
};

inline ModelRun train_and_evaluate(const PreparedData& d, const ModelConfig& model, const std::vector<std::size_t>& ks,
                                   StageClock& clock) {
    ModelRun run{.training = clock.time("train",
                                        [&] {
                                            return train(ModelInputs::build(d.injection.graph, d.structure.values),
                                                         model);
                                        }),
                 .ranking = {},
                 .metrics = {},
                 .score_sum = 0.0};
    run.ranking = clock.time("score", [&] {
        return score_nodes(run.training.model, ModelInputs::build(d.injection.graph, d.structure.values));
    });
    for (double s : run.ranking.scores) run.score_sum += s;
    run.metrics = clock.time("evaluate", [&] { return evaluate_ranking(run.ranking, d.injection.labels, ks); });
    return run;
}

inline void write_scores(const ScoredRanking& ranking, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << std::setprecision(17) << "node\tscore\trank\n";
    std::vector<std::size_t> rank(ranking.size());
    for (std::size_t r = 0; r < ranking.order.size(); ++r) rank[ranking.order[r]] = r + 1;
    for (std::size_t i = 0; i < ranking.size(); ++i) out << i << '\t' << ranking.scores[i] << '\t' << rank[i] << '\n';
}

inline std::vector<double> load_scores(const std::filesystem::path& path) {
    auto in = io_detail::open_in(path);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::pair<std::size_t, double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (io_detail::skip_line(line) || line.starts_with("node")) continue;
        auto f = io_detail::split_fields(line, false);
        if (f.size() < 2) throw ParseError(path.string(), lineno, "expected 'node score'");
        auto node = io_detail::parse_number<std::size_t>(f[0]);
        auto score = io_detail::parse_number<double>(f[1]);
        if (!node || !score) throw ParseError(path.string(), lineno, "malformed score row");
        rows.emplace_back(*node, *score);
    }
    std::vector<double> scores(rows.size(), 0.0);
    std::vector<char> seen(rows.size(), 0);
    for (auto [node, score] : rows) {
        if (node >= rows.size() || seen[node]) throw Error(path.string() + ": node ids must be 0..n-1, each once");
        seen[node] = 1;
        scores[node] = score;
    }
    return scores;
}

struct RunReport {
    nlohmann::ordered_json json;
    MetricsSummary metrics;
    double final_loss = 0.0;
    double score_sum = 0.0;
};

/// Full pipeline for one config. Artifacts written under cfg.output:
///   perturbed/{edges.txt,attributes.txt,labels.txt}, structure.tsv,
///   checkpoint.bin, loss_trace.csv, scores.tsv, roc.csv, pr.csv,
///   metrics.json, report.json
inline RunReport run_pipeline(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    StageClock clock;
    const fs::path out = cfg.output;
    PreparedData d = prepare(cfg, clock);
    fs::create_directories(out);
    clock.time("write-dataset", [&] {
        save_edge_list(d.injection.graph, out / "perturbed" / "edges.txt");
        save_attributes(d.injection.graph.attributes(), out / "perturbed" / "attributes.txt");
        save_labels(d.injection.labels, out / "perturbed" / "labels.txt");
        save_structure_matrix(d.structure_raw, out / "structure.tsv");
    });

    ModelRun run = train_and_evaluate(d, cfg.model, cfg.recall_k, clock);
    clock.time("write-model", [&] {
        save_checkpoint(run.training.model, out / "checkpoint.bin");
        write_loss_trace(run.training.trace, out / "loss_trace.csv");
        write_scores(run.ranking, out / "scores.tsv");
        write_metrics(run.metrics, out);
    });

    RunReport report;
    report.metrics = run.metrics;
    report.final_loss = run.training.final_loss.total;
    report.score_sum = run.score_sum;

    auto& j = report.json;
    j["schema_version"] = report_schema_version;
    j["config"] = to_json(cfg);
    j["seeds"] = {{"root", cfg.root_seed}, {"inject", cfg.injection.seed}, {"init", cfg.model.seed}};
    j["dataset"] = {{"name", cfg.dataset_name},
                    {"nodes", d.raw.num_nodes()},
                    {"edges", d.raw.num_edges()},
                    {"attributes", d.raw.attribute_dim()},
                    {"edges_after_injection", d.injection.graph.num_edges()}};
    j["injection"] = {{"p", cfg.injection.clique_size},
                      {"q", d.injection.cliques.size()},
                      {"k", cfg.injection.candidates},
                      {"structural", d.injection.structural_ids.size()},
                      {"attribute", d.injection.attribute_ids.size()}};
    auto raw_structure = build_structure_matrix(d.raw_census, StructureTransform::raw, cfg.motifs);
    j["motif_totals"] = {{"raw_graph", motif_totals_json(raw_structure, cfg.motifs)},
                         {"injected_graph", motif_totals_json(d.structure_raw, cfg.motifs)},
                         {"raw_graph_four_node_classes", four_node_totals_json(d.raw_census)}};
    j["training"] = {{"variant", cfg.model.variant_name()},
                     {"epochs", cfg.model.epochs},
                     {"first_loss", run.training.trace.front().value.total},
                     {"final_loss", run.training.final_loss.total},
                     {"score_sum", run.score_sum},
                     {"loss_trace", "loss_trace.csv"},
                     {"checkpoint", "checkpoint.bin"}};
    j["metrics"] = run.metrics.to_json();
    j["timings_seconds"] = clock.to_json();

    std::ofstream rep(out / "report.json");
    if (!rep) throw StageError("report", "cannot write report.json");
    rep << j.dump(2) << '\n';
    return report;
}

enum class SweepAxis { alpha, embedding_dim };

inline SweepAxis parse_sweep_axis(const std::string& s) {
    if (s == "alpha") return SweepAxis::alpha;
    if (s == "embedding_dim") return SweepAxis::embedding_dim;
    throw ConfigError("unknown sweep axis '" + s + "' (expected alpha or embedding_dim)");
}

inline const char* to_string(SweepAxis a) { return a == SweepAxis::alpha ? "alpha" : "embedding_dim"; }

struct SweepRow {
    double value = 0.0;
    bool ok = false;
    std::string error;
    MetricsSummary metrics;
};

/// One model per value on a single shared injection; failed cells are kept
/// with their error and the sweep moves on. Writes sweep.csv under cfg.output.
inline std::vector<SweepRow> sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep: no values given");
    StageClock clock;
    PreparedData d = prepare(cfg, clock);
    std::vector<SweepRow> rows;
    for (double v : values) {
        SweepRow row;
        row.value = v;
        try {
            ModelConfig m = cfg.model;
            if (axis == SweepAxis::alpha) {
                m.alpha = v;
            } else {
                if (v < 1.0 || v != std::floor(v)) throw ConfigError("embedding_dim must be a positive integer");
                m.embedding_dim = static_cast<std::size_t>(v);
            }
            m.validate();
            row.metrics = train_and_evaluate(d, m, cfg.recall_k, clock).metrics;
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }

    std::filesystem::create_directories(cfg.output);
    std::ofstream out(cfg.output / "sweep.csv");
    if (!out) throw StageError("sweep", "cannot write sweep.csv");
    out << std::setprecision(17) << to_string(axis) << ",status,roc_auc,pr_auc";
    for (auto k : cfg.recall_k) out << ",recall@" << k;
    out << ",error\n";
    for (const auto& r : rows) {
        out << r.value << ',' << (r.ok ? "ok" : "failed") << ',';
        if (r.ok) {
            out << r.metrics.roc_auc << ',' << r.metrics.pr_auc;
            for (auto k : cfg.recall_k) {
                double rec = 0.0;
                for (auto [kk, vv] : r.metrics.recall_at)
                    if (kk == k) rec = vv;
                out << ',' << rec;
            }
            out << ",\n";
        } else {
            out << ',';
            for (std::size_t i = 0; i < cfg.recall_k.size(); ++i) out << ',';
            std::string err = r.error;
            for (auto& ch : err)
                if (ch == ',' || ch == '\n') ch = ';';
            out << err << '\n';
        }
    }
    return rows;
}

}  // namespace guide
