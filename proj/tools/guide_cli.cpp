// guide: command-line driver for the anomaly detection pipeline.
//
//   guide ingest   --config run.ini            load and summarize a dataset
//   guide inject   --config run.ini [--p --q --k --seed]
//   guide census   --config run.ini [--targets 220,2468,1536]
//   guide train    --config run.ini
//   guide evaluate --config run.ini --labels labels.txt [--checkpoint | --scores]
//   guide run      --config run.ini
//   guide sweep    --config run.ini --axis alpha --values 0,0.2,1
//
// Every subcommand accepts --set section.key=value (repeatable). Failures exit
// with status 1 and print the failing stage.

#include <guide/guide.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using guide::RunConfig;

struct Common {
    std::optional<std::string> config;
    std::vector<std::string> overrides;

    RunConfig load() const {
        return guide::load_run_config(config ? std::optional<std::filesystem::path>(*config) : std::nullopt,
                                      overrides);
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config, "INI config file");
    cmd->add_option("-s,--set", c.overrides, "override a config key (section.key=value)")->allow_extra_args(false);
}

template <typename T>
void add_override(CLI::App* cmd, const std::string& flag, const std::string& key, std::optional<T>& slot,
                  const std::string& help) {
    cmd->add_option(flag, slot, help + " (" + key + ")");
}

template <typename T>
void push_override(Common& c, const std::string& key, const std::optional<T>& v) {
    if (!v) return;
    std::ostringstream os;
    os.precision(17);
    os << *v;
    c.overrides.push_back(key + "=" + os.str());
}

void print_census(const guide::Census& census, const guide::MotifAssignment& assignment) {
    auto s = guide::build_structure_matrix(census, guide::StructureTransform::raw, assignment);
    std::cout << "edges\t" << s.totals[0] << '\n';
    for (std::size_t k = 0; k < 5; ++k) {
        std::cout << guide::MotifAssignment::column_tags[k] << '\t' << assignment.columns[k].name() << '\t'
                  << s.totals[k + 1] << '\n';
    }
    const auto classes = guide::motifs::four_node_classes();
    const auto totals = census.four_node.totals();
    for (std::size_t k = 0; k < classes.size(); ++k) std::cout << "class\t" << classes[k].name() << '\t' << totals[k] << '\n';
}

int cmd_ingest(const Common& common) {
    auto cfg = guide::run_stage("ingest", [&] { return common.load(); });
    auto g = guide::run_stage("ingest", [&] { return guide::ingest(cfg); });
    std::cout << "dataset " << cfg.dataset_name << ": " << g.num_nodes() << " nodes, " << g.num_edges()
              << " edges, " << g.attribute_dim() << " attributes\n";
    return 0;
}

int cmd_inject(const Common& common) {
    auto cfg = guide::run_stage("ingest", [&] { return common.load(); });
    auto g = guide::run_stage("ingest", [&] { return guide::ingest(cfg); });
    auto r = guide::run_stage("inject", [&] { return guide::inject(g, cfg.injection); });
    guide::run_stage("inject", [&] {
        const auto dir = cfg.output / "perturbed";
        guide::save_edge_list(r.graph, dir / "edges.txt");
        guide::save_attributes(r.graph.attributes(), dir / "attributes.txt");
        guide::save_labels(r.labels, dir / "labels.txt");
    });
    std::cout << "injected " << r.cliques.size() << " cliques of size " << cfg.injection.clique_size << " ("
              << r.structural_ids.size() << " structural), " << r.attribute_ids.size() << " attribute anomalies, "
              << r.graph.num_edges() - g.num_edges() << " new edges, seed " << cfg.injection.seed << " -> "
              << (cfg.output / "perturbed").string() << '\n';
    return 0;
}

int cmd_census(const Common& common, const std::vector<guide::Count>& targets) {
    auto cfg = guide::run_stage("ingest", [&] { return common.load(); });
    auto g = guide::run_stage("ingest", [&] { return guide::ingest(cfg); });
    auto census = guide::run_stage("census", [&] { return guide::run_census(g); });
    print_census(census, cfg.motifs);
    if (!targets.empty()) {
        if (targets.size() != 3) throw guide::StageError("census", "--targets needs exactly three totals");
        auto d = guide::disambiguate_four_node(census.four_node.totals(), {targets[0], targets[1], targets[2]});
        const auto classes = guide::motifs::four_node_classes();
        std::cout << (d.exact ? "assignment exact:" : "closest assignment:");
        for (std::size_t k = 0; k < 3; ++k)
            std::cout << ' ' << guide::MotifAssignment::column_tags[k + 2] << '=' << classes[d.class_index[k]].name()
                      << '(' << d.totals[k] << ')';
        std::cout << " relative_error=" << d.relative_error << '\n';
    }
    guide::run_stage("census", [&] {
        guide::save_structure_matrix(guide::build_structure_matrix(census, guide::StructureTransform::raw, cfg.motifs),
                                     cfg.output / "structure.tsv");
    });
    return 0;
}

int cmd_train(const Common& common) {
    auto cfg = guide::run_stage("ingest", [&] { return common.load(); });
    auto g = guide::run_stage("ingest", [&] { return guide::ingest(cfg); });
    auto s = guide::run_stage("census", [&] { return guide::build_structure_matrix(g, cfg.transform, cfg.motifs); });
    auto result = guide::run_stage("train", [&] {
        return guide::train(g, s.values, cfg.model, [](const guide::EpochLoss& e) {
            if (e.epoch % 20 == 0) std::cerr << "epoch " << e.epoch << " loss " << e.value.total << '\n';
        });
    });
    guide::run_stage("train", [&] {
        guide::save_checkpoint(result.model, cfg.output / "checkpoint.bin");
        guide::write_loss_trace(result.trace, cfg.output / "loss_trace.csv");
    });
    std::cout << "trained " << cfg.model.variant_name() << " for " << cfg.model.epochs << " epochs, final loss "
              << result.final_loss.total << " -> " << (cfg.output / "checkpoint.bin").string() << '\n';
    return 0;
}

int cmd_evaluate(const Common& common, const std::string& labels_path, const std::optional<std::string>& checkpoint,
                 const std::optional<std::string>& scores_path) {
    auto cfg = guide::run_stage("ingest", [&] { return common.load(); });
    guide::ScoredRanking ranking;
    if (scores_path) {
        ranking = guide::run_stage("score",
                                   [&] { return guide::ScoredRanking::from_scores(guide::load_scores(*scores_path)); });
    } else {
        auto g = guide::run_stage("ingest", [&] { return guide::ingest(cfg); });
        auto s = guide::run_stage("census", [&] { return guide::build_structure_matrix(g, cfg.transform, cfg.motifs); });
        ranking = guide::run_stage("score", [&] {
            auto model = guide::load_checkpoint(checkpoint ? std::filesystem::path(*checkpoint)
                                                           : cfg.output / "checkpoint.bin");
            return guide::score_nodes(model, guide::ModelInputs::build(g, s.values));
        });
        guide::run_stage("score", [&] { guide::write_scores(ranking, cfg.output / "scores.tsv"); });
    }
    auto metrics = guide::run_stage("evaluate", [&] {
        auto labels = guide::load_labels(labels_path, ranking.size());
        auto m = guide::evaluate_ranking(ranking, labels, cfg.recall_k);
        guide::write_metrics(m, cfg.output);
        return m;
    });
    std::cout << metrics.to_json().dump(2) << '\n';
    return 0;
}

int cmd_run(const Common& common) {
    auto cfg = guide::run_stage("ingest", [&] { return common.load(); });
    auto report = guide::run_pipeline(cfg);
    std::cout << report.json["metrics"].dump(2) << '\n';
    std::cout << "final_loss " << report.final_loss << " score_sum " << report.score_sum << " -> "
              << (cfg.output / "report.json").string() << '\n';
    return 0;
}

int cmd_sweep(const Common& common, const std::string& axis, const std::vector<double>& values) {
    auto cfg = guide::run_stage("ingest", [&] { return common.load(); });
    const auto a = guide::run_stage("sweep", [&] { return guide::parse_sweep_axis(axis); });
    auto rows = guide::sweep(cfg, a, values);
    std::size_t failed = 0;
    for (const auto& r : rows) {
        std::cout << axis << '=' << r.value << '\t';
        if (r.ok) {
            std::cout << "roc_auc=" << r.metrics.roc_auc << "\tpr_auc=" << r.metrics.pr_auc << '\n';
        } else {
            ++failed;
            std::cout << "failed: " << r.error << '\n';
        }
    }
    std::cout << "-> " << (cfg.output / "sweep.csv").string() << '\n';
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Motif-aware graph autoencoder anomaly detection"};
    app.require_subcommand(1);

    Common common;

    auto* ingest = app.add_subcommand("ingest", "load a dataset and print its size");
    add_common(ingest, common);

    auto* inject = app.add_subcommand("inject", "plant structural and attribute anomalies");
    add_common(inject, common);
    std::optional<std::size_t> p, k;
    std::optional<std::string> q;
    std::optional<std::uint64_t> inject_seed;
    add_override(inject, "--p", "inject.p", p, "clique size");
    add_override(inject, "--q", "inject.q", q, "clique count or 'auto'");
    add_override(inject, "--k", "inject.k", k, "attribute candidates");
    add_override(inject, "--seed", "inject.seed", inject_seed, "injection seed");

    auto* census = app.add_subcommand("census", "count motifs and write the structure matrix");
    add_common(census, common);
    std::vector<guide::Count> targets;
    census->add_option("--targets", targets, "three 4-node totals to match against the six classes")->delimiter(',');

    auto* train = app.add_subcommand("train", "train a model and write a checkpoint");
    add_common(train, common);
    std::optional<double> alpha;
    std::optional<int> epochs;
    add_override(train, "--alpha", "model.alpha", alpha, "balance between structure and attributes");
    add_override(train, "--epochs", "model.epochs", epochs, "training epochs");

    auto* evaluate = app.add_subcommand("evaluate", "score nodes and compute ranking metrics");
    add_common(evaluate, common);
    std::string labels;
    std::optional<std::string> checkpoint, scores;
    evaluate->add_option("--labels", labels, "0/1 label file, one line per node")->required();
    auto* ck = evaluate->add_option("--checkpoint", checkpoint, "checkpoint (default <output>/checkpoint.bin)");
    evaluate->add_option("--scores", scores, "score file from a previous run")->excludes(ck);

    auto* run = app.add_subcommand("run", "full pipeline");
    add_common(run, common);
    std::optional<std::uint64_t> root_seed;
    add_override(run, "--seed", "run.seed", root_seed, "root seed");

    auto* sweep = app.add_subcommand("sweep", "one model per value on a shared injection");
    add_common(sweep, common);
    std::string axis;
    std::vector<double> values;
    sweep->add_option("--axis", axis, "alpha or embedding_dim")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    push_override(common, "inject.p", p);
    push_override(common, "inject.q", q);
    push_override(common, "inject.k", k);
    push_override(common, "inject.seed", inject_seed);
    push_override(common, "model.alpha", alpha);
    push_override(common, "model.epochs", epochs);
    push_override(common, "run.seed", root_seed);

    try {
        if (ingest->parsed()) return cmd_ingest(common);
        if (inject->parsed()) return cmd_inject(common);
        if (census->parsed()) return cmd_census(common, targets);
        if (train->parsed()) return cmd_train(common);
        if (evaluate->parsed()) return cmd_evaluate(common, labels, checkpoint, scores);
        if (run->parsed()) return cmd_run(common);
        if (sweep->parsed()) return cmd_sweep(common, axis, values);
    } catch (const guide::StageError& e) {
        std::cerr << "error: stage " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
