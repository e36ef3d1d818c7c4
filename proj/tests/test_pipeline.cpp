#include "test_support.hpp"

#include <guide/config.hpp>
#include <guide/io.hpp>
#include <guide/pipeline.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace guide;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes a small community dataset and a config that trains quickly on it.
std::filesystem::path write_dataset(const std::string& name) {
    auto dir = fixtures::scratch_dir(name);
    auto g = fixtures::community_graph(240, 6, 48, 21);
    save_edge_list(g, dir / "edges.txt");
    save_attributes(g.attributes(), dir / "attributes.txt");
    std::ofstream ini(dir / "run.ini");
    ini << "[data]\nname = synthetic\nedges = " << (dir / "edges.txt").string()
        << "\nattributes = " << (dir / "attributes.txt").string() << "\n\n"
        << "[inject]\np = 5\nk = 20\n\n"
        << "[model]\nattribute_hidden = 16,8\nstructure_hidden = 8,8\nembedding_dim = 8\nepochs = 25\nlr = 0.01\n\n"
        << "[run]\nseed = 7\noutput = " << (dir / "out").string() << "\nrecall_k = 10,20\n";
    return dir;
}

}  // namespace

TEST(Config, DefaultsWithoutFile) {
    auto c = load_run_config(std::nullopt);
    EXPECT_EQ(c.injection.clique_size, 15u);
    EXPECT_FALSE(c.injection.clique_count);
    EXPECT_EQ(c.injection.candidates, 50u);
    EXPECT_EQ(c.transform, StructureTransform::log1p);
    EXPECT_EQ(c.model.attribute_hidden, (std::vector<std::size_t>{256, 128}));
    EXPECT_EQ(c.model.structure_hidden, (std::vector<std::size_t>{32, 32}));
    EXPECT_EQ(c.model.embedding_dim, 64u);
    EXPECT_EQ(c.model.alpha, 0.2);
    EXPECT_EQ(c.model.epochs, 200);
    EXPECT_EQ(c.model.lr, 0.001);
    EXPECT_EQ(c.recall_k, (std::vector<std::size_t>{50, 100, 150}));
    EXPECT_EQ(c.motifs.columns[2].name(), "clique4");
    EXPECT_EQ(c.injection.seed, derive_seed(0, "inject"));
    EXPECT_EQ(c.model.seed, derive_seed(0, "init"));
}

TEST(Config, OverridesAndExplicitSeeds) {
    auto c = load_run_config(std::nullopt, {"inject.q=4", "model.variant=gcnde", "census.m43=paw", "run.seed=3",
                                            "model.seed=11", "census.transform=raw"});
    EXPECT_EQ(c.injection.clique_count, 4u);
    EXPECT_EQ(c.model.variant_name(), "gcnde");
    EXPECT_EQ(c.motifs.columns[4].name(), "paw");
    EXPECT_EQ(c.model.seed, 11u);
    EXPECT_EQ(c.injection.seed, derive_seed(3, "inject"));
    EXPECT_EQ(c.transform, StructureTransform::raw);
}

TEST(Config, BadValuesAreConfigErrors) {
    EXPECT_THROW(load_run_config(std::nullopt, {"model.alpha"}), ConfigError);
    EXPECT_THROW(load_run_config(std::nullopt, {"model.variant=transformer"}), ConfigError);
    EXPECT_THROW(load_run_config(std::nullopt, {"census.m41=hexagon"}), ConfigError);
    EXPECT_THROW(load_run_config(std::nullopt, {"model.attribute_hidden=4,x"}), ConfigError);
    EXPECT_THROW(load_run_config(std::nullopt, {"model.epochs=many"}), ConfigError);
    EXPECT_THROW(load_run_config(std::filesystem::path("/nonexistent.ini")), ConfigError);
}

TEST(Config, ValidateChecksFiles) {
    auto c = load_run_config(std::nullopt);
    EXPECT_THROW(c.validate(), ConfigError);
    c.edges = "/nonexistent/edges.txt";
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Pipeline, WritesArtifactsAndReport) {
    auto dir = write_dataset("pipeline");
    auto cfg = load_run_config(dir / "run.ini");
    auto report = run_pipeline(cfg);

    for (const char* f : {"perturbed/edges.txt", "perturbed/attributes.txt", "perturbed/labels.txt", "structure.tsv",
                          "checkpoint.bin", "loss_trace.csv", "scores.tsv", "roc.csv", "pr.csv", "metrics.json",
                          "report.json"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
    }
    const auto& j = report.json;
    EXPECT_EQ(j["schema_version"], report_schema_version);
    EXPECT_EQ(j["dataset"]["nodes"], 240);
    EXPECT_EQ(j["injection"]["q"], 1);  // round(0.025 * 240 / 5)
    EXPECT_TRUE(j["metrics"].contains("roc_auc"));
    EXPECT_TRUE(j["metrics"]["recall_at"].contains("10"));
    EXPECT_EQ(report.score_sum, report.final_loss);
    EXPECT_GT(report.metrics.roc_auc, 0.5);

    auto labels = load_labels(dir / "out" / "perturbed" / "labels.txt", 240);
    EXPECT_EQ(std::accumulate(labels.begin(), labels.end(), 0), 10);
    auto scores = load_scores(dir / "out" / "scores.tsv");
    double sum = 0.0;
    for (double s : scores) sum += s;
    EXPECT_EQ(sum, report.final_loss);
    EXPECT_EQ(roc_auc(scores, labels).auc, report.metrics.roc_auc);

    // The perturbed dataset reloads to the same graph the model saw.
    auto reloaded = load_attributed_graph(dir / "out" / "perturbed" / "edges.txt",
                                          dir / "out" / "perturbed" / "attributes.txt");
    EXPECT_EQ(reloaded.num_edges(), j["dataset"]["edges_after_injection"].get<std::size_t>());
}

TEST(Pipeline, RerunIsByteIdentical) {
    auto dir = write_dataset("pipeline-determinism");
    auto cfg = load_run_config(dir / "run.ini");
    run_pipeline(cfg);
    const auto metrics = slurp(dir / "out" / "metrics.json");
    const auto checkpoint = slurp(dir / "out" / "checkpoint.bin");
    const auto scores = slurp(dir / "out" / "scores.tsv");
    run_pipeline(cfg);
    EXPECT_EQ(slurp(dir / "out" / "metrics.json"), metrics);
    EXPECT_EQ(slurp(dir / "out" / "checkpoint.bin"), checkpoint);
    EXPECT_EQ(slurp(dir / "out" / "scores.tsv"), scores);
}

TEST(Pipeline, MissingAttributesFailInIngest) {
    auto dir = write_dataset("pipeline-missing");
    auto cfg = load_run_config(dir / "run.ini", {"data.attributes=" + (dir / "nope.txt").string()});
    try {
        run_pipeline(cfg);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "ingest");
    }
}

TEST(Pipeline, OversizedInjectionFailsInInject) {
    auto dir = write_dataset("pipeline-inject");
    auto cfg = load_run_config(dir / "run.ini", {"inject.q=100"});
    try {
        run_pipeline(cfg);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "inject");
    }
}

TEST(Sweep, SharedInjectionAndFailedCellsRecorded) {
    auto dir = write_dataset("sweep");
    auto cfg = load_run_config(dir / "run.ini");
    auto rows = sweep(cfg, SweepAxis::embedding_dim, {4, 2.5, 8});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_TRUE(rows[0].ok);
    EXPECT_FALSE(rows[1].ok);
    EXPECT_FALSE(rows[1].error.empty());
    EXPECT_TRUE(rows[2].ok);
    auto csv = slurp(dir / "out" / "sweep.csv");
    EXPECT_NE(csv.find("embedding_dim,status,roc_auc"), std::string::npos);
    EXPECT_NE(csv.find("failed"), std::string::npos);
}

TEST(Sweep, SingleValueMatchesPlainRun) {
    auto dir = write_dataset("sweep-single");
    auto cfg = load_run_config(dir / "run.ini", {"model.alpha=0.4"});
    auto rows = sweep(cfg, SweepAxis::alpha, {0.4});
    auto report = run_pipeline(cfg);
    ASSERT_TRUE(rows[0].ok);
    EXPECT_EQ(rows[0].metrics.roc_auc, report.metrics.roc_auc);
    EXPECT_EQ(rows[0].metrics.pr_auc, report.metrics.pr_auc);
    EXPECT_THROW(sweep(cfg, SweepAxis::alpha, {}), ConfigError);
    EXPECT_THROW(parse_sweep_axis("lr"), ConfigError);
}

namespace {

int run_cli(const std::string& args, const std::filesystem::path& log) {
    const char* cli = std::getenv("GUIDE_CLI");
    const std::string cmd = std::string(cli) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, SubcommandsAndFailureReporting) {
    if (!std::getenv("GUIDE_CLI")) GTEST_SKIP() << "GUIDE_CLI not set";
    auto dir = write_dataset("cli");
    const auto ini = (dir / "run.ini").string();
    const auto log = dir / "log.txt";

    EXPECT_EQ(run_cli("ingest -c " + ini, log), 0);
    EXPECT_NE(slurp(log).find("240 nodes"), std::string::npos) << slurp(log);

    EXPECT_EQ(run_cli("inject -c " + ini + " --p 4 --q 3 --k 10 --seed 5", log), 0);
    EXPECT_NE(slurp(log).find("injected 3 cliques of size 4"), std::string::npos) << slurp(log);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "perturbed" / "labels.txt"));

    EXPECT_EQ(run_cli("census -c " + ini + " --targets 1,2,3", log), 0);
    EXPECT_NE(slurp(log).find("closest assignment"), std::string::npos) << slurp(log);

    EXPECT_EQ(run_cli("train -c " + ini + " --epochs 3", log), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "checkpoint.bin"));
    EXPECT_EQ(run_cli("evaluate -c " + ini + " --labels " + (dir / "out" / "perturbed" / "labels.txt").string(), log),
              0);
    EXPECT_NE(slurp(log).find("roc_auc"), std::string::npos) << slurp(log);

    EXPECT_EQ(run_cli("run -c " + ini + " --set model.epochs=3", log), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "report.json"));
    EXPECT_EQ(run_cli("sweep -c " + ini + " --set model.epochs=3 --axis alpha --values 0,0.5", log), 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / "sweep.csv"));

    EXPECT_NE(run_cli("run -c " + ini + " --set data.attributes=/nonexistent.txt", log), 0);
    EXPECT_NE(slurp(log).find("stage ingest"), std::string::npos) << slurp(log);
    EXPECT_NE(run_cli("run -c " + ini + " --set inject.q=999", log), 0);
    EXPECT_NE(slurp(log).find("stage inject"), std::string::npos) << slurp(log);
}
