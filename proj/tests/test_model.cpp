#include "gradient_check.hpp"
#include "test_support.hpp"

#include <guide/checkpoint.hpp>
#include <guide/model.hpp>
#include <guide/motif.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace guide;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
    return m;
}

Matrix dense(const SparseMatrix& s) { return Matrix(s); }

Matrix naive_relu(const Matrix& m) {
    Matrix out = m;
    for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = out.data()[i] > 0.0 ? out.data()[i] : 0.0;
    return out;
}

Matrix naive_product(const Matrix& a, const Matrix& b) {
    Matrix c = Matrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            for (Eigen::Index j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

/// Per-node attention layer written directly from the definition: plain
/// softmax (no max shift), pool = neighbours plus the node itself.
Matrix naive_gna(const AttributedGraph& g, const Matrix& h, const Matrix& w1, const Matrix& w2, const Matrix& a) {
    Matrix out(h.rows(), w1.cols());
    Matrix p = naive_product(h, w2);
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        std::vector<NodeId> pool(g.neighbors(i).begin(), g.neighbors(i).end());
        pool.push_back(i);
        std::vector<double> e;
        double total = 0.0;
        for (NodeId j : pool) {
            double logit = 0.0;
            for (Eigen::Index c = 0; c < p.cols(); ++c) logit += a(c, 0) * (p(i, c) - p(j, c));
            e.push_back(std::exp(logit));
            total += e.back();
        }
        Matrix row = naive_product(h.row(i), w1);
        for (std::size_t k = 0; k < pool.size(); ++k) row += (e[k] / total) * p.row(pool[k]);
        out.row(i) = naive_relu(row);
    }
    return out;
}

ModelConfig small_config(const std::string& variant = "guide", double alpha = 0.3) {
    ModelConfig c;
    c.attribute_hidden = {4, 3};
    c.structure_hidden = {4, 3};
    c.embedding_dim = 2;
    c.alpha = alpha;
    c.epochs = 5;
    c.seed = 17;
    std::tie(c.structure_encoder, c.structure_decoder) = ModelConfig::variant(variant);
    return c;
}

/// 6 nodes, 5 attributes, 6 structure columns.
struct SmallInstance {
    AttributedGraph graph;
    ModelInputs inputs;
};

SmallInstance small_instance(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Edge> e{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {1, 4}};
    auto g = AttributedGraph::from_edges(6, e, random_matrix(6, 5, rng, 0.0, 1.0));
    Matrix s = build_structure_matrix(g, StructureTransform::log1p).values;
    s += random_matrix(6, 6, rng, 0.0, 0.5);
    return {g, ModelInputs::build(g, s)};
}

}  // namespace

TEST(GcnLayer, SingleNodeAndZeroWeights) {
    auto g = AttributedGraph::from_edges(1, {});
    const auto adj = NormalizedAdjacency(g).matrix();
    Matrix h(1, 1), w = Matrix::Identity(1, 1);
    h << -2.5;
    EXPECT_EQ(gcn_layer(adj, h, w)(0, 0), 0.0);
    h << 1.5;
    EXPECT_EQ(gcn_layer(adj, h, w)(0, 0), 1.5);
    Rng rng(0);
    EXPECT_TRUE(gcn_layer(adj, random_matrix(1, 3, rng), Matrix::Zero(3, 2)).isZero(0.0));
}

TEST(GcnLayer, MatchesDenseOracleOnPath) {
    std::vector<Edge> e{{0, 1}, {1, 2}};
    auto g = AttributedGraph::from_edges(3, e);
    const auto adj = NormalizedAdjacency(g).matrix();
    Rng rng(1);
    for (int t = 0; t < 10; ++t) {
        Matrix h = random_matrix(3, 4, rng), w = random_matrix(4, 2, rng);
        Matrix expected = naive_relu(naive_product(naive_product(dense(adj), h), w));
        EXPECT_LT((gcn_layer(adj, h, w) - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(GcnLayer, SparseInputPathMatchesDense) {
    Rng rng(2);
    auto g = fixtures::erdos_renyi(30, 0.1, rng);
    const auto adj = NormalizedAdjacency(g).matrix();
    Matrix h = Matrix::Zero(30, 12);
    for (int k = 0; k < 40; ++k) h(static_cast<Eigen::Index>(rng() % 30), static_cast<Eigen::Index>(rng() % 12)) = 1.0;
    SparseMatrix hs = h.sparseView();
    GcnLayer layer("l", 12, 5, rng);
    auto a = layer.forward(adj, h);
    auto b = layer.forward(adj, h, &hs);
    EXPECT_LT((a.out - b.out).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Attention, IsolatedNodeAttendsToItself) {
    Rng rng(3);
    Matrix h = random_matrix(1, 3, rng), w2 = random_matrix(3, 2, rng), a = random_matrix(2, 1, rng);
    std::vector<NodeId> pool{0};
    auto w = attention_coefficients(h, 0, pool, w2, a);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0], 1.0);
}

TEST(Attention, EqualRowsGiveUniformWeights) {
    Rng rng(4);
    Matrix row = random_matrix(1, 3, rng);
    Matrix h = row.replicate(4, 1);
    std::vector<NodeId> pool{2, 0, 1, 3};
    auto w = attention_coefficients(h, 2, pool, random_matrix(3, 2, rng), random_matrix(2, 1, rng));
    for (double x : w) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(Attention, HandSoftmaxOneTwoFourSevenths) {
    // logits u_i - u_j = {0, ln 2, ln 4} with W2 = a = [1] and h = {0, -ln 2, -ln 4}
    Matrix h(3, 1), w2 = Matrix::Ones(1, 1), a = Matrix::Ones(1, 1);
    h << 0.0, -std::log(2.0), -std::log(4.0);
    std::vector<NodeId> pool{0, 1, 2};
    auto w = attention_coefficients(h, 0, pool, w2, a);
    EXPECT_NEAR(w[0], 1.0 / 7.0, 1e-15);
    EXPECT_NEAR(w[1], 2.0 / 7.0, 1e-15);
    EXPECT_NEAR(w[2], 4.0 / 7.0, 1e-15);

    // The layer realises the same weights on the star 0-1, 0-2.
    std::vector<Edge> e{{0, 1}, {0, 2}};
    auto g = AttributedGraph::from_edges(3, e);
    Rng rng(0);
    GnaLayer layer("l", 1, 1, rng);
    auto params = layer.parameters();
    params[1]->value = w2;
    params[2]->value = a;
    const auto adj = NormalizedAdjacency(g).matrix();
    auto cache = layer.forward(adj, h);
    // Row 0 holds columns 0, 1, 2 in order.
    EXPECT_NEAR(cache.attention[0], 1.0 / 7.0, 1e-15);
    EXPECT_NEAR(cache.attention[1], 2.0 / 7.0, 1e-15);
    EXPECT_NEAR(cache.attention[2], 4.0 / 7.0, 1e-15);
}

TEST(Attention, LargeLogitsStayFinite) {
    Matrix h(2, 1), one = Matrix::Ones(1, 1);
    h << 0.0, -2000.0;
    std::vector<NodeId> pool{0, 1};
    auto w = attention_coefficients(h, 0, pool, one, one);
    EXPECT_TRUE(std::isfinite(w[0]) && std::isfinite(w[1]));
    EXPECT_NEAR(w[1], 1.0, 1e-15);
}

TEST(GnaLayer, IsolatedNodeReducesToSumOfWeights) {
    auto g = AttributedGraph::from_edges(1, {});
    Rng rng(5);
    Matrix h = random_matrix(1, 3, rng), w1 = random_matrix(3, 2, rng), w2 = random_matrix(3, 2, rng),
           a = random_matrix(2, 1, rng);
    auto out = gna_layer(NormalizedAdjacency(g).matrix(), h, w1, w2, a);
    EXPECT_LT((out - naive_relu(naive_product(h, w1 + w2))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GnaLayer, ZeroW2IsPerNodeLinear) {
    Rng rng(6);
    auto g = fixtures::erdos_renyi(10, 0.4, rng);
    Matrix h = random_matrix(10, 3, rng), w1 = random_matrix(3, 4, rng), a = random_matrix(4, 1, rng);
    auto out = gna_layer(NormalizedAdjacency(g).matrix(), h, w1, Matrix::Zero(3, 4), a);
    EXPECT_LT((out - naive_relu(naive_product(h, w1))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GnaLayer, MatchesPerNodeOracle) {
    Rng rng(7);
    std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
    std::vector<AttributedGraph> graphs{AttributedGraph::from_edges(3, tri), fixtures::erdos_renyi(15, 0.3, rng)};
    for (const auto& g : graphs) {
        for (int t = 0; t < 5; ++t) {
            const auto n = static_cast<Eigen::Index>(g.num_nodes());
            Matrix h = random_matrix(n, 3, rng), w1 = random_matrix(3, 2, rng), w2 = random_matrix(3, 2, rng),
                   a = random_matrix(2, 1, rng);
            auto out = gna_layer(NormalizedAdjacency(g).matrix(), h, w1, w2, a);
            EXPECT_LT((out - naive_gna(g, h, w1, w2, a)).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(GnaLayer, ShapeMismatchThrows) {
    auto adj = NormalizedAdjacency(AttributedGraph::from_edges(2, {})).matrix();
    EXPECT_THROW(gna_layer(adj, Matrix::Zero(2, 3), Matrix::Zero(3, 2), Matrix::Zero(3, 2), Matrix::Zero(3, 1)),
                 ShapeError);
    EXPECT_THROW(gcn_layer(adj, Matrix::Zero(2, 3), Matrix::Zero(2, 2)), ShapeError);
}

TEST(Loss, Examples) {
    Matrix x = Matrix::Ones(2, 2), s = Matrix::Ones(2, 3);
    EXPECT_EQ(loss(x, x, s, s, 0.4).total, 0.0);
    Rng rng(8);
    Matrix s_hat1 = random_matrix(2, 3, rng), s_hat2 = random_matrix(2, 3, rng), x_hat = random_matrix(2, 2, rng);
    EXPECT_EQ(loss(x, x_hat, s, s_hat1, 1.0).total, loss(x, x_hat, s, s_hat2, 1.0).total);

    // ‖S-Ŝ‖² = 2, ‖X-X̂‖² = 4
    Matrix xs = Matrix::Zero(1, 1), xh(1, 1), ss = Matrix::Zero(1, 2), sh(1, 2);
    xh << 2.0;
    sh << 1.0, 1.0;
    auto v = loss(xs, xh, ss, sh, 0.5);
    EXPECT_DOUBLE_EQ(v.total, 3.0);
    EXPECT_DOUBLE_EQ(v.structure_term, 1.0);
    EXPECT_DOUBLE_EQ(v.attribute_term, 2.0);
}

TEST(Scores, PerfectAttributeReconstructionScoresZeroAtAlphaOne) {
    Matrix x = Matrix::Ones(3, 2), s = Matrix::Zero(3, 1), s_hat = Matrix::Ones(3, 1);
    auto scores = node_scores(x, x, s, s_hat, 1.0);
    for (double v : scores) EXPECT_EQ(v, 0.0);
}

TEST(Model, ShapesAndZeroInputs) {
    auto inst = small_instance(1);
    GuideModel model(small_config(), 5, 6);
    auto fp = model.forward(inst.inputs);
    EXPECT_EQ(fp.z_attr().rows(), 6);
    EXPECT_EQ(fp.z_attr().cols(), 2);
    EXPECT_EQ(fp.x_hat().cols(), 5);
    EXPECT_EQ(fp.z_struct().cols(), 2);
    EXPECT_EQ(fp.s_hat().cols(), 6);
    EXPECT_GE(fp.x_hat().minCoeff(), 0.0);
    EXPECT_GE(fp.s_hat().minCoeff(), 0.0);

    auto zero = ModelInputs::build(inst.graph.with_attributes(Matrix::Zero(6, 5)), Matrix::Zero(6, 6));
    auto r = model.reconstruct(zero);
    EXPECT_TRUE(r.x_hat.isZero(0.0));
    EXPECT_TRUE(r.s_hat.isZero(0.0));
    EXPECT_TRUE(r.r_attr.isZero(0.0));
}

TEST(Model, LayerNamesAndCounts) {
    GuideModel model(small_config(), 5, 6);
    std::vector<std::string> names;
    for (auto* p : model.parameters()) names.push_back(p->name);
    const std::vector<std::string> expected{
        "attr.enc0.W",     "attr.enc1.W",     "attr.enc2.W",    "attr.dec.W",      "struct.enc0.W1",
        "struct.enc0.W2",  "struct.enc0.a",   "struct.enc1.W1", "struct.enc1.W2",  "struct.enc1.a",
        "struct.enc2.W1",  "struct.enc2.W2",  "struct.enc2.a",  "struct.dec.W1",   "struct.dec.W2",
        "struct.dec.a"};
    EXPECT_EQ(names, expected);
    EXPECT_EQ(model.parameter("struct.enc1.W2").value.rows(), 4);
    EXPECT_EQ(model.parameter("struct.enc1.W2").value.cols(), 3);
    EXPECT_THROW(model.parameter("nope"), Error);
}

TEST(Model, AttributeBranchMatchesDenseOracle) {
    auto inst = small_instance(2);
    GuideModel model(small_config(), 5, 6);
    Matrix adj = dense(inst.inputs.adjacency);
    Matrix h = inst.inputs.x;
    for (const char* name : {"attr.enc0.W", "attr.enc1.W", "attr.enc2.W", "attr.dec.W"}) {
        h = naive_relu(naive_product(naive_product(adj, h), model.parameter(name).value));
    }
    EXPECT_LT((model.forward(inst.inputs).x_hat() - h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, StructureBranchMatchesPerNodeOracle) {
    auto inst = small_instance(3);
    GuideModel model(small_config(), 5, 6);
    Matrix h = inst.inputs.s;
    for (const char* layer : {"struct.enc0", "struct.enc1", "struct.enc2", "struct.dec"}) {
        const std::string n(layer);
        h = naive_gna(inst.graph, h, model.parameter(n + ".W1").value, model.parameter(n + ".W2").value,
                      model.parameter(n + ".a").value);
    }
    EXPECT_LT((model.forward(inst.inputs).s_hat() - h).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, GcnVariantEqualsAttributeStyleAutoencoderOnS) {
    auto inst = small_instance(4);
    auto cfg = small_config("gcn");
    GuideModel a(cfg, 5, 6);

    // An attribute branch with the same widths, fed S as its attributes.
    ModelConfig mirror = cfg;
    mirror.attribute_hidden = cfg.structure_hidden;
    GuideModel b(mirror, 6, 6);
    for (const char* l : {"enc0", "enc1", "enc2", "dec"}) {
        b.parameter(std::string("attr.") + l + ".W").value = a.parameter(std::string("struct.") + l + ".W").value;
    }
    auto fed = ModelInputs::build(inst.graph.with_attributes(inst.inputs.s), inst.inputs.s);
    fed.x_sparse.reset();
    EXPECT_LT((a.forward(inst.inputs).s_hat() - b.forward(fed).x_hat()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Model, VariantsSelectLayerKinds) {
    for (const char* v : {"guide", "gcnen", "gcnde", "gcn"}) {
        auto cfg = small_config(v);
        EXPECT_EQ(cfg.variant_name(), v);
        GuideModel model(cfg, 5, 6);
        const bool enc_gna = cfg.structure_encoder == LayerKind::gna;
        const bool dec_gna = cfg.structure_decoder == LayerKind::gna;
        EXPECT_EQ(model.parameters().size(), 4u + (enc_gna ? 9u : 3u) + (dec_gna ? 3u : 1u));
    }
    EXPECT_THROW(ModelConfig::variant("gat"), ConfigError);
}

TEST(Model, ConfigValidation) {
    auto c = small_config();
    c.alpha = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_config();
    c.epochs = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = small_config();
    c.structure_hidden = {0};
    EXPECT_THROW(GuideModel(c, 5, 6), ConfigError);
}

class GradientCheck : public ::testing::TestWithParam<const char*> {};

TEST_P(GradientCheck, WholeModelMatchesFiniteDifferences) {
    auto inst = small_instance(5);
    GuideModel model(small_config(GetParam()), 5, 6);
    for (const auto& c : fixtures::check_gradients(model, inst.inputs)) {
        EXPECT_LT(c.max_relative_error, 1e-4) << c.name;
    }
}

INSTANTIATE_TEST_SUITE_P(Variants, GradientCheck, ::testing::Values("guide", "gcnen", "gcnde", "gcn"));

TEST(Model, AttentionRowsSumToOneThroughTraining) {
    Rng rng(9);
    auto g = fixtures::erdos_renyi(40, 0.12, rng, 6);
    auto in = ModelInputs::build(g, build_structure_matrix(g, StructureTransform::log1p).values);
    auto cfg = small_config();
    GuideModel model(cfg, 6, 6);
    const auto* outer = in.adjacency.outerIndexPtr();
    for (int epoch = 0; epoch < 10; ++epoch) {
        auto fp = model.forward(in);
        for (const auto& cache : fp.structure) {
            const auto& gna = std::get<GnaCache>(cache);
            for (Eigen::Index i = 0; i < in.adjacency.rows(); ++i) {
                double sum = 0.0;
                for (auto k = outer[i]; k < outer[i + 1]; ++k) sum += gna.attention[static_cast<std::size_t>(k)];
                EXPECT_NEAR(sum, 1.0, 1e-12);
            }
        }
        model.zero_grad();
        model.accumulate_gradients(in);
        model.apply_gradients();
    }
}

TEST(Model, PermutationEquivariance) {
    Rng rng(10);
    auto g = fixtures::erdos_renyi(12, 0.3, rng, 4);
    Matrix s = build_structure_matrix(g, StructureTransform::log1p).values;
    std::vector<NodeId> perm(12);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<Edge> pe;
    for (auto [u, v] : g.edges()) pe.emplace_back(perm[u], perm[v]);
    Matrix px(12, 4), ps(12, 6);
    for (NodeId i = 0; i < 12; ++i) {
        px.row(perm[i]) = g.attributes().row(i);
        ps.row(perm[i]) = s.row(i);
    }
    auto pg = AttributedGraph::from_edges(12, pe, px);

    GuideModel model(small_config(), 4, 6);
    auto a = score_nodes(model, ModelInputs::build(g, s));
    auto b = score_nodes(model, ModelInputs::build(pg, ps));
    for (NodeId i = 0; i < 12; ++i) EXPECT_NEAR(a.scores[i], b.scores[perm[i]], 1e-10);
}

TEST(Model, AlphaZeroLeavesAttributeBranchWithoutGradient) {
    auto inst = small_instance(11);
    GuideModel model(small_config("guide", 0.0), 5, 6);
    model.zero_grad();
    model.accumulate_gradients(inst.inputs);
    for (auto* p : model.parameters()) {
        if (p->name.starts_with("attr.")) {
            EXPECT_TRUE(p->grad.isZero(0.0)) << p->name;
        }
    }
    EXPECT_FALSE(model.parameter("struct.dec.W1").grad.isZero(0.0));
}

TEST(Model, ScoresSumToLoss) {
    Rng rng(12);
    auto g = fixtures::erdos_renyi(50, 0.1, rng, 7);
    auto in = ModelInputs::build(g, build_structure_matrix(g, StructureTransform::log1p).values);
    for (double alpha : {0.0, 0.2, 0.7, 1.0}) {
        auto cfg = small_config("guide", alpha);
        cfg.epochs = 3;
        auto result = train(in, cfg);
        auto ranking = score_nodes(result.model, in);
        double sum = 0.0;
        for (double v : ranking.scores) sum += v;
        EXPECT_EQ(sum, result.final_loss.total);
        EXPECT_NEAR(result.final_loss.total, result.final_loss.structure_term + result.final_loss.attribute_term,
                    1e-9 * std::max(1.0, result.final_loss.total));
    }
}

TEST(Training, DeterministicAndMakesProgress) {
    auto g = fixtures::community_graph(120, 4, 40, 3);
    auto in = ModelInputs::build(g, build_structure_matrix(g, StructureTransform::log1p).values);
    ModelConfig cfg;
    cfg.attribute_hidden = {16, 8};
    cfg.structure_hidden = {8, 8};
    cfg.embedding_dim = 8;
    cfg.epochs = 60;
    cfg.lr = 0.01;
    cfg.seed = 5;
    auto a = train(in, cfg);
    auto b = train(in, cfg);
    ASSERT_EQ(a.trace.size(), 60u);
    EXPECT_LT(a.trace.back().value.total, a.trace.front().value.total);
    for (const auto& e : a.trace) EXPECT_TRUE(std::isfinite(e.value.total));
    auto pa = a.model.parameters(), pb = b.model.parameters();
    for (std::size_t k = 0; k < pa.size(); ++k) EXPECT_TRUE(pa[k]->value == pb[k]->value) << pa[k]->name;
}

TEST(Training, NonFiniteLossAbortsWithEpoch) {
    auto inst = small_instance(13);
    Matrix huge = Matrix::Constant(6, 5, 1e200);
    auto in = ModelInputs::build(inst.graph.with_attributes(huge), inst.inputs.s);
    try {
        train(in, small_config());
        FAIL() << "expected NumericError";
    } catch (const NumericError& e) {
        EXPECT_NE(std::string(e.what()).find("epoch 0"), std::string::npos) << e.what();
    }
}

TEST(Training, CallbackSeesEveryEpoch) {
    auto inst = small_instance(14);
    std::vector<int> seen;
    train(inst.inputs, small_config(), [&](const EpochLoss& e) { seen.push_back(e.epoch); });
    EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Ranking, DescendingWithIdTieBreak) {
    auto r = ScoredRanking::from_scores({0.5, 2.0, 0.5, 3.0});
    EXPECT_EQ(r.order, (std::vector<NodeId>{3, 1, 0, 2}));
    EXPECT_THROW(ScoredRanking::from_scores({1.0, std::nan("")}), NumericError);
}

TEST(Checkpoint, RoundTripRestoresParametersAndOptimizer) {
    auto inst = small_instance(15);
    auto result = train(inst.inputs, small_config("gcnde"));
    auto dir = fixtures::scratch_dir("checkpoint");
    save_checkpoint(result.model, dir / "m.bin");
    auto loaded = load_checkpoint(dir / "m.bin");

    EXPECT_EQ(loaded.config().variant_name(), "gcnde");
    EXPECT_EQ(loaded.optimizer().step_count(), result.model.optimizer().step_count());
    auto pa = result.model.parameters(), pb = loaded.parameters();
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t k = 0; k < pa.size(); ++k) {
        EXPECT_EQ(pa[k]->name, pb[k]->name);
        EXPECT_TRUE(pa[k]->value == pb[k]->value);
        EXPECT_TRUE(result.model.optimizer().moments()[k].second == loaded.optimizer().moments()[k].second);
    }
    EXPECT_EQ(score_nodes(loaded, inst.inputs).scores, score_nodes(result.model, inst.inputs).scores);

    // Saving the restored model reproduces the file byte for byte.
    save_checkpoint(loaded, dir / "again.bin");
    std::ifstream f1(dir / "m.bin", std::ios::binary), f2(dir / "again.bin", std::ios::binary);
    std::string b1((std::istreambuf_iterator<char>(f1)), {}), b2((std::istreambuf_iterator<char>(f2)), {});
    EXPECT_EQ(b1, b2);
}

TEST(Checkpoint, RejectsForeignFiles) {
    auto dir = fixtures::scratch_dir("checkpoint-bad");
    {
        std::ofstream out(dir / "x.bin");
        out << "hello\n";
    }
    EXPECT_THROW(load_checkpoint(dir / "x.bin"), Error);
    EXPECT_THROW(load_checkpoint(dir / "missing.bin"), Error);
}
