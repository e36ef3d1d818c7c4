#pragma once

// Dual autoencoder for attributed-graph anomaly detection.
//
// Attribute branch: GCN layers  H' = ReLU(Ā H W)  encode X to Z^A and one more
// GCN layer decodes X̂. Structure branch: graph node attention (GNA) layers
//
//     h'_i = ReLU(W1 h_i + Σ_{j ∈ N(i) ∪ {i}} α_ij W2 h_j)
//     α_ij = softmax_j( aᵀ W2 (h_i - h_j) )
//
// encode the structure matrix S to Z^S and one more GNA layer decodes Ŝ.
// Either structure stage can be swapped for GCN layers (ablation variants).
// The loss is (1-α)‖S-Ŝ‖² + α‖X-X̂‖², and a node's anomaly score is its row of
// that sum. Gradients come from hand-written per-layer backward passes.
//
// Matrices are row-major with one node per row, so the weights act on the
// right: W1 h_i is stored as (H W1)_i with W1 of shape F×F'.

#include <guide/error.hpp>
#include <guide/graph.hpp>
#include <guide/nn.hpp>
#include <guide/ranking.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace guide {

enum class LayerKind { gna, gcn };

inline const char* to_string(LayerKind k) { return k == LayerKind::gna ? "gna" : "gcn"; }

inline LayerKind parse_layer_kind(const std::string& s) {
    if (s == "gna") return LayerKind::gna;
    if (s == "gcn") return LayerKind::gcn;
    throw ConfigError("unknown layer kind '" + s + "' (expected gna or gcn)");
}

struct ModelConfig {
    /// Widths of the encoder layers before the embedding layer.
    std::vector<std::size_t> attribute_hidden{256, 128};
    std::vector<std::size_t> structure_hidden{32, 32};
    std::size_t embedding_dim = 64;
    double alpha = 0.2;
    int epochs = 200;
    double lr = 0.001;
    std::uint64_t seed = 0;
    LayerKind structure_encoder = LayerKind::gna;
    LayerKind structure_decoder = LayerKind::gna;

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("model: alpha must lie in [0, 1]");
        if (epochs < 1) throw ConfigError("model: epochs must be at least 1");
        if (!(lr > 0.0)) throw ConfigError("model: lr must be positive");
        if (embedding_dim == 0) throw ConfigError("model: embedding_dim must be positive");
        for (auto w : attribute_hidden)
            if (w == 0) throw ConfigError("model: attribute hidden widths must be positive");
        for (auto w : structure_hidden)
            if (w == 0) throw ConfigError("model: structure hidden widths must be positive");
    }

    /// Named variants of the structure branch.
    static std::pair<LayerKind, LayerKind> variant(const std::string& name) {
        if (name == "guide") return {LayerKind::gna, LayerKind::gna};
        if (name == "gcnen") return {LayerKind::gcn, LayerKind::gna};
        if (name == "gcnde") return {LayerKind::gna, LayerKind::gcn};
        if (name == "gcn") return {LayerKind::gcn, LayerKind::gcn};
        throw ConfigError("unknown model variant '" + name + "' (expected guide, gcnen, gcnde or gcn)");
    }

    std::string variant_name() const {
        if (structure_encoder == LayerKind::gna) return structure_decoder == LayerKind::gna ? "guide" : "gcnde";
        return structure_decoder == LayerKind::gna ? "gcnen" : "gcn";
    }
};

/// Everything the forward pass reads besides the parameters.
struct ModelInputs {
    SparseMatrix adjacency;  // Ā; its sparsity pattern (with self-loops) is also the attention pool
    Matrix x;
    Matrix s;
    std::optional<SparseMatrix> x_sparse;  // used for the first attribute layer when X is sparse

    static ModelInputs build(const AttributedGraph& g, Matrix s) {
        if (static_cast<std::size_t>(s.rows()) != g.num_nodes()) {
            throw ShapeError("structure matrix has " + std::to_string(s.rows()) + " rows, graph has " +
                             std::to_string(g.num_nodes()) + " nodes");
        }
        ModelInputs in;
        in.adjacency = NormalizedAdjacency(g).matrix();
        in.x = g.attributes();
        in.s = std::move(s);
        const auto nonzeros = (in.x.array() != 0.0).count();
        if (in.x.size() > 0 && static_cast<double>(nonzeros) < 0.25 * static_cast<double>(in.x.size())) {
            in.x_sparse = SparseMatrix(in.x.sparseView());
            in.x_sparse->makeCompressed();
        }
        return in;
    }
};

// ---------------------------------------------------------------------------
// Layers

struct GcnCache {
    const Matrix* input = nullptr;
    const SparseMatrix* input_sparse = nullptr;
    Matrix pre;  // Ā H W
    Matrix out;
};

/// H' = ReLU(Ā H W)
class GcnLayer {
public:
    GcnLayer(std::string name, Eigen::Index in, Eigen::Index out, Rng& rng)
        : w_(name + ".W", glorot_init(in, out, rng)) {}

    Eigen::Index in_dim() const { return w_.value.rows(); }
    Eigen::Index out_dim() const { return w_.value.cols(); }

    std::vector<Parameter*> parameters() { return {&w_}; }
    std::vector<const Parameter*> parameters() const { return {&w_}; }

    GcnCache forward(const SparseMatrix& adj, const Matrix& h, const SparseMatrix* h_sparse = nullptr) const {
        GcnCache c;
        c.input = &h;
        c.input_sparse = h_sparse;
        if (h.cols() != in_dim()) throw ShapeError("gcn layer " + w_.name + ": input width mismatch");
        if (h_sparse) {
            c.pre = spmm(adj, spmm(*h_sparse, w_.value));
        } else if (out_dim() <= in_dim()) {
            c.pre = spmm(adj, matmul(h, w_.value));
        } else {
            c.pre = matmul(spmm(adj, h), w_.value);
        }
        c.out = relu(c.pre);
        return c;
    }

    /// Accumulates into W's gradient; returns dL/dH unless the input is a leaf.
    Matrix backward(const SparseMatrix& adj, const GcnCache& c, const Matrix& d_out, bool need_input_grad) {
        // Ā is symmetric, so Āᵀ dY = Ā dY.
        Matrix g = spmm(adj, relu_backward(c.pre, d_out));
        if (c.input_sparse) {
            w_.grad += spmm_tn(*c.input_sparse, g);
        } else {
            w_.grad += matmul_tn(*c.input, g);
        }
        if (!need_input_grad) return {};
        return matmul_nt(g, w_.value);
    }

private:
    Parameter w_;
};

struct GnaCache {
    const Matrix* input = nullptr;
    Matrix projected;   // P = H W2
    Vector score;       // u = P a, so the logit for (i, j) is u_i - u_j
    std::vector<double> attention;  // α, aligned with the adjacency's stored entries
    Matrix pre;
    Matrix out;
};

/// Softmax over i's pool of aᵀW2(h_i - h_j), with the row maximum subtracted.
/// `pool` must contain i itself.
inline std::vector<double> attention_coefficients(const Matrix& h, NodeId i, std::span<const NodeId> pool,
                                                  const Matrix& w2, const Matrix& a) {
    if (w2.rows() != h.cols() || a.rows() != w2.cols() || a.cols() != 1) {
        throw ShapeError("attention_coefficients: parameter shapes do not chain");
    }
    std::vector<double> logits;
    logits.reserve(pool.size());
    for (NodeId j : pool) {
        Matrix diff = h.row(i) - h.row(j);
        logits.push_back((diff * w2 * a)(0, 0));
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& l : logits) total += (l = std::exp(l - top));
    for (double& l : logits) l /= total;
    return logits;
}

class GnaLayer {
public:
    GnaLayer(std::string name, Eigen::Index in, Eigen::Index out, Rng& rng)
        : w1_(name + ".W1", glorot_init(in, out, rng)),
          w2_(name + ".W2", glorot_init(in, out, rng)),
          a_(name + ".a", glorot_init(out, 1, rng)) {}

    Eigen::Index in_dim() const { return w1_.value.rows(); }
    Eigen::Index out_dim() const { return w1_.value.cols(); }

    std::vector<Parameter*> parameters() { return {&w1_, &w2_, &a_}; }
    std::vector<const Parameter*> parameters() const { return {&w1_, &w2_, &a_}; }

    GnaCache forward(const SparseMatrix& adj, const Matrix& h) const {
        if (h.cols() != in_dim()) throw ShapeError("gna layer " + w1_.name + ": input width mismatch");
        GnaCache c;
        c.input = &h;
        c.projected = matmul(h, w2_.value);
        c.score = c.projected * a_.value.col(0);
        c.pre = matmul(h, w1_.value);
        c.attention.resize(static_cast<std::size_t>(adj.nonZeros()));

        const auto* outer = adj.outerIndexPtr();
        const auto* inner = adj.innerIndexPtr();
        for (Eigen::Index i = 0; i < adj.rows(); ++i) {
            const auto begin = outer[i], end = outer[i + 1];
            double top = -std::numeric_limits<double>::infinity();
            for (auto k = begin; k < end; ++k) top = std::max(top, c.score(i) - c.score(inner[k]));
            double total = 0.0;
            for (auto k = begin; k < end; ++k) {
                const double e = std::exp(c.score(i) - c.score(inner[k]) - top);
                c.attention[static_cast<std::size_t>(k)] = e;
                total += e;
            }
            for (auto k = begin; k < end; ++k) {
                double& alpha = c.attention[static_cast<std::size_t>(k)];
                alpha /= total;
                c.pre.row(i) += alpha * c.projected.row(inner[k]);
            }
        }
        c.out = relu(c.pre);
        return c;
    }

    Matrix backward(const SparseMatrix& adj, const GnaCache& c, const Matrix& d_out, bool need_input_grad) {
        const Matrix d_pre = relu_backward(c.pre, d_out);
        const Matrix& h = *c.input;

        w1_.grad += matmul_tn(h, d_pre);

        Matrix d_projected = Matrix::Zero(c.projected.rows(), c.projected.cols());
        Vector d_score = Vector::Zero(c.score.size());
        const auto* outer = adj.outerIndexPtr();
        const auto* inner = adj.innerIndexPtr();
        std::vector<double> d_alpha;
        for (Eigen::Index i = 0; i < adj.rows(); ++i) {
            const auto begin = outer[i], end = outer[i + 1];
            d_alpha.assign(static_cast<std::size_t>(end - begin), 0.0);
            double weighted = 0.0;
            for (auto k = begin; k < end; ++k) {
                const double alpha = c.attention[static_cast<std::size_t>(k)];
                d_projected.row(inner[k]) += alpha * d_pre.row(i);
                const double g = d_pre.row(i).dot(c.projected.row(inner[k]));
                d_alpha[static_cast<std::size_t>(k - begin)] = g;
                weighted += alpha * g;
            }
            // Softmax backward, then the logit u_i - u_j.
            for (auto k = begin; k < end; ++k) {
                const double alpha = c.attention[static_cast<std::size_t>(k)];
                const double d_logit = alpha * (d_alpha[static_cast<std::size_t>(k - begin)] - weighted);
                d_score(i) += d_logit;
                d_score(inner[k]) -= d_logit;
            }
        }
        a_.grad.col(0) += c.projected.transpose() * d_score;
        d_projected.noalias() += d_score * a_.value.col(0).transpose();
        w2_.grad += matmul_tn(h, d_projected);

        if (!need_input_grad) return {};
        Matrix d_input = matmul_nt(d_pre, w1_.value);
        d_input.noalias() += d_projected * w2_.value.transpose();
        return d_input;
    }

private:
    Parameter w1_;
    Parameter w2_;
    Parameter a_;
};

/// Single-layer convenience wrappers.
inline Matrix gcn_layer(const SparseMatrix& adj, const Matrix& h, const Matrix& w) {
    if (h.cols() != w.rows()) throw ShapeError("gcn_layer: H and W do not chain");
    if (adj.cols() != h.rows()) throw ShapeError("gcn_layer: Ā and H do not chain");
    return relu(spmm(adj, matmul(h, w)));
}

inline Matrix gna_layer(const SparseMatrix& adj, const Matrix& h, const Matrix& w1, const Matrix& w2,
                        const Matrix& a) {
    if (w1.rows() != h.cols() || w2.rows() != h.cols() || w1.cols() != w2.cols() || a.rows() != w2.cols() ||
        a.cols() != 1) {
        throw ShapeError("gna_layer: parameter shapes do not chain");
    }
    if (adj.cols() != h.rows()) throw ShapeError("gna_layer: adjacency and H do not chain");
    Rng unused(0);
    GnaLayer layer("gna", h.cols(), w1.cols(), unused);
    auto params = layer.parameters();
    params[0]->value = w1;
    params[1]->value = w2;
    params[2]->value = a;
    return layer.forward(adj, h).out;
}

using StructureLayer = std::variant<GcnLayer, GnaLayer>;
using StructureCache = std::variant<GcnCache, GnaCache>;

// ---------------------------------------------------------------------------
// Model

struct LossValue {
    double total = 0.0;
    double structure_term = 0.0;  // (1-α)‖S-Ŝ‖²
    double attribute_term = 0.0;  // α‖X-X̂‖²
};

struct ReconstructionPair {
    Matrix x_hat;
    Matrix s_hat;
    Matrix r_attr;    // X - X̂
    Matrix r_struct;  // S - Ŝ
};

struct ForwardPass {
    std::vector<GcnCache> attribute;
    std::vector<StructureCache> structure;

    const Matrix& z_attr() const { return attribute[attribute.size() - 2].out; }
    const Matrix& x_hat() const { return attribute.back().out; }
    const Matrix& z_struct() const { return output_of(structure[structure.size() - 2]); }
    const Matrix& s_hat() const { return output_of(structure.back()); }

    static const Matrix& output_of(const StructureCache& c) {
        return std::visit([](const auto& v) -> const Matrix& { return v.out; }, c);
    }
};

/// Per-node score (1-α)‖s_i - ŝ_i‖² + α‖x_i - x̂_i‖².
inline std::vector<double> node_scores(const Matrix& x, const Matrix& x_hat, const Matrix& s, const Matrix& s_hat,
                                       double alpha) {
    if (x.rows() != x_hat.rows() || x.cols() != x_hat.cols() || s.rows() != s_hat.rows() ||
        s.cols() != s_hat.cols() || x.rows() != s.rows()) {
        throw ShapeError("node_scores: reconstruction shapes do not match inputs");
    }
    std::vector<double> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double rs = (s.row(i) - s_hat.row(i)).squaredNorm();
        const double ra = (x.row(i) - x_hat.row(i)).squaredNorm();
        out[static_cast<std::size_t>(i)] = (1.0 - alpha) * rs + alpha * ra;
    }
    return out;
}

/// (1-α)‖S-Ŝ‖² + α‖X-X̂‖². The total is the in-order sum of node_scores, so it
/// equals the sum of the scores exactly.
inline LossValue loss(const Matrix& x, const Matrix& x_hat, const Matrix& s, const Matrix& s_hat, double alpha) {
    LossValue v;
    for (double score : node_scores(x, x_hat, s, s_hat, alpha)) v.total += score;
    v.structure_term = (1.0 - alpha) * frobenius_sq(s - s_hat);
    v.attribute_term = alpha * frobenius_sq(x - x_hat);
    return v;
}

class GuideModel {
public:
    GuideModel(ModelConfig config, std::size_t attribute_dim, std::size_t structure_dim)
        : config_(std::move(config)), optimizer_(AdamOptions{config_.lr}) {
        config_.validate();
        if (attribute_dim == 0) throw ConfigError("model: attribute dimension must be positive");
        if (structure_dim == 0) throw ConfigError("model: structure dimension must be positive");
        Rng rng(config_.seed);

        auto widths = [&](const std::vector<std::size_t>& hidden, std::size_t in) {
            std::vector<Eigen::Index> w{static_cast<Eigen::Index>(in)};
            for (auto h : hidden) w.push_back(static_cast<Eigen::Index>(h));
            w.push_back(static_cast<Eigen::Index>(config_.embedding_dim));
            w.push_back(static_cast<Eigen::Index>(in));
            return w;
        };

        const auto aw = widths(config_.attribute_hidden, attribute_dim);
        for (std::size_t l = 0; l + 1 < aw.size(); ++l) {
            attribute_.emplace_back(layer_name("attr", l, aw.size() - 1), aw[l], aw[l + 1], rng);
        }
        const auto sw = widths(config_.structure_hidden, structure_dim);
        for (std::size_t l = 0; l + 1 < sw.size(); ++l) {
            const bool decoder = l + 2 == sw.size();
            const auto kind = decoder ? config_.structure_decoder : config_.structure_encoder;
            auto name = layer_name("struct", l, sw.size() - 1);
            if (kind == LayerKind::gna) {
                structure_.emplace_back(std::in_place_type<GnaLayer>, name, sw[l], sw[l + 1], rng);
            } else {
                structure_.emplace_back(std::in_place_type<GcnLayer>, name, sw[l], sw[l + 1], rng);
            }
        }
    }

    const ModelConfig& config() const noexcept { return config_; }
    std::size_t attribute_dim() const { return static_cast<std::size_t>(attribute_.front().in_dim()); }
    std::size_t structure_dim() const {
        return static_cast<std::size_t>(std::visit([](const auto& l) { return l.in_dim(); }, structure_.front()));
    }

    /// Every trainable parameter in a fixed order (attribute branch first).
    std::vector<Parameter*> parameters() {
        std::vector<Parameter*> out;
        for (auto& l : attribute_)
            for (auto* p : l.parameters()) out.push_back(p);
        for (auto& l : structure_)
            std::visit([&](auto& layer) {
                for (auto* p : layer.parameters()) out.push_back(p);
            }, l);
        return out;
    }

    std::vector<const Parameter*> parameters() const {
        std::vector<const Parameter*> out;
        for (auto* p : const_cast<GuideModel*>(this)->parameters()) out.push_back(p);
        return out;
    }

    Parameter& parameter(const std::string& name) {
        for (auto* p : parameters())
            if (p->name == name) return *p;
        throw Error("model has no parameter named '" + name + "'");
    }

    Adam& optimizer() noexcept { return optimizer_; }
    const Adam& optimizer() const noexcept { return optimizer_; }

    ForwardPass forward(const ModelInputs& in) const {
        check_inputs(in);
        ForwardPass fp;
        fp.attribute.reserve(attribute_.size());
        for (std::size_t l = 0; l < attribute_.size(); ++l) {
            if (l == 0) {
                const SparseMatrix* xs = in.x_sparse ? &*in.x_sparse : nullptr;
                fp.attribute.push_back(attribute_[l].forward(in.adjacency, in.x, xs));
            } else {
                fp.attribute.push_back(attribute_[l].forward(in.adjacency, fp.attribute.back().out));
            }
        }
        fp.structure.reserve(structure_.size());
        for (std::size_t l = 0; l < structure_.size(); ++l) {
            const Matrix& h = l == 0 ? in.s : ForwardPass::output_of(fp.structure.back());
            std::visit([&](const auto& layer) { fp.structure.emplace_back(layer.forward(in.adjacency, h)); },
                       structure_[l]);
        }
        return fp;
    }

    /// (Z^A, X̂)
    std::pair<Matrix, Matrix> attribute_forward(const ModelInputs& in) const {
        auto fp = forward(in);
        return {fp.z_attr(), fp.x_hat()};
    }

    /// (Z^S, Ŝ)
    std::pair<Matrix, Matrix> structure_forward(const ModelInputs& in) const {
        auto fp = forward(in);
        return {fp.z_struct(), fp.s_hat()};
    }

    ReconstructionPair reconstruct(const ModelInputs& in) const {
        auto fp = forward(in);
        ReconstructionPair r;
        r.x_hat = fp.x_hat();
        r.s_hat = fp.s_hat();
        r.r_attr = in.x - r.x_hat;
        r.r_struct = in.s - r.s_hat;
        return r;
    }

    LossValue evaluate(const ModelInputs& in) const {
        auto fp = forward(in);
        return loss(in.x, fp.x_hat(), in.s, fp.s_hat(), config_.alpha);
    }

    /// One forward and backward pass; gradients are added to the parameters'
    /// grad buffers. Returns the loss at the current parameters.
    LossValue accumulate_gradients(const ModelInputs& in) {
        auto fp = forward(in);
        const double alpha = config_.alpha;
        LossValue value = loss(in.x, fp.x_hat(), in.s, fp.s_hat(), alpha);

        Matrix d_x_hat = -2.0 * alpha * (in.x - fp.x_hat());
        Matrix d_s_hat = -2.0 * (1.0 - alpha) * (in.s - fp.s_hat());

        Matrix grad = std::move(d_x_hat);
        for (std::size_t l = attribute_.size(); l-- > 0;) {
            grad = attribute_[l].backward(in.adjacency, fp.attribute[l], grad, l > 0);
        }
        grad = std::move(d_s_hat);
        for (std::size_t l = structure_.size(); l-- > 0;) {
            grad = std::visit(
                [&](auto& layer) -> Matrix {
                    using Cache = std::conditional_t<std::is_same_v<std::decay_t<decltype(layer)>, GcnLayer>,
                                                     GcnCache, GnaCache>;
                    return layer.backward(in.adjacency, std::get<Cache>(fp.structure[l]), grad, l > 0);
                },
                structure_[l]);
        }
        return value;
    }

    void zero_grad() {
        for (auto* p : parameters()) p->zero_grad();
    }

    void apply_gradients() {
        auto params = parameters();
        optimizer_.step(params);
    }

private:
    static std::string layer_name(const char* branch, std::size_t l, std::size_t count) {
        return std::string(branch) + (l + 1 == count ? ".dec" : ".enc" + std::to_string(l));
    }

    void check_inputs(const ModelInputs& in) const {
        if (static_cast<std::size_t>(in.x.cols()) != attribute_dim()) {
            throw ShapeError("model expects " + std::to_string(attribute_dim()) + " attributes, got " +
                             std::to_string(in.x.cols()));
        }
        if (static_cast<std::size_t>(in.s.cols()) != structure_dim()) {
            throw ShapeError("model expects " + std::to_string(structure_dim()) + " structure columns, got " +
                             std::to_string(in.s.cols()));
        }
        if (in.x.rows() != in.s.rows() || in.adjacency.rows() != in.x.rows()) {
            throw ShapeError("model inputs disagree on the node count");
        }
    }

    ModelConfig config_;
    std::vector<GcnLayer> attribute_;
    std::vector<StructureLayer> structure_;
    Adam optimizer_;
};

struct EpochLoss {
    int epoch = 0;
    LossValue value;
};

struct TrainResult {
    GuideModel model;
    std::vector<EpochLoss> trace;  // loss before each epoch's update
    LossValue final_loss;          // loss at the returned parameters
};

using EpochCallback = std::function<void(const EpochLoss&)>;

/// Full-batch training: each epoch runs both branches forward, backpropagates
/// the joint loss and takes one Adam step.
inline TrainResult train(const ModelInputs& in, const ModelConfig& config, const EpochCallback& on_epoch = {}) {
    GuideModel model(config, static_cast<std::size_t>(in.x.cols()), static_cast<std::size_t>(in.s.cols()));
    std::vector<EpochLoss> trace;
    trace.reserve(static_cast<std::size_t>(config.epochs));
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        model.zero_grad();
        EpochLoss record{epoch, model.accumulate_gradients(in)};
        if (!std::isfinite(record.value.total)) {
            throw NumericError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
        }
        try {
            model.apply_gradients();
        } catch (const NumericError& e) {
            throw NumericError("epoch " + std::to_string(epoch) + ": " + e.what());
        }
        trace.push_back(record);
        if (on_epoch) on_epoch(record);
    }
    auto final_loss = model.evaluate(in);
    return {std::move(model), std::move(trace), final_loss};
}

inline TrainResult train(const AttributedGraph& g, const Matrix& s, const ModelConfig& config,
                         const EpochCallback& on_epoch = {}) {
    return train(ModelInputs::build(g, s), config, on_epoch);
}

inline ScoredRanking score_nodes(const GuideModel& model, const ModelInputs& in) {
    auto fp = model.forward(in);
    return ScoredRanking::from_scores(node_scores(in.x, fp.x_hat(), in.s, fp.s_hat(), model.config().alpha));
}

inline ScoredRanking score_nodes(const GuideModel& model, const ModelInputs& in, double alpha) {
    auto fp = model.forward(in);
    return ScoredRanking::from_scores(node_scores(in.x, fp.x_hat(), in.s, fp.s_hat(), alpha));
}

}  // namespace guide
