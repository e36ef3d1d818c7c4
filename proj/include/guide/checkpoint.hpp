#pragma once

// Model checkpoints and loss traces.
//
// Checkpoint layout (version 1):
//
//   GUIDE-CHECKPOINT 1\n
//   config <model config as one-line JSON>\n
//   dims <attribute_dim> <structure_dim>\n
//   adam_step <n>\n
//   tensors <count>\n
//   then per tensor: "<name> <rows> <cols>\n" followed by rows*cols
//   little-endian float64 values in row-major order and a trailing '\n'.
//
// Tensors are the parameters in model order, then "<name>@adam_m" and
// "<name>@adam_v" for each parameter once the optimizer has stepped.

#include <guide/error.hpp>
#include <guide/model.hpp>

#include <json.hpp>

#include <bit>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

namespace guide {

inline constexpr int checkpoint_version = 1;

inline nlohmann::ordered_json to_json(const ModelConfig& c) {
    nlohmann::ordered_json j;
    j["attribute_hidden"] = c.attribute_hidden;
    j["structure_hidden"] = c.structure_hidden;
    j["embedding_dim"] = c.embedding_dim;
    j["alpha"] = c.alpha;
    j["epochs"] = c.epochs;
    j["lr"] = c.lr;
    j["seed"] = c.seed;
    j["structure_encoder"] = to_string(c.structure_encoder);
    j["structure_decoder"] = to_string(c.structure_decoder);
    return j;
}

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.attribute_hidden = j.at("attribute_hidden").get<std::vector<std::size_t>>();
    c.structure_hidden = j.at("structure_hidden").get<std::vector<std::size_t>>();
    c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    c.alpha = j.at("alpha").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.lr = j.at("lr").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.structure_encoder = parse_layer_kind(j.at("structure_encoder").get<std::string>());
    c.structure_decoder = parse_layer_kind(j.at("structure_decoder").get<std::string>());
    return c;
}

namespace checkpoint_detail {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

inline void write_tensor(std::ostream& out, const std::string& name, const Matrix& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
    out << '\n';
}

}  // namespace checkpoint_detail

inline void save_checkpoint(const GuideModel& model, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write checkpoint '" + path.string() + "'");
    const auto params = model.parameters();
    const auto& moments = model.optimizer().moments();
    out << "GUIDE-CHECKPOINT " << checkpoint_version << '\n';
    out << "config " << to_json(model.config()).dump() << '\n';
    out << "dims " << model.attribute_dim() << ' ' << model.structure_dim() << '\n';
    out << "adam_step " << model.optimizer().step_count() << '\n';
    out << "tensors " << params.size() + 2 * moments.size() << '\n';
    for (const auto* p : params) checkpoint_detail::write_tensor(out, p->name, p->value);
    for (std::size_t k = 0; k < moments.size(); ++k) {
        checkpoint_detail::write_tensor(out, params[k]->name + "@adam_m", moments[k].first);
        checkpoint_detail::write_tensor(out, params[k]->name + "@adam_v", moments[k].second);
    }
    if (!out) throw Error("failed writing checkpoint '" + path.string() + "'");
}

inline GuideModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint '" + path.string() + "'");
    auto fail = [&](const std::string& what) { return Error("checkpoint '" + path.string() + "': " + what); };

    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "GUIDE-CHECKPOINT") throw fail("not a checkpoint file");
    if (version != checkpoint_version) throw fail("unsupported version " + std::to_string(version));

    std::string key, config_line;
    in >> key;
    if (key != "config") throw fail("missing config");
    std::getline(in, config_line);
    ModelConfig config = model_config_from_json(nlohmann::json::parse(config_line));

    std::size_t attribute_dim = 0, structure_dim = 0, tensor_count = 0;
    std::int64_t adam_step = 0;
    in >> key >> attribute_dim >> structure_dim;
    if (key != "dims") throw fail("missing dims");
    in >> key >> adam_step;
    if (key != "adam_step") throw fail("missing adam_step");
    in >> key >> tensor_count;
    if (key != "tensors") throw fail("missing tensor count");
    in.get();

    std::map<std::string, Matrix> tensors;
    for (std::size_t t = 0; t < tensor_count; ++t) {
        std::string header;
        if (!std::getline(in, header)) throw fail("truncated tensor header");
        std::istringstream hs(header);
        std::string name;
        Eigen::Index rows = 0, cols = 0;
        if (!(hs >> name >> rows >> cols) || rows < 0 || cols < 0) throw fail("bad tensor header '" + header + "'");
        Matrix m(rows, cols);
        in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
        if (in.get() != '\n') throw fail("truncated tensor '" + name + "'");
        tensors.emplace(std::move(name), std::move(m));
    }

    GuideModel model(config, attribute_dim, structure_dim);
    auto params = model.parameters();
    std::vector<AdamMoments> moments;
    for (auto* p : params) {
        auto it = tensors.find(p->name);
        if (it == tensors.end()) throw fail("missing tensor '" + p->name + "'");
        if (it->second.rows() != p->value.rows() || it->second.cols() != p->value.cols()) {
            throw fail("tensor '" + p->name + "' has the wrong shape");
        }
        p->value = it->second;
        auto m = tensors.find(p->name + "@adam_m");
        auto v = tensors.find(p->name + "@adam_v");
        if (m != tensors.end() && v != tensors.end()) moments.push_back({m->second, v->second});
    }
    if (!moments.empty() && moments.size() != params.size()) throw fail("incomplete optimizer state");
    model.optimizer().restore(adam_step, std::move(moments));
    return model;
}

inline void write_loss_trace(const std::vector<EpochLoss>& trace, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << std::setprecision(17) << "epoch,loss,structure_term,attribute_term\n";
    for (const auto& e : trace) {
        out << e.epoch << ',' << e.value.total << ',' << e.value.structure_term << ',' << e.value.attribute_term
            << '\n';
    }
}

}  // namespace guide
