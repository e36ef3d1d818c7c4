#pragma once

// Run configuration: a flat INI file with one section per stage. Every key
// has a default, and "section.key=value" overrides from the command line are
// applied on top of the file.
//
//   [data]    name, edges, attributes, nodes, attribute_dim
//   [inject]  p, q (number or "auto"), k, exchange (copy|swap), seed
//   [census]  transform (raw|log1p), m31 .. m43 (motif names)
//   [model]   attribute_hidden, structure_hidden, embedding_dim, alpha,
//             epochs, lr, variant (guide|gcnen|gcnde|gcn), seed
//   [run]     seed, output, recall_k

#include <guide/checkpoint.hpp>
#include <guide/error.hpp>
#include <guide/inject.hpp>
#include <guide/model.hpp>
#include <guide/motif.hpp>
#include <guide/random.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace guide {

struct RunConfig {
    std::string dataset_name = "dataset";
    std::filesystem::path edges;
    std::optional<std::filesystem::path> attributes;
    std::optional<std::size_t> nodes;
    std::optional<std::size_t> attribute_dim;

    InjectionSpec injection;
    bool inject_seed_explicit = false;

    StructureTransform transform = StructureTransform::log1p;
    MotifAssignment motifs;

    ModelConfig model;
    bool model_seed_explicit = false;

    std::uint64_t root_seed = 0;
    std::filesystem::path output = "runs/default";
    std::vector<std::size_t> recall_k{50, 100, 150};

    /// Seeds default to named children of the root seed.
    std::uint64_t inject_seed() const {
        return inject_seed_explicit ? injection.seed : derive_seed(root_seed, "inject");
    }
    std::uint64_t init_seed() const { return model_seed_explicit ? model.seed : derive_seed(root_seed, "init"); }

    /// Checks the referenced input files and sub-configs.
    void validate() const {
        if (edges.empty()) throw ConfigError("data.edges is required");
        if (!std::filesystem::exists(edges)) throw ConfigError("edge list '" + edges.string() + "' does not exist");
        if (attributes && !std::filesystem::exists(*attributes)) {
            throw ConfigError("attribute file '" + attributes->string() + "' does not exist");
        }
        model.validate();
        if (recall_k.empty()) throw ConfigError("run.recall_k must list at least one K");
    }
};

namespace config_detail {

inline std::vector<std::size_t> parse_size_list(const std::string& s, const std::string& key) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (tok.empty()) continue;
        try {
            std::size_t pos = 0;
            auto v = std::stoull(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw ConfigError(key + ": '" + tok + "' is not a non-negative integer");
        }
    }
    return out;
}

inline std::string join(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

template <typename T>
T get(const boost::property_tree::ptree& tree, const std::string& key, T fallback) {
    try {
        // The defaulted overload also falls back on unparsable values.
        if (!tree.get_child_optional(key)) return fallback;
        return tree.get<T>(key);
    } catch (const boost::property_tree::ptree_error& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

inline MotifTemplate motif(const boost::property_tree::ptree& tree, const std::string& key,
                           const MotifTemplate& fallback) {
    auto name = tree.get<std::string>(key, fallback.name());
    auto t = motifs::by_name(name);
    if (!t) throw ConfigError("config key '" + key + "': unknown motif '" + name + "'");
    return *t;
}

}  // namespace config_detail

/// Applies "section.key=value" strings to a property tree.
inline void apply_overrides(boost::property_tree::ptree& tree, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not section.key=value");
        tree.put(o.substr(0, eq), o.substr(eq + 1));
    }
}

inline RunConfig run_config_from_tree(const boost::property_tree::ptree& tree) {
    using config_detail::get;
    RunConfig c;
    c.dataset_name = get<std::string>(tree, "data.name", c.dataset_name);
    c.edges = get<std::string>(tree, "data.edges", "");
    if (auto a = tree.get_optional<std::string>("data.attributes"); a && !a->empty()) c.attributes = *a;
    if (auto n = tree.get_optional<std::size_t>("data.nodes")) c.nodes = *n;
    if (auto d = tree.get_optional<std::size_t>("data.attribute_dim")) c.attribute_dim = *d;

    c.injection.clique_size = get<std::size_t>(tree, "inject.p", c.injection.clique_size);
    const auto q = get<std::string>(tree, "inject.q", "auto");
    if (q != "auto") c.injection.clique_count = config_detail::parse_size_list(q, "inject.q").at(0);
    c.injection.candidates = get<std::size_t>(tree, "inject.k", c.injection.candidates);
    c.injection.exchange = parse_attribute_exchange(get<std::string>(tree, "inject.exchange", "copy"));
    if (auto s = tree.get_optional<std::uint64_t>("inject.seed")) {
        c.injection.seed = *s;
        c.inject_seed_explicit = true;
    }

    c.transform = parse_structure_transform(get<std::string>(tree, "census.transform", "log1p"));
    for (std::size_t k = 0; k < 5; ++k) {
        std::string key = std::string("census.") + MotifAssignment::column_tags[k];
        for (auto& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        c.motifs.columns[k] = config_detail::motif(tree, key, c.motifs.columns[k]);
    }

    auto& m = c.model;
    m.attribute_hidden = config_detail::parse_size_list(
        get<std::string>(tree, "model.attribute_hidden", config_detail::join(m.attribute_hidden)),
        "model.attribute_hidden");
    m.structure_hidden = config_detail::parse_size_list(
        get<std::string>(tree, "model.structure_hidden", config_detail::join(m.structure_hidden)),
        "model.structure_hidden");
    m.embedding_dim = get<std::size_t>(tree, "model.embedding_dim", m.embedding_dim);
    m.alpha = get<double>(tree, "model.alpha", m.alpha);
    m.epochs = get<int>(tree, "model.epochs", m.epochs);
    m.lr = get<double>(tree, "model.lr", m.lr);
    std::tie(m.structure_encoder, m.structure_decoder) =
        ModelConfig::variant(get<std::string>(tree, "model.variant", "guide"));
    if (auto s = tree.get_optional<std::uint64_t>("model.seed")) {
        m.seed = *s;
        c.model_seed_explicit = true;
    }

    c.root_seed = get<std::uint64_t>(tree, "run.seed", c.root_seed);
    c.output = get<std::string>(tree, "run.output", c.output.string());
    c.recall_k = config_detail::parse_size_list(
        get<std::string>(tree, "run.recall_k", config_detail::join(c.recall_k)), "run.recall_k");

    if (!c.inject_seed_explicit) c.injection.seed = c.inject_seed();
    if (!c.model_seed_explicit) c.model.seed = c.init_seed();
    return c;
}

inline boost::property_tree::ptree read_config_tree(const std::optional<std::filesystem::path>& path) {
    boost::property_tree::ptree tree;
    if (path) {
        if (!std::filesystem::exists(*path)) throw ConfigError("config file '" + path->string() + "' does not exist");
        try {
            boost::property_tree::ini_parser::read_ini(path->string(), tree);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(e.what());
        }
    }
    return tree;
}

inline RunConfig load_run_config(const std::optional<std::filesystem::path>& path,
                                 const std::vector<std::string>& overrides = {}) {
    auto tree = read_config_tree(path);
    apply_overrides(tree, overrides);
    return run_config_from_tree(tree);
}

/// Every resolved setting, for the run report.
inline nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["data"] = {{"name", c.dataset_name},
                 {"edges", c.edges.string()},
                 {"attributes", c.attributes ? c.attributes->string() : ""}};
    nlohmann::ordered_json inj;
    inj["p"] = c.injection.clique_size;
    inj["q"] = c.injection.clique_count ? nlohmann::ordered_json(*c.injection.clique_count)
                                        : nlohmann::ordered_json("auto");
    inj["k"] = c.injection.candidates;
    inj["exchange"] = to_string(c.injection.exchange);
    inj["seed"] = c.injection.seed;
    j["inject"] = inj;
    nlohmann::ordered_json census;
    census["transform"] = to_string(c.transform);
    for (std::size_t k = 0; k < 5; ++k) census[MotifAssignment::column_tags[k]] = c.motifs.columns[k].name();
    j["census"] = census;
    auto model = to_json(c.model);
    model["variant"] = c.model.variant_name();
    j["model"] = model;
    j["run"] = {{"seed", c.root_seed}, {"output", c.output.string()}, {"recall_k", c.recall_k}};
    return j;
}

}  // namespace guide
