#pragma once

// Plain-text dataset formats.
//
//   edge list    one "u v" pair per line, 0-based ids, '#' starts a comment line
//   attributes   "node feature value" triples, or dense rows for .dense/.csv/.tsv
//   labels       one 0/1 per line, n lines
//   structure    tab-separated n×6 matrix with a header row

#include <guide/error.hpp>
#include <guide/graph.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace guide {

namespace io_detail {

inline std::vector<std::string_view> split_fields(std::string_view line, bool allow_commas) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    auto is_sep = [&](char c) { return c == ' ' || c == '\t' || c == '\r' || (allow_commas && c == ','); };
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        std::size_t j = i;
        while (j < line.size() && !is_sep(line[j])) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline bool skip_line(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

template <typename T>
std::optional<T> parse_number(std::string_view tok) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
    return value;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << std::setprecision(17);
    return out;
}

inline bool is_dense_format(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    return ext == ".dense" || ext == ".csv" || ext == ".tsv";
}

}  // namespace io_detail

/// Reads "u v" pairs. The graph has n_hint nodes when given, otherwise the
/// larger of max id + 1 and a "# nodes N" header. Attributes are left empty (n×0).
inline AttributedGraph load_edge_list(const std::filesystem::path& path, std::optional<std::size_t> n_hint = {}) {
    auto in = io_detail::open_in(path);
    std::vector<Edge> edges;
    std::size_t max_id_plus_one = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.starts_with("# nodes ")) {
            auto fields = io_detail::split_fields(std::string_view(line).substr(8), false);
            auto header_n = fields.empty() ? std::nullopt : io_detail::parse_number<std::size_t>(fields[0]);
            if (!header_n) throw ParseError(path.string(), lineno, "malformed node-count header");
            max_id_plus_one = std::max(max_id_plus_one, *header_n);
            continue;
        }
        if (io_detail::skip_line(line)) continue;
        auto fields = io_detail::split_fields(line, false);
        if (fields.size() != 2) throw ParseError(path.string(), lineno, "expected two node ids");
        auto u = io_detail::parse_number<NodeId>(fields[0]);
        auto v = io_detail::parse_number<NodeId>(fields[1]);
        if (!u || !v) throw ParseError(path.string(), lineno, "node ids must be non-negative integers");
        if (n_hint && (*u >= *n_hint || *v >= *n_hint)) {
            throw BoundsError(path.string() + ":" + std::to_string(lineno) + ": node id exceeds n=" +
                              std::to_string(*n_hint));
        }
        max_id_plus_one = std::max<std::size_t>(max_id_plus_one, std::max(*u, *v) + std::size_t{1});
        edges.emplace_back(*u, *v);
    }
    return AttributedGraph::from_edges(n_hint.value_or(max_id_plus_one), edges);
}

struct RemappedGraph {
    AttributedGraph graph;
    /// original_ids[dense id] = token as it appeared in the file.
    std::vector<std::string> original_ids;
};

/// Reads an edge list whose ids are arbitrary tokens and assigns dense ids
/// in order of first appearance.
inline RemappedGraph load_edge_list_remapped(const std::filesystem::path& path) {
    auto in = io_detail::open_in(path);
    std::unordered_map<std::string, NodeId> index;
    RemappedGraph out;
    std::vector<Edge> edges;
    auto intern = [&](std::string_view tok) {
        auto [it, inserted] = index.try_emplace(std::string(tok), static_cast<NodeId>(out.original_ids.size()));
        if (inserted) out.original_ids.emplace_back(tok);
        return it->second;
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (io_detail::skip_line(line)) continue;
        auto fields = io_detail::split_fields(line, false);
        if (fields.size() != 2) throw ParseError(path.string(), lineno, "expected two node ids");
        NodeId u = intern(fields[0]);
        NodeId v = intern(fields[1]);
        edges.emplace_back(u, v);
    }
    out.graph = AttributedGraph::from_edges(out.original_ids.size(), edges);
    return out;
}

inline void save_edge_list(const AttributedGraph& g, const std::filesystem::path& path) {
    auto out = io_detail::open_out(path);
    out << "# nodes " << g.num_nodes() << " edges " << g.num_edges() << '\n';
    for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

/// Sparse triples "i j v" (strict: a repeated (i, j) is an error), or dense
/// rows when the extension is .dense/.csv/.tsv.
inline Matrix load_attributes(const std::filesystem::path& path, std::size_t n, std::size_t d) {
    auto in = io_detail::open_in(path);
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::string line;
    std::size_t lineno = 0;
    auto check_value = [&](std::optional<double> v) {
        if (!v) throw ParseError(path.string(), lineno, "malformed attribute value");
        if (!std::isfinite(*v)) throw ParseError(path.string(), lineno, "non-finite attribute value");
        return *v;
    };

    if (io_detail::is_dense_format(path)) {
        std::size_t row = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (io_detail::skip_line(line)) continue;
            auto fields = io_detail::split_fields(line, true);
            if (row >= n) throw BoundsError(path.string() + ": more than " + std::to_string(n) + " rows");
            if (fields.size() != d) {
                throw ParseError(path.string(), lineno,
                                 "expected " + std::to_string(d) + " columns, got " + std::to_string(fields.size()));
            }
            for (std::size_t j = 0; j < d; ++j) {
                x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
                    check_value(io_detail::parse_number<double>(fields[j]));
            }
            ++row;
        }
        if (row != n) throw ParseError(path.string(), lineno, "expected " + std::to_string(n) + " rows, got " +
                                                                   std::to_string(row));
        return x;
    }

    std::set<std::pair<std::size_t, std::size_t>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (io_detail::skip_line(line)) continue;
        auto fields = io_detail::split_fields(line, false);
        if (fields.size() != 3) throw ParseError(path.string(), lineno, "expected 'node feature value'");
        auto i = io_detail::parse_number<std::size_t>(fields[0]);
        auto j = io_detail::parse_number<std::size_t>(fields[1]);
        if (!i || !j) throw ParseError(path.string(), lineno, "indices must be non-negative integers");
        if (*i >= n || *j >= d) {
            throw BoundsError(path.string() + ":" + std::to_string(lineno) + ": index (" + std::to_string(*i) + "," +
                              std::to_string(*j) + ") outside " + std::to_string(n) + "x" + std::to_string(d));
        }
        double v = check_value(io_detail::parse_number<double>(fields[2]));
        if (!seen.emplace(*i, *j).second) throw ParseError(path.string(), lineno, "duplicate entry for (" +
                                                                                  std::to_string(*i) + "," +
                                                                                  std::to_string(*j) + ")");
        x(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) = v;
    }
    return x;
}

/// Infers n and d from a triples file (max index + 1 on each axis).
inline std::pair<std::size_t, std::size_t> scan_attribute_shape(const std::filesystem::path& path) {
    auto in = io_detail::open_in(path);
    std::size_t n = 0, d = 0;
    std::string line;
    std::size_t lineno = 0;
    const bool dense = io_detail::is_dense_format(path);
    while (std::getline(in, line)) {
        ++lineno;
        if (!dense && line.starts_with("# shape ")) {
            // Header written by save_attributes; keeps trailing all-zero rows/columns.
            auto fields = io_detail::split_fields(std::string_view(line).substr(8), false);
            auto hn = fields.size() == 2 ? io_detail::parse_number<std::size_t>(fields[0]) : std::nullopt;
            auto hd = fields.size() == 2 ? io_detail::parse_number<std::size_t>(fields[1]) : std::nullopt;
            if (!hn || !hd) throw ParseError(path.string(), lineno, "malformed shape header");
            n = std::max(n, *hn);
            d = std::max(d, *hd);
            continue;
        }
        if (io_detail::skip_line(line)) continue;
        auto fields = io_detail::split_fields(line, dense);
        if (dense) {
            ++n;
            d = std::max(d, fields.size());
            continue;
        }
        if (fields.size() != 3) throw ParseError(path.string(), lineno, "expected 'node feature value'");
        auto i = io_detail::parse_number<std::size_t>(fields[0]);
        auto j = io_detail::parse_number<std::size_t>(fields[1]);
        if (!i || !j) throw ParseError(path.string(), lineno, "indices must be non-negative integers");
        n = std::max(n, *i + 1);
        d = std::max(d, *j + 1);
    }
    return {n, d};
}

inline void save_attributes(const Matrix& x, const std::filesystem::path& path) {
    auto out = io_detail::open_out(path);
    if (io_detail::is_dense_format(path)) {
        const char sep = path.extension() == ".csv" ? ',' : (path.extension() == ".tsv" ? '\t' : ' ');
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index j = 0; j < x.cols(); ++j) out << (j ? std::string(1, sep) : "") << x(i, j);
            out << '\n';
        }
        return;
    }
    out << "# shape " << x.rows() << ' ' << x.cols() << '\n';
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            if (x(i, j) != 0.0) out << i << ' ' << j << ' ' << x(i, j) << '\n';
}

inline std::vector<int> load_labels(const std::filesystem::path& path, std::optional<std::size_t> n = {}) {
    auto in = io_detail::open_in(path);
    std::vector<int> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (io_detail::skip_line(line)) continue;
        auto fields = io_detail::split_fields(line, false);
        auto v = fields.size() == 1 ? io_detail::parse_number<int>(fields[0]) : std::nullopt;
        if (!v || (*v != 0 && *v != 1)) throw ParseError(path.string(), lineno, "label must be 0 or 1");
        labels.push_back(*v);
    }
    if (n && labels.size() != *n) {
        throw ShapeError(path.string() + ": " + std::to_string(labels.size()) + " labels, expected " +
                         std::to_string(*n));
    }
    return labels;
}

inline void save_labels(std::span<const int> labels, const std::filesystem::path& path) {
    auto out = io_detail::open_out(path);
    for (int l : labels) out << l << '\n';
}

/// Loads an attributed graph from an edge list plus an optional attribute
/// file. Without explicit dimensions they are scanned from the files.
inline AttributedGraph load_attributed_graph(const std::filesystem::path& edges,
                                             const std::optional<std::filesystem::path>& attributes,
                                             std::optional<std::size_t> n = {}, std::optional<std::size_t> d = {}) {
    if (!attributes) return load_edge_list(edges, n);
    auto [scan_n, scan_d] = (n && d) ? std::pair{*n, *d} : scan_attribute_shape(*attributes);
    std::size_t nodes = n.value_or(scan_n);
    if (!n) {
        // The edge list may mention nodes beyond the last attribute row.
        nodes = std::max(nodes, load_edge_list(edges).num_nodes());
    }
    auto g = load_edge_list(edges, nodes);
    return g.with_attributes(load_attributes(*attributes, nodes, d.value_or(scan_d)));
}

}  // namespace guide
