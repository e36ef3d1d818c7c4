#pragma once

#include <guide/io.hpp>
#include <guide/motif.hpp>

#include <filesystem>
#include <string>

namespace guide {

/// Tab-separated, one header row naming the six columns, one row per node.
inline void save_structure_matrix(const StructureMatrix& s, const std::filesystem::path& path) {
    auto out = io_detail::open_out(path);
    for (std::size_t c = 0; c < StructureMatrix::column_names.size(); ++c)
        out << (c ? "\t" : "") << StructureMatrix::column_names[c];
    out << '\n';
    for (Eigen::Index i = 0; i < s.values.rows(); ++i) {
        for (Eigen::Index c = 0; c < s.values.cols(); ++c) out << (c ? "\t" : "") << s.values(i, c);
        out << '\n';
    }
}

/// Reads a file written by save_structure_matrix. The values are returned as
/// stored; the caller decides whether they still need a transform.
inline Matrix load_structure_matrix(const std::filesystem::path& path) {
    auto in = io_detail::open_in(path);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::vector<double>> rows;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (io_detail::skip_line(line)) continue;
        auto fields = io_detail::split_fields(line, false);
        if (!header) {
            header = true;
            if (fields.size() != StructureMatrix::column_names.size() || fields[0] != "degree") {
                throw ParseError(path.string(), lineno, "expected header row naming the six structure columns");
            }
            continue;
        }
        if (fields.size() != StructureMatrix::column_names.size()) {
            throw ParseError(path.string(), lineno, "expected 6 columns");
        }
        std::vector<double> row;
        for (auto f : fields) {
            auto v = io_detail::parse_number<double>(f);
            if (!v || !std::isfinite(*v)) throw ParseError(path.string(), lineno, "malformed value");
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()), 6);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < 6; ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    return m;
}

}  // namespace guide
