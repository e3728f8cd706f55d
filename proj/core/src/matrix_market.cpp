#include "trochoid/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>

#include "trochoid/errors.hpp"

namespace trochoid::io {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.precision(17);
    return out;
}

}  // namespace

void write_matrix_market(std::ostream& out, const DenseMatrix& m) {
    const auto old = out.precision(17);
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) out << m(i, j) << '\n';
    }
    out.precision(old);
}

void write_matrix_market(std::ostream& out, const SparseDigraph& g) {
    const auto old = out.precision(17);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << "% entry (u,v) is the weight of edge u->v\n";
    out << g.n << ' ' << g.n << ' ' << g.edges.size() << '\n';
    for (const Edge& e : g.edges) out << e.source + 1 << ' ' << e.target + 1 << ' ' << e.weight << '\n';
    out.precision(old);
}

DenseMatrix read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty Matrix Market stream", 1);
    ++line_no;
    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket" || lower(object) != "matrix") {
        throw ParseError("missing %%MatrixMarket matrix banner", line_no);
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (field != "real" && field != "integer") throw ParseError("unsupported field '" + field + "'", line_no);
    if (symmetry != "general") throw ParseError("unsupported symmetry '" + symmetry + "'", line_no);
    if (format != "array" && format != "coordinate") throw ParseError("unsupported format '" + format + "'", line_no);

    auto next_data_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '%') continue;
            return true;
        }
        return false;
    };

    if (!next_data_line()) throw ParseError("missing size line", line_no);
    std::istringstream size_line(line);
    long long rows = 0, cols = 0, entries = 0;
    size_line >> rows >> cols;
    if (format == "coordinate") size_line >> entries;
    if (!size_line || rows <= 0 || cols <= 0 || entries < 0) throw ParseError("malformed size line", line_no);

    DenseMatrix m = DenseMatrix::Zero(rows, cols);
    if (format == "array") {
        for (long long idx = 0; idx < rows * cols; ++idx) {
            if (!next_data_line()) throw ParseError("unexpected end of array data", line_no);
            std::istringstream value(line);
            double x;
            if (!(value >> x)) throw ParseError("malformed value", line_no);
            m(idx % rows, idx / rows) = x;
        }
        return m;
    }
    for (long long e = 0; e < entries; ++e) {
        if (!next_data_line()) throw ParseError("unexpected end of coordinate data", line_no);
        std::istringstream entry(line);
        long long i, j;
        double x;
        if (!(entry >> i >> j >> x)) throw ParseError("malformed coordinate entry", line_no);
        if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("index out of range", line_no);
        m(i - 1, j - 1) += x;
    }
    return m;
}

nlohmann::json cycle_sidecar(const SparseDigraph& g) {
    return nlohmann::json{{"n", g.n}, {"cycles", g.cycles}, {"weights", g.cycle_weights}};
}

SparseDigraph digraph_from_sidecar(const nlohmann::json& sidecar) {
    try {
        return ensemble::digraph_from_cycles(sidecar.at("n").get<int>(),
                                             sidecar.at("cycles").get<std::vector<std::vector<int>>>(),
                                             sidecar.at("weights").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("cycle sidecar: ") + e.what());
    }
}

void write_file(const std::filesystem::path& path, const DenseMatrix& m) {
    auto out = open_out(path);
    write_matrix_market(out, m);
}

void write_file(const std::filesystem::path& path, const SparseDigraph& g) {
    auto out = open_out(path);
    write_matrix_market(out, g);
}

DenseMatrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_matrix_market(in);
}

}  // namespace trochoid::io
