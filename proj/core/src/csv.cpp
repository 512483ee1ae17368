#include "faultloc/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "faultloc/error.hpp"

namespace faultloc {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string matrix_to_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& header) {
    if (header.size() != static_cast<std::size_t>(m.cols())) {
        throw Error("CsvShape", "header has " + std::to_string(header.size()) +
                                    " names for " + std::to_string(m.cols()) + " columns");
    }
    std::string out;
    out.reserve(static_cast<std::size_t>(m.size()) * 8 + header.size() * 12);
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j].find(',') != std::string::npos || header[j].find('\n') != std::string::npos) {
            throw Error("CsvName", "column name contains a separator: " + header[j]);
        }
        if (j) out += ',';
        out += header[j];
    }
    out += '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            double v = m(i, j);
            if (!std::isnan(v)) out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header) {
    write_text_file(path, matrix_to_csv(m, header));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

CsvMatrix matrix_from_csv_text(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    if (lines.empty()) throw Error("MalformedCsv", "empty document");

    CsvMatrix out;
    out.header = split_fields(lines[0]);
    const std::size_t cols = out.header.size();
    const std::size_t rows = lines.size() - 1;
    out.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        auto fields = split_fields(lines[i + 1]);
        if (fields.size() != cols) {
            throw Error("MalformedCsv", "row " + std::to_string(i + 1) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(cols));
        }
        for (std::size_t j = 0; j < cols; ++j) {
            const std::string& f = fields[j];
            if (f.empty()) {
                out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            double v = 0;
            auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
                throw Error("MalformedCsv", "bad number '" + f + "' at row " +
                                                std::to_string(i + 1) + " col " + std::to_string(j));
            }
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return out;
}

CsvMatrix read_matrix_csv(const std::string& path) {
    return matrix_from_csv_text(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("Io", "cannot open for writing: " + path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw Error("Io", "short write: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("Io", "cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace faultloc
