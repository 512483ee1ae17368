#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace faultloc {

// CSV conventions shared by every file this library writes:
//   - comma separator, LF line endings, UTF-8
//   - one header row of column names (names must not contain commas)
//   - doubles serialized with std::to_chars in shortest round-trip form
//   - missing cells (NaN) serialized as empty fields
// Shortest round-trip form is canonical, so load + serialize reproduces a
// file byte-for-byte.

std::string format_double(double v);

std::string matrix_to_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& header);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header);

struct CsvMatrix {
    std::vector<std::string> header;
    Eigen::MatrixXd values;  // NaN where the field was empty
};

CsvMatrix matrix_from_csv_text(const std::string& text);
CsvMatrix read_matrix_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace faultloc
