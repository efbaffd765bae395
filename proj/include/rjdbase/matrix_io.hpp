#pragma once

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace rjdbase::io {

// Binary matrix container:
//   8 bytes magic "RJDMAT01"
//   u64 rows, u64 cols        (little-endian)
//   rows*cols f64 entries     (little-endian, row-major)
inline constexpr std::array<char, 8> kMatrixMagic{'R', 'J', 'D', 'M', 'A', 'T', '0', '1'};

void write_binary_matrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_binary_matrix(std::istream& in);
void write_binary_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_binary_matrix(const std::filesystem::path& path);

/// Comma-separated rows. A first line that does not parse as numbers is
/// treated as a header and skipped.
Eigen::MatrixXd read_csv_matrix(std::istream& in);
Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m);

/// One integer label per line, optional "label" header.
std::vector<int> read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels);

/// Reads either container, dispatching on the file extension (".bin" or ".csv").
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

}  // namespace rjdbase::io
