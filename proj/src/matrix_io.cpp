#include "rjdbase/matrix_io.hpp"

#include "rjdbase/error.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace rjdbase::io {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

void put_u64(std::ostream& out, std::uint64_t v) {
  const auto le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw Error(ErrorCode::Parse, "truncated matrix header");
  }
  return to_little(v);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(std::string s, double& out) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return false;
  s = s.substr(b, e - b + 1);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

}  // namespace

void write_binary_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out.write(kMatrixMagic.data(), kMatrixMagic.size());
  put_u64(out, static_cast<std::uint64_t>(m.rows()));
  put_u64(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto le = to_little(std::bit_cast<std::uint64_t>(m(r, c)));
      out.write(reinterpret_cast<const char*>(&le), sizeof le);
    }
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing binary matrix");
}

Eigen::MatrixXd read_binary_matrix(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMatrixMagic) {
    throw Error(ErrorCode::Parse, "bad matrix magic bytes");
  }
  const auto rows = get_u64(in);
  const auto cols = get_u64(in);
  if (rows > (1u << 24) || cols > (1u << 24)) {
    throw Error(ErrorCode::Parse, "implausible matrix shape");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = std::bit_cast<double>(get_u64(in));
    }
  }
  return m;
}

void write_binary_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
  write_binary_matrix(out, m);
}

Eigen::MatrixXd read_binary_matrix(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  try {
    return read_binary_matrix(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

Eigen::MatrixXd read_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool ok = true;
    for (std::size_t i = 0; i < fields.size() && ok; ++i) ok = parse_double(fields[i], row[i]);
    if (!ok) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw Error(ErrorCode::Parse, "non-numeric field on line " + std::to_string(lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::Parse, "ragged row on line " + std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "CSV contains no data rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in);
  try {
    return read_csv_matrix(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c);
    }
    out << '\n';
  }
}

std::vector<int> read_labels_csv(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    int v = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      if (lineno == 1) continue;
      throw Error(ErrorCode::Parse, path.string() + ": bad label on line " + std::to_string(lineno));
    }
    labels.push_back(v);
  }
  return labels;
}

void write_labels_csv(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
  out << "label\n";
  for (int l : labels) out << l << '\n';
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".bin") return read_binary_matrix(path);
  if (ext == ".csv") return read_csv_matrix(path);
  throw Error(ErrorCode::Parse, "unknown matrix file extension: " + path.string());
}

}  // namespace rjdbase::io
