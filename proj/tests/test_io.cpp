#include "rjdbase/error.hpp"
#include "rjdbase/matrix_io.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rjdbase;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "rjdbase_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("binary matrix layout") {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6.5;
  std::stringstream ss;
  io::write_binary_matrix(ss, m);
  const std::string bytes = ss.str();
  REQUIRE(bytes.size() == 8 + 16 + 6 * 8);
  CHECK(bytes.substr(0, 8) == "RJDMAT01");
  std::uint64_t rows = 0, cols = 0;
  std::memcpy(&rows, bytes.data() + 8, 8);
  std::memcpy(&cols, bytes.data() + 16, 8);
  CHECK(rows == 2);  // host is little-endian
  CHECK(cols == 3);
  double second = 0;
  std::memcpy(&second, bytes.data() + 24 + 8, 8);
  CHECK(second == 2.0);  // row-major

  ss.seekg(0);
  CHECK(io::read_binary_matrix(ss) == m);
}

TEST_CASE("binary reader rejects bad input") {
  std::stringstream bad_magic("NOTMAT01xxxxxxxxxxxxxxxx");
  CHECK_THROWS_AS(io::read_binary_matrix(bad_magic), Error);
  std::stringstream truncated("RJDMAT01");
  CHECK_THROWS_WITH_AS(io::read_binary_matrix(truncated), doctest::Contains("Parse"), Error);

  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(3, 3);
  std::stringstream ss;
  io::write_binary_matrix(ss, m);
  std::string cut = ss.str().substr(0, ss.str().size() - 4);
  std::stringstream short_body(cut);
  CHECK_THROWS_AS(io::read_binary_matrix(short_body), Error);
}

TEST_CASE("csv matrices with and without header") {
  std::stringstream with_header("a,b\n1,2\n3,4.5\n");
  auto m = io::read_csv_matrix(with_header);
  CHECK(m.rows() == 2);
  CHECK(m(1, 1) == 4.5);
  std::stringstream plain("1,2\n3,4\n");
  CHECK(io::read_csv_matrix(plain).rows() == 2);
  std::stringstream ragged("1,2\n3\n");
  CHECK_THROWS_WITH_AS(io::read_csv_matrix(ragged), doctest::Contains("Parse"), Error);
  std::stringstream junk("1,2\n3,x\n");
  CHECK_THROWS_AS(io::read_csv_matrix(junk), Error);
}

TEST_CASE("csv round trip is exact") {
  Eigen::MatrixXd m(2, 2);
  m << 0.1, 1.0 / 3.0, -2e-300, 12345.678901234567;
  std::stringstream ss;
  io::write_csv_matrix(ss, m);
  ss.seekg(0);
  CHECK(io::read_csv_matrix(ss) == m);
}

TEST_CASE("files and labels") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(4, 2);
  io::write_binary_matrix(scratch("m.bin"), m);
  CHECK(io::read_matrix(scratch("m.bin")) == m);
  {
    std::ofstream f(scratch("m.csv"));
    io::write_csv_matrix(f, m);
  }
  CHECK(io::read_matrix(scratch("m.csv")) == m);
  CHECK_THROWS_WITH_AS(io::read_matrix(scratch("missing.bin")), doctest::Contains("Io"), Error);

  io::write_labels_csv(scratch("labels.csv"), {0, 2, 1, 1});
  CHECK(io::read_labels_csv(scratch("labels.csv")) == std::vector<int>{0, 2, 1, 1});
}
