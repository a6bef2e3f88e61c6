#include "partinv/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace partinv::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& token, const std::filesystem::path& path) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::runtime_error("bad numeric token '" + token + "' in " + path.string());
  }
  return value;
}

}  // namespace

void write_dmat(const Matrix& a, std::ostream& os) {
  os << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) os << ' ';
      os << format_double(a(i, j));
    }
    os << '\n';
  }
}

void save_dmat(const Matrix& a, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dmat(a, os);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Matrix read_dmat(std::istream& is) {
  Index rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw std::runtime_error("bad .dmat header");
  }
  Matrix a(rows, cols);
  std::string token;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(is >> token)) throw std::runtime_error("truncated .dmat body");
      a(i, j) = parse_double(token, "<stream>");
    }
  }
  return a;
}

Matrix load_dmat(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  Index rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw std::runtime_error("bad .dmat header in " + path.string());
  }
  Matrix a(rows, cols);
  std::string token;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(is >> token)) throw std::runtime_error("truncated .dmat body in " + path.string());
      a(i, j) = parse_double(token, path);
    }
  }
  return a;
}

void save_vec(const Vector& v, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (Index i = 0; i < v.size(); ++i) os << format_double(v(i)) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

Vector load_vec(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> values;
  std::string token;
  while (is >> token) values.push_back(parse_double(token, path));
  Vector v(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Index>(i)) = values[i];
  return v;
}

}  // namespace partinv::io
