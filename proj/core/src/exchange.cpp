#include "bevc/exchange.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bevc::exchange {

namespace {

std::string format_17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

[[noreturn]] void malformed(const std::string& what) {
  throw invalid_input("malformed operator document: " + what);
}

}  // namespace

void write_operator(std::ostream& os, const Matrix& m, Dims dims,
                    const std::map<std::string, std::string>& meta) {
  if (m.rows() != dims.total() || m.cols() != dims.total())
    throw invalid_input("matrix size must equal (d_A*d_B)^2");
  os << "dims=[" << dims.a << "," << dims.b << "]\n";
  os << "layout=\"row-major\"\n";
  for (const auto& [key, value] : meta) os << "meta." << key << "=" << value << "\n";
  os << "entries=\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << "(" << format_17(m(i, j).real()) << ", " << format_17(m(i, j).imag())
         << ")\n";
}

void write_operator_file(const std::string& path, const Matrix& m, Dims dims,
                         const std::map<std::string, std::string>& meta) {
  std::ofstream os(path);
  if (!os) throw io_error("cannot open for writing: " + path);
  write_operator(os, m, dims, meta);
  if (!os) throw io_error("write failed: " + path);
}

OperatorDocument read_operator(std::istream& is) {
  OperatorDocument doc;
  std::string line;
  bool saw_dims = false, saw_layout = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("dims=[", 0) == 0) {
      const auto close = line.find(']');
      if (close == std::string::npos) malformed("unterminated dims");
      std::istringstream body(line.substr(6, close - 6));
      char comma = 0;
      if (!(body >> doc.dims.a >> comma >> doc.dims.b) || comma != ',')
        malformed("dims must be [d_A,d_B]");
      if (doc.dims.a < 1 || doc.dims.b < 1) malformed("dims must be positive");
      saw_dims = true;
    } else if (line.rfind("layout=", 0) == 0) {
      if (line != "layout=\"row-major\"")
        malformed("unsupported layout (only \"row-major\")");
      saw_layout = true;
    } else if (line.rfind("meta.", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) malformed("meta line without '='");
      doc.meta[line.substr(5, eq - 5)] = line.substr(eq + 1);
    } else if (line == "entries=") {
      break;
    } else {
      malformed("unexpected line: " + line);
    }
  }
  if (!saw_dims) malformed("missing dims");
  if (!saw_layout) malformed("missing layout");

  const int d = doc.dims.total();
  doc.matrix.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      char open = 0, comma = 0, close = 0;
      double re = 0.0, im = 0.0;
      if (!(is >> open >> re >> comma >> im >> close) || open != '(' ||
          comma != ',' || close != ')')
        malformed("expected (re, im) pair at entry " + std::to_string(i * d + j));
      doc.matrix(i, j) = Complex(re, im);
    }
  return doc;
}

OperatorDocument read_operator_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open for reading: " + path);
  return read_operator(is);
}

}  // namespace bevc::exchange
