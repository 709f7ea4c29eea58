#ifndef BEVC_EXCHANGE_HPP
#define BEVC_EXCHANGE_HPP

#include <iosfwd>
#include <map>
#include <string>

#include "bevc/hilbert.hpp"

namespace bevc::exchange {

// Operator exchange format: a text document with
//   dims=[d_A,d_B]
//   layout="row-major"
//   meta.<key>=<value>        (zero or more free-form metadata lines)
//   entries=
//   (re, im)                  ((d_A*d_B)^2 pairs, flat row-major order)
// Writers emit 17 significant digits so doubles round-trip exactly.

struct OperatorDocument {
  Matrix matrix;
  Dims dims{0, 0};
  std::map<std::string, std::string> meta;
};

void write_operator(std::ostream& os, const Matrix& m, Dims dims,
                    const std::map<std::string, std::string>& meta = {});
void write_operator_file(const std::string& path, const Matrix& m, Dims dims,
                         const std::map<std::string, std::string>& meta = {});

OperatorDocument read_operator(std::istream& is);
OperatorDocument read_operator_file(const std::string& path);

}  // namespace bevc::exchange

#endif  // BEVC_EXCHANGE_HPP
