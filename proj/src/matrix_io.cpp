#include "ews/matrix_io.hpp"

#include "ews/error.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ews {

using nlohmann::json;

BipartiteOperator operator_from_json(std::string_view text,
                                     bool allow_non_hermitian) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("m") || !doc.contains("n") ||
      !doc.contains("entries"))
    throw Error(ErrorCode::ParseError, "expected object with m, n, entries");
  const auto &jm = doc["m"], &jn = doc["n"], &je = doc["entries"];
  if (!jm.is_number_unsigned() || !jn.is_number_unsigned() || !je.is_array())
    throw Error(ErrorCode::ParseError, "m, n must be positive integers");
  const std::size_t m = jm.get<std::size_t>(), n = jn.get<std::size_t>();
  if (m == 0 || n == 0) throw Error(ErrorCode::ParseError, "zero dimension");
  const std::size_t order = m * n;
  if (je.size() != order * order)
    throw Error(ErrorCode::ParseError,
                "entries length " + std::to_string(je.size()) + " != (m*n)^2 = " +
                    std::to_string(order * order));
  std::vector<cplx> entries;
  entries.reserve(je.size());
  for (const auto &e : je) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw Error(ErrorCode::ParseError, "entry must be [re, im]");
    entries.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  Matrix mat(order, order, std::move(entries));
  return BipartiteOperator(m, n, std::move(mat), !allow_non_hermitian);
}

std::string operator_to_json(const BipartiteOperator &op) {
  nlohmann::ordered_json doc;
  doc["m"] = op.dim_a();
  doc["n"] = op.dim_b();
  auto entries = nlohmann::ordered_json::array();
  for (const auto &x : op.matrix().entries())
    entries.push_back({x.real(), x.imag()});
  doc["entries"] = std::move(entries);
  return doc.dump() + "\n";
}

BipartiteOperator read_operator_file(const std::string &path,
                                     bool allow_non_hermitian) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return operator_from_json(ss.str(), allow_non_hermitian);
}

void write_text_file(const std::string &path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

} // namespace ews
