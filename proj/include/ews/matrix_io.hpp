#pragma once

// Matrix JSON interchange: {"m": M, "n": N, "entries": [[re, im], ...]} with
// (M*N)^2 entries in row-major order.

#include "ews/linalg.hpp"

#include <string>
#include <string_view>

namespace ews {

/// Throws ParseError on malformed input and NotHermitian unless
/// `allow_non_hermitian`.
BipartiteOperator operator_from_json(std::string_view text,
                                     bool allow_non_hermitian = false);
std::string operator_to_json(const BipartiteOperator &op);

BipartiteOperator read_operator_file(const std::string &path,
                                     bool allow_non_hermitian = false);
void write_text_file(const std::string &path, std::string_view text);

} // namespace ews
