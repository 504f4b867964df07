#pragma once

#include <string>
#include <string_view>

#include "mechindep/certificate.hpp"
#include "mechindep/matrix.hpp"
#include "mechindep/tensor.hpp"

namespace mechindep {

/// Comma-separated rows of decimal numbers. Blank lines and lines starting
/// with '#' are skipped. Errors carry the 1-based line and character column.
Matrix parse_matrix_csv(std::string_view text);
Matrix read_matrix_csv(const std::string& path);

/// Shortest round-trip decimal representation, one row per line.
std::string format_matrix_csv(const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);

/// {"dims": [d_x, d_s, ...], "entries": [...]} with entries row-major; the
/// derivative order is dims.size() - 1.
DerivativeTensor tensor_from_json(const Json& j);
Json to_json(const DerivativeTensor& t);

std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace mechindep
