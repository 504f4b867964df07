#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mechindep/certificate.hpp"

namespace mechindep {

enum class ReportFormat { json, text, dot };

std::string_view format_name(ReportFormat f);

/// JSON: {"header": ..., "certificates": [...]} plus any `extra` fields.
/// Text: header lines, then criterion, verdict, witness and notes per
/// certificate. DOT is produced by the decompose command, not here.
std::string emit_report(const std::vector<Certificate>& certs, ReportFormat format,
                        const Json& header = Json::object(), const Json& extra = Json::object());

/// Inverse of the JSON format, for round-trip checks.
std::vector<Certificate> certificates_from_report(const Json& report);

}  // namespace mechindep
