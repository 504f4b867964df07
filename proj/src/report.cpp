#include "mechindep/report.hpp"

#include <sstream>

#include "mechindep/errors.hpp"

namespace mechindep {

std::string_view format_name(ReportFormat f) {
    switch (f) {
        case ReportFormat::json: return "json";
        case ReportFormat::text: return "text";
        case ReportFormat::dot: return "dot";
    }
    return "unknown";
}

std::string emit_report(const std::vector<Certificate>& certs, ReportFormat format,
                        const Json& header, const Json& extra) {
    if (format == ReportFormat::dot) throw InvalidInput("DOT output is only available for decompose");
    if (format == ReportFormat::json) {
        Json j;
        j["header"] = header;
        for (const auto& [key, value] : extra.items()) j[key] = value;
        Json list = Json::array();
        for (const auto& c : certs) list.push_back(c.to_json());
        j["certificates"] = list;
        return j.dump(2) + "\n";
    }

    std::ostringstream out;
    for (const auto& [key, value] : header.items())
        out << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
            << "\n";
    for (const auto& [key, value] : extra.items()) out << key << ": " << value.dump() << "\n";
    for (const auto& c : certs) {
        out << criterion_name(c.criterion) << ": " << (c.holds ? "HOLDS" : "FAILS") << "\n";
        out << "  witness: " << c.witness.dump() << "\n";
        for (const auto& n : c.notes) out << "  note: " << n << "\n";
        out << "  digest: " << c.inputs_digest << "\n";
    }
    return out.str();
}

std::vector<Certificate> certificates_from_report(const Json& report) {
    std::vector<Certificate> out;
    for (const auto& c : report.at("certificates")) out.push_back(Certificate::from_json(c));
    return out;
}

}  // namespace mechindep
