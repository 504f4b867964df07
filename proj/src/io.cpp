#include "mechindep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mechindep/errors.hpp"

namespace mechindep {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

}  // namespace

Matrix parse_matrix_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t width = 0;
    std::size_t width_line = 0;
    while (!text.empty()) {
        ++line_no;
        const std::size_t eol = text.find('\n');
        const std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        std::size_t first = 0;
        while (first < line.size() && is_space(line[first])) ++first;
        if (first == line.size() || line[first] == '#') continue;

        std::vector<double> row;
        std::size_t pos = 0;
        while (true) {
            std::size_t end = line.find(',', pos);
            if (end == std::string_view::npos) end = line.size();
            std::size_t a = pos, b = end;
            while (a < b && is_space(line[a])) ++a;
            while (b > a && is_space(line[b - 1])) --b;
            const std::size_t column = a + 1;
            if (a == b) throw ParseError(line_no, column, "empty field");
            const char* begin = line.data() + a;
            const char* stop = line.data() + b;
            if (*begin == '+') ++begin;
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(begin, stop, value);
            if (ec == std::errc::result_out_of_range)
                throw ParseError(line_no, column, "number out of range");
            if (ec != std::errc{} || ptr != stop)
                throw ParseError(line_no, column,
                                 "expected a number, got '" + std::string(line.substr(a, b - a)) + "'");
            if (!std::isfinite(value)) throw ParseError(line_no, column, "entries must be finite");
            row.push_back(value);
            if (end == line.size()) break;
            pos = end + 1;
        }
        if (rows.empty()) {
            width = row.size();
            width_line = line_no;
        } else if (row.size() != width) {
            throw ParseError(line_no, 1,
                             "row has " + std::to_string(row.size()) + " fields, line " +
                                 std::to_string(width_line) + " has " + std::to_string(width));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(line_no == 0 ? 1 : line_no, 1, "no matrix rows");
    return Matrix::from_rows(rows);
}

Matrix read_matrix_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_matrix_csv(text);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.column(), path + ": " + e.message());
    }
}

std::string format_matrix_csv(const Matrix& m) {
    std::string out;
    char buf[64];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ',';
            const auto res = std::to_chars(buf, buf + sizeof buf, m(r, c));
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
    write_text_file(path, format_matrix_csv(m));
}

DerivativeTensor tensor_from_json(const Json& j) {
    try {
        const auto dims = j.at("dims").get<std::vector<std::size_t>>();
        auto entries = j.at("entries").get<std::vector<double>>();
        if (dims.size() < 2 || dims.size() > 4)
            throw InvalidInput("tensor dims must list d_x followed by 1 to 3 equal d_s values");
        for (std::size_t k = 2; k < dims.size(); ++k)
            if (dims[k] != dims[1]) throw ShapeError("tensor derivative dimensions must be equal");
        return DerivativeTensor(dims.size() - 1, dims[0], dims[1], std::move(entries));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed tensor: ") + e.what());
    }
}

Json to_json(const DerivativeTensor& t) {
    std::vector<std::size_t> dims{t.outputs()};
    for (std::size_t k = 0; k < t.order(); ++k) dims.push_back(t.inputs());
    return {{"dims", dims}, {"entries", std::vector<double>(t.entries().begin(), t.entries().end())}};
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Convert the byte offset into a line and column.
        const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k < at; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(line, col, path + ": invalid JSON");
    }
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

}  // namespace mechindep
