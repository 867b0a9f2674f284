#include "eva/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace eva {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name_or_index) const {
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == name_or_index) return j;
    }
    std::size_t idx = 0;
    const auto* begin = name_or_index.data();
    const auto* end = begin + name_or_index.size();
    const auto [ptr, ec] = std::from_chars(begin, end, idx);
    if (ec == std::errc() && ptr == end && idx < header.size()) return idx;
    throw DegenerateInputError("csv: no column named '" + name_or_index + "'");
}

Matrix CsvTable::drop_column(std::size_t col) const {
    if (values.cols() < 2) throw ShapeError("csv: cannot drop the only column");
    Matrix out(values.rows(), values.cols() - 1);
    for (std::size_t i = 0; i < values.rows(); ++i) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < values.cols(); ++j) {
            if (j != col) out(i, k++) = values(i, j);
        }
    }
    return out;
}

Matrix CsvTable::take_column(std::size_t col) const {
    Matrix out(values.rows(), 1);
    for (std::size_t i = 0; i < values.rows(); ++i) out(i, 0) = values(i, col);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DegenerateInputError("csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DegenerateInputError("csv: empty file " + path);
    CsvTable table;
    table.header = split_line(line);
    const std::size_t cols = table.header.size();
    if (cols == 0) throw DegenerateInputError("csv: empty header in " + path);

    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_line(line);
        if (fields.size() != cols) {
            throw DegenerateInputError("csv: line " + std::to_string(lineno) + " has " +
                                       std::to_string(fields.size()) + " fields, expected " +
                                       std::to_string(cols));
        }
        for (const auto& f : fields) {
            try {
                std::size_t used = 0;
                const double v = std::stod(f, &used);
                if (used != f.size()) throw std::invalid_argument(f);
                data.push_back(v);
            } catch (const std::exception&) {
                throw DegenerateInputError("csv: non-numeric field '" + f + "' at line " +
                                           std::to_string(lineno));
            }
        }
        ++rows;
    }
    if (rows == 0) throw DegenerateInputError("csv: no data rows in " + path);
    table.values = Matrix(rows, cols, std::move(data));
    return table;
}

}  // namespace eva
