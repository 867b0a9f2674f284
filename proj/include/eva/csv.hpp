#pragma once

#include <string>
#include <vector>

#include "eva/matrix.hpp"

namespace eva {

/// Comma-separated numeric table with a header row.
struct CsvTable {
    std::vector<std::string> header;
    Matrix values;

    /// Column index from a name or a decimal index string.
    std::size_t column(const std::string& name_or_index) const;

    /// values without the given column.
    Matrix drop_column(std::size_t col) const;
    Matrix take_column(std::size_t col) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace eva
