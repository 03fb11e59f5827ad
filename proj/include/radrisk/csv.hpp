#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace radrisk {

// Minimal CSV support for the plain comma-separated formats used here:
// no quoting, '#' starts a comment line, blank lines are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws DataError
};

CsvTable read_csv(const std::filesystem::path& path);

double parse_double(const std::string& field, const std::string& context);
long parse_long(const std::string& field, const std::string& context);

}  // namespace radrisk
