#include "radrisk/csv.hpp"

#include <cstdlib>
#include <fstream>

#include "radrisk/errors.hpp"

namespace radrisk {

static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

static std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string::size_type pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw DataError("missing CSV column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open CSV file: " + path.string());
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split_fields(t);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw DataError("CSV row with " + std::to_string(fields.size()) +
                            " fields, expected " + std::to_string(table.header.size()) +
                            " in " + path.string());
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw DataError("empty CSV file: " + path.string());
    return table;
}

double parse_double(const std::string& field, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
        throw DataError("cannot parse number '" + field + "' (" + context + ")");
    return v;
}

long parse_long(const std::string& field, const std::string& context) {
    char* end = nullptr;
    const long v = std::strtol(field.c_str(), &end, 10);
    if (field.empty() || end != field.c_str() + field.size())
        throw DataError("cannot parse integer '" + field + "' (" + context + ")");
    return v;
}

}  // namespace radrisk
