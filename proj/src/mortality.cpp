#include "radrisk/mortality.hpp"

#include <algorithm>

#include "radrisk/csv.hpp"
#include "radrisk/errors.hpp"

namespace radrisk {

MortalityTable make_mortality_table(std::vector<double> r0, std::vector<double> q0,
                                    std::string label, const AgeGrid& grid) {
    grid.validate();
    const auto n = static_cast<std::size_t>(grid.size());
    if (r0.size() != n || q0.size() != n)
        throw DataError("mortality table '" + label + "' must have " + std::to_string(n) +
                        " annual rates");
    for (std::size_t t = 0; t < n; ++t) {
        if (r0[t] < 0 || q0[t] < 0)
            throw DataError("negative mortality rate at age " + std::to_string(t));
        if (r0[t] > q0[t])
            throw DataError("cause-specific rate exceeds all-cause rate at age " +
                            std::to_string(t));
    }
    return MortalityTable{std::move(r0), std::move(q0), std::move(label)};
}

MortalityTable load_mortality_table(const std::filesystem::path& path, const AgeGrid& grid) {
    grid.validate();
    const CsvTable csv = read_csv(path);
    const auto c_start = csv.column("age_start");
    const auto c_end = csv.column("age_end");
    const auto c_r0 = csv.column("r0");
    const auto c_q0 = csv.column("q0");

    struct Group {
        int start, end;
        double r0, q0;
    };
    std::vector<Group> groups;
    for (const auto& row : csv.rows) {
        Group g;
        g.start = static_cast<int>(parse_long(row[c_start], "age_start"));
        g.end = static_cast<int>(parse_long(row[c_end], "age_end"));
        g.r0 = parse_double(row[c_r0], "r0");
        g.q0 = parse_double(row[c_q0], "q0");
        if (g.end < g.start)
            throw DataError("age group " + std::to_string(g.start) + "-" +
                            std::to_string(g.end) + " is reversed");
        groups.push_back(g);
    }
    if (groups.empty()) throw DataError("mortality table has no rows: " + path.string());
    std::sort(groups.begin(), groups.end(),
              [](const Group& a, const Group& b) { return a.start < b.start; });
    for (std::size_t i = 1; i < groups.size(); ++i) {
        if (groups[i].start != groups[i - 1].end + 1)
            throw DataError("age groups must be contiguous; gap or overlap after " +
                            std::to_string(groups[i - 1].end));
    }
    if (groups.back().end < grid.t_max)
        throw DataError("mortality table ends at age " + std::to_string(groups.back().end) +
                        ", grid needs " + std::to_string(grid.t_max));

    const auto n = static_cast<std::size_t>(grid.size());
    std::vector<double> r0(n, 0.0), q0(n, groups.front().q0);
    for (const auto& g : groups) {
        for (int t = std::max(g.start, 0); t <= std::min(g.end, grid.t_max); ++t) {
            r0[static_cast<std::size_t>(t)] = g.r0;
            q0[static_cast<std::size_t>(t)] = g.q0;
        }
    }
    return make_mortality_table(std::move(r0), std::move(q0), path.stem().string(), grid);
}

}  // namespace radrisk
