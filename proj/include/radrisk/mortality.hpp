#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "radrisk/age_grid.hpp"

namespace radrisk {

// Annual baseline mortality rates per single year of age: r0 = cause-specific
// (lung cancer), q0 = all-cause. Indexed 0..t_max.
struct MortalityTable {
    std::vector<double> r0;
    std::vector<double> q0;
    std::string label;
};

// Validates sizes, nonnegativity and r0 <= q0. Used for loaded/authored
// tables; sampled tables skip the subset check by construction.
MortalityTable make_mortality_table(std::vector<double> r0, std::vector<double> q0,
                                    std::string label, const AgeGrid& grid = {});

// Reads a grouped CSV (age_start,age_end,r0,q0) and expands it to single
// years of age. Groups must be contiguous and cover t_max; ages below the
// first group get r0 = 0 and the first group's q0.
MortalityTable load_mortality_table(const std::filesystem::path& path,
                                    const AgeGrid& grid = {});

}  // namespace radrisk
