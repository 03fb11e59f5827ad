#pragma once

#include "radrisk/errors.hpp"

namespace radrisk {

// Discrete annual age axis 0..t_max used by every lifetime computation.
struct AgeGrid {
    int t_max = 94;

    int size() const { return t_max + 1; }
    void validate() const {
        if (t_max < 1) throw ConfigError("age grid needs t_max >= 1");
    }
};

}  // namespace radrisk
