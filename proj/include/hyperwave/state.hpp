#pragma once

#include "hyperwave/geometry.hpp"

namespace hyperwave {

// Displacement and velocity of a radial solution at one instant.
struct StatePair {
    RadialField u;
    RadialField ut;
    double time = 0.0;

    StatePair(RadialField u_in, RadialField ut_in, double t = 0.0);
    static StatePair zero(const GridPtr& grid, double t = 0.0);
    const RadialGrid& grid() const { return u.grid(); }
};

}  // namespace hyperwave
