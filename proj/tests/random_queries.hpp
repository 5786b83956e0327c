#pragma once

#include <random>
#include <string>
#include <vector>

#include "skillsym/planner.hpp"
#include "skillsym/taxi.hpp"

namespace fixtures {

// Random location constraint: anything, any depot, one depot or one cell.
inline std::optional<std::vector<skillsym::Cell>> random_location(std::mt19937& rng,
                                                                  const skillsym::TaxiDomain& taxi) {
    switch (rng() % 4) {
    case 0: return std::nullopt;
    case 1: return taxi.depot_cells();
    case 2: return std::vector<skillsym::Cell>{taxi.depot_cells()[rng() % 4]};
    default:
        return std::vector<skillsym::Cell>{
            {static_cast<int>(rng() % 5), static_cast<int>(rng() % 5)}};
    }
}

inline skillsym::TaxiConstraint random_constraint(std::mt19937& rng,
                                                  const skillsym::TaxiDomain& taxi) {
    skillsym::TaxiConstraint c;
    c.taxi_at = random_location(rng, taxi);
    c.pass_at = random_location(rng, taxi);
    switch (rng() % 3) {
    case 0: break;
    case 1: c.in_taxi = true; break;
    default: c.in_taxi = false; break;
    }
    return c;
}

// Taxi's base MDP is strongly connected, so any pair of non-empty sets is
// solvable.
inline std::vector<skillsym::NamedQuery> random_queries(const skillsym::TaxiDomain& taxi,
                                                        std::size_t count, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<skillsym::NamedQuery> out;
    while (out.size() < count) {
        auto b = taxi.expand(random_constraint(rng, taxi));
        auto g = taxi.expand(random_constraint(rng, taxi));
        if (b.empty() || g.empty()) continue;
        out.push_back({"R" + std::to_string(out.size()), {b, g}});
    }
    return out;
}

} // namespace fixtures
