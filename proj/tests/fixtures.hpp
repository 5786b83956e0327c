#pragma once

#include "oracle.hpp"
#include "skillsym/hierarchy.hpp"
#include "skillsym/taxi.hpp"

namespace fixtures {

inline const skillsym::TaxiDomain& taxi() {
    static const skillsym::TaxiDomain domain;
    return domain;
}

inline const skillsym::Hierarchy& taxi_hierarchy() {
    static const skillsym::Hierarchy h = taxi().build_hierarchy();
    return h;
}

inline skillsym::StateId base_state(oracle::Pos taxi, oracle::Pos pass, bool in) {
    return fixtures::taxi().encode({{taxi.x, taxi.y}, {pass.x, pass.y}, in});
}

inline oracle::TaxiState to_oracle(const skillsym::TaxiState& s) {
    return {{s.taxi.x, s.taxi.y}, {s.pass.x, s.pass.y}, s.in_taxi};
}

// Level-1 state with the given base grounding.
inline skillsym::StateId level1_state(const skillsym::Hierarchy& h, skillsym::StateId base) {
    for (skillsym::StateId s = 0; s < h.num_states(1); ++s)
        if (h.grounding(1, s).contains(base)) return s;
    return skillsym::kNoState;
}

inline skillsym::StateId level2_node(const skillsym::Hierarchy& h, const std::string& label) {
    for (skillsym::StateId s = 0; s < h.num_states(2); ++s)
        if (h.mdp(2).space().label(s) == label) return s;
    return skillsym::kNoState;
}

} // namespace fixtures
