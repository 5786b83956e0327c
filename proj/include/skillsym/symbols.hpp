#pragma once

#include <cstddef>

#include "skillsym/grounding_set.hpp"
#include "skillsym/hierarchy.hpp"

namespace skillsym {

/// G: the level j-1 grounding of a level-j state (1 <= j <= n).
GroundingSet ground(const Hierarchy& h, std::size_t j, StateId s);

/// G over a set of level-j states: the union of member groundings.
GroundingSet ground(const Hierarchy& h, const GroundingSet& states);

/// G0: grounding in the base MDP, i.e. G applied j times. Identity at level 0.
GroundingSet final_ground(const Hierarchy& h, const GroundingSet& states);
GroundingSet final_ground(const Hierarchy& h, std::size_t j, StateId s);

} // namespace skillsym
