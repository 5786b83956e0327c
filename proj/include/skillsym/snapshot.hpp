#pragma once

#include <string>

#include "skillsym/hierarchy.hpp"

namespace skillsym {

/// JSON description of every level: states, variables, actions, transitions
/// as [s, a, s', r] and groundings as lists of lower-level state ids.
std::string hierarchy_snapshot(const Hierarchy& h, int indent = 2);

} // namespace skillsym
