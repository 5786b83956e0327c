#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "skillsym/hierarchy.hpp"

namespace skillsym {

struct PddlExport {
    std::string domain;
    std::string problem;
    std::size_t num_actions = 0;
    std::size_t num_predicates = 0;
};

/// STRIPS domain and problem for level j >= 1.
///
/// Factored levels get one 0-ary predicate per (variable, value) and one action
/// per option part; a part whose initiation set is not a single conjunction
/// over the level's states is split into one action per conjunctive case.
/// Plan-graph levels get one predicate per node and one action per edge.
/// The problem defaults to init = state 0 and goal = the last state.
/// Throws NotFactored for level 0 or a non-factored, non-plan-graph level.
PddlExport export_pddl(const Hierarchy& h, std::size_t j,
                       std::optional<StateId> init = std::nullopt,
                       std::optional<StateId> goal = std::nullopt,
                       const std::string& name = "skillsym");

/// Checks that every parenthesis closes and nothing trails the last form.
bool balanced_sexpr(const std::string& text);

} // namespace skillsym
