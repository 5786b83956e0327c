#include "skillsym/symbols.hpp"

#include "skillsym/error.hpp"

namespace skillsym {

GroundingSet ground(const Hierarchy& h, std::size_t j, StateId s) {
    if (j == 0 || j > h.top())
        throw LevelOutOfRange("ground needs 1 <= j <= " + std::to_string(h.top()) + ", got " +
                              std::to_string(j));
    if (s >= h.num_states(j))
        throw std::out_of_range("state " + std::to_string(s) + " not at level " +
                                std::to_string(j));
    return h.grounding(j, s);
}

GroundingSet ground(const Hierarchy& h, const GroundingSet& states) {
    const std::size_t j = states.level_index();
    if (j == 0 || j > h.top())
        throw LevelOutOfRange("ground needs 1 <= j <= " + std::to_string(h.top()) + ", got " +
                              std::to_string(j));
    if (states.universe_size() != h.num_states(j))
        throw LevelMismatch("set does not span level " + std::to_string(j));
    GroundingSet out(j - 1, h.num_states(j - 1));
    states.for_each([&](StateId s) { out |= h.grounding(j, s); });
    return out;
}

GroundingSet final_ground(const Hierarchy& h, const GroundingSet& states) {
    const std::size_t j = states.level_index();
    if (j > h.top())
        throw LevelOutOfRange("level " + std::to_string(j) + " above top level " +
                              std::to_string(h.top()));
    if (states.universe_size() != h.num_states(j))
        throw LevelMismatch("set does not span level " + std::to_string(j));
    if (j == 0) return states;
    GroundingSet out(0, h.num_states(0));
    states.for_each([&](StateId s) { out |= h.final_grounding(j, s); });
    return out;
}

GroundingSet final_ground(const Hierarchy& h, std::size_t j, StateId s) {
    if (j > h.top())
        throw LevelOutOfRange("level " + std::to_string(j) + " above top level " +
                              std::to_string(h.top()));
    return h.final_grounding(j, s);
}

} // namespace skillsym
