#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "skillsym/abstraction.hpp"
#include "skillsym/core.hpp"

namespace skillsym {

/// An n-level abstraction hierarchy M_0 ... M_n. Level 0 is the base MDP; each
/// higher level is built from options over the level below it. Values are
/// immutable once constructed: add_level returns a new hierarchy.
class Hierarchy {
public:
    explicit Hierarchy(Mdp base, RewardMode reward_mode = RewardMode::UniformPenalty);

    /// n, the index of the top level.
    std::size_t top() const { return levels_.size(); }
    RewardMode reward_mode() const { return reward_mode_; }

    const Mdp& mdp(std::size_t j) const;
    const Mdp& base() const { return base_; }
    const AbstractLevel& level(std::size_t j) const;
    std::size_t num_states(std::size_t j) const { return mdp(j).num_states(); }

    /// Grounding of level-j state s at level j-1 (j >= 1).
    const GroundingSet& grounding(std::size_t j, StateId s) const;
    /// Memoized grounding of level-j state s in the base MDP.
    const GroundingSet& final_grounding(std::size_t j, StateId s) const;

    /// Copy with level j (>= 1) replaced; used to assemble or perturb hierarchies.
    Hierarchy replace_level(std::size_t j, AbstractLevel level) const;
    Hierarchy push_level(AbstractLevel level) const;

private:
    void check_level(std::size_t j) const;
    void rebuild_final_groundings();

    Mdp base_;
    std::vector<AbstractLevel> levels_;
    RewardMode reward_mode_;
    /// final_[j][s] = G0 of level-j state s.
    std::vector<std::vector<GroundingSet>> final_;
};

/// Options for one iteration of the skill-symbol loop.
struct LevelSpec {
    std::vector<OptionSkill> options;
    /// Closure seeds for factored construction; all lower states when absent.
    std::optional<GroundingSet> seeds;
    std::size_t max_parts = kDefaultMaxParts;
};

/// Partitions and classifies the options, picks plan-graph or factored
/// construction, assigns rewards and appends the resulting level.
Hierarchy add_level(const Hierarchy& h, LevelSpec spec);

struct Violation {
    enum class Kind {
        InvalidState,
        EmptyGrounding,
        InvalidGrounding,
        InvalidOption,
        ApplicabilitySoundness,
        ImageSoundness,
        EmptyFinalGrounding,
    };
    Kind kind;
    std::size_t level;
    StateId state = kNoState;
    std::string message;
};

std::string to_string(Violation::Kind kind);

/// Empty iff every structural invariant and the image/applicability soundness
/// of every abstract transition hold.
std::vector<Violation> validate(const Hierarchy& h);

} // namespace skillsym
