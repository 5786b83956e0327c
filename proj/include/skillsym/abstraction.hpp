#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "skillsym/core.hpp"
#include "skillsym/grounding_set.hpp"

namespace skillsym {

/// All states an option may terminate in, over every initiation state.
struct EffectSet {
    std::string option_id;
    GroundingSet states;
};

enum class OptionClassKind { Subgoal, AbstractSubgoal, Unclassifiable };

/// Subgoal: the terminal state does not depend on the start state.
/// AbstractSubgoal: variables in `mask` end at start-independent values, all
/// other variables are left unchanged.
struct OptionClass {
    OptionClassKind kind = OptionClassKind::Unclassifiable;
    VarMask mask = 0;

    friend bool operator==(const OptionClass&, const OptionClass&) = default;
};

std::string to_string(OptionClassKind kind);

/// One piece of a partitioned option. `effect_values` holds terminal values for
/// the masked variables (-1 elsewhere) on factored levels.
struct OptionPart {
    GroundingSet initiation;
    OptionClass cls;
    GroundingSet effect;
    Assignment effect_values;
};

struct PartitionedOption {
    std::string option_id;
    std::vector<OptionPart> parts;
};

enum class LevelKind { Base, PlanGraph, Factored };
enum class RewardMode { UniformPenalty, EmpiricalMean };

std::string to_string(LevelKind kind);
std::string to_string(RewardMode mode);

/// Level j >= 1 of a hierarchy. `mdp` lives at level j and its actions are the
/// options of A_j, executed over level j-1; `groundings[s]` is the set of
/// level j-1 states that abstract state s refers to.
struct AbstractLevel {
    Mdp mdp;
    LevelKind kind = LevelKind::PlanGraph;
    std::vector<GroundingSet> groundings;
    std::vector<OptionSkill> options;
    std::vector<PartitionedOption> partitions;
    /// Plan-graph levels: (option index, part index) each node stands for.
    std::vector<std::pair<std::size_t, std::size_t>> node_parts;
    /// Initiation and effect symbols over level j-1.
    SymbolTable symbols;
};

inline constexpr std::size_t kDefaultMaxParts = 64;

/// Executes `option` from every initiation state (recording its statistics)
/// and collects the terminal states.
EffectSet compute_effect_set(OptionSkill& option, const Mdp& level);

OptionClass classify_option(const OptionSkill& option, const Mdp& level);

/// Splits the initiation set into pieces that are each (abstract) subgoal
/// options. Throws PartitionExplosion when more than `max_parts` are needed.
PartitionedOption partition_option(const OptionSkill& option, const Mdp& level,
                                   std::size_t max_parts = kDefaultMaxParts);

AbstractLevel build_plan_graph(std::vector<OptionSkill> options,
                               std::vector<PartitionedOption> partitions, const Mdp& lower);
AbstractLevel build_plan_graph(std::vector<OptionSkill> options, const Mdp& lower);

AbstractLevel build_factored_abstraction(std::vector<OptionSkill> options,
                                         std::vector<PartitionedOption> partitions,
                                         const Mdp& lower, const GroundingSet& seeds);
AbstractLevel build_factored_abstraction(std::vector<OptionSkill> options, const Mdp& lower,
                                         const GroundingSet& seeds);

AbstractLevel assign_rewards(AbstractLevel level, RewardMode mode);

} // namespace skillsym
