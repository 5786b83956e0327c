#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skillsym/grounding_set.hpp"

namespace skillsym {

/// One state variable of a factored space. Values are indices into `values`.
struct Variable {
    std::string name;
    std::vector<std::string> values;
};

using Assignment = std::vector<int>;
using VarMask = std::uint64_t;

inline constexpr std::size_t kMaxVariables = 64;

/// Enumerated states of one hierarchy level, optionally factored into variables.
/// StateIds are dense indices 0..N-1.
class StateSpace {
public:
    StateSpace() = default;

    static StateSpace enumerated(std::size_t level_index, std::vector<std::string> labels);
    static StateSpace factored(std::size_t level_index, std::vector<Variable> variables,
                               std::vector<Assignment> assignments,
                               std::vector<std::string> labels = {});

    std::size_t level_index() const { return level_; }
    std::size_t size() const { return labels_.size(); }
    bool is_factored() const { return !variables_.empty(); }

    const std::vector<Variable>& variables() const { return variables_; }
    std::size_t variable_index(const std::string& name) const;
    VarMask all_variables_mask() const;
    std::string mask_to_string(VarMask mask) const;

    /// Factored spaces only.
    const Assignment& values(StateId s) const { return assignments_.at(s); }
    int value(StateId s, std::size_t var) const { return assignments_.at(s).at(var); }
    std::optional<StateId> find(const Assignment& a) const;

    const std::string& label(StateId s) const { return labels_.at(s); }

    GroundingSet empty_set() const { return GroundingSet(level_, size()); }
    GroundingSet full_set() const { return GroundingSet::full(level_, size()); }

private:
    std::size_t level_ = 0;
    std::vector<std::string> labels_;
    std::vector<Variable> variables_;
    std::vector<Assignment> assignments_;
    std::map<Assignment, StateId> index_;
};

/// Deterministic (S)MDP used for the base level and every abstract level:
/// a partial successor table plus rewards per (state, action).
class Mdp {
public:
    Mdp() = default;
    Mdp(StateSpace space, std::vector<std::string> actions, double gamma = 1.0);

    const StateSpace& space() const { return space_; }
    std::size_t num_states() const { return space_.size(); }
    std::size_t num_actions() const { return actions_.size(); }
    const std::vector<std::string>& actions() const { return actions_; }
    const std::string& action_name(ActionId a) const { return actions_.at(a); }
    std::optional<ActionId> find_action(const std::string& name) const;
    double gamma() const { return gamma_; }

    void set_transition(StateId s, ActionId a, StateId next, double reward);
    void clear_transition(StateId s, ActionId a);
    void set_reward(StateId s, ActionId a, double reward);

    bool applicable(StateId s, ActionId a) const {
        return successor_[index(s, a)] != kNoState;
    }
    /// kNoState when (s, a) is unmapped.
    StateId successor(StateId s, ActionId a) const { return successor_[index(s, a)]; }
    double reward(StateId s, ActionId a) const { return reward_[index(s, a)]; }
    std::size_t num_transitions() const;

    /// Reverse adjacency, (predecessor, action) pairs per state.
    struct Edge {
        StateId state;
        ActionId action;
    };
    const std::vector<Edge>& predecessors(StateId s) const { return reverse_.at(s); }

private:
    std::size_t index(StateId s, ActionId a) const {
        return static_cast<std::size_t>(s) * actions_.size() + a;
    }
    void unlink(StateId s, ActionId a);

    StateSpace space_;
    std::vector<std::string> actions_;
    std::vector<StateId> successor_;
    std::vector<double> reward_;
    double gamma_ = 1.0;
    std::vector<std::vector<Edge>> reverse_;
};

/// Running mean and count of a scalar sample stream.
struct RunningStats {
    std::size_t count = 0;
    double mean = 0.0;

    void add(double x) {
        ++count;
        mean += (x - mean) / static_cast<double>(count);
    }
};

/// A temporally extended action over the level below the one it belongs to.
/// Termination is deterministic: the option stops as soon as the current state
/// is in `termination`.
struct OptionSkill {
    std::string id;
    GroundingSet initiation;
    GroundingSet termination;
    /// Lower-level action per lower-level state, kNoAction where undefined.
    std::vector<ActionId> policy;
    /// Execute exactly one decision step regardless of `termination`.
    bool primitive = false;

    RunningStats reward_stats;
    RunningStats duration_stats;
};

struct ExecutionTrace {
    StateId start = kNoState;
    StateId end = kNoState;
    std::size_t steps = 0;
    double cumulative_reward = 0.0;
    std::vector<StateId> visited;
    std::vector<ActionId> actions;
};

/// One primitive step; throws InapplicableAction when (s, a) is unmapped.
std::pair<StateId, double> step(const Mdp& mdp, StateId s, ActionId a);

/// Default step bound for option execution: 10 * |S|.
std::size_t default_step_bound(const Mdp& level);

/// Runs `option` from `s` over `level` without touching its statistics.
ExecutionTrace trace_option(const Mdp& level, const OptionSkill& option, StateId s,
                            std::size_t step_bound = 0);

/// Runs `option` from `s` and records reward and duration in the option.
ExecutionTrace execute_option(const Mdp& level, OptionSkill& option, StateId s,
                              std::size_t step_bound = 0);

/// Checks option fields against the level it executes over; returns problems found.
std::vector<std::string> check_option(const Mdp& level, const OptionSkill& option);

} // namespace skillsym
