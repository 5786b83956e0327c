#include "skillsym/core.hpp"

#include <algorithm>

#include "skillsym/error.hpp"

namespace skillsym {

StateSpace StateSpace::enumerated(std::size_t level_index, std::vector<std::string> labels) {
    if (labels.empty()) throw InvalidModel("state space needs at least one state");
    StateSpace out;
    out.level_ = level_index;
    out.labels_ = std::move(labels);
    return out;
}

StateSpace StateSpace::factored(std::size_t level_index, std::vector<Variable> variables,
                                std::vector<Assignment> assignments,
                                std::vector<std::string> labels) {
    if (assignments.empty()) throw InvalidModel("state space needs at least one state");
    if (variables.empty()) throw InvalidModel("factored space without variables");
    if (variables.size() > kMaxVariables)
        throw InvalidModel("at most " + std::to_string(kMaxVariables) + " variables supported");

    StateSpace out;
    out.level_ = level_index;
    out.variables_ = std::move(variables);
    out.assignments_ = std::move(assignments);

    for (std::size_t s = 0; s < out.assignments_.size(); ++s) {
        const Assignment& a = out.assignments_[s];
        if (a.size() != out.variables_.size())
            throw InvalidModel("state " + std::to_string(s) + " has " +
                               std::to_string(a.size()) + " values, expected " +
                               std::to_string(out.variables_.size()));
        for (std::size_t v = 0; v < a.size(); ++v) {
            if (a[v] < 0 || static_cast<std::size_t>(a[v]) >= out.variables_[v].values.size())
                throw InvalidModel("state " + std::to_string(s) + " has out-of-domain value for '" +
                                   out.variables_[v].name + "'");
        }
        if (!out.index_.emplace(a, static_cast<StateId>(s)).second)
            throw InvalidModel("states " + std::to_string(out.index_[a]) + " and " +
                               std::to_string(s) + " share one assignment");
    }

    if (labels.empty()) {
        labels.reserve(out.assignments_.size());
        for (const Assignment& a : out.assignments_) {
            std::string l;
            for (std::size_t v = 0; v < a.size(); ++v) {
                if (v) l += ' ';
                l += out.variables_[v].name + '=' + out.variables_[v].values[a[v]];
            }
            labels.push_back(std::move(l));
        }
    } else if (labels.size() != out.assignments_.size()) {
        throw InvalidModel("label count does not match state count");
    }
    out.labels_ = std::move(labels);
    return out;
}

std::size_t StateSpace::variable_index(const std::string& name) const {
    for (std::size_t v = 0; v < variables_.size(); ++v)
        if (variables_[v].name == name) return v;
    throw InvalidModel("no variable named '" + name + "' at level " + std::to_string(level_));
}

VarMask StateSpace::all_variables_mask() const {
    if (variables_.size() == kMaxVariables) return ~VarMask{0};
    return (VarMask{1} << variables_.size()) - 1;
}

std::string StateSpace::mask_to_string(VarMask mask) const {
    std::string out = "{";
    bool first = true;
    for (std::size_t v = 0; v < variables_.size(); ++v) {
        if (!(mask >> v & 1)) continue;
        if (!first) out += ',';
        out += variables_[v].name;
        first = false;
    }
    return out + "}";
}

std::optional<StateId> StateSpace::find(const Assignment& a) const {
    auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Mdp::Mdp(StateSpace space, std::vector<std::string> actions, double gamma)
    : space_(std::move(space)), actions_(std::move(actions)), gamma_(gamma) {
    if (!(gamma_ > 0.0 && gamma_ <= 1.0))
        throw InvalidModel("gamma must lie in (0, 1], got " + std::to_string(gamma_));
    successor_.assign(space_.size() * actions_.size(), kNoState);
    reward_.assign(space_.size() * actions_.size(), 0.0);
    reverse_.resize(space_.size());
}

std::optional<ActionId> Mdp::find_action(const std::string& name) const {
    auto it = std::find(actions_.begin(), actions_.end(), name);
    if (it == actions_.end()) return std::nullopt;
    return static_cast<ActionId>(it - actions_.begin());
}

void Mdp::unlink(StateId s, ActionId a) {
    StateId old = successor_[index(s, a)];
    if (old == kNoState) return;
    auto& edges = reverse_[old];
    edges.erase(std::find_if(edges.begin(), edges.end(),
                             [&](const Edge& e) { return e.state == s && e.action == a; }));
    successor_[index(s, a)] = kNoState;
}

void Mdp::set_transition(StateId s, ActionId a, StateId next, double reward) {
    if (s >= num_states() || next >= num_states())
        throw InvalidModel("transition " + std::to_string(s) + " -> " + std::to_string(next) +
                           " leaves the state space of size " + std::to_string(num_states()));
    if (a >= num_actions()) throw InvalidModel("unknown action id " + std::to_string(a));
    unlink(s, a);
    successor_[index(s, a)] = next;
    reward_[index(s, a)] = reward;
    reverse_[next].push_back({s, a});
}

void Mdp::clear_transition(StateId s, ActionId a) { unlink(s, a); }

void Mdp::set_reward(StateId s, ActionId a, double reward) {
    if (!applicable(s, a))
        throw InapplicableAction("no transition for state " + std::to_string(s) + ", action " +
                                 std::to_string(a));
    reward_[index(s, a)] = reward;
}

std::size_t Mdp::num_transitions() const {
    return static_cast<std::size_t>(
        std::count_if(successor_.begin(), successor_.end(), [](StateId t) { return t != kNoState; }));
}

std::pair<StateId, double> step(const Mdp& mdp, StateId s, ActionId a) {
    if (s >= mdp.num_states() || a >= mdp.num_actions() || !mdp.applicable(s, a))
        throw InapplicableAction("action " +
                                 (a < mdp.num_actions() ? mdp.action_name(a) : std::to_string(a)) +
                                 " in state " + std::to_string(s));
    return {mdp.successor(s, a), mdp.reward(s, a)};
}

std::size_t default_step_bound(const Mdp& level) { return 10 * level.num_states(); }

ExecutionTrace trace_option(const Mdp& level, const OptionSkill& option, StateId s,
                            std::size_t step_bound) {
    if (!option.initiation.contains(s))
        throw NotInInitiationSet(option.id + " from state " + std::to_string(s));
    if (step_bound == 0) step_bound = default_step_bound(level);

    ExecutionTrace trace;
    trace.start = s;
    trace.visited.push_back(s);

    auto take = [&](StateId at) {
        ActionId a = at < option.policy.size() ? option.policy[at] : kNoAction;
        if (a == kNoAction)
            throw UndefinedPolicy(option.id + " has no action for state " + std::to_string(at));
        auto [next, r] = step(level, at, a);
        trace.actions.push_back(a);
        trace.visited.push_back(next);
        trace.cumulative_reward += r;
        ++trace.steps;
        return next;
    };

    if (option.primitive) {
        s = take(s);
    } else {
        while (!option.termination.contains(s)) {
            if (trace.steps >= step_bound)
                throw StepBoundExceeded(option.id + " did not terminate within " +
                                        std::to_string(step_bound) + " steps from state " +
                                        std::to_string(trace.start));
            s = take(s);
        }
    }
    trace.end = s;
    return trace;
}

ExecutionTrace execute_option(const Mdp& level, OptionSkill& option, StateId s,
                              std::size_t step_bound) {
    ExecutionTrace trace = trace_option(level, option, s, step_bound);
    option.reward_stats.add(trace.cumulative_reward);
    option.duration_stats.add(static_cast<double>(trace.steps));
    return trace;
}

std::vector<std::string> check_option(const Mdp& level, const OptionSkill& option) {
    std::vector<std::string> problems;
    const std::size_t lvl = level.space().level_index();
    if (option.initiation.level_index() != lvl ||
        option.initiation.universe_size() != level.num_states())
        problems.push_back(option.id + ": initiation set is not over level " + std::to_string(lvl));
    else if (option.initiation.empty())
        problems.push_back(option.id + ": empty initiation set");
    if (option.termination.level_index() != lvl ||
        option.termination.universe_size() != level.num_states())
        problems.push_back(option.id + ": termination set is not over level " +
                           std::to_string(lvl));
    if (option.policy.size() != level.num_states())
        problems.push_back(option.id + ": policy covers " + std::to_string(option.policy.size()) +
                           " states, level has " + std::to_string(level.num_states()));
    for (ActionId a : option.policy) {
        if (a != kNoAction && a >= level.num_actions()) {
            problems.push_back(option.id + ": policy references unknown action " +
                               std::to_string(a));
            break;
        }
    }
    return problems;
}

} // namespace skillsym
