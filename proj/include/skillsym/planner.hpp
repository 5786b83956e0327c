#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "skillsym/core.hpp"
#include "skillsym/hierarchy.hpp"

namespace skillsym {

/// Start and goal sets in the base MDP.
struct PlanQuery {
    GroundingSet start;
    GroundingSet goal;
};

struct NamedQuery {
    std::string id;
    PlanQuery query;
};

/// Abstract state sets at one level bracketing a query.
struct MatchPair {
    std::size_t level = 0;
    GroundingSet b;
    GroundingSet g;
};

enum class PlanMode {
    /// Backward breadth-first reachability; shortest plans in decisions.
    Reachability,
    /// Undiscounted value iteration on the level's rewards (all must be < 0).
    ValueIteration,
};

std::string to_string(PlanMode mode);

/// A policy at one level leading every state of `b` into `g`.
struct Plan {
    std::size_t level = 0;
    GroundingSet b;
    GroundingSet g;
    /// Action per level state; kNoAction on goal states and on states that
    /// cannot reach the goal.
    std::vector<ActionId> policy;
    /// Decisions to reach `g` under the policy (-1 where unreachable).
    std::vector<long> distance;

    /// Action sequence followed from `s` until a goal state is reached.
    std::vector<ActionId> actions_from(const Mdp& mdp, StateId s) const;
};

/// Work done by the top-down query at one visited level.
struct LevelVisit {
    enum class Phase { Match, Plan };
    std::size_t level;
    Phase phase;
    std::size_t ops;
};

/// Per-level match cost m and plan cost p (operation counts), wall-clock times,
/// first-match level k and solution level l, and h evaluated from them.
struct InstrumentationRecord {
    std::size_t n = 0;
    std::vector<std::size_t> match_ops;
    std::vector<std::size_t> plan_ops;
    std::vector<double> match_ms;
    std::vector<double> plan_ms;
    std::optional<std::size_t> k;
    std::optional<std::size_t> l;
    /// Visits in execution order.
    std::vector<LevelVisit> visits;
    /// Running total of every counted operation, kept independently of h.
    std::size_t traced_ops = 0;
    double h = 0.0;

    double total_match_ms() const;
    double total_plan_ms() const;
};

/// Maximal start candidate b = {s : G0(s) ∩ B ≠ ∅}; nullopt when b fails to
/// cover B. `ops` accumulates one count per state examined.
std::optional<GroundingSet> candidate_b(const Hierarchy& h, std::size_t j,
                                        const GroundingSet& start, std::size_t* ops = nullptr);

/// Maximal goal candidate g = {s : G0(s) ⊆ G}; nullopt when empty.
std::optional<GroundingSet> candidate_g(const Hierarchy& h, std::size_t j,
                                        const GroundingSet& goal, std::size_t* ops = nullptr);

/// B ⊆ G0(b) and G0(g) ⊆ G.
bool planmatch(const Hierarchy& h, const MatchPair& pair, const PlanQuery& query);

/// A policy reaching `g` from every state of `b`, or nullopt. `ops` accumulates
/// transition lookups.
std::optional<Plan> findplan(const Mdp& level, const GroundingSet& b, const GroundingSet& g,
                             PlanMode mode = PlanMode::Reachability, std::size_t* ops = nullptr);

struct QueryOptions {
    PlanMode mode = PlanMode::Reachability;
    /// Highest level to try; the top of the hierarchy when absent.
    std::optional<std::size_t> start_level;
};

struct QueryAnswer {
    std::size_t level;
    MatchPair match;
    Plan plan;
};

struct QueryResult {
    std::optional<QueryAnswer> answer;
    InstrumentationRecord record;
};

/// Top-down search for the highest level holding a planmatch with a feasible plan.
QueryResult answer_query(const Hierarchy& h, const PlanQuery& query, QueryOptions options = {});

/// Executes level-j action `a` from level-j state `s`, starting at base state
/// `x` ∈ G0(s), recursively down to primitive actions.
ExecutionTrace execute_down(const Hierarchy& h, std::size_t j, ActionId a, StateId s, StateId x);

/// Executes option `a` of A_j (j >= 1) from base state `x`, starting at the
/// lowest level j-1 state that grounds `x` and lies in the initiation set.
/// nullopt when no such state exists.
std::optional<ExecutionTrace> execute_option_from_base(const Hierarchy& h, std::size_t j,
                                                       ActionId a, StateId x);

/// Runs `plan` from base state `start` down to primitive actions.
ExecutionTrace refine(const Hierarchy& h, const Plan& plan, StateId start);

/// h(k, l, M) = Σ_{a=k+1..n} m_a + Σ_{b=l..k} (m_b + p_b).
double h_cost(const InstrumentationRecord& record, std::size_t n);

} // namespace skillsym
