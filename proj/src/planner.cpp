#include "skillsym/planner.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "skillsym/error.hpp"
#include "skillsym/symbols.hpp"

namespace skillsym {

std::string to_string(PlanMode mode) {
    return mode == PlanMode::Reachability ? "reach" : "dp";
}

std::vector<ActionId> Plan::actions_from(const Mdp& mdp, StateId s) const {
    std::vector<ActionId> out;
    while (!g.contains(s)) {
        ActionId a = policy.at(s);
        if (a == kNoAction || out.size() > mdp.num_states())
            throw RefinementFault("plan at level " + std::to_string(level) +
                                  " has no route from state " + std::to_string(s));
        out.push_back(a);
        s = mdp.successor(s, a);
    }
    return out;
}

double InstrumentationRecord::total_match_ms() const {
    double t = 0;
    for (double x : match_ms) t += x;
    return t;
}

double InstrumentationRecord::total_plan_ms() const {
    double t = 0;
    for (double x : plan_ms) t += x;
    return t;
}

std::optional<GroundingSet> candidate_b(const Hierarchy& h, std::size_t j,
                                        const GroundingSet& start, std::size_t* ops) {
    if (start.level_index() != 0) throw LevelMismatch("query start set must be over level 0");
    const std::size_t n = h.num_states(j);
    GroundingSet b(j, n);
    GroundingSet covered(0, h.num_states(0));
    for (StateId s = 0; s < n; ++s) {
        const GroundingSet& g0 = h.final_grounding(j, s);
        if (g0.intersects(start)) {
            b.insert(s);
            covered |= g0;
        }
    }
    if (ops) *ops += n;
    if (!start.is_subset_of(covered)) return std::nullopt;
    return b;
}

std::optional<GroundingSet> candidate_g(const Hierarchy& h, std::size_t j,
                                        const GroundingSet& goal, std::size_t* ops) {
    if (goal.level_index() != 0) throw LevelMismatch("query goal set must be over level 0");
    const std::size_t n = h.num_states(j);
    GroundingSet g(j, n);
    for (StateId s = 0; s < n; ++s)
        if (h.final_grounding(j, s).is_subset_of(goal)) g.insert(s);
    if (ops) *ops += n;
    if (g.empty()) return std::nullopt;
    return g;
}

bool planmatch(const Hierarchy& h, const MatchPair& pair, const PlanQuery& query) {
    if (pair.b.level_index() != pair.level || pair.g.level_index() != pair.level)
        throw LevelMismatch("match pair sets are not at level " + std::to_string(pair.level));
    return query.start.is_subset_of(final_ground(h, pair.b)) &&
           final_ground(h, pair.g).is_subset_of(query.goal);
}

namespace {

void check_sets(const Mdp& level, const GroundingSet& b, const GroundingSet& g) {
    const std::size_t j = level.space().level_index();
    for (const GroundingSet* set : {&b, &g})
        if (set->level_index() != j || set->universe_size() != level.num_states())
            throw LevelMismatch("plan sets must be over level " + std::to_string(j));
}

std::optional<Plan> bfs_plan(const Mdp& level, const GroundingSet& b, const GroundingSet& g,
                             std::size_t& ops) {
    const std::size_t n = level.num_states();
    std::vector<long> dist(n, -1);
    std::deque<StateId> queue;
    g.for_each([&](StateId s) {
        dist[s] = 0;
        queue.push_back(s);
    });
    while (!queue.empty()) {
        StateId t = queue.front();
        queue.pop_front();
        for (const auto& e : level.predecessors(t)) {
            ++ops;
            if (dist[e.state] < 0) {
                dist[e.state] = dist[t] + 1;
                queue.push_back(e.state);
            }
        }
    }

    bool feasible = true;
    b.for_each([&](StateId s) { feasible = feasible && dist[s] >= 0; });
    if (!feasible) return std::nullopt;

    Plan plan{level.space().level_index(), b, g, std::vector<ActionId>(n, kNoAction), dist};
    for (StateId s = 0; s < n; ++s) {
        if (dist[s] <= 0) continue;
        for (ActionId a = 0; a < level.num_actions(); ++a) {
            ++ops;
            StateId t = level.successor(s, a);
            if (t != kNoState && dist[t] == dist[s] - 1) {
                plan.policy[s] = a;
                break;
            }
        }
    }
    return plan;
}

// Values are undiscounted totals of strictly negative rewards, so every greedy
// step moves to a strictly higher value and the policy cannot cycle.
std::optional<Plan> value_iteration_plan(const Mdp& level, const GroundingSet& b,
                                         const GroundingSet& g, std::size_t& ops) {
    constexpr double kMinPenalty = 1e-9;
    constexpr double kTolerance = 1e-12;
    const double ninf = -std::numeric_limits<double>::infinity();
    const std::size_t n = level.num_states();
    const std::size_t m = level.num_actions();

    std::vector<double> value(n, ninf);
    g.for_each([&](StateId s) { value[s] = 0.0; });

    for (std::size_t sweep = 0; sweep <= n; ++sweep) {
        bool changed = false;
        for (StateId s = 0; s < n; ++s) {
            if (g.contains(s)) continue;
            double best = value[s];
            for (ActionId a = 0; a < m; ++a) {
                ++ops;
                StateId t = level.successor(s, a);
                if (t == kNoState) continue;
                const double r = level.reward(s, a);
                if (!(r < -kMinPenalty))
                    throw std::invalid_argument(
                        "value iteration needs strictly negative rewards; level " +
                        std::to_string(level.space().level_index()) + " has " +
                        std::to_string(r) + " for action " + level.action_name(a));
                if (value[t] == ninf) continue;
                const double q = r + value[t];
                if (q > best + kTolerance) best = q;
            }
            if (best > value[s] + kTolerance || (value[s] == ninf && best != ninf)) {
                value[s] = best;
                changed = true;
            }
        }
        if (!changed) break;
    }

    bool feasible = true;
    b.for_each([&](StateId s) { feasible = feasible && value[s] != ninf; });
    if (!feasible) return std::nullopt;

    Plan plan{level.space().level_index(), b, g, std::vector<ActionId>(n, kNoAction),
              std::vector<long>(n, -1)};
    for (StateId s = 0; s < n; ++s) {
        if (g.contains(s) || value[s] == ninf) continue;
        for (ActionId a = 0; a < m; ++a) {
            ++ops;
            StateId t = level.successor(s, a);
            if (t == kNoState || value[t] == ninf) continue;
            if (level.reward(s, a) + value[t] >= value[s] - 1e-9) {
                plan.policy[s] = a;
                break;
            }
        }
    }
    // Decision counts along the greedy policy, memoized per state.
    g.for_each([&](StateId s) { plan.distance[s] = 0; });
    for (StateId s = 0; s < n; ++s) {
        if (plan.policy[s] == kNoAction || plan.distance[s] >= 0) continue;
        std::vector<StateId> path;
        StateId cur = s;
        while (plan.distance[cur] < 0) {
            path.push_back(cur);
            cur = level.successor(cur, plan.policy[cur]);
        }
        long d = plan.distance[cur];
        for (auto it = path.rbegin(); it != path.rend(); ++it) plan.distance[*it] = ++d;
    }
    return plan;
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

} // namespace

std::optional<Plan> findplan(const Mdp& level, const GroundingSet& b, const GroundingSet& g,
                             PlanMode mode, std::size_t* ops) {
    check_sets(level, b, g);
    std::size_t local = 0;
    auto plan = mode == PlanMode::Reachability ? bfs_plan(level, b, g, local)
                                               : value_iteration_plan(level, b, g, local);
    if (ops) *ops += local;
    return plan;
}

QueryResult answer_query(const Hierarchy& h, const PlanQuery& query, QueryOptions options) {
    if (query.start.empty() || query.goal.empty())
        throw std::invalid_argument("plan query needs non-empty start and goal sets");
    const std::size_t n = h.top();
    const std::size_t first = options.start_level.value_or(n);
    if (first > n)
        throw LevelOutOfRange("start level " + std::to_string(first) + " above top level " +
                              std::to_string(n));

    QueryResult result;
    InstrumentationRecord& rec = result.record;
    rec.n = n;
    rec.match_ops.assign(n + 1, 0);
    rec.plan_ops.assign(n + 1, 0);
    rec.match_ms.assign(n + 1, 0.0);
    rec.plan_ms.assign(n + 1, 0.0);

    for (std::size_t j = first + 1; j-- > 0;) {
        auto t0 = Clock::now();
        std::size_t mops = 0;
        auto b = candidate_b(h, j, query.start, &mops);
        auto g = candidate_g(h, j, query.goal, &mops);
        const bool matched = b && g && planmatch(h, MatchPair{j, *b, *g}, query);
        rec.match_ms[j] = elapsed_ms(t0);
        rec.match_ops[j] = mops;
        rec.visits.push_back({j, LevelVisit::Phase::Match, mops});
        rec.traced_ops += mops;
        if (!matched) continue;

        if (!rec.k) rec.k = j;
        auto t1 = Clock::now();
        std::size_t pops = 0;
        auto plan = findplan(h.mdp(j), *b, *g, options.mode, &pops);
        rec.plan_ms[j] = elapsed_ms(t1);
        rec.plan_ops[j] = pops;
        rec.visits.push_back({j, LevelVisit::Phase::Plan, pops});
        rec.traced_ops += pops;
        if (plan) {
            rec.l = j;
            rec.h = h_cost(rec, n);
            result.answer = QueryAnswer{j, MatchPair{j, std::move(*b), std::move(*g)},
                                        std::move(*plan)};
            return result;
        }
    }
    rec.h = std::numeric_limits<double>::quiet_NaN();
    return result;
}

namespace {

ExecutionTrace start_trace(StateId x) {
    ExecutionTrace t;
    t.start = t.end = x;
    t.visited.push_back(x);
    return t;
}

void append(ExecutionTrace& into, const ExecutionTrace& part) {
    into.visited.insert(into.visited.end(), part.visited.begin() + 1, part.visited.end());
    into.actions.insert(into.actions.end(), part.actions.begin(), part.actions.end());
    into.steps += part.steps;
    into.cumulative_reward += part.cumulative_reward;
    into.end = part.end;
}

// Option `a` of A_j run from level j-1 state y, realized from base state x.
ExecutionTrace run_option(const Hierarchy& h, std::size_t j, ActionId a, StateId y, StateId x) {
    const AbstractLevel& lvl = h.level(j);
    const OptionSkill& o = lvl.options.at(a);
    const Mdp& lower = h.mdp(j - 1);
    if (!o.initiation.contains(y))
        throw RefinementFault(o.id + " started outside its initiation set at level " +
                              std::to_string(j - 1) + " state " + std::to_string(y));

    ExecutionTrace trace = start_trace(x);
    const std::size_t bound = default_step_bound(lower);
    for (std::size_t decisions = 0;; ++decisions) {
        if (o.primitive ? decisions == 1 : o.termination.contains(y)) break;
        if (decisions >= bound)
            throw RefinementFault(o.id + " exceeded " + std::to_string(bound) + " decisions");
        const ActionId next = o.policy.at(y);
        const StateId y2 = next == kNoAction ? kNoState : lower.successor(y, next);
        if (y2 == kNoState)
            throw RefinementFault(o.id + " has no usable action at level " +
                                  std::to_string(j - 1) + " state " + std::to_string(y));
        ExecutionTrace sub = execute_down(h, j - 1, next, y, trace.end);
        if (!h.final_grounding(j - 1, y2).contains(sub.end))
            throw RefinementFault(o.id + ": lower action " + lower.action_name(next) +
                                  " left the grounding of level " + std::to_string(j - 1) +
                                  " state " + lower.space().label(y2));
        append(trace, sub);
        y = y2;
    }
    return trace;
}

} // namespace

ExecutionTrace execute_down(const Hierarchy& h, std::size_t j, ActionId a, StateId s, StateId x) {
    if (j == 0) {
        ExecutionTrace t = start_trace(x);
        auto [next, r] = step(h.base(), x, a);
        t.visited.push_back(next);
        t.actions.push_back(a);
        t.steps = 1;
        t.cumulative_reward = r;
        t.end = next;
        return t;
    }
    const OptionSkill& o = h.level(j).options.at(a);
    StateId chosen = kNoState;
    for (StateId y : h.grounding(j, s).members()) {
        if (o.initiation.contains(y) && h.final_grounding(j - 1, y).contains(x)) {
            chosen = y;
            break;
        }
    }
    if (chosen == kNoState)
        throw RefinementFault("no level " + std::to_string(j - 1) + " state under " +
                              h.mdp(j).space().label(s) + " grounds base state " +
                              std::to_string(x) + " inside " + o.id + "'s initiation set");
    return run_option(h, j, a, chosen, x);
}

std::optional<ExecutionTrace> execute_option_from_base(const Hierarchy& h, std::size_t j,
                                                       ActionId a, StateId x) {
    if (j == 0 || j > h.top())
        throw LevelOutOfRange("options live at levels 1.." + std::to_string(h.top()));
    const OptionSkill& o = h.level(j).options.at(a);
    for (StateId y : o.initiation.members())
        if (h.final_grounding(j - 1, y).contains(x)) return run_option(h, j, a, y, x);
    return std::nullopt;
}

ExecutionTrace refine(const Hierarchy& h, const Plan& plan, StateId start) {
    const std::size_t j = plan.level;
    const Mdp& mdp = h.mdp(j);
    StateId s = kNoState;
    for (StateId c : plan.b.members()) {
        if (h.final_grounding(j, c).contains(start)) {
            s = c;
            break;
        }
    }
    if (s == kNoState)
        throw RefinementFault("base state " + std::to_string(start) +
                              " is not covered by the plan's start states");

    ExecutionTrace trace = start_trace(start);
    for (std::size_t decisions = 0; !plan.g.contains(s); ++decisions) {
        const ActionId a = plan.policy.at(s);
        if (a == kNoAction || decisions > mdp.num_states())
            throw RefinementFault("plan at level " + std::to_string(j) +
                                  " has no route from state " + mdp.space().label(s));
        const StateId next = mdp.successor(s, a);
        ExecutionTrace sub = execute_down(h, j, a, s, trace.end);
        if (next == kNoState || !h.final_grounding(j, next).contains(sub.end))
            throw RefinementFault("executing " + mdp.action_name(a) + " from " +
                                  mdp.space().label(s) + " left the plan's state cover");
        append(trace, sub);
        s = next;
    }
    return trace;
}

double h_cost(const InstrumentationRecord& rec, std::size_t n) {
    if (!rec.k || !rec.l)
        throw InconsistentRecord("record lacks a first-match or solution level");
    const std::size_t k = *rec.k;
    const std::size_t l = *rec.l;
    if (l > k || k > n)
        throw InconsistentRecord("need l <= k <= n, got l=" + std::to_string(l) +
                                 " k=" + std::to_string(k) + " n=" + std::to_string(n));
    if (rec.match_ops.size() != n + 1 || rec.plan_ops.size() != n + 1)
        throw InconsistentRecord("per-level counters do not span levels 0.." + std::to_string(n));
    double total = 0;
    for (std::size_t a = k + 1; a <= n; ++a) total += static_cast<double>(rec.match_ops[a]);
    for (std::size_t b = l; b <= k; ++b)
        total += static_cast<double>(rec.match_ops[b] + rec.plan_ops[b]);
    return total;
}

} // namespace skillsym
