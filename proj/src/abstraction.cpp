#include "skillsym/abstraction.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

#include "skillsym/error.hpp"

namespace skillsym {

std::string to_string(OptionClassKind kind) {
    switch (kind) {
    case OptionClassKind::Subgoal: return "subgoal";
    case OptionClassKind::AbstractSubgoal: return "abstract-subgoal";
    case OptionClassKind::Unclassifiable: return "unclassifiable";
    }
    return "?";
}

std::string to_string(LevelKind kind) {
    switch (kind) {
    case LevelKind::Base: return "base";
    case LevelKind::PlanGraph: return "plan-graph";
    case LevelKind::Factored: return "factored";
    }
    return "?";
}

std::string to_string(RewardMode mode) {
    return mode == RewardMode::UniformPenalty ? "uniform" : "empirical";
}

namespace {

struct Outcome {
    StateId start;
    StateId end;
};

std::vector<Outcome> simulate(const Mdp& level, const OptionSkill& option) {
    std::vector<Outcome> out;
    option.initiation.for_each([&](StateId s) {
        out.push_back({s, trace_option(level, option, s).end});
    });
    return out;
}

VarMask changed_mask(const StateSpace& space, const Outcome& o) {
    VarMask m = 0;
    const Assignment& a = space.values(o.start);
    const Assignment& b = space.values(o.end);
    for (std::size_t v = 0; v < a.size(); ++v)
        if (a[v] != b[v]) m |= VarMask{1} << v;
    return m;
}

struct GroupVerdict {
    OptionClass cls;
    Assignment effect_values;
};

GroupVerdict classify_group(const StateSpace& space, const std::vector<Outcome>& outcomes,
                            const std::vector<std::size_t>& members) {
    GroupVerdict verdict;
    const StateId first_end = outcomes[members.front()].end;
    const bool single_end = std::all_of(members.begin(), members.end(),
                                        [&](std::size_t i) { return outcomes[i].end == first_end; });

    if (!space.is_factored()) {
        if (single_end) verdict.cls = {OptionClassKind::Subgoal, 0};
        return verdict;
    }

    VarMask mask = 0;
    for (std::size_t i : members) mask |= changed_mask(space, outcomes[i]);

    if (single_end && (mask == 0 || mask == space.all_variables_mask())) {
        verdict.cls = {OptionClassKind::Subgoal, 0};
        verdict.effect_values = space.values(first_end);
        return verdict;
    }

    // Masked variables must reach the same value from every start; unmasked ones
    // are unchanged by construction of the mask.
    const Assignment& ref = space.values(first_end);
    for (std::size_t i : members) {
        const Assignment& end = space.values(outcomes[i].end);
        for (std::size_t v = 0; v < end.size(); ++v)
            if ((mask >> v & 1) && end[v] != ref[v]) return verdict;
    }
    verdict.cls = {OptionClassKind::AbstractSubgoal, mask};
    verdict.effect_values.assign(ref.size(), -1);
    for (std::size_t v = 0; v < ref.size(); ++v)
        if (mask >> v & 1) verdict.effect_values[v] = ref[v];
    return verdict;
}

OptionPart make_part(const Mdp& level, const std::vector<Outcome>& outcomes,
                     const std::vector<std::size_t>& members, const GroupVerdict& verdict) {
    OptionPart part{level.space().empty_set(), verdict.cls, level.space().empty_set(),
                    verdict.effect_values};
    for (std::size_t i : members) {
        part.initiation.insert(outcomes[i].start);
        part.effect.insert(outcomes[i].end);
    }
    return part;
}

// Visits the size-r subsets of {0..n-1} in lexicographic order.
template <typename F>
void for_each_subset(std::size_t n, std::size_t r, F&& f) {
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        f(idx);
        if (r == 0) return;
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

using Groups = std::vector<std::vector<std::size_t>>;

Groups group_by_variables(const StateSpace& space, const std::vector<Outcome>& outcomes,
                          const std::vector<std::size_t>& vars) {
    std::map<Assignment, std::vector<std::size_t>> keyed;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        Assignment key;
        key.reserve(vars.size());
        for (std::size_t v : vars) key.push_back(space.value(outcomes[i].start, v));
        keyed[key].push_back(i);
    }
    Groups out;
    out.reserve(keyed.size());
    for (auto& [key, members] : keyed) out.push_back(std::move(members));
    return out;
}

// Largest subset size searched exhaustively before falling back to grouping by
// the full assignment.
constexpr std::size_t kMaxSplitVariables = 4;

} // namespace

EffectSet compute_effect_set(OptionSkill& option, const Mdp& level) {
    if (option.initiation.empty()) throw InvalidModel(option.id + ": empty initiation set");
    EffectSet effect{option.id, level.space().empty_set()};
    option.initiation.for_each([&](StateId s) {
        effect.states.insert(execute_option(level, option, s).end);
    });
    return effect;
}

OptionClass classify_option(const OptionSkill& option, const Mdp& level) {
    if (option.initiation.empty()) throw InvalidModel(option.id + ": empty initiation set");
    auto outcomes = simulate(level, option);
    std::vector<std::size_t> all(outcomes.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return classify_group(level.space(), outcomes, all).cls;
}

PartitionedOption partition_option(const OptionSkill& option, const Mdp& level,
                                   std::size_t max_parts) {
    if (option.initiation.empty()) throw InvalidModel(option.id + ": empty initiation set");
    const StateSpace& space = level.space();
    auto outcomes = simulate(level, option);

    auto classify_all = [&](const Groups& groups, std::vector<GroupVerdict>& verdicts) {
        verdicts.clear();
        for (const auto& g : groups) {
            verdicts.push_back(classify_group(space, outcomes, g));
            if (verdicts.back().cls.kind == OptionClassKind::Unclassifiable) return false;
        }
        return true;
    };

    Groups best;
    std::vector<GroupVerdict> best_verdicts;

    if (!space.is_factored()) {
        Groups whole(1);
        for (std::size_t i = 0; i < outcomes.size(); ++i) whole[0].push_back(i);
        if (!classify_all(whole, best_verdicts)) {
            std::map<StateId, std::vector<std::size_t>> by_end;
            for (std::size_t i = 0; i < outcomes.size(); ++i) by_end[outcomes[i].end].push_back(i);
            whole.clear();
            for (auto& [end, members] : by_end) whole.push_back(std::move(members));
            classify_all(whole, best_verdicts);
        }
        best = std::move(whole);
    } else {
        const std::size_t k = space.variables().size();
        std::vector<std::size_t> sizes;
        for (std::size_t r = 0; r <= std::min(k, kMaxSplitVariables); ++r) sizes.push_back(r);
        if (k > kMaxSplitVariables) sizes.push_back(k);

        std::vector<GroupVerdict> verdicts;
        for (std::size_t r : sizes) {
            bool found = false;
            for_each_subset(k, r, [&](const std::vector<std::size_t>& vars) {
                Groups groups = group_by_variables(space, outcomes, vars);
                if (found && groups.size() >= best.size()) return;
                if (classify_all(groups, verdicts)) {
                    best = std::move(groups);
                    best_verdicts = verdicts;
                    found = true;
                }
            });
            if (found) break;
        }
    }

    if (best.size() > max_parts)
        throw PartitionExplosion(option.id + " needs " + std::to_string(best.size()) +
                                 " parts, limit is " + std::to_string(max_parts));

    PartitionedOption out{option.id, {}};
    for (std::size_t g = 0; g < best.size(); ++g)
        out.parts.push_back(make_part(level, outcomes, best[g], best_verdicts[g]));
    return out;
}

namespace {

std::vector<PartitionedOption> partition_all(const std::vector<OptionSkill>& options,
                                             const Mdp& lower) {
    std::vector<PartitionedOption> parts;
    parts.reserve(options.size());
    for (const auto& o : options) parts.push_back(partition_option(o, lower));
    return parts;
}

void check_inputs(const std::vector<OptionSkill>& options,
                  const std::vector<PartitionedOption>& partitions, const Mdp& lower) {
    if (options.size() != partitions.size())
        throw InvalidModel("one partition per option required");
    for (const auto& o : options) {
        auto problems = check_option(lower, o);
        if (!problems.empty()) throw InvalidModel(problems.front());
    }
}

void add_initiation_symbols(AbstractLevel& level) {
    for (const auto& o : level.options) level.symbols.add("I(" + o.id + ")", o.initiation);
}

} // namespace

AbstractLevel build_plan_graph(std::vector<OptionSkill> options,
                               std::vector<PartitionedOption> partitions, const Mdp& lower) {
    check_inputs(options, partitions, lower);

    AbstractLevel level;
    level.kind = LevelKind::PlanGraph;
    std::vector<std::string> labels;
    std::vector<StateId> node_effect;

    for (std::size_t o = 0; o < partitions.size(); ++o) {
        const auto& parts = partitions[o].parts;
        for (std::size_t p = 0; p < parts.size(); ++p) {
            if (parts[p].cls.kind != OptionClassKind::Subgoal || parts[p].effect.size() != 1)
                throw NoSubgoalStructure(options[o].id + " part " + std::to_string(p) + " is " +
                                         to_string(parts[p].cls.kind));
            level.node_parts.emplace_back(o, p);
            node_effect.push_back(parts[p].effect.first());
            labels.push_back(parts.size() == 1 ? options[o].id
                                               : options[o].id + "#" + std::to_string(p));
        }
    }
    if (labels.empty()) throw NoSubgoalStructure("no options to build a plan graph from");

    // Initiation profile of each lower state across all option parts. A node's
    // grounding is widened from its effect state to every lower state sharing
    // the effect state's profile.
    std::vector<const GroundingSet*> part_inits;
    for (const auto& po : partitions)
        for (const auto& part : po.parts) part_inits.push_back(&part.initiation);
    auto profile = [&](StateId x) {
        std::vector<bool> bits(part_inits.size());
        for (std::size_t i = 0; i < part_inits.size(); ++i) bits[i] = part_inits[i]->contains(x);
        return bits;
    };
    std::vector<std::vector<bool>> profiles(lower.num_states());
    for (StateId x = 0; x < lower.num_states(); ++x) profiles[x] = profile(x);

    for (StateId e : node_effect) {
        GroundingSet w = lower.space().empty_set();
        for (StateId x = 0; x < lower.num_states(); ++x)
            if (profiles[x] == profiles[e]) w.insert(x);
        level.groundings.push_back(std::move(w));
    }

    std::vector<std::string> action_names;
    for (const auto& o : options) action_names.push_back(o.id);
    level.mdp = Mdp(StateSpace::enumerated(lower.space().level_index() + 1, labels),
                    action_names, lower.gamma());

    // Edge i -> node(o, q) whenever node i's effect lies in part q's initiation set.
    std::map<std::pair<std::size_t, std::size_t>, StateId> node_of;
    for (StateId n = 0; n < level.node_parts.size(); ++n) node_of[level.node_parts[n]] = n;
    for (StateId i = 0; i < node_effect.size(); ++i) {
        for (ActionId o = 0; o < partitions.size(); ++o) {
            const auto& parts = partitions[o].parts;
            for (std::size_t q = 0; q < parts.size(); ++q) {
                if (parts[q].initiation.contains(node_effect[i])) {
                    level.mdp.set_transition(i, o, node_of.at({o, q}), -1.0);
                    break;
                }
            }
        }
    }

    level.options = std::move(options);
    level.partitions = std::move(partitions);
    add_initiation_symbols(level);
    for (StateId n = 0; n < labels.size(); ++n) {
        const auto& [o, p] = level.node_parts[n];
        level.symbols.add("E(" + labels[n] + ")", level.partitions[o].parts[p].effect);
    }
    return level;
}

AbstractLevel build_plan_graph(std::vector<OptionSkill> options, const Mdp& lower) {
    auto partitions = partition_all(options, lower);
    return build_plan_graph(std::move(options), std::move(partitions), lower);
}

AbstractLevel build_factored_abstraction(std::vector<OptionSkill> options,
                                         std::vector<PartitionedOption> partitions,
                                         const Mdp& lower, const GroundingSet& seeds) {
    const StateSpace& space = lower.space();
    if (!space.is_factored())
        throw NoFactoredStructure("level " + std::to_string(space.level_index()) +
                                  " is not factored");
    check_inputs(options, partitions, lower);
    if (seeds.level_index() != space.level_index() || seeds.universe_size() != space.size())
        throw LevelMismatch("seed states are not over level " +
                            std::to_string(space.level_index()));
    if (seeds.empty()) throw NoFactoredStructure("no seed states to close over");

    // Subgoal parts act as abstract subgoals that set every variable.
    for (auto& po : partitions) {
        for (auto& part : po.parts) {
            if (part.cls.kind == OptionClassKind::Subgoal) {
                part.cls = {OptionClassKind::AbstractSubgoal, space.all_variables_mask()};
                part.effect_values = space.values(part.effect.first());
            } else if (part.cls.kind != OptionClassKind::AbstractSubgoal) {
                throw NoFactoredStructure(po.option_id + " has an unclassifiable part");
            }
        }
    }

    auto image = [&](StateId x, const OptionPart& part) {
        Assignment a = space.values(x);
        for (std::size_t v = 0; v < a.size(); ++v)
            if (part.cls.mask >> v & 1) a[v] = part.effect_values[v];
        auto y = space.find(a);
        if (!y)
            throw NoFactoredStructure("projected image of state " + std::to_string(x) +
                                      " is not a state of level " +
                                      std::to_string(space.level_index()));
        return *y;
    };
    auto applicable_part = [&](StateId x, std::size_t o) -> const OptionPart* {
        for (const auto& part : partitions[o].parts)
            if (part.initiation.contains(x)) return &part;
        return nullptr;
    };

    GroundingSet reached = seeds;
    std::deque<StateId> frontier;
    seeds.for_each([&](StateId s) { frontier.push_back(s); });
    while (!frontier.empty()) {
        StateId x = frontier.front();
        frontier.pop_front();
        for (std::size_t o = 0; o < options.size(); ++o) {
            if (const OptionPart* part = applicable_part(x, o)) {
                StateId y = image(x, *part);
                if (!reached.contains(y)) {
                    reached.insert(y);
                    frontier.push_back(y);
                }
            }
        }
    }

    const std::vector<StateId> members = reached.members();
    std::vector<StateId> abstract_of(space.size(), kNoState);
    std::vector<Assignment> assignments;
    std::vector<std::string> labels;
    for (StateId i = 0; i < members.size(); ++i) {
        abstract_of[members[i]] = i;
        assignments.push_back(space.values(members[i]));
        labels.push_back(space.label(members[i]));
    }

    AbstractLevel level;
    level.kind = LevelKind::Factored;
    std::vector<std::string> action_names;
    for (const auto& o : options) action_names.push_back(o.id);
    level.mdp = Mdp(StateSpace::factored(space.level_index() + 1, space.variables(),
                                         std::move(assignments), std::move(labels)),
                    action_names, lower.gamma());
    for (StateId i = 0; i < members.size(); ++i) {
        level.groundings.push_back(GroundingSet(space.level_index(), space.size(), {members[i]}));
        for (ActionId o = 0; o < options.size(); ++o)
            if (const OptionPart* part = applicable_part(members[i], o))
                level.mdp.set_transition(i, o, abstract_of[image(members[i], *part)], -1.0);
    }

    level.options = std::move(options);
    level.partitions = std::move(partitions);
    add_initiation_symbols(level);
    for (const auto& po : level.partitions)
        for (std::size_t p = 0; p < po.parts.size(); ++p)
            level.symbols.add("E(" + po.option_id + "#" + std::to_string(p) + ")",
                              po.parts[p].effect);
    return level;
}

AbstractLevel build_factored_abstraction(std::vector<OptionSkill> options, const Mdp& lower,
                                         const GroundingSet& seeds) {
    auto partitions = partition_all(options, lower);
    return build_factored_abstraction(std::move(options), std::move(partitions), lower, seeds);
}

AbstractLevel assign_rewards(AbstractLevel level, RewardMode mode) {
    Mdp& mdp = level.mdp;
    for (ActionId o = 0; o < mdp.num_actions(); ++o) {
        double r = -1.0;
        if (mode == RewardMode::EmpiricalMean) {
            const auto& stats = level.options.at(o).reward_stats;
            if (stats.count == 0)
                throw MissingStatistics(level.options[o].id + " has no recorded executions");
            r = stats.mean;
        }
        for (StateId s = 0; s < mdp.num_states(); ++s)
            if (mdp.applicable(s, o)) mdp.set_reward(s, o, r);
    }
    return level;
}

} // namespace skillsym
