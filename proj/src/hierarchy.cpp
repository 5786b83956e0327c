#include "skillsym/hierarchy.hpp"

#include <algorithm>

#include "skillsym/error.hpp"

namespace skillsym {

Hierarchy::Hierarchy(Mdp base, RewardMode reward_mode)
    : base_(std::move(base)), reward_mode_(reward_mode) {
    if (base_.space().level_index() != 0)
        throw InvalidModel("base MDP state space must have level index 0");
    rebuild_final_groundings();
}

void Hierarchy::check_level(std::size_t j) const {
    if (j > top())
        throw LevelOutOfRange("level " + std::to_string(j) + " requested, hierarchy has levels 0.." +
                              std::to_string(top()));
}

const Mdp& Hierarchy::mdp(std::size_t j) const {
    check_level(j);
    return j == 0 ? base_ : levels_[j - 1].mdp;
}

const AbstractLevel& Hierarchy::level(std::size_t j) const {
    check_level(j);
    if (j == 0) throw LevelOutOfRange("level 0 is the base MDP, not an abstract level");
    return levels_[j - 1];
}

const GroundingSet& Hierarchy::grounding(std::size_t j, StateId s) const {
    return level(j).groundings.at(s);
}

const GroundingSet& Hierarchy::final_grounding(std::size_t j, StateId s) const {
    check_level(j);
    return final_[j].at(s);
}

Hierarchy Hierarchy::replace_level(std::size_t j, AbstractLevel lvl) const {
    level(j);
    Hierarchy out = *this;
    out.levels_[j - 1] = std::move(lvl);
    out.rebuild_final_groundings();
    return out;
}

Hierarchy Hierarchy::push_level(AbstractLevel lvl) const {
    Hierarchy out = *this;
    out.levels_.push_back(std::move(lvl));
    out.rebuild_final_groundings();
    return out;
}

void Hierarchy::rebuild_final_groundings() {
    const std::size_t n0 = base_.num_states();
    final_.assign(1, {});
    final_[0].reserve(n0);
    for (StateId s = 0; s < n0; ++s) final_[0].push_back(GroundingSet(0, n0, {s}));

    for (std::size_t j = 1; j <= top(); ++j) {
        const AbstractLevel& lvl = levels_[j - 1];
        const auto& below = final_[j - 1];
        std::vector<GroundingSet> current;
        current.reserve(lvl.mdp.num_states());
        for (StateId s = 0; s < lvl.mdp.num_states(); ++s) {
            GroundingSet g0(0, n0);
            if (s < lvl.groundings.size())
                lvl.groundings[s].for_each([&](StateId y) {
                    if (y < below.size()) g0 |= below[y];
                });
            current.push_back(std::move(g0));
        }
        final_.push_back(std::move(current));
    }
}

Hierarchy add_level(const Hierarchy& h, LevelSpec spec) {
    if (spec.options.empty()) throw EmptyOptionSet("no options supplied for level " +
                                                   std::to_string(h.top() + 1));
    const Mdp& lower = h.mdp(h.top());
    for (const auto& o : spec.options) {
        auto problems = check_option(lower, o);
        if (!problems.empty()) throw InvalidModel(problems.front());
    }

    std::vector<PartitionedOption> partitions;
    for (auto& o : spec.options) {
        compute_effect_set(o, lower);
        partitions.push_back(partition_option(o, lower, spec.max_parts));
    }

    auto all_parts = [&](auto pred) {
        return std::all_of(partitions.begin(), partitions.end(), [&](const PartitionedOption& po) {
            return std::all_of(po.parts.begin(), po.parts.end(), pred);
        });
    };
    const bool all_subgoal = all_parts(
        [](const OptionPart& p) { return p.cls.kind == OptionClassKind::Subgoal; });
    const bool all_classified = all_parts(
        [](const OptionPart& p) { return p.cls.kind != OptionClassKind::Unclassifiable; });

    AbstractLevel level;
    if (all_subgoal) {
        level = build_plan_graph(std::move(spec.options), std::move(partitions), lower);
    } else if (lower.space().is_factored() && all_classified) {
        GroundingSet seeds = spec.seeds ? *spec.seeds : lower.space().full_set();
        level = build_factored_abstraction(std::move(spec.options), std::move(partitions), lower,
                                           seeds);
    } else if (!lower.space().is_factored()) {
        throw NoSubgoalStructure("level " + std::to_string(h.top()) +
                                 " is not factored and some option parts are not subgoals");
    } else {
        throw NoFactoredStructure("some option parts are neither subgoal nor abstract subgoal");
    }
    return h.push_level(assign_rewards(std::move(level), h.reward_mode()));
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
    case Violation::Kind::InvalidState: return "invalid-state";
    case Violation::Kind::EmptyGrounding: return "empty-grounding";
    case Violation::Kind::InvalidGrounding: return "invalid-grounding";
    case Violation::Kind::InvalidOption: return "invalid-option";
    case Violation::Kind::ApplicabilitySoundness: return "applicability-soundness";
    case Violation::Kind::ImageSoundness: return "image-soundness";
    case Violation::Kind::EmptyFinalGrounding: return "empty-final-grounding";
    }
    return "?";
}

std::vector<Violation> validate(const Hierarchy& h) {
    using Kind = Violation::Kind;
    std::vector<Violation> out;

    for (std::size_t j = 1; j <= h.top(); ++j) {
        const AbstractLevel& lvl = h.level(j);
        const Mdp& lower = h.mdp(j - 1);
        const Mdp& mdp = lvl.mdp;

        if (mdp.space().level_index() != j)
            out.push_back({Kind::InvalidState, j, kNoState,
                           "state space carries level index " +
                               std::to_string(mdp.space().level_index())});
        if (lvl.groundings.size() != mdp.num_states()) {
            out.push_back({Kind::InvalidState, j, kNoState,
                           std::to_string(lvl.groundings.size()) + " groundings for " +
                               std::to_string(mdp.num_states()) + " states"});
            continue;
        }
        if (lvl.options.size() != mdp.num_actions()) {
            out.push_back({Kind::InvalidOption, j, kNoState,
                           std::to_string(lvl.options.size()) + " options for " +
                               std::to_string(mdp.num_actions()) + " actions"});
            continue;
        }

        std::vector<bool> usable(mdp.num_states(), false);
        for (StateId s = 0; s < mdp.num_states(); ++s) {
            const GroundingSet& g = lvl.groundings[s];
            if (g.level_index() != j - 1 || g.universe_size() != lower.num_states()) {
                out.push_back({Kind::InvalidGrounding, j, s,
                               "grounding of " + mdp.space().label(s) + " is not over level " +
                                   std::to_string(j - 1)});
            } else if (g.empty()) {
                out.push_back({Kind::EmptyGrounding, j, s,
                               "state " + mdp.space().label(s) + " has an empty grounding"});
            } else {
                usable[s] = true;
                if (h.final_grounding(j, s).empty())
                    out.push_back({Kind::EmptyFinalGrounding, j, s,
                                   "state " + mdp.space().label(s) + " grounds to no base state"});
            }
        }

        bool options_ok = true;
        for (const auto& o : lvl.options) {
            for (auto& p : check_option(lower, o)) {
                out.push_back({Kind::InvalidOption, j, kNoState, p});
                options_ok = false;
            }
        }
        if (!options_ok) continue;

        for (StateId s = 0; s < mdp.num_states(); ++s) {
            if (!usable[s]) continue;
            const GroundingSet& from = lvl.groundings[s];
            for (ActionId a = 0; a < mdp.num_actions(); ++a) {
                if (!mdp.applicable(s, a)) continue;
                const OptionSkill& o = lvl.options[a];
                const StateId t = mdp.successor(s, a);
                if (!from.is_subset_of(o.initiation)) {
                    out.push_back({Kind::ApplicabilitySoundness, j, s,
                                   o.id + " applicable at " + mdp.space().label(s) +
                                       " but its grounding is not inside the initiation set"});
                    continue;
                }
                if (!usable[t]) continue;
                const GroundingSet& to = lvl.groundings[t];
                for (StateId x : from.members()) {
                    std::string problem;
                    try {
                        StateId end = trace_option(lower, o, x).end;
                        if (!to.contains(end))
                            problem = "ends in lower state " + std::to_string(end) +
                                      " outside the grounding of " + mdp.space().label(t);
                    } catch (const Error& e) {
                        problem = std::string("fails: ") + e.what();
                    }
                    if (!problem.empty()) {
                        out.push_back({Kind::ImageSoundness, j, s,
                                       o.id + " from " + mdp.space().label(s) + " (lower state " +
                                           std::to_string(x) + ") " + problem});
                        break;
                    }
                }
            }
        }
    }
    return out;
}

} // namespace skillsym
