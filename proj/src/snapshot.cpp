#include "skillsym/snapshot.hpp"

#include "json.hpp"

namespace skillsym {

using nlohmann::json;

namespace {

json level_json(const Mdp& mdp) {
    const StateSpace& space = mdp.space();
    json j;
    j["index"] = space.level_index();
    j["states"] = json::array();
    for (StateId s = 0; s < space.size(); ++s) j["states"].push_back(space.label(s));
    if (space.is_factored()) {
        j["variables"] = json::array();
        for (const auto& v : space.variables())
            j["variables"].push_back({{"name", v.name}, {"values", v.values}});
        j["assignments"] = json::array();
        for (StateId s = 0; s < space.size(); ++s) j["assignments"].push_back(space.values(s));
    }
    j["actions"] = mdp.actions();
    j["transitions"] = json::array();
    for (StateId s = 0; s < mdp.num_states(); ++s)
        for (ActionId a = 0; a < mdp.num_actions(); ++a)
            if (mdp.applicable(s, a))
                j["transitions"].push_back({s, a, mdp.successor(s, a), mdp.reward(s, a)});
    return j;
}

} // namespace

std::string hierarchy_snapshot(const Hierarchy& h, int indent) {
    json out;
    out["reward_mode"] = to_string(h.reward_mode());
    out["levels"] = json::array();
    for (std::size_t j = 0; j <= h.top(); ++j) {
        json lj = level_json(h.mdp(j));
        if (j == 0) {
            lj["kind"] = to_string(LevelKind::Base);
        } else {
            const AbstractLevel& lvl = h.level(j);
            lj["kind"] = to_string(lvl.kind);
            lj["groundings"] = json::array();
            for (const auto& g : lvl.groundings) lj["groundings"].push_back(g.members());
            lj["options"] = json::array();
            const StateSpace& lower = h.mdp(j - 1).space();
            for (std::size_t o = 0; o < lvl.options.size(); ++o) {
                const OptionSkill& opt = lvl.options[o];
                json oj{{"id", opt.id},
                        {"initiation_size", opt.initiation.size()},
                        {"termination_size", opt.termination.size()},
                        {"mean_reward", opt.reward_stats.mean},
                        {"mean_duration", opt.duration_stats.mean},
                        {"parts", json::array()}};
                for (const auto& part : lvl.partitions.at(o).parts) {
                    json pj{{"class", to_string(part.cls.kind)},
                            {"initiation_size", part.initiation.size()},
                            {"effect", part.effect.members()}};
                    if (lower.is_factored()) pj["mask"] = lower.mask_to_string(part.cls.mask);
                    oj["parts"].push_back(std::move(pj));
                }
                lj["options"].push_back(std::move(oj));
            }
            lj["symbols"] = json::array();
            for (const auto& [name, sym] : lvl.symbols.symbols())
                lj["symbols"].push_back({{"name", name}, {"size", sym.grounding.size()}});
        }
        out["levels"].push_back(std::move(lj));
    }
    return out.dump(indent);
}

} // namespace skillsym
