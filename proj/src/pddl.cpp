#include "skillsym/pddl.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "skillsym/error.hpp"

namespace skillsym {

namespace {

std::string sanitize(const std::string& raw) {
    std::string out;
    for (char c : raw) {
        const auto u = static_cast<unsigned char>(c);
        out += std::isalnum(u) || c == '-' || c == '_' ? static_cast<char>(std::tolower(u)) : '-';
    }
    if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) out = "s-" + out;
    return out;
}

std::string fact(const StateSpace& space, std::size_t var, int value) {
    const Variable& v = space.variables()[var];
    return sanitize(v.name + "-" + v.values.at(static_cast<std::size_t>(value)));
}

struct Action {
    std::string name;
    std::vector<std::string> pre;
    std::vector<std::string> add;
    std::vector<std::string> del;
};

// Smallest variable subset whose value tuples separate `inside` from the rest
// of the level; each distinct tuple on it becomes one conjunctive case.
std::vector<std::vector<std::pair<std::size_t, int>>> conjunctive_cases(
    const StateSpace& space, const std::vector<bool>& inside) {
    const std::size_t k = space.variables().size();
    std::vector<std::size_t> pick;
    std::optional<std::map<Assignment, int>> best;
    std::vector<std::size_t> best_vars;

    auto project = [&](StateId s) {
        Assignment a;
        for (std::size_t v : pick) a.push_back(space.value(s, v));
        return a;
    };
    auto attempt = [&]() {
        std::map<Assignment, int> cases;
        for (StateId s = 0; s < space.size(); ++s)
            if (inside[s]) cases.emplace(project(s), 0);
        for (StateId s = 0; s < space.size(); ++s)
            if (!inside[s] && cases.count(project(s))) return;
        if (!best || cases.size() < best->size()) {
            best = std::move(cases);
            best_vars = pick;
        }
    };
    auto search = [&](auto&& self, std::size_t from, std::size_t r) -> void {
        if (pick.size() == r) {
            attempt();
            return;
        }
        for (std::size_t v = from; v < k; ++v) {
            pick.push_back(v);
            self(self, v + 1, r);
            pick.pop_back();
        }
    };
    for (std::size_t r = 0; r <= k && !best; ++r) search(search, 0, r);

    std::vector<std::vector<std::pair<std::size_t, int>>> out;
    for (const auto& [tuple, unused] : *best) {
        std::vector<std::pair<std::size_t, int>> conj;
        for (std::size_t i = 0; i < best_vars.size(); ++i) conj.emplace_back(best_vars[i], tuple[i]);
        out.push_back(std::move(conj));
    }
    return out;
}

std::vector<Action> factored_actions(const Hierarchy& h, std::size_t j) {
    const AbstractLevel& lvl = h.level(j);
    const StateSpace& space = lvl.mdp.space();
    std::vector<Action> actions;
    for (const auto& po : lvl.partitions) {
        for (std::size_t p = 0; p < po.parts.size(); ++p) {
            const OptionPart& part = po.parts[p];
            std::vector<bool> inside(space.size(), false);
            bool any = false;
            for (StateId s = 0; s < space.size(); ++s) {
                inside[s] = h.grounding(j, s).is_subset_of(part.initiation);
                any = any || inside[s];
            }
            if (!any) continue;

            Action base;
            for (std::size_t v = 0; v < space.variables().size(); ++v) {
                if (!(part.cls.mask >> v & 1)) continue;
                const int e = part.effect_values.at(v);
                for (int w = 0; w < static_cast<int>(space.variables()[v].values.size()); ++w)
                    (w == e ? base.add : base.del).push_back(fact(space, v, w));
            }
            const auto cases = conjunctive_cases(space, inside);
            for (std::size_t c = 0; c < cases.size(); ++c) {
                Action a = base;
                a.name = po.option_id;
                if (po.parts.size() > 1) a.name += "-" + std::to_string(p);
                if (cases.size() > 1) a.name += "-" + std::to_string(c);
                a.name = sanitize(a.name);
                for (const auto& [v, value] : cases[c]) a.pre.push_back(fact(space, v, value));
                actions.push_back(std::move(a));
            }
        }
    }
    return actions;
}

std::string node_fact(const Mdp& mdp, StateId s) { return sanitize("at-" + mdp.space().label(s)); }

std::vector<Action> plan_graph_actions(const Mdp& mdp) {
    std::vector<Action> actions;
    for (StateId s = 0; s < mdp.num_states(); ++s) {
        for (ActionId a = 0; a < mdp.num_actions(); ++a) {
            if (!mdp.applicable(s, a)) continue;
            const StateId t = mdp.successor(s, a);
            Action act;
            act.name = sanitize(mdp.action_name(a) + "-from-" + mdp.space().label(s));
            act.pre = {node_fact(mdp, s)};
            act.add = {node_fact(mdp, t)};
            if (t != s) act.del = {node_fact(mdp, s)};
            actions.push_back(std::move(act));
        }
    }
    return actions;
}

void write_conj(std::ostream& os, const std::vector<std::string>& pos,
                const std::vector<std::string>& neg) {
    os << "(and";
    for (const auto& f : pos) os << " (" << f << ")";
    for (const auto& f : neg) os << " (not (" << f << "))";
    os << ")";
}

std::vector<std::string> state_facts(const Mdp& mdp, StateId s, bool factored) {
    if (!factored) return {node_fact(mdp, s)};
    std::vector<std::string> out;
    for (std::size_t v = 0; v < mdp.space().variables().size(); ++v)
        out.push_back(fact(mdp.space(), v, mdp.space().value(s, v)));
    return out;
}

} // namespace

PddlExport export_pddl(const Hierarchy& h, std::size_t j, std::optional<StateId> init,
                       std::optional<StateId> goal, const std::string& name) {
    if (j == 0)
        throw NotFactored("level 0 is the base MDP; only abstract levels export to PDDL");
    const AbstractLevel& lvl = h.level(j);
    const Mdp& mdp = lvl.mdp;
    const bool factored = lvl.kind == LevelKind::Factored;
    if (!factored && lvl.kind != LevelKind::PlanGraph)
        throw NotFactored("level " + std::to_string(j) + " has no symbolic structure");

    const StateId s0 = init.value_or(0);
    const StateId sg = goal.value_or(static_cast<StateId>(mdp.num_states() - 1));
    for (StateId s : {s0, sg})
        if (s >= mdp.num_states())
            throw std::out_of_range("state " + std::to_string(s) + " not at level " +
                                    std::to_string(j));

    std::vector<std::string> predicates;
    if (factored) {
        const auto& vars = mdp.space().variables();
        for (std::size_t v = 0; v < vars.size(); ++v)
            for (std::size_t w = 0; w < vars[v].values.size(); ++w)
                predicates.push_back(fact(mdp.space(), v, static_cast<int>(w)));
    } else {
        for (StateId s = 0; s < mdp.num_states(); ++s) predicates.push_back(node_fact(mdp, s));
    }
    const auto actions = factored ? factored_actions(h, j) : plan_graph_actions(mdp);

    const std::string domain_name = sanitize(name + "-level" + std::to_string(j));
    std::ostringstream d;
    d << "(define (domain " << domain_name << ")\n";
    d << "  (:requirements :strips)\n";
    d << "  (:predicates";
    for (const auto& p : predicates) d << "\n    (" << p << ")";
    d << ")\n";
    for (const auto& a : actions) {
        d << "  (:action " << a.name << "\n";
        d << "    :parameters ()\n";
        d << "    :precondition ";
        write_conj(d, a.pre, {});
        d << "\n    :effect ";
        write_conj(d, a.add, a.del);
        d << ")\n";
    }
    d << ")\n";

    std::ostringstream p;
    p << "(define (problem " << domain_name << "-problem)\n";
    p << "  (:domain " << domain_name << ")\n";
    p << "  (:init";
    for (const auto& f : state_facts(mdp, s0, factored)) p << " (" << f << ")";
    p << ")\n  (:goal ";
    write_conj(p, state_facts(mdp, sg, factored), {});
    p << "))\n";

    return {d.str(), p.str(), actions.size(), predicates.size()};
}

bool balanced_sexpr(const std::string& text) {
    long depth = 0;
    bool opened = false;
    bool in_comment = false;
    for (char c : text) {
        if (in_comment) {
            in_comment = c != '\n';
            continue;
        }
        if (c == ';') {
            in_comment = true;
        } else if (c == '(') {
            ++depth;
            opened = true;
        } else if (c == ')') {
            if (--depth < 0) return false;
        } else if (depth == 0 && !std::isspace(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return depth == 0 && opened;
}

} // namespace skillsym
