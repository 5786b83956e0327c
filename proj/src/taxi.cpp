#include "skillsym/taxi.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "skillsym/error.hpp"

namespace skillsym {

using nlohmann::json;

namespace {

constexpr std::string_view kVarNames[] = {"taxi-x", "taxi-y", "pass-x", "pass-y", "in-taxi"};
constexpr Cell kSteps[] = {{0, 1}, {0, -1}, {1, 0}, {-1, 0}};

Cell offset(Cell c, ActionId move) { return {c.x + kSteps[move].x, c.y + kSteps[move].y}; }

bool adjacent(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y) == 1; }

Cell cell_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ParseError("expected a cell [x, y], got " + j.dump());
    return {j[0].get<int>(), j[1].get<int>()};
}

OptionSkill blank_option(std::string id, std::size_t level, std::size_t n) {
    OptionSkill o;
    o.id = std::move(id);
    o.initiation = GroundingSet(level, n);
    o.termination = GroundingSet(level, n);
    o.policy.assign(n, kNoAction);
    return o;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

std::string to_string(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

TaxiSpec default_taxi_spec() {
    TaxiSpec spec;
    spec.walls = {
        {{0, 0}, {1, 0}}, {{0, 1}, {1, 1}},
        {{1, 3}, {2, 3}}, {{1, 4}, {2, 4}},
        {{2, 0}, {3, 0}}, {{2, 1}, {3, 1}},
    };
    spec.depots = {{"red", {0, 4}}, {"green", {4, 4}}, {"blue", {3, 0}}, {"yellow", {0, 0}}};
    return spec;
}

TaxiSpec parse_taxi_spec(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("taxi domain: ") + e.what());
    }
    TaxiSpec spec;
    try {
        spec.width = j.at("width").get<int>();
        spec.height = j.at("height").get<int>();
        for (const auto& w : j.value("walls", json::array())) {
            if (!w.is_array() || w.size() != 2) throw ParseError("wall must be a pair of cells");
            spec.walls.emplace_back(cell_from_json(w[0]), cell_from_json(w[1]));
        }
        for (const auto& d : j.at("depots"))
            spec.depots.push_back({d.at("name").get<std::string>(), cell_from_json(d.at("cell"))});
    } catch (const json::exception& e) {
        throw ParseError(std::string("taxi domain: ") + e.what());
    }
    return spec;
}

TaxiSpec load_taxi_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_taxi_spec(ss.str());
}

std::string taxi_spec_to_json(const TaxiSpec& spec) {
    json j;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["walls"] = json::array();
    for (const auto& [a, b] : spec.walls)
        j["walls"].push_back({{a.x, a.y}, {b.x, b.y}});
    j["depots"] = json::array();
    for (const auto& d : spec.depots)
        j["depots"].push_back({{"name", d.name}, {"cell", {d.cell.x, d.cell.y}}});
    return j.dump(2);
}

TaxiDomain::TaxiDomain(TaxiSpec spec) : spec_(std::move(spec)) {
    if (spec_.width <= 0 || spec_.height <= 0)
        throw InvalidModel("taxi grid needs positive width and height");
    for (const auto& [a, b] : spec_.walls)
        if (!inside(a) || !inside(b) || !adjacent(a, b))
            throw InvalidModel("wall " + to_string(a) + "|" + to_string(b) +
                               " does not separate adjacent grid cells");
    if (spec_.depots.empty()) throw InvalidModel("taxi domain needs at least one depot");
    for (std::size_t i = 0; i < spec_.depots.size(); ++i) {
        const Depot& d = spec_.depots[i];
        if (!inside(d.cell)) throw InvalidModel("depot " + d.name + " lies off the grid");
        for (std::size_t k = 0; k < i; ++k)
            if (spec_.depots[k].name == d.name || spec_.depots[k].cell == d.cell)
                throw InvalidModel("depots " + spec_.depots[k].name + " and " + d.name +
                                   " share a name or a cell");
    }
}

bool TaxiDomain::inside(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < spec_.width && c.y < spec_.height;
}

bool TaxiDomain::blocked(Cell from, Cell to) const {
    if (!inside(from) || !inside(to)) return true;
    for (const auto& [a, b] : spec_.walls)
        if ((a == from && b == to) || (a == to && b == from)) return true;
    return false;
}

StateId TaxiDomain::encode(const TaxiState& s) const {
    if (!inside(s.taxi) || !inside(s.pass))
        throw std::out_of_range("taxi state off the grid");
    auto idx = [&](Cell c) { return static_cast<StateId>(c.x * spec_.height + c.y); };
    const auto n = static_cast<StateId>(num_cells());
    if (s.in_taxi) {
        if (s.pass != s.taxi) throw std::invalid_argument("riding passenger must share the taxi cell");
        return n * n + idx(s.taxi);
    }
    return idx(s.taxi) * n + idx(s.pass);
}

TaxiState TaxiDomain::decode(StateId s) const {
    const auto n = static_cast<StateId>(num_cells());
    auto cell = [&](StateId i) { return Cell{static_cast<int>(i) / spec_.height,
                                             static_cast<int>(i) % spec_.height}; };
    if (s >= num_states()) throw std::out_of_range("taxi state " + std::to_string(s));
    if (s >= n * n) {
        Cell c = cell(s - n * n);
        return {c, c, true};
    }
    return {cell(s / n), cell(s % n), false};
}

TaxiState TaxiDomain::state_of(const StateSpace& space, StateId s) const {
    const Assignment& a = space.values(s);
    if (a.size() != 5) throw InvalidModel("not a taxi state space");
    return {{a[0], a[1]}, {a[2], a[3]}, a[4] == 1};
}

std::string TaxiDomain::label(const TaxiState& s) const {
    auto where = [&](Cell c) {
        auto d = depot_at(c);
        return d ? "@" + *d : "=" + to_string(c);
    };
    if (s.in_taxi) return "taxi" + where(s.taxi) + " in-taxi";
    return "taxi" + where(s.taxi) + " pass" + where(s.pass) + " out";
}

const Depot& TaxiDomain::depot(std::string_view name) const {
    for (const auto& d : spec_.depots)
        if (d.name == name) return d;
    throw ParseError("unknown depot '" + std::string(name) + "'");
}

std::optional<std::string> TaxiDomain::depot_at(Cell c) const {
    for (const auto& d : spec_.depots)
        if (d.cell == c) return d.name;
    return std::nullopt;
}

std::vector<Cell> TaxiDomain::depot_cells() const {
    std::vector<Cell> out;
    for (const auto& d : spec_.depots) out.push_back(d.cell);
    return out;
}

Mdp TaxiDomain::build_base() const {
    std::vector<Variable> vars;
    auto range = [](std::string name, int n) {
        Variable v{std::move(name), {}};
        for (int i = 0; i < n; ++i) v.values.push_back(std::to_string(i));
        return v;
    };
    vars.push_back(range(std::string(kVarNames[0]), spec_.width));
    vars.push_back(range(std::string(kVarNames[1]), spec_.height));
    vars.push_back(range(std::string(kVarNames[2]), spec_.width));
    vars.push_back(range(std::string(kVarNames[3]), spec_.height));
    vars.push_back({std::string(kVarNames[4]), {"false", "true"}});

    std::vector<Assignment> assignments;
    std::vector<std::string> labels;
    for (StateId s = 0; s < num_states(); ++s) {
        TaxiState t = decode(s);
        assignments.push_back({t.taxi.x, t.taxi.y, t.pass.x, t.pass.y, t.in_taxi ? 1 : 0});
        labels.push_back(label(t));
    }

    Mdp mdp(StateSpace::factored(0, std::move(vars), std::move(assignments), std::move(labels)),
            {"move-north", "move-south", "move-east", "move-west", "pick-up", "put-down"});
    for (StateId s = 0; s < num_states(); ++s) {
        const TaxiState t = decode(s);
        for (ActionId m = MoveNorth; m <= MoveWest; ++m) {
            TaxiState next = t;
            Cell to = offset(t.taxi, m);
            if (!blocked(t.taxi, to)) {
                next.taxi = to;
                if (t.in_taxi) next.pass = to;
            }
            mdp.set_transition(s, m, encode(next), -1.0);
        }
        if (!t.in_taxi && t.taxi == t.pass)
            mdp.set_transition(s, PickUp, encode({t.taxi, t.pass, true}), -1.0);
        if (t.in_taxi) mdp.set_transition(s, PutDown, encode({t.taxi, t.pass, false}), -1.0);
    }
    return mdp;
}

// Per-cell move towards `target` along a shortest path, preferring N, S, E, W.
std::vector<ActionId> TaxiDomain::navigation(Cell target) const {
    const auto idx = [&](Cell c) { return static_cast<std::size_t>(c.x * spec_.height + c.y); };
    std::vector<int> dist(num_cells(), -1);
    std::deque<Cell> queue{target};
    dist[idx(target)] = 0;
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        for (ActionId m = MoveNorth; m <= MoveWest; ++m) {
            Cell n = offset(c, m);
            if (!blocked(c, n) && dist[idx(n)] < 0) {
                dist[idx(n)] = dist[idx(c)] + 1;
                queue.push_back(n);
            }
        }
    }
    std::vector<ActionId> move(num_cells(), kNoAction);
    for (int x = 0; x < spec_.width; ++x) {
        for (int y = 0; y < spec_.height; ++y) {
            Cell c{x, y};
            if (dist[idx(c)] <= 0) continue;
            for (ActionId m = MoveNorth; m <= MoveWest; ++m) {
                Cell n = offset(c, m);
                if (!blocked(c, n) && dist[idx(n)] == dist[idx(c)] - 1) {
                    move[idx(c)] = m;
                    break;
                }
            }
        }
    }
    return move;
}

std::vector<OptionSkill> TaxiDomain::options_level1(const Mdp& base) const {
    if (base.num_states() != num_states() || base.space().level_index() != 0)
        throw LevelMismatch("level-1 taxi options need the taxi base MDP");
    const std::size_t n = num_states();
    std::vector<OptionSkill> out;

    for (const auto& d : spec_.depots) {
        const auto move = navigation(d.cell);
        OptionSkill o = blank_option("drive-to-" + d.name, 0, n);
        for (StateId s = 0; s < n; ++s) {
            const TaxiState t = decode(s);
            if (t.taxi == d.cell) {
                o.termination.insert(s);
                o.initiation.insert(s);
                continue;
            }
            o.policy[s] = move[static_cast<std::size_t>(t.taxi.x * spec_.height + t.taxi.y)];
            // Cells walled off from the depot fall outside the initiation set;
            // depots must reach each other for the abstraction to close.
            if (o.policy[s] != kNoAction)
                o.initiation.insert(s);
            else if (depot_at(t.taxi))
                throw InvalidModel("depot " + d.name + " is unreachable from " + to_string(t.taxi));
        }
        out.push_back(std::move(o));
    }

    OptionSkill pick = blank_option("pick-up", 0, n);
    OptionSkill put = blank_option("put-down", 0, n);
    for (StateId s = 0; s < n; ++s) {
        const TaxiState t = decode(s);
        if (t.in_taxi) {
            pick.termination.insert(s);
            put.initiation.insert(s);
            put.policy[s] = PutDown;
        } else {
            put.termination.insert(s);
            if (t.taxi == t.pass) {
                pick.initiation.insert(s);
                pick.policy[s] = PickUp;
            }
        }
    }
    out.push_back(std::move(pick));
    out.push_back(std::move(put));
    return out;
}

GroundingSet TaxiDomain::seed_states() const {
    GroundingSet seeds(0, num_states());
    for (const auto& a : spec_.depots)
        for (const auto& b : spec_.depots) seeds.insert(encode({a.cell, b.cell, false}));
    return seeds;
}

std::vector<OptionSkill> TaxiDomain::options_level2(const Hierarchy& h) const {
    if (h.top() < 1) throw LevelOutOfRange("passenger options need a level-1 taxi abstraction");
    const Mdp& lvl = h.mdp(1);
    const StateSpace& space = lvl.space();
    const std::size_t n = lvl.num_states();
    auto action = [&](const std::string& name) {
        auto a = lvl.find_action(name);
        if (!a) throw InvalidModel("level 1 has no option " + name);
        return *a;
    };
    const ActionId pick = action("pick-up");
    const ActionId put = action("put-down");

    std::vector<OptionSkill> out;
    for (const auto& d : spec_.depots) {
        OptionSkill o = blank_option("passenger-to-" + d.name, 1, n);
        const ActionId drive_here = action("drive-to-" + d.name);
        for (StateId y = 0; y < n; ++y) {
            const TaxiState t = state_of(space, y);
            if (!t.in_taxi && t.pass == d.cell && t.taxi == d.cell) {
                o.termination.insert(y);
                continue;
            }
            if (t.pass != d.cell) o.initiation.insert(y);
            if (t.in_taxi) {
                o.policy[y] = t.taxi == d.cell ? put : drive_here;
            } else if (t.taxi == t.pass) {
                o.policy[y] = pick;
            } else if (auto name = depot_at(t.pass)) {
                o.policy[y] = action("drive-to-" + *name);
            }
        }
        out.push_back(std::move(o));
    }
    return out;
}

Hierarchy TaxiDomain::build_hierarchy(RewardMode mode) const {
    Hierarchy h(build_base(), mode);
    h = add_level(h, LevelSpec{options_level1(h.base()), seed_states()});
    return add_level(h, LevelSpec{options_level2(h), std::nullopt});
}

GroundingSet TaxiDomain::expand(const TaxiConstraint& c) const {
    auto matches = [](const std::optional<std::vector<Cell>>& cells, Cell at) {
        return !cells || std::find(cells->begin(), cells->end(), at) != cells->end();
    };
    GroundingSet out(0, num_states());
    for (StateId s = 0; s < num_states(); ++s) {
        const TaxiState t = decode(s);
        if (matches(c.taxi_at, t.taxi) && matches(c.pass_at, t.pass) &&
            (!c.in_taxi || *c.in_taxi == t.in_taxi))
            out.insert(s);
    }
    return out;
}

namespace {

struct ConstraintBuilder {
    const TaxiDomain& taxi;
    TaxiConstraint out;

    std::optional<std::vector<Cell>> location(const std::string& key, const json& v) {
        if (v.is_array()) {
            Cell c = cell_from_json(v);
            if (!taxi.inside(c)) throw ParseError(key + ": cell " + to_string(c) + " off the grid");
            return std::vector<Cell>{c};
        }
        if (!v.is_string()) throw ParseError(key + ": expected a depot name, a cell or 'any'");
        const auto s = v.get<std::string>();
        if (s == "any") return std::nullopt;
        if (s == "any-depot") return taxi.depot_cells();
        return std::vector<Cell>{taxi.depot(s).cell};
    }

    void set(const std::string& key, const json& v) {
        if (key == "taxi-at") {
            out.taxi_at = location(key, v);
        } else if (key == "pass-at") {
            out.pass_at = location(key, v);
        } else if (key == "in-taxi") {
            if (v.is_boolean()) out.in_taxi = v.get<bool>();
            else if (v == "any") out.in_taxi.reset();
            else throw ParseError("in-taxi: expected true, false or 'any'");
        } else {
            throw ParseError("unknown constraint '" + key + "'");
        }
    }
};

} // namespace

TaxiConstraint TaxiDomain::parse_constraint(std::string_view text) const {
    ConstraintBuilder b{*this, {}};
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const std::string item = trim(text.substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("constraint '" + item + "' lacks '='");
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        json v;
        if (val == "true" || val == "false") {
            v = val == "true";
        } else if (auto colon = val.find(':'); colon != std::string::npos) {
            try {
                v = json::array({std::stoi(val.substr(0, colon)), std::stoi(val.substr(colon + 1))});
            } catch (const std::exception&) {
                throw ParseError("bad cell '" + val + "', expected x:y");
            }
        } else {
            v = val;
        }
        b.set(key, v);
    }
    return b.out;
}

PlanQuery TaxiDomain::parse_query(const std::string& json_text) const {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("query: ") + e.what());
    }
    auto side = [&](const char* key) {
        if (!j.is_object() || !j.contains(key) || !j[key].is_object())
            throw ParseError(std::string("query needs an object '") + key + "'");
        ConstraintBuilder b{*this, {}};
        for (const auto& [k, v] : j[key].items()) b.set(k, v);
        GroundingSet set = expand(b.out);
        if (set.empty()) throw ParseError(std::string("query side ") + key + " matches no state");
        return set;
    };
    return {side("B"), side("G")};
}

std::vector<NamedQuery> taxi_queries(const TaxiDomain& taxi) {
    const Cell blue = taxi.depot("blue").cell;
    const Cell red = taxi.depot("red").cell;
    const Cell yellow = taxi.depot("yellow").cell;
    const TaxiConstraint b12{taxi.depot_cells(), std::vector<Cell>{blue}, false};
    return {
        {"Q1", {taxi.expand(b12), taxi.expand({std::nullopt, std::vector<Cell>{red}, std::nullopt})}},
        {"Q2",
         {taxi.expand(b12),
          taxi.expand({std::vector<Cell>{yellow}, std::vector<Cell>{blue}, false})}},
        {"Q3",
         {taxi.expand({std::vector<Cell>{red}, std::vector<Cell>{blue}, false}),
          taxi.expand({std::nullopt, std::vector<Cell>{Cell{1, 4}}, std::nullopt})}},
    };
}

} // namespace skillsym
