#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "skillsym/abstraction.hpp"
#include "skillsym/error.hpp"

using namespace skillsym;
using fixtures::base_state;

namespace {

Mdp line(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    Mdp m(StateSpace::enumerated(0, labels), {"next"});
    for (StateId s = 0; s + 1 < n; ++s) m.set_transition(s, 0, s + 1, -1);
    return m;
}

OptionSkill run_to(std::string id, std::size_t n, std::initializer_list<StateId> init, StateId stop) {
    OptionSkill o;
    o.id = std::move(id);
    o.initiation = GroundingSet(0, n, init);
    o.termination = GroundingSet(0, n, {stop});
    o.policy.assign(n, kNoAction);
    for (StateId s = 0; s < stop; ++s) o.policy[s] = 0;
    return o;
}

struct Taxi1 {
    Mdp base = fixtures::taxi().build_base();
    std::vector<OptionSkill> opts = fixtures::taxi().options_level1(base);

    OptionSkill& get(const std::string& id) {
        for (auto& o : opts)
            if (o.id == id) return o;
        throw std::logic_error(id);
    }
    VarMask mask(std::initializer_list<const char*> names) const {
        VarMask m = 0;
        for (auto n : names) m |= VarMask{1} << base.space().variable_index(n);
        return m;
    }
};

} // namespace

TEST_SUITE("abstraction") {

TEST_CASE("effect sets by exhaustive simulation") {
    const auto& h = fixtures::taxi_hierarchy();
    auto a2 = fixtures::taxi().options_level2(h);
    OptionSkill& to_red = a2[0];
    REQUIRE(to_red.id == "passenger-to-red");
    CHECK(to_red.initiation.size() == 15);
    EffectSet e = compute_effect_set(to_red, h.mdp(1));
    REQUIRE(e.states.size() == 1);
    auto t = fixtures::taxi().state_of(h.mdp(1).space(), e.states.first());
    CHECK(t == TaxiState{{0, 4}, {0, 4}, false});
    CHECK(to_red.reward_stats.count == 15);

    Taxi1 t1;
    EffectSet pick = compute_effect_set(t1.get("pick-up"), t1.base);
    CHECK(pick.states.size() == 25);
    pick.states.for_each([&](StateId s) { CHECK(fixtures::taxi().decode(s).in_taxi); });

    Mdp m = line(3);
    OptionSkill fixed = run_to("fixed", 3, {2}, 2);
    CHECK(compute_effect_set(fixed, m).states == GroundingSet(0, 3, {2}));
}

TEST_CASE("classification") {
    const auto& h = fixtures::taxi_hierarchy();
    auto a2 = fixtures::taxi().options_level2(h);
    CHECK(classify_option(a2[0], h.mdp(1)).kind == OptionClassKind::Subgoal);

    Taxi1 t;
    OptionSkill blue = t.get("drive-to-blue");
    CHECK(classify_option(blue, t.base).kind == OptionClassKind::Unclassifiable);

    GroundingSet outside = t.base.space().empty_set();
    for (StateId s = 0; s < 625; ++s) outside.insert(s);
    blue.initiation = outside;
    OptionClass c = classify_option(blue, t.base);
    CHECK(c.kind == OptionClassKind::AbstractSubgoal);
    CHECK(c.mask == t.mask({"taxi-x", "taxi-y"}));

    CHECK(classify_option(t.get("pick-up"), t.base) ==
          OptionClass{OptionClassKind::AbstractSubgoal, t.mask({"in-taxi"})});
}

TEST_CASE("level-1 options partition into abstract subgoal parts") {
    Taxi1 t;
    for (const char* depot : {"red", "green", "blue", "yellow"}) {
        const std::string id = std::string("drive-to-") + depot;
        PartitionedOption po = partition_option(t.get(id), t.base);
        REQUIRE(po.parts.size() == 2);
        std::set<VarMask> masks;
        for (const auto& part : po.parts) {
            CHECK(part.cls.kind == OptionClassKind::AbstractSubgoal);
            masks.insert(part.cls.mask);
            const bool riding = fixtures::taxi().decode(part.initiation.first()).in_taxi;
            part.initiation.for_each([&](StateId s) {
                REQUIRE(fixtures::taxi().decode(s).in_taxi == riding);
            });
            CHECK(part.initiation.size() == (riding ? 25u : 625u));
        }
        CHECK(masks == std::set<VarMask>{t.mask({"taxi-x", "taxi-y"}),
                                         t.mask({"taxi-x", "taxi-y", "pass-x", "pass-y"})});
    }
    for (const char* id : {"pick-up", "put-down"}) {
        PartitionedOption po = partition_option(t.get(id), t.base);
        REQUIRE(po.parts.size() == 1);
        CHECK(po.parts[0].cls == OptionClass{OptionClassKind::AbstractSubgoal, t.mask({"in-taxi"})});
        CHECK(po.parts[0].effect_values[4] == (std::string(id) == "pick-up" ? 1 : 0));
    }
}

TEST_CASE("partitions cover the initiation set and every part re-classifies") {
    Taxi1 t;
    for (const auto& o : t.opts) {
        PartitionedOption po = partition_option(o, t.base);
        GroundingSet cover = t.base.space().empty_set();
        for (std::size_t i = 0; i < po.parts.size(); ++i) {
            const OptionPart& part = po.parts[i];
            REQUIRE_FALSE(cover.intersects(part.initiation));
            cover |= part.initiation;
            OptionSkill restricted = o;
            restricted.initiation = part.initiation;
            REQUIRE(classify_option(restricted, t.base) == part.cls);
        }
        REQUIRE(cover == o.initiation);
    }

    const auto& h = fixtures::taxi_hierarchy();
    for (const auto& o : fixtures::taxi().options_level2(h))
        CHECK(partition_option(o, h.mdp(1)).parts.size() == 1);
}

TEST_CASE("partition limit") {
    Taxi1 t;
    CHECK_THROWS_AS(partition_option(t.get("drive-to-blue"), t.base, 1), PartitionExplosion);

    // Every start ends in a different state on an unfactored level.
    Mdp m = line(4);
    OptionSkill step;
    step.id = "step";
    step.initiation = GroundingSet(0, 4, {0, 1, 2});
    step.termination = GroundingSet(0, 4);
    step.policy = {0, 0, 0, kNoAction};
    step.primitive = true;
    CHECK(partition_option(step, m).parts.size() == 3);
    CHECK_THROWS_AS(partition_option(step, m, 2), PartitionExplosion);
}

TEST_CASE("taxi A2 plan graph is a complete digraph on 4 nodes") {
    const auto& h = fixtures::taxi_hierarchy();
    const AbstractLevel& lvl = h.level(2);
    CHECK(lvl.kind == LevelKind::PlanGraph);
    REQUIRE(lvl.mdp.num_states() == 4);
    CHECK(lvl.mdp.num_transitions() == 12);
    for (StateId s = 0; s < 4; ++s) {
        for (ActionId a = 0; a < 4; ++a) {
            const bool self = lvl.node_parts[s].first == a;
            CHECK(lvl.mdp.applicable(s, a) == !self);
            if (!self) CHECK(lvl.mdp.successor(s, a) == a);
        }
    }
    // Widened groundings stay inside the initiation set of every outgoing edge.
    for (StateId s = 0; s < 4; ++s)
        for (ActionId a = 0; a < 4; ++a)
            if (lvl.mdp.applicable(s, a))
                CHECK(lvl.groundings[s].is_subset_of(lvl.options[a].initiation));
}

TEST_CASE("plan graph edges follow effect and initiation sets") {
    Mdp m = line(4);
    {
        auto a = run_to("a", 4, {0, 1}, 2);
        auto b = run_to("b", 4, {2}, 3);
        AbstractLevel lvl = build_plan_graph({a, b}, m);
        REQUIRE(lvl.mdp.num_states() == 2);
        CHECK(lvl.mdp.applicable(0, 1));
        CHECK(lvl.mdp.successor(0, 1) == 1);
        CHECK_FALSE(lvl.mdp.applicable(1, 0));
        CHECK_FALSE(lvl.mdp.applicable(0, 0));
        CHECK(lvl.mdp.space().level_index() == 1);
    }
    {
        auto c = run_to("c", 4, {0, 1, 2}, 2);
        AbstractLevel lvl = build_plan_graph({c}, m);
        REQUIRE(lvl.mdp.num_states() == 1);
        CHECK(lvl.mdp.successor(0, 0) == 0);
    }
    Taxi1 t;
    CHECK_THROWS_AS(build_plan_graph({t.get("pick-up")}, t.base), NoSubgoalStructure);
}

TEST_CASE("factored closure from depot seeds") {
    Taxi1 t;
    const GroundingSet seeds = fixtures::taxi().seed_states();
    CHECK(seeds.size() == 16);

    AbstractLevel lvl = build_factored_abstraction(t.opts, t.base, seeds);
    CHECK(lvl.kind == LevelKind::Factored);
    REQUIRE(lvl.mdp.num_states() == 20);
    std::size_t riding = 0;
    for (StateId s = 0; s < 20; ++s) {
        REQUIRE(lvl.groundings[s].size() == 1);
        auto ts = fixtures::taxi().decode(lvl.groundings[s].first());
        CHECK(oracle::is_depot({ts.taxi.x, ts.taxi.y}));
        CHECK(oracle::is_depot({ts.pass.x, ts.pass.y}));
        riding += ts.in_taxi;
        if (s > 0) CHECK(lvl.groundings[s - 1].first() < lvl.groundings[s].first());
    }
    CHECK(riding == 4);

    auto no_pick = t.opts;
    no_pick.erase(no_pick.begin() + 4);
    CHECK(build_factored_abstraction(no_pick, t.base, seeds).mdp.num_states() == 16);
    CHECK(build_factored_abstraction({}, t.base, seeds).mdp.num_states() == 16);

    CHECK_THROWS_AS(build_factored_abstraction(t.opts, t.base, GroundingSet(0, 650)),
                    NoFactoredStructure);
    CHECK_THROWS_AS(build_factored_abstraction(t.opts, t.base, GroundingSet(1, 650, {0})),
                    LevelMismatch);
    Mdp m = line(3);
    CHECK_THROWS_AS(build_factored_abstraction({}, m, GroundingSet(0, 3, {0})), NoFactoredStructure);
}

TEST_CASE("factored images match simulation") {
    const auto& h = fixtures::taxi_hierarchy();
    const AbstractLevel& lvl = h.level(1);
    for (StateId s = 0; s < lvl.mdp.num_states(); ++s) {
        for (ActionId o = 0; o < lvl.mdp.num_actions(); ++o) {
            const StateId x = lvl.groundings[s].first();
            const bool can_start = lvl.options[o].initiation.contains(x);
            REQUIRE(lvl.mdp.applicable(s, o) == can_start);
            if (!can_start) continue;
            const StateId end = trace_option(h.base(), lvl.options[o], x).end;
            REQUIRE(lvl.groundings[lvl.mdp.successor(s, o)].first() == end);
        }
    }
}

TEST_CASE("reward assignment") {
    Taxi1 t;
    const auto& h = fixtures::taxi_hierarchy();
    for (std::size_t j = 1; j <= 2; ++j)
        for (StateId s = 0; s < h.num_states(j); ++s)
            for (ActionId a = 0; a < h.mdp(j).num_actions(); ++a)
                if (h.mdp(j).applicable(s, a)) REQUIRE(h.mdp(j).reward(s, a) == -1.0);

    Mdp m = line(4);
    auto a = run_to("a", 4, {0, 1}, 2);
    auto b = run_to("b", 4, {2}, 3);
    AbstractLevel lvl = build_plan_graph({a, b}, m);
    CHECK_THROWS_AS(assign_rewards(lvl, RewardMode::EmpiricalMean), MissingStatistics);
    lvl.options[0].reward_stats.add(-3);
    lvl.options[0].reward_stats.add(-5);
    lvl.options[1].reward_stats.add(-1);
    AbstractLevel rewarded = assign_rewards(lvl, RewardMode::EmpiricalMean);
    CHECK(rewarded.mdp.reward(0, 1) == doctest::Approx(-1));

    // Edge into a node through option a needs a state whose effect lies in I_a.
    auto c = run_to("c", 4, {0, 1, 2}, 2);
    AbstractLevel loop = build_plan_graph({c}, m);
    loop.options[0].reward_stats = RunningStats{};
    loop.options[0].reward_stats.add(-3);
    loop.options[0].reward_stats.add(-5);
    CHECK(assign_rewards(loop, RewardMode::EmpiricalMean).mdp.reward(0, 0) == doctest::Approx(-4));
}

TEST_CASE("empirical rewards on the taxi hierarchy are option means") {
    Hierarchy h = fixtures::taxi().build_hierarchy(RewardMode::EmpiricalMean);
    CHECK(h.reward_mode() == RewardMode::EmpiricalMean);
    for (std::size_t j = 1; j <= 2; ++j) {
        const AbstractLevel& lvl = h.level(j);
        for (StateId s = 0; s < lvl.mdp.num_states(); ++s)
            for (ActionId a = 0; a < lvl.mdp.num_actions(); ++a)
                if (lvl.mdp.applicable(s, a))
                    REQUIRE(lvl.mdp.reward(s, a) == lvl.options[a].reward_stats.mean);
    }
    // pick-up always takes exactly one primitive step.
    CHECK(h.level(1).options[4].reward_stats.mean == -1.0);
    CHECK(h.level(1).options[4].reward_stats.count == 25);
}

}
