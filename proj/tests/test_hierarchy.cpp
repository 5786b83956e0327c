#include "doctest.h"
#include "fixtures.hpp"
#include "skillsym/error.hpp"
#include "skillsym/hierarchy.hpp"

using namespace skillsym;

namespace {

std::vector<OptionSkill> primitive_wrappers(const Mdp& base) {
    std::vector<OptionSkill> out;
    for (ActionId a = 0; a < base.num_actions(); ++a) {
        OptionSkill o;
        o.id = "do-" + base.action_name(a);
        o.initiation = base.space().empty_set();
        o.termination = base.space().empty_set();
        o.policy.assign(base.num_states(), kNoAction);
        o.primitive = true;
        for (StateId s = 0; s < base.num_states(); ++s) {
            if (base.applicable(s, a)) {
                o.initiation.insert(s);
                o.policy[s] = a;
            }
        }
        out.push_back(std::move(o));
    }
    return out;
}

Mdp line(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    Mdp m(StateSpace::enumerated(0, labels), {"next"});
    for (StateId s = 0; s + 1 < n; ++s) m.set_transition(s, 0, s + 1, -1);
    return m;
}

} // namespace

TEST_SUITE("hierarchy") {

TEST_CASE("taxi skill-symbol loop yields 650, 20 and 4 states") {
    const auto& h = fixtures::taxi_hierarchy();
    CHECK(h.top() == 2);
    CHECK(h.num_states(0) == 650);
    CHECK(h.num_states(1) == 20);
    CHECK(h.num_states(2) == 4);
    CHECK(h.level(1).kind == LevelKind::Factored);
    CHECK(h.level(2).kind == LevelKind::PlanGraph);
    CHECK(h.level(1).options.size() == 6);
    CHECK(h.level(2).options.size() == 4);
    CHECK_THROWS_AS(h.level(0), LevelOutOfRange);
    CHECK_THROWS_AS(h.mdp(3), LevelOutOfRange);
}

TEST_CASE("every state grounds to at least one base state") {
    const auto& h = fixtures::taxi_hierarchy();
    for (std::size_t j = 0; j <= h.top(); ++j)
        for (StateId s = 0; s < h.num_states(j); ++s) REQUIRE_FALSE(h.final_grounding(j, s).empty());
}

TEST_CASE("add_level errors") {
    Hierarchy h(fixtures::taxi().build_base());
    CHECK_THROWS_AS(add_level(h, LevelSpec{}), EmptyOptionSet);

    auto opts = fixtures::taxi().options_level1(h.base());
    CHECK_THROWS_AS(add_level(h, LevelSpec{opts, GroundingSet(0, 650)}), NoFactoredStructure);

    auto broken = opts;
    broken[0].policy.pop_back();
    CHECK_THROWS_AS(add_level(h, LevelSpec{broken, std::nullopt}), InvalidModel);

    Hierarchy chain(line(4));
    OptionSkill step;
    step.id = "step";
    step.initiation = GroundingSet(0, 4, {0, 1, 2});
    step.termination = GroundingSet(0, 4);
    step.policy = {0, 0, 0, kNoAction};
    step.primitive = true;
    CHECK_THROWS_AS(add_level(chain, LevelSpec{{step}, std::nullopt, 2}), PartitionExplosion);
    Hierarchy ok = add_level(chain, LevelSpec{{step}, std::nullopt, 3});
    CHECK(ok.num_states(1) == 3);
    CHECK(validate(ok).empty());
}

TEST_CASE("primitive one-step wrappers reproduce the base level") {
    Hierarchy h(fixtures::taxi().build_base());
    Hierarchy w = add_level(h, LevelSpec{primitive_wrappers(h.base()), std::nullopt});
    const Mdp& base = w.base();
    const Mdp& lvl = w.mdp(1);
    REQUIRE(lvl.num_states() == base.num_states());
    REQUIRE(lvl.num_actions() == base.num_actions());
    for (StateId s = 0; s < lvl.num_states(); ++s) {
        REQUIRE(w.grounding(1, s) == GroundingSet(0, 650, {s}));
        for (ActionId a = 0; a < lvl.num_actions(); ++a) {
            REQUIRE(lvl.applicable(s, a) == base.applicable(s, a));
            if (lvl.applicable(s, a)) REQUIRE(lvl.successor(s, a) == base.successor(s, a));
        }
    }
    CHECK(validate(w).empty());
}

TEST_CASE("validate accepts the taxi hierarchy") {
    auto v = validate(fixtures::taxi_hierarchy());
    for (const auto& x : v) INFO(x.message);
    CHECK(v.empty());
}

TEST_CASE("validate reports an emptied grounding once") {
    const auto& h = fixtures::taxi_hierarchy();
    AbstractLevel lvl = h.level(1);
    const StateId victim = 7;
    lvl.groundings[victim] = GroundingSet(0, 650);
    auto v = validate(h.replace_level(1, lvl));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::EmptyGrounding);
    CHECK(v[0].level == 1);
    CHECK(v[0].state == victim);
    CHECK(v[0].message.find(lvl.mdp.space().label(victim)) != std::string::npos);
}

TEST_CASE("validate reports an injected unsound edge once") {
    const auto& h = fixtures::taxi_hierarchy();
    AbstractLevel lvl = h.level(2);
    // Send passenger-to-red from the blue node to the green node instead.
    const StateId blue = fixtures::level2_node(h, "passenger-to-blue");
    const StateId green = fixtures::level2_node(h, "passenger-to-green");
    const ActionId to_red = *lvl.mdp.find_action("passenger-to-red");
    lvl.mdp.set_transition(blue, to_red, green, -1);
    auto v = validate(h.replace_level(2, lvl));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::ImageSoundness);
    CHECK(v[0].level == 2);
    CHECK(v[0].state == blue);
}

TEST_CASE("validate reports an applicability violation") {
    const auto& h = fixtures::taxi_hierarchy();
    AbstractLevel lvl = h.level(2);
    const StateId red = fixtures::level2_node(h, "passenger-to-red");
    const ActionId to_red = *lvl.mdp.find_action("passenger-to-red");
    lvl.mdp.set_transition(red, to_red, red, -1);
    auto v = validate(h.replace_level(2, lvl));
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == Violation::Kind::ApplicabilitySoundness);
    CHECK(to_string(v[0].kind) == "applicability-soundness");
}

TEST_CASE("validate reports structural defects") {
    const auto& h = fixtures::taxi_hierarchy();
    {
        AbstractLevel lvl = h.level(2);
        lvl.groundings.pop_back();
        auto v = validate(h.replace_level(2, lvl));
        REQUIRE_FALSE(v.empty());
        CHECK(v[0].kind == Violation::Kind::InvalidState);
    }
    {
        AbstractLevel lvl = h.level(2);
        lvl.groundings[0] = GroundingSet(0, 650, {1});
        auto v = validate(h.replace_level(2, lvl));
        REQUIRE_FALSE(v.empty());
        CHECK(v[0].kind == Violation::Kind::InvalidGrounding);
    }
    {
        AbstractLevel lvl = h.level(1);
        lvl.options[0].policy.resize(3);
        auto v = validate(h.replace_level(1, lvl));
        REQUIRE_FALSE(v.empty());
        CHECK(v[0].kind == Violation::Kind::InvalidOption);
    }
    CHECK_THROWS_AS(h.replace_level(0, h.level(1)), LevelOutOfRange);
}

TEST_CASE("hierarchies are values") {
    const auto& h = fixtures::taxi_hierarchy();
    AbstractLevel lvl = h.level(1);
    lvl.groundings[0] = GroundingSet(0, 650);
    Hierarchy changed = h.replace_level(1, lvl);
    CHECK(changed.final_grounding(1, 0).empty());
    CHECK_FALSE(h.final_grounding(1, 0).empty());
    // Level 2 groundings that included state 0 lose its base state.
    CHECK(validate(h).empty());
}

}
