#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "skillsym/bench.hpp"
#include "skillsym/error.hpp"
#include "skillsym/hierarchy.hpp"
#include "skillsym/pddl.hpp"
#include "skillsym/planner.hpp"
#include "skillsym/snapshot.hpp"
#include "skillsym/taxi.hpp"

using namespace skillsym;

namespace {

constexpr int kFound = 0;
constexpr int kFailed = 1;
constexpr int kNoPlan = 2;

struct Common {
    std::string domain;
    std::string reward = "uniform";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--domain", c.domain, "taxi domain JSON (built-in layout when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--reward", c.reward, "abstract reward model")
        ->check(CLI::IsMember({"uniform", "empirical"}));
}

TaxiDomain load_domain(const Common& c) {
    return c.domain.empty() ? TaxiDomain() : TaxiDomain(load_taxi_spec(c.domain));
}

RewardMode reward_mode(const Common& c) {
    return c.reward == "empirical" ? RewardMode::EmpiricalMean : RewardMode::UniformPenalty;
}

PlanMode plan_mode(const std::string& s) {
    return s == "reach" ? PlanMode::Reachability : PlanMode::ValueIteration;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int cmd_build(const Common& c, const std::string& out) {
    TaxiDomain taxi = load_domain(c);
    Hierarchy h = taxi.build_hierarchy(reward_mode(c));
    for (std::size_t j = 0; j <= h.top(); ++j)
        std::cerr << "level " << j << ": " << h.num_states(j) << " states, "
                  << h.mdp(j).num_transitions() << " transitions\n";
    const auto violations = validate(h);
    for (const auto& v : violations)
        std::cerr << "violation [" << to_string(v.kind) << "] level " << v.level << ": "
                  << v.message << "\n";
    write_output(out, hierarchy_snapshot(h) + "\n");
    return violations.empty() ? kFound : kFailed;
}

struct PlanArgs {
    std::string query_file;
    std::string b, g;
    std::optional<std::size_t> at_level;
    std::string mode = "reach";
    bool quiet = false;
};

int cmd_plan(const Common& c, const PlanArgs& a) {
    TaxiDomain taxi = load_domain(c);
    PlanQuery query;
    if (!a.query_file.empty()) {
        query = taxi.parse_query(read_file(a.query_file));
    } else {
        if (a.b.empty() || a.g.empty()) throw ParseError("plan needs --query or both --B and --G");
        query = {taxi.expand(taxi.parse_constraint(a.b)), taxi.expand(taxi.parse_constraint(a.g))};
        if (query.start.empty() || query.goal.empty())
            throw ParseError("--B and --G must each match at least one state");
    }
    Hierarchy h = taxi.build_hierarchy(reward_mode(c));
    QueryResult r = answer_query(h, query, {plan_mode(a.mode), a.at_level});

    const auto& rec = r.record;
    for (const auto& v : rec.visits)
        std::cout << (v.phase == LevelVisit::Phase::Match ? "match" : "plan ") << " level "
                  << v.level << ": " << v.ops << " ops\n";
    if (!r.answer) {
        std::cout << "no plan\n";
        return kNoPlan;
    }
    const QueryAnswer& ans = *r.answer;
    const Mdp& mdp = h.mdp(ans.level);
    std::cout << "solved at level " << ans.level << " (first match at level " << *rec.k
              << ", h = " << rec.h << ")\n";
    for (StateId s : ans.match.b.members()) {
        std::cout << "  " << mdp.space().label(s) << ":";
        for (ActionId act : ans.plan.actions_from(mdp, s)) std::cout << " " << mdp.action_name(act);
        std::cout << "\n";
    }
    for (StateId x : query.start.members()) {
        ExecutionTrace t = refine(h, ans.plan, x);
        std::cout << "  from " << h.base().space().label(x) << ": " << t.steps
                  << " primitive steps to " << h.base().space().label(t.end) << "\n";
        if (!a.quiet) {
            std::cout << "   ";
            for (ActionId act : t.actions) std::cout << " " << h.base().action_name(act);
            std::cout << "\n";
        }
    }
    return kFound;
}

int cmd_bench(const Common& c, std::size_t reps, const std::string& format,
              const std::string& mode, const std::string& output) {
    TaxiDomain taxi = load_domain(c);
    Hierarchy h = taxi.build_hierarchy(reward_mode(c));
    Mdp smdp = build_options_smdp(h);
    auto rows = run_benchmark(h, smdp, taxi_queries(taxi), {reps, plan_mode(mode)});
    write_output(output, format == "json" ? benchmark_json(rows) + "\n" : benchmark_csv(rows));
    return kFound;
}

struct PddlArgs {
    std::size_t level = 1;
    std::optional<StateId> init, goal;
    std::string domain_out, problem_out;
};

int cmd_export(const Common& c, const PddlArgs& a) {
    TaxiDomain taxi = load_domain(c);
    Hierarchy h = taxi.build_hierarchy(reward_mode(c));
    PddlExport e = export_pddl(h, a.level, a.init, a.goal, "taxi");
    if (a.domain_out.empty() && a.problem_out.empty()) {
        std::cout << e.domain << "\n" << e.problem;
    } else {
        write_output(a.domain_out, e.domain);
        write_output(a.problem_out, e.problem);
    }
    std::cerr << e.num_predicates << " predicates, " << e.num_actions << " actions\n";
    return kFound;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Abstraction hierarchies and hierarchical planning on the Taxi domain"};
    app.require_subcommand(1);

    Common common;

    auto* build = app.add_subcommand("build", "construct and validate the hierarchy");
    add_common(build, common);
    std::string snapshot_out;
    build->add_option("--out", snapshot_out, "snapshot JSON path (stdout when omitted)");

    auto* plan = app.add_subcommand("plan", "answer a plan query");
    add_common(plan, common);
    PlanArgs plan_args;
    auto* qopt = plan->add_option("--query", plan_args.query_file, "query JSON file")
                     ->check(CLI::ExistingFile);
    plan->add_option("--B", plan_args.b, "start constraints, e.g. pass-at=blue,taxi-at=any-depot")
        ->excludes(qopt);
    plan->add_option("--G", plan_args.g, "goal constraints, e.g. pass-at=red")->excludes(qopt);
    plan->add_option("--at-level", plan_args.at_level, "highest level to search from");
    plan->add_option("--mode", plan_args.mode, "planner")->check(CLI::IsMember({"reach", "dp"}));
    plan->add_flag("--quiet", plan_args.quiet, "omit primitive action listings");

    auto* bench = app.add_subcommand("bench", "time hierarchical, options and flat planning");
    add_common(bench, common);
    std::size_t reps = 100;
    std::string format = "csv", bench_mode = "dp", bench_output;
    bench->add_option("--reps", reps, "repetitions per query")->check(CLI::PositiveNumber);
    bench->add_option("--out", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    bench->add_option("--mode", bench_mode, "planner")->check(CLI::IsMember({"reach", "dp"}));
    bench->add_option("--output", bench_output, "output path (stdout when omitted)");

    auto* pddl = app.add_subcommand("export-pddl", "write a level as a STRIPS domain and problem");
    add_common(pddl, common);
    PddlArgs pddl_args;
    pddl->add_option("--level", pddl_args.level, "hierarchy level");
    pddl->add_option("--init", pddl_args.init, "initial abstract state id (default 0)");
    pddl->add_option("--goal", pddl_args.goal, "goal abstract state id (default last)");
    pddl->add_option("--domain-out", pddl_args.domain_out, "domain file");
    pddl->add_option("--problem-out", pddl_args.problem_out, "problem file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kFailed;
    }

    try {
        if (*build) return cmd_build(common, snapshot_out);
        if (*plan) return cmd_plan(common, plan_args);
        if (*bench) return cmd_bench(common, reps, format, bench_mode, bench_output);
        if (*pddl) return cmd_export(common, pddl_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kFailed;
}
