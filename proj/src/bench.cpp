#include "skillsym/bench.hpp"

#include <chrono>
#include <cstdio>

#include "json.hpp"
#include "skillsym/error.hpp"

namespace skillsym {

Mdp build_options_smdp(const Hierarchy& h) {
    const Mdp& base = h.base();
    std::vector<std::string> names = base.actions();
    for (std::size_t j = 1; j <= h.top(); ++j)
        for (const auto& o : h.level(j).options) names.push_back(o.id + "@" + std::to_string(j));

    Mdp smdp(base.space(), names, base.gamma());
    for (StateId x = 0; x < base.num_states(); ++x)
        for (ActionId a = 0; a < base.num_actions(); ++a)
            if (base.applicable(x, a))
                smdp.set_transition(x, a, base.successor(x, a), base.reward(x, a));

    ActionId next = static_cast<ActionId>(base.num_actions());
    for (std::size_t j = 1; j <= h.top(); ++j) {
        for (ActionId o = 0; o < h.level(j).options.size(); ++o, ++next) {
            for (StateId x = 0; x < base.num_states(); ++x) {
                auto trace = execute_option_from_base(h, j, o, x);
                if (trace && trace->steps > 0)
                    smdp.set_transition(x, next, trace->end, trace->cumulative_reward);
            }
        }
    }
    return smdp;
}

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& f) {
    auto t0 = Clock::now();
    f();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

} // namespace

std::vector<BenchmarkRow> run_benchmark(const Hierarchy& h, const Mdp& smdp,
                                        const std::vector<NamedQuery>& queries,
                                        BenchmarkConfig config) {
    if (config.repetitions == 0) throw std::invalid_argument("benchmark needs at least one repetition");
    if (smdp.num_states() != h.base().num_states())
        throw LevelMismatch("SMDP does not share the base state space");

    std::vector<BenchmarkRow> rows;
    for (const auto& nq : queries) {
        const PlanQuery& q = nq.query;
        BenchmarkRow row;
        row.query = nq.id;
        row.repetitions = config.repetitions;
        if (auto warm = answer_query(h, q, {config.mode, {}}); warm.answer)
            row.level = warm.answer->level;
        findplan(smdp, q.start, q.goal, config.mode);
        findplan(h.base(), q.start, q.goal, config.mode);

        // Modes alternate within each repetition so drift hits all of them alike.
        for (std::size_t r = 0; r < config.repetitions; ++r) {
            QueryResult res = answer_query(h, q, {config.mode, {}});
            row.match_ms += res.record.total_match_ms();
            row.plan_ms += res.record.total_plan_ms();
            row.options_ms += time_ms([&] { findplan(smdp, q.start, q.goal, config.mode); });
            row.flat_ms += time_ms([&] { findplan(h.base(), q.start, q.goal, config.mode); });
        }
        const double n = static_cast<double>(config.repetitions);
        row.match_ms /= n;
        row.plan_ms /= n;
        row.options_ms /= n;
        row.flat_ms /= n;
        row.hier_ms = row.match_ms + row.plan_ms;
        rows.push_back(row);
    }
    return rows;
}

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows) {
    std::string out = "query,level,match_ms,plan_ms,hier_ms,options_ms,flat_ms\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.query.c_str(),
                      r.level ? std::to_string(*r.level).c_str() : "", r.match_ms, r.plan_ms,
                      r.hier_ms, r.options_ms, r.flat_ms);
        out += buf;
    }
    return out;
}

std::string benchmark_json(const std::vector<BenchmarkRow>& rows, int indent) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        out.push_back({{"query", r.query},
                       {"level", r.level ? nlohmann::json(*r.level) : nlohmann::json(nullptr)},
                       {"match_ms", r.match_ms},
                       {"plan_ms", r.plan_ms},
                       {"hier_ms", r.hier_ms},
                       {"options_ms", r.options_ms},
                       {"flat_ms", r.flat_ms},
                       {"repetitions", r.repetitions}});
    }
    return out.dump(indent);
}

} // namespace skillsym
