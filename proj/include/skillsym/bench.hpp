#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "skillsym/hierarchy.hpp"
#include "skillsym/planner.hpp"

namespace skillsym {

/// Mean wall-clock milliseconds per query for the three planning modes.
struct BenchmarkRow {
    std::string query;
    std::optional<std::size_t> level;
    double match_ms = 0;
    double plan_ms = 0;
    /// match_ms + plan_ms.
    double hier_ms = 0;
    double options_ms = 0;
    double flat_ms = 0;
    std::size_t repetitions = 0;
};

struct BenchmarkConfig {
    std::size_t repetitions = 100;
    PlanMode mode = PlanMode::ValueIteration;
};

/// The base MDP with every option of every abstract level added as a
/// temporally extended action. Option transitions that take no primitive
/// step are dropped.
Mdp build_options_smdp(const Hierarchy& h);

/// Times the hierarchical query, planning in `smdp` and flat planning in the
/// base MDP, all with the same planner. One untimed warm-up per mode.
std::vector<BenchmarkRow> run_benchmark(const Hierarchy& h, const Mdp& smdp,
                                        const std::vector<NamedQuery>& queries,
                                        BenchmarkConfig config = {});

std::string benchmark_csv(const std::vector<BenchmarkRow>& rows);
std::string benchmark_json(const std::vector<BenchmarkRow>& rows, int indent = 2);

} // namespace skillsym
