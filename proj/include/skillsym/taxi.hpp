#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skillsym/core.hpp"
#include "skillsym/hierarchy.hpp"
#include "skillsym/planner.hpp"

namespace skillsym {

struct Cell {
    int x = 0;
    int y = 0;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

std::string to_string(Cell c);

struct Depot {
    std::string name;
    Cell cell;
};

/// Grid layout with y growing northwards. A wall blocks movement between two
/// adjacent cells in both directions.
struct TaxiSpec {
    int width = 5;
    int height = 5;
    std::vector<std::pair<Cell, Cell>> walls;
    std::vector<Depot> depots;
};

/// The classic layout: depots red (0,4), green (4,4), blue (3,0), yellow (0,0).
TaxiSpec default_taxi_spec();
TaxiSpec parse_taxi_spec(const std::string& json_text);
TaxiSpec load_taxi_spec(const std::string& path);
std::string taxi_spec_to_json(const TaxiSpec& spec);

struct TaxiState {
    Cell taxi;
    /// Equal to `taxi` while the passenger rides.
    Cell pass;
    bool in_taxi = false;
    friend bool operator==(const TaxiState&, const TaxiState&) = default;
};

enum TaxiAction : ActionId { MoveNorth = 0, MoveSouth, MoveEast, MoveWest, PickUp, PutDown };

/// Location constraints expanded to sets of base states. An absent field
/// matches anything; the passenger's cell is the taxi's while riding.
struct TaxiConstraint {
    std::optional<std::vector<Cell>> taxi_at;
    std::optional<std::vector<Cell>> pass_at;
    std::optional<bool> in_taxi;
};

class TaxiDomain {
public:
    explicit TaxiDomain(TaxiSpec spec = default_taxi_spec());

    const TaxiSpec& spec() const { return spec_; }
    std::size_t num_cells() const { return static_cast<std::size_t>(spec_.width * spec_.height); }
    /// width*height squared states with the passenger outside, then one per
    /// cell with the passenger riding.
    std::size_t num_states() const { return num_cells() * num_cells() + num_cells(); }

    StateId encode(const TaxiState& s) const;
    TaxiState decode(StateId s) const;
    /// Reads the taxi variables of any factored level of a taxi hierarchy.
    TaxiState state_of(const StateSpace& space, StateId s) const;
    std::string label(const TaxiState& s) const;

    bool inside(Cell c) const;
    /// True when moving from `from` to the adjacent `to` is impossible.
    bool blocked(Cell from, Cell to) const;
    const Depot& depot(std::string_view name) const;
    std::optional<std::string> depot_at(Cell c) const;
    std::vector<Cell> depot_cells() const;

    Mdp build_base() const;

    /// drive-to-<depot> for every depot, then pick-up and put-down.
    std::vector<OptionSkill> options_level1(const Mdp& base) const;
    /// Passenger outside with taxi and passenger both on depots.
    GroundingSet seed_states() const;
    /// passenger-to-<depot> over the level-1 states of `h`.
    std::vector<OptionSkill> options_level2(const Hierarchy& h) const;
    Hierarchy build_hierarchy(RewardMode mode = RewardMode::UniformPenalty) const;

    GroundingSet expand(const TaxiConstraint& c) const;

    /// "pass-at=blue,taxi-at=any-depot,in-taxi=false"; cells as x:y.
    TaxiConstraint parse_constraint(std::string_view text) const;
    /// {"B": {...}, "G": {...}} with taxi-at / pass-at / in-taxi keys.
    PlanQuery parse_query(const std::string& json_text) const;

private:
    std::vector<ActionId> navigation(Cell target) const;

    TaxiSpec spec_;
};

/// The three benchmark queries (Q1, Q2, Q3).
std::vector<NamedQuery> taxi_queries(const TaxiDomain& taxi);

} // namespace skillsym
