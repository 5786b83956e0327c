#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace skillsym {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

inline constexpr StateId kNoState = static_cast<StateId>(-1);
inline constexpr ActionId kNoAction = static_cast<ActionId>(-1);

/// A set of states at one hierarchy level. Every symbol's grounding classifier is
/// realized as one of these (dense membership over the level's StateSpace).
class GroundingSet {
public:
    GroundingSet() = default;
    GroundingSet(std::size_t level_index, std::size_t universe_size);
    GroundingSet(std::size_t level_index, std::size_t universe_size,
                 std::initializer_list<StateId> members);

    static GroundingSet from_members(std::size_t level_index, std::size_t universe_size,
                                     const std::vector<StateId>& members);
    static GroundingSet full(std::size_t level_index, std::size_t universe_size);

    std::size_t level_index() const { return level_; }
    std::size_t universe_size() const { return bits_.size(); }

    bool contains(StateId s) const { return s < bits_.size() && bits_.test(s); }
    void insert(StateId s);
    void erase(StateId s);

    std::size_t size() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }

    std::vector<StateId> members() const;
    /// Lowest member, or kNoState when empty.
    StateId first() const;

    GroundingSet unite(const GroundingSet& other) const;
    GroundingSet intersect(const GroundingSet& other) const;
    GroundingSet subtract(const GroundingSet& other) const;
    bool is_subset_of(const GroundingSet& other) const;
    bool intersects(const GroundingSet& other) const;

    GroundingSet& operator|=(const GroundingSet& other);

    friend bool operator==(const GroundingSet& a, const GroundingSet& b) {
        return a.level_ == b.level_ && a.bits_ == b.bits_;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i))
            f(static_cast<StateId>(i));
    }

private:
    using Bits = boost::dynamic_bitset<std::uint64_t>;

    void check_compatible(const GroundingSet& other) const;

    std::size_t level_ = 0;
    Bits bits_;
};

/// A propositional symbol: a name for a test together with the set it accepts.
struct Symbol {
    std::string name;
    GroundingSet grounding;
};

/// Symbols of one level, unique by name.
class SymbolTable {
public:
    const Symbol& add(std::string name, GroundingSet grounding);
    const Symbol* find(const std::string& name) const;
    const std::map<std::string, Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }

private:
    std::map<std::string, Symbol> symbols_;
};

} // namespace skillsym
