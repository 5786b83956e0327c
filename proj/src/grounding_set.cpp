#include "skillsym/grounding_set.hpp"

#include "skillsym/error.hpp"

namespace skillsym {

GroundingSet::GroundingSet(std::size_t level_index, std::size_t universe_size)
    : level_(level_index), bits_(universe_size) {}

GroundingSet::GroundingSet(std::size_t level_index, std::size_t universe_size,
                           std::initializer_list<StateId> members)
    : GroundingSet(level_index, universe_size) {
    for (StateId s : members) insert(s);
}

GroundingSet GroundingSet::from_members(std::size_t level_index, std::size_t universe_size,
                                        const std::vector<StateId>& members) {
    GroundingSet out(level_index, universe_size);
    for (StateId s : members) out.insert(s);
    return out;
}

GroundingSet GroundingSet::full(std::size_t level_index, std::size_t universe_size) {
    GroundingSet out(level_index, universe_size);
    out.bits_.set();
    return out;
}

void GroundingSet::insert(StateId s) {
    if (s >= bits_.size())
        throw std::out_of_range("state " + std::to_string(s) + " outside level " +
                                std::to_string(level_) + " of size " +
                                std::to_string(bits_.size()));
    bits_.set(s);
}

void GroundingSet::erase(StateId s) {
    if (s < bits_.size()) bits_.reset(s);
}

std::vector<StateId> GroundingSet::members() const {
    std::vector<StateId> out;
    out.reserve(size());
    for_each([&](StateId s) { out.push_back(s); });
    return out;
}

StateId GroundingSet::first() const {
    auto i = bits_.find_first();
    return i == Bits::npos ? kNoState : static_cast<StateId>(i);
}

void GroundingSet::check_compatible(const GroundingSet& other) const {
    if (level_ != other.level_)
        throw LevelMismatch("level " + std::to_string(level_) + " vs level " +
                            std::to_string(other.level_));
    if (bits_.size() != other.bits_.size())
        throw LevelMismatch("universe size " + std::to_string(bits_.size()) + " vs " +
                            std::to_string(other.bits_.size()) + " at level " +
                            std::to_string(level_));
}

GroundingSet GroundingSet::unite(const GroundingSet& other) const {
    check_compatible(other);
    GroundingSet out = *this;
    out.bits_ |= other.bits_;
    return out;
}

GroundingSet GroundingSet::intersect(const GroundingSet& other) const {
    check_compatible(other);
    GroundingSet out = *this;
    out.bits_ &= other.bits_;
    return out;
}

GroundingSet GroundingSet::subtract(const GroundingSet& other) const {
    check_compatible(other);
    GroundingSet out = *this;
    out.bits_ -= other.bits_;
    return out;
}

bool GroundingSet::is_subset_of(const GroundingSet& other) const {
    check_compatible(other);
    return bits_.is_subset_of(other.bits_);
}

bool GroundingSet::intersects(const GroundingSet& other) const {
    check_compatible(other);
    return bits_.intersects(other.bits_);
}

GroundingSet& GroundingSet::operator|=(const GroundingSet& other) {
    check_compatible(other);
    bits_ |= other.bits_;
    return *this;
}

const Symbol& SymbolTable::add(std::string name, GroundingSet grounding) {
    auto [it, inserted] = symbols_.try_emplace(name, Symbol{name, std::move(grounding)});
    if (!inserted) throw InvalidModel("duplicate symbol name '" + name + "'");
    return it->second;
}

const Symbol* SymbolTable::find(const std::string& name) const {
    auto it = symbols_.find(name);
    return it == symbols_.end() ? nullptr : &it->second;
}

} // namespace skillsym
