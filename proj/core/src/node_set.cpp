#include "seqimit/node_set.hpp"

#include <bit>
#include <stdexcept>

namespace seqimit {

namespace {
constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t universe) { return (universe + kWordBits - 1) / kWordBits; }
}  // namespace

NodeSet::NodeSet(std::size_t universe) : universe_(universe), words_(word_count(universe), 0) {}

NodeSet::NodeSet(std::size_t universe, std::initializer_list<NodeId> members) : NodeSet(universe) {
    for (NodeId v : members) insert(v);
}

NodeSet NodeSet::full(std::size_t universe) { return prefix(universe, universe); }

NodeSet NodeSet::prefix(std::size_t universe, std::size_t end) {
    NodeSet s(universe);
    if (end > universe) end = universe;
    for (std::size_t w = 0; w < end / kWordBits; ++w) s.words_[w] = ~std::uint64_t{0};
    if (end % kWordBits != 0) s.words_[end / kWordBits] = (std::uint64_t{1} << (end % kWordBits)) - 1;
    return s;
}

std::size_t NodeSet::size() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool NodeSet::empty() const noexcept {
    for (auto w : words_)
        if (w != 0) return false;
    return true;
}

bool NodeSet::contains(NodeId v) const noexcept {
    if (v >= universe_) return false;
    return (words_[v / kWordBits] >> (v % kWordBits)) & 1U;
}

void NodeSet::insert(NodeId v) {
    if (v >= universe_) throw std::out_of_range("NodeSet::insert: node index outside universe");
    words_[v / kWordBits] |= std::uint64_t{1} << (v % kWordBits);
}

void NodeSet::erase(NodeId v) noexcept {
    if (v >= universe_) return;
    words_[v / kWordBits] &= ~(std::uint64_t{1} << (v % kWordBits));
}

void NodeSet::clear() noexcept {
    for (auto& w : words_) w = 0;
}

static void check_same_universe(const NodeSet& a, const NodeSet& b) {
    if (a.universe() != b.universe()) throw std::invalid_argument("NodeSet: universe mismatch");
}

NodeSet& NodeSet::operator|=(const NodeSet& other) {
    check_same_universe(*this, other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
}

NodeSet& NodeSet::operator&=(const NodeSet& other) {
    check_same_universe(*this, other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

NodeSet& NodeSet::operator-=(const NodeSet& other) {
    check_same_universe(*this, other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
    return *this;
}

bool operator==(const NodeSet& a, const NodeSet& b) noexcept {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
}

bool NodeSet::is_subset_of(const NodeSet& other) const noexcept {
    if (universe_ != other.universe_) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
        if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
}

bool NodeSet::intersects(const NodeSet& other) const noexcept {
    const std::size_t n = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < n; ++i)
        if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
}

NodeId NodeSet::first() const noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return universe_;
}

NodeId NodeSet::next(NodeId v) const noexcept {
    NodeId start = v + 1;
    if (start >= universe_) return universe_;
    std::size_t w = start / kWordBits;
    std::uint64_t bits = words_[w] & (~std::uint64_t{0} << (start % kWordBits));
    while (true) {
        if (bits != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        if (++w >= words_.size()) return universe_;
        bits = words_[w];
    }
}

std::vector<NodeId> NodeSet::to_vector() const {
    std::vector<NodeId> out;
    out.reserve(size());
    for (NodeId v : *this) out.push_back(v);
    return out;
}

}  // namespace seqimit
