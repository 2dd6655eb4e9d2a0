#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace seqimit {

/// Index of a node inside one CausalDiagram. Indices equal temporal positions.
using NodeId = std::size_t;

/// Fixed-universe set of node indices, iterated in ascending (temporal) order.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t universe);
    NodeSet(std::size_t universe, std::initializer_list<NodeId> members);

    static NodeSet full(std::size_t universe);
    /// Nodes with index < end (used for before()).
    static NodeSet prefix(std::size_t universe, std::size_t end);

    std::size_t universe() const noexcept { return universe_; }
    std::size_t size() const noexcept;
    bool empty() const noexcept;

    bool contains(NodeId v) const noexcept;
    void insert(NodeId v);
    void erase(NodeId v) noexcept;
    void clear() noexcept;

    NodeSet& operator|=(const NodeSet& other);
    NodeSet& operator&=(const NodeSet& other);
    NodeSet& operator-=(const NodeSet& other);

    friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
    friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
    friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }
    friend bool operator==(const NodeSet& a, const NodeSet& b) noexcept;

    bool is_subset_of(const NodeSet& other) const noexcept;
    bool intersects(const NodeSet& other) const noexcept;

    /// Smallest member, or universe() when empty.
    NodeId first() const noexcept;
    /// Next member strictly after v, or universe() when none.
    NodeId next(NodeId v) const noexcept;

    std::vector<NodeId> to_vector() const;

    class const_iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = NodeId;
        using difference_type = std::ptrdiff_t;
        using pointer = const NodeId*;
        using reference = NodeId;

        const_iterator() = default;
        const_iterator(const NodeSet* set, NodeId pos) : set_(set), pos_(pos) {}
        NodeId operator*() const noexcept { return pos_; }
        const_iterator& operator++() noexcept {
            pos_ = set_->next(pos_);
            return *this;
        }
        const_iterator operator++(int) noexcept {
            auto copy = *this;
            ++*this;
            return copy;
        }
        friend bool operator==(const const_iterator& a, const const_iterator& b) noexcept {
            return a.pos_ == b.pos_;
        }

    private:
        const NodeSet* set_ = nullptr;
        NodeId pos_ = 0;
    };

    const_iterator begin() const noexcept { return {this, first()}; }
    const_iterator end() const noexcept { return {this, universe_}; }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace seqimit
