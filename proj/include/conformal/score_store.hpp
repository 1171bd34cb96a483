#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace conformal {

// Ordered multiset of conformity scores with logarithmic insert and rank
// queries. Backed by a treap over distinct values; each node carries a
// multiplicity and the total multiplicity of its subtree. Priorities come from
// a fixed counter hash so the shape is deterministic.
//
// Ties use exact floating-point equality.
class ScoreStore {
 public:
  ScoreStore() = default;

  // Throws std::invalid_argument for non-finite scores.
  void insert(double score);

  std::size_t size() const { return root_ == kNil ? 0 : nodes_[root_].total; }
  bool empty() const { return size() == 0; }

  std::size_t count_less(double score) const;
  std::size_t count_equal(double score) const;
  std::size_t count_greater(double score) const;
  std::size_t count_less_equal(double score) const;

  // k-th smallest stored score, 1-based. Throws std::out_of_range unless
  // 1 <= k <= size().
  double kth_smallest(std::size_t k) const;

  // Number of distinct values held.
  std::size_t distinct() const { return nodes_.size(); }

  void clear();

 private:
  static constexpr std::uint32_t kNil = 0xffffffffu;

  struct Node {
    double key;
    std::uint64_t priority;
    std::size_t count;
    std::size_t total;
    std::uint32_t left = kNil;
    std::uint32_t right = kNil;
  };

  std::size_t total_of(std::uint32_t n) const {
    return n == kNil ? 0 : nodes_[n].total;
  }
  void pull(std::uint32_t n);
  // Splits t into keys < key and keys > key; key must not be present.
  void split(std::uint32_t t, double key, std::uint32_t& lo, std::uint32_t& hi);
  std::uint32_t merge(std::uint32_t a, std::uint32_t b);

  std::vector<Node> nodes_;
  std::uint32_t root_ = kNil;
};

}  // namespace conformal
