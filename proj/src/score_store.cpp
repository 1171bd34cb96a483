#include "conformal/score_store.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "conformal/random_stream.hpp"

namespace conformal {

void ScoreStore::pull(std::uint32_t n) {
  Node& node = nodes_[n];
  node.total = node.count + total_of(node.left) + total_of(node.right);
}

void ScoreStore::split(std::uint32_t t, double key, std::uint32_t& lo,
                       std::uint32_t& hi) {
  if (t == kNil) {
    lo = hi = kNil;
    return;
  }
  if (nodes_[t].key < key) {
    std::uint32_t right = nodes_[t].right;
    split(right, key, right, hi);
    nodes_[t].right = right;
    lo = t;
  } else {
    std::uint32_t left = nodes_[t].left;
    split(left, key, lo, left);
    nodes_[t].left = left;
    hi = t;
  }
  pull(t);
}

std::uint32_t ScoreStore::merge(std::uint32_t a, std::uint32_t b) {
  if (a == kNil) return b;
  if (b == kNil) return a;
  if (nodes_[a].priority > nodes_[b].priority) {
    nodes_[a].right = merge(nodes_[a].right, b);
    pull(a);
    return a;
  }
  nodes_[b].left = merge(a, nodes_[b].left);
  pull(b);
  return b;
}

void ScoreStore::insert(double score) {
  if (!std::isfinite(score)) {
    throw std::invalid_argument("conformity score must be finite, got " +
                                std::to_string(score));
  }

  // Existing key: bump multiplicity along the search path.
  std::uint32_t n = root_;
  while (n != kNil && nodes_[n].key != score) {
    n = score < nodes_[n].key ? nodes_[n].left : nodes_[n].right;
  }
  if (n != kNil) {
    for (std::uint32_t m = root_;; m = score < nodes_[m].key ? nodes_[m].left
                                                             : nodes_[m].right) {
      ++nodes_[m].total;
      if (m == n) break;
    }
    ++nodes_[n].count;
    return;
  }

  if (nodes_.size() >= kNil) throw std::length_error("score store is full");
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{score, splitmix64(id), 1, 1});
  std::uint32_t lo = kNil;
  std::uint32_t hi = kNil;
  split(root_, score, lo, hi);
  root_ = merge(merge(lo, id), hi);
}

std::size_t ScoreStore::count_less(double score) const {
  std::size_t acc = 0;
  std::uint32_t n = root_;
  while (n != kNil) {
    const Node& node = nodes_[n];
    if (node.key < score) {
      acc += total_of(node.left) + node.count;
      n = node.right;
    } else {
      n = node.left;
    }
  }
  return acc;
}

std::size_t ScoreStore::count_equal(double score) const {
  std::uint32_t n = root_;
  while (n != kNil) {
    const Node& node = nodes_[n];
    if (node.key == score) return node.count;
    n = score < node.key ? node.left : node.right;
  }
  return 0;
}

std::size_t ScoreStore::count_less_equal(double score) const {
  return count_less(score) + count_equal(score);
}

std::size_t ScoreStore::count_greater(double score) const {
  return size() - count_less_equal(score);
}

double ScoreStore::kth_smallest(std::size_t k) const {
  if (k == 0 || k > size()) {
    throw std::out_of_range("kth_smallest: k=" + std::to_string(k) +
                            " outside [1, " + std::to_string(size()) + "]");
  }
  std::uint32_t n = root_;
  while (true) {
    const Node& node = nodes_[n];
    const std::size_t left = total_of(node.left);
    if (k <= left) {
      n = node.left;
    } else if (k <= left + node.count) {
      return node.key;
    } else {
      k -= left + node.count;
      n = node.right;
    }
  }
}

void ScoreStore::clear() {
  nodes_.clear();
  root_ = kNil;
}

}  // namespace conformal
