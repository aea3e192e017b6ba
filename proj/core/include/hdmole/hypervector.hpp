#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hdmole/rng.hpp"

namespace hdmole {

/// Accumulator element. 32-bit signed holds element-wise sums of bipolar
/// vectors up to +-(training set size) with huge headroom; integer arithmetic
/// keeps class hypervectors exact across any update order.
using Element = std::int32_t;

/// Dense hypervector of fixed dimension. Bipolar form holds {-1, 0, +1};
/// accumulator form holds bounded integers. Every operation preserves dim.
class Hypervector {
 public:
  Hypervector() = default;
  explicit Hypervector(std::size_t dim) : elems_(dim, 0) {}

  static Hypervector zeros(std::size_t dim) { return Hypervector(dim); }
  static Hypervector ones(std::size_t dim) {
    Hypervector hv(dim);
    for (auto& e : hv.elems_) e = 1;
    return hv;
  }

  std::size_t dim() const noexcept { return elems_.size(); }

  Element operator[](std::size_t i) const { return elems_[i]; }
  Element& operator[](std::size_t i) { return elems_[i]; }

  std::span<const Element> elements() const noexcept { return elems_; }
  std::span<Element> elements() noexcept { return elems_; }

  friend bool operator==(const Hypervector&, const Hypervector&) = default;

 private:
  std::vector<Element> elems_;
};

/// Fresh bipolar base hypervector with elements drawn i.i.d. uniform over
/// {-1, +1} by a counter-style generator keyed on (seed, index, position).
/// Identical inputs give bit-identical vectors on every platform.
Hypervector random_hv(Seed seed, std::uint64_t index, std::size_t dim);

/// Element-wise sum (accumulator form). Commutative, associative.
Hypervector bundle(const Hypervector& a, const Hypervector& b);

/// acc += v without allocating.
void bundle_into(Hypervector& acc, const Hypervector& v);

/// Element-wise product. Bipolar x bipolar stays bipolar.
Hypervector bind(const Hypervector& a, const Hypervector& b);

/// Cyclic rotation right by k positions: element i moves to (i+k) mod dim.
/// The direction is frozen for reproducibility.
Hypervector permute(const Hypervector& a, std::size_t k);

/// Sign map: positive -> +1, negative -> -1, zero stays 0.
Hypervector bipolarize(const Hypervector& a);

/// Exact integer dot product.
std::int64_t dot(const Hypervector& a, const Hypervector& b);

/// Exact integer squared L2 norm.
std::int64_t norm_squared(const Hypervector& a);

/// Cosine similarity in [-1, 1]. Dot and norms are exact integers; one
/// floating division at the end. Throws UndefinedSimilarityError if either
/// operand is all-zero.
double cosine(const Hypervector& a, const Hypervector& b);

}  // namespace hdmole
