#include "hdmole/hypervector.hpp"

#include <algorithm>
#include <cmath>

#include "hdmole/error.hpp"

namespace hdmole {

namespace {

void require_same_dim(const Hypervector& a, const Hypervector& b,
                      const char* op) {
  if (a.dim() != b.dim()) {
    throw InvalidOperandError(std::string(op) + ": dimension mismatch (" +
                              std::to_string(a.dim()) + " vs " +
                              std::to_string(b.dim()) + ")");
  }
}

}  // namespace

Hypervector random_hv(Seed seed, std::uint64_t index, std::size_t dim) {
  if (dim == 0) {
    throw InvalidDimensionError("random_hv: dim must be >= 1");
  }
  Hypervector out(dim);
  auto elems = out.elements();
  // One hash word covers 64 elements; bit j of block b is element 64*b + j.
  const std::size_t blocks = (dim + 63) / 64;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::uint64_t word = rng::cell(seed.value, index, b);
    const std::size_t base = b * 64;
    const std::size_t count = std::min<std::size_t>(64, dim - base);
    for (std::size_t j = 0; j < count; ++j) {
      elems[base + j] = ((word >> j) & 1u) ? 1 : -1;
    }
  }
  return out;
}

Hypervector bundle(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "bundle");
  Hypervector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
  return out;
}

void bundle_into(Hypervector& acc, const Hypervector& v) {
  require_same_dim(acc, v, "bundle");
  for (std::size_t i = 0; i < acc.dim(); ++i) acc[i] += v[i];
}

Hypervector bind(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "bind");
  Hypervector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] * b[i];
  return out;
}

Hypervector permute(const Hypervector& a, std::size_t k) {
  const std::size_t d = a.dim();
  if (d == 0) return a;
  const std::size_t shift = k % d;
  if (shift == 0) return a;
  Hypervector out(d);
  // out[(i + shift) mod d] = a[i], in two contiguous runs
  for (std::size_t i = 0; i < d - shift; ++i) out[i + shift] = a[i];
  for (std::size_t i = d - shift; i < d; ++i) out[i + shift - d] = a[i];
  return out;
}

Hypervector bipolarize(const Hypervector& a) {
  Hypervector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    out[i] = (a[i] > 0) ? 1 : (a[i] < 0 ? -1 : 0);
  }
  return out;
}

std::int64_t dot(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "dot");
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    acc += static_cast<std::int64_t>(a[i]) * static_cast<std::int64_t>(b[i]);
  }
  return acc;
}

std::int64_t norm_squared(const Hypervector& a) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    acc += static_cast<std::int64_t>(a[i]) * static_cast<std::int64_t>(a[i]);
  }
  return acc;
}

double cosine(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "cosine");
  const std::int64_t na = norm_squared(a);
  const std::int64_t nb = norm_squared(b);
  if (na == 0 || nb == 0) {
    throw UndefinedSimilarityError("cosine: all-zero operand");
  }
  const std::int64_t d = dot(a, b);
  const double sim = static_cast<double>(d) /
                     (std::sqrt(static_cast<double>(na)) *
                      std::sqrt(static_cast<double>(nb)));
  return std::clamp(sim, -1.0, 1.0);
}

}  // namespace hdmole
