#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hmlam/hyperbolic.hpp"

namespace hmlam::detail {

// Spatial hash over endpoint-angle pairs for near-duplicate lookup of
// unoriented geodesics. Cells are at least as wide as eps, so a match is
// always found within the 3x3 neighbourhood (with circular wrap).
class GeodesicIndex {
 public:
  explicit GeodesicIndex(double eps) : eps_(eps) {
    cell_ = std::max(eps, 1e-7);
    cells_ = static_cast<std::int64_t>(std::floor(kTwoPi / cell_));
    if (cells_ < 3) cells_ = 3;
    cell_ = kTwoPi / static_cast<double>(cells_);
  }

  // Index of a previously inserted geodesic matching g, if any.
  std::optional<std::size_t> find(const Geodesic& g) const {
    const auto all = find_all(g);
    if (all.empty()) return std::nullopt;
    return all.front();
  }

  // All previously inserted geodesics matching g, ascending.
  std::vector<std::size_t> find_all(const Geodesic& g) const {
    const std::int64_t ca = cell(g.a().angle());
    const std::int64_t cb = cell(g.b().angle());
    std::vector<std::size_t> out;
    for (std::int64_t da = -1; da <= 1; ++da) {
      for (std::int64_t db = -1; db <= 1; ++db) {
        for (const auto key : {pack(ca + da, cb + db), pack(cb + da, ca + db)}) {
          const auto it = buckets_.find(key);
          if (it == buckets_.end()) continue;
          for (std::size_t idx : it->second) {
            if (stored_[idx].same_as(g, eps_)) out.push_back(idx);
          }
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::size_t insert(const Geodesic& g) {
    const std::size_t idx = stored_.size();
    stored_.push_back(g);
    buckets_[pack(cell(g.a().angle()), cell(g.b().angle()))].push_back(idx);
    return idx;
  }

 private:
  std::int64_t cell(double theta) const {
    auto c = static_cast<std::int64_t>(std::floor(theta / cell_));
    return c;
  }
  std::uint64_t pack(std::int64_t a, std::int64_t b) const {
    a = ((a % cells_) + cells_) % cells_;
    b = ((b % cells_) + cells_) % cells_;
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(cells_) + static_cast<std::uint64_t>(b);
  }

  double eps_;
  double cell_;
  std::int64_t cells_;
  std::vector<Geodesic> stored_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

}  // namespace hmlam::detail
