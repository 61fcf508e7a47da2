#pragma once

// Reduced cohomology of the full subcomplexes of a fan's face complex.
// For a ray subset S the complex has one face per cone whose rays lie in S;
// the empty face is included so that H~^{-1}(empty) is one-dimensional.

#include <algorithm>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "qample/lattice.hpp"
#include "qample/linalg.hpp"

namespace qample {

using RayMask = std::uint32_t;

inline RayMask mask_of(const Cone& c) {
  RayMask m = 0;
  for (int r : c) m |= RayMask{1} << r;
  return m;
}

// out[s] = dim H~^{s-1} of the complex given by faces_by_size (faces with s
// rays), i.e. the contribution to h^s of one weight with this pattern.
template <class F>
std::vector<Int> reduced_cohomology(const F& field, const std::vector<std::vector<Cone>>& faces_by_size) {
  const std::size_t top = faces_by_size.size();
  std::vector<std::size_t> ranks(top + 1, 0);
  for (std::size_t s = 1; s < top; ++s) {
    const auto& lower = faces_by_size[s - 1];
    const auto& upper = faces_by_size[s];
    if (lower.empty() || upper.empty()) continue;
    Matrix<F> d(field, lower.size(), upper.size());
    for (std::size_t c = 0; c < upper.size(); ++c) {
      const Cone& face = upper[c];
      for (std::size_t j = 0; j < face.size(); ++j) {
        Cone sub;
        sub.reserve(face.size() - 1);
        for (std::size_t k = 0; k < face.size(); ++k)
          if (k != j) sub.push_back(face[k]);
        auto it = std::lower_bound(lower.begin(), lower.end(), sub);
        d(static_cast<std::size_t>(it - lower.begin()), c) = field.from_int(j % 2 == 0 ? 1 : -1);
      }
    }
    ranks[s] = rank(std::move(d));
  }
  std::vector<Int> out(top, 0);
  for (std::size_t s = 0; s < top; ++s)
    out[s] = static_cast<Int>(faces_by_size[s].size() - ranks[s] - ranks[s + 1]);
  return out;
}

// Contributions per ray pattern for one fan and one coefficient field.
class PatternTable {
 public:
  template <class F>
  PatternTable(const Fan& fan, const F& field) : dim_(fan.rank()) {
    const int r = fan.num_rays();
    if (r > 22) throw std::invalid_argument("too many rays for the pattern table");
    std::vector<std::pair<RayMask, Cone>> cones;
    for (int d = 0; d <= fan.rank(); ++d)
      for (const auto& c : fan.cones(d)) cones.emplace_back(mask_of(c), c);
    const RayMask count = RayMask{1} << r;
    dims_.resize(count);
    for (RayMask s = 0; s < count; ++s) {
      std::vector<std::vector<Cone>> by_size(static_cast<std::size_t>(dim_) + 1);
      for (const auto& [m, c] : cones)
        if ((m & ~s) == 0) by_size[c.size()].push_back(c);
      dims_[s] = reduced_cohomology(field, by_size);
      bool nz = std::any_of(dims_[s].begin(), dims_[s].end(), [](Int v) { return v != 0; });
      if (nz) interesting_.push_back(s);
    }
  }

  const std::vector<Int>& operator[](RayMask s) const { return dims_[s]; }
  // Patterns with some nonzero contribution, ascending.
  const std::vector<RayMask>& interesting() const { return interesting_; }
  int dim() const { return dim_; }

 private:
  int dim_;
  std::vector<std::vector<Int>> dims_;
  std::vector<RayMask> interesting_;
};

}  // namespace qample
