#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace polsar {

/// Inclusive pixel rectangle.
struct RoiRect {
  std::size_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  friend bool operator==(const RoiRect&, const RoiRect&) = default;
};

/// Rectangles per class; classes[m] holds the rectangles of class m + 1.
struct RoiSet {
  std::vector<std::vector<RoiRect>> classes;
  std::size_t class_count() const { return classes.size(); }
  friend bool operator==(const RoiSet&, const RoiSet&) = default;
};

struct Pixel {
  std::size_t x = 0, y = 0;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Disjoint train and test halves of each class's ROI pixels.
struct Split {
  std::vector<std::vector<Pixel>> train;
  std::vector<std::vector<Pixel>> test;
};

/// Throws OutOfBounds when a rectangle leaves the width x height image or
/// has x1 < x0 or y1 < y0.
void check_bounds(const RoiSet& roi, std::size_t width, std::size_t height);

/// Sorted, de-duplicated pixels of class index m (zero-based).
std::vector<Pixel> roi_pixels(const RoiSet& roi, std::size_t m);

/// Simple random sampling without replacement: each class's pixels are
/// shuffled with a stream derived from (seed, class) and the first
/// ceil(n/2) become training pixels. Depends only on the pixel set and seed.
Split split_roi(const RoiSet& roi, std::uint64_t seed);

}  // namespace polsar
