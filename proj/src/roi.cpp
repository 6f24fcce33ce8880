#include "polsar/roi.hpp"

#include <algorithm>
#include <string>

#include "polsar/error.hpp"
#include "polsar/random.hpp"

namespace polsar {

void check_bounds(const RoiSet& roi, std::size_t width, std::size_t height) {
  for (std::size_t m = 0; m < roi.classes.size(); ++m) {
    for (const auto& r : roi.classes[m]) {
      if (r.x1 < r.x0 || r.y1 < r.y0 || r.x1 >= width || r.y1 >= height)
        throw Error(ErrorCode::OutOfBounds,
                    "ROI rectangle of class " + std::to_string(m + 1) + " (" +
                        std::to_string(r.x0) + "," + std::to_string(r.y0) + ")-(" +
                        std::to_string(r.x1) + "," + std::to_string(r.y1) +
                        ") is outside the " + std::to_string(width) + "x" +
                        std::to_string(height) + " image");
    }
  }
}

std::vector<Pixel> roi_pixels(const RoiSet& roi, std::size_t m) {
  std::vector<Pixel> px;
  for (const auto& r : roi.classes.at(m))
    for (std::size_t y = r.y0; y <= r.y1; ++y)
      for (std::size_t x = r.x0; x <= r.x1; ++x) px.push_back({x, y});
  std::sort(px.begin(), px.end());
  px.erase(std::unique(px.begin(), px.end()), px.end());
  return px;
}

Split split_roi(const RoiSet& roi, std::uint64_t seed) {
  Split s;
  for (std::size_t m = 0; m < roi.classes.size(); ++m) {
    std::vector<Pixel> px = roi_pixels(roi, m);
    Rng rng(derive_seed(seed, m + 1));
    // Fisher-Yates with an explicit draw so the permutation is fixed by the seed.
    for (std::size_t i = px.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(px[i - 1], px[j]);
    }
    const std::size_t n_train = (px.size() + 1) / 2;
    s.train.emplace_back(px.begin(), px.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.emplace_back(px.begin() + static_cast<std::ptrdiff_t>(n_train), px.end());
  }
  return s;
}

}  // namespace polsar
