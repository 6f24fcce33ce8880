#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "polsar/grid.hpp"
#include "polsar/key_value.hpp"
#include "polsar/roi.hpp"
#include "polsar/wishart.hpp"

namespace polsar {

/// Region geometry in image-relative coordinates ([0, 1] on both axes;
/// disk radii are relative to min(width, height)).
struct Region {
  enum class Shape { Background, Rect, Disk };
  Shape shape = Shape::Background;
  double a = 0, b = 0, c = 0, d = 0;  ///< rect: x0 y0 x1 y1; disk: cx cy r

  static Region background() { return {}; }
  static Region rect(double x0, double y0, double x1, double y1) {
    return {Shape::Rect, x0, y0, x1, y1};
  }
  static Region disk(double cx, double cy, double r) { return {Shape::Disk, cx, cy, r, 0}; }

  bool contains(std::size_t x, std::size_t y, std::size_t width, std::size_t height) const;
};

struct PhantomClass {
  HermitianMatrix3 sigma;
  Region region;
  /// Relative ROI rectangle x0 y0 x1 y1; must lie inside the class region.
  std::optional<std::array<double, 4>> roi;
};

/// Regions are painted in order, later classes over earlier ones, so they
/// always partition the image once every pixel is covered.
struct PhantomSpec {
  std::size_t width = 150;
  std::size_t height = 150;
  int looks = 4;
  std::uint64_t seed = 20160419;
  std::vector<PhantomClass> classes;
};

/// Three classes: a low-intensity background that is far from the others,
/// a full-width band and a disk whose covariances are close to each other
/// and overlap pointwise.
PhantomSpec default_phantom_spec(std::size_t width = 150, std::size_t height = 150,
                                 std::uint64_t seed = 20160419);

/// Reads width, height, looks, seed and optionally classes with
/// class<m>_covariance (9 packed values), class<m>_region
/// ("background" | "rect x0 y0 x1 y1" | "disk cx cy r") and class<m>_roi.
/// Missing class keys fall back to the default spec.
PhantomSpec phantom_spec_from(const KeyValues& kv);
PhantomSpec load_phantom_spec(const std::filesystem::path& path);

/// Throws InvalidSpec for looks < 3, empty image, non-PD covariances,
/// uncovered pixels, or an ROI that leaves its region.
void validate(const PhantomSpec& spec);

/// Ground-truth labels (1-based) of the spec's geometry.
ClassMap phantom_truth(const PhantomSpec& spec);

/// Pixel ROIs of the spec (classes without an ROI get none).
RoiSet phantom_roi(const PhantomSpec& spec);

struct Phantom {
  CovarianceField field;
  ClassMap truth;
};

/// Each pixel is an independent draw from W(sigma_class, looks); row y uses
/// the stream derive_seed(seed, y), so output does not depend on threads.
Phantom generate_phantom(const PhantomSpec& spec);

}  // namespace polsar
