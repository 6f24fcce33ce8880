#include "polsar/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "polsar/error.hpp"
#include "polsar/random.hpp"

namespace polsar {

bool Region::contains(std::size_t x, std::size_t y, std::size_t width, std::size_t height) const {
  const double px = (static_cast<double>(x) + 0.5) / static_cast<double>(width);
  const double py = (static_cast<double>(y) + 0.5) / static_cast<double>(height);
  switch (shape) {
    case Shape::Background: return true;
    case Shape::Rect: return px >= a && px < c && py >= b && py < d;
    case Shape::Disk: {
      const double scale = static_cast<double>(std::min(width, height));
      const double dx = (px - a) * static_cast<double>(width) / scale;
      const double dy = (py - b) * static_cast<double>(height) / scale;
      return dx * dx + dy * dy < c * c;
    }
  }
  return false;
}

namespace {

HermitianMatrix3 with_correlation(double vv, double hv, double hh, double rho, double phase) {
  const Complex c13 = std::polar(rho * std::sqrt(vv * hh), phase);
  return {vv, hv, hh, {}, c13, {}};
}

}  // namespace

PhantomSpec default_phantom_spec(std::size_t width, std::size_t height, std::uint64_t seed) {
  PhantomSpec s;
  s.width = width;
  s.height = height;
  s.seed = seed;
  // Surface-like background: dark, strongly co-polar correlated.
  s.classes.push_back({with_correlation(0.030, 0.0030, 0.020, 0.60, 0.0), Region::background(),
                       std::array<double, 4>{0.04, 0.70, 0.96, 0.96}});
  // Two bright classes with equal channel powers, told apart by the sign
  // of the co-polar phase.
  s.classes.push_back({with_correlation(0.30, 0.24, 0.33, 0.99, 0.15),
                       Region::rect(0.0, 0.08, 1.0, 0.64),
                       std::array<double, 4>{0.04, 0.12, 0.36, 0.60}});
  s.classes.push_back({with_correlation(0.30, 0.24, 0.33, 0.99, -0.15),
                       Region::disk(0.64, 0.36, 0.2),
                       std::array<double, 4>{0.54, 0.26, 0.74, 0.46}});
  return s;
}

namespace {

Region parse_region(const std::string& text) {
  std::istringstream ss(text);
  std::string kind;
  ss >> kind;
  std::vector<double> v;
  double x;
  while (ss >> x) v.push_back(x);
  if (!ss.eof()) throw Error(ErrorCode::InvalidSpec, "bad region '" + text + "'");
  if (kind == "background" && v.empty()) return Region::background();
  if (kind == "rect" && v.size() == 4) return Region::rect(v[0], v[1], v[2], v[3]);
  if (kind == "disk" && v.size() == 3) return Region::disk(v[0], v[1], v[2]);
  throw Error(ErrorCode::InvalidSpec, "bad region '" + text + "'");
}

}  // namespace

PhantomSpec phantom_spec_from(const KeyValues& kv) {
  PhantomSpec spec = default_phantom_spec(
      static_cast<std::size_t>(kv.get_int("width", 150)),
      static_cast<std::size_t>(kv.get_int("height", 150)),
      static_cast<std::uint64_t>(kv.get_int("seed", 20160419)));
  spec.looks = static_cast<int>(kv.get_int("looks", 4));

  const auto classes = static_cast<std::size_t>(kv.get_int("classes", 3));
  if (classes < 1 || classes > 255) throw Error(ErrorCode::InvalidSpec, "classes must be 1..255");
  if (classes != spec.classes.size()) spec.classes.resize(classes);
  for (std::size_t m = 0; m < classes; ++m) {
    const std::string prefix = "class" + std::to_string(m + 1) + "_";
    auto& c = spec.classes[m];
    if (kv.has(prefix + "covariance")) {
      const auto v = kv.get_doubles(prefix + "covariance");
      if (v.size() != 9)
        throw Error(ErrorCode::InvalidSpec, prefix + "covariance needs 9 values");
      std::array<double, 9> packed{};
      std::copy(v.begin(), v.end(), packed.begin());
      c.sigma = HermitianMatrix3::from_packed(packed);
    }
    if (kv.has(prefix + "region")) c.region = parse_region(kv.require(prefix + "region"));
    if (kv.has(prefix + "roi")) {
      const auto v = kv.get_doubles(prefix + "roi");
      if (v.size() != 4) throw Error(ErrorCode::InvalidSpec, prefix + "roi needs 4 values");
      c.roi = std::array<double, 4>{v[0], v[1], v[2], v[3]};
    }
  }
  validate(spec);
  return spec;
}

PhantomSpec load_phantom_spec(const std::filesystem::path& path) {
  return phantom_spec_from(KeyValues::load(path));
}

ClassMap phantom_truth(const PhantomSpec& spec) {
  ClassMap truth(spec.width, spec.height, kUnclassified);
  for (std::size_t y = 0; y < spec.height; ++y)
    for (std::size_t x = 0; x < spec.width; ++x)
      for (std::size_t m = 0; m < spec.classes.size(); ++m)
        if (spec.classes[m].region.contains(x, y, spec.width, spec.height))
          truth.at(x, y) = static_cast<std::uint8_t>(m + 1);
  return truth;
}

namespace {

RoiRect to_pixels(const std::array<double, 4>& r, std::size_t width, std::size_t height) {
  auto lo = [](double f, std::size_t n) {
    return static_cast<std::size_t>(std::clamp(std::ceil(f * static_cast<double>(n)), 0.0,
                                                static_cast<double>(n - 1)));
  };
  auto hi = [](double f, std::size_t n) {
    return static_cast<std::size_t>(std::clamp(std::floor(f * static_cast<double>(n)) - 1.0, 0.0,
                                                static_cast<double>(n - 1)));
  };
  return {lo(r[0], width), lo(r[1], height), hi(r[2], width), hi(r[3], height)};
}

}  // namespace

RoiSet phantom_roi(const PhantomSpec& spec) {
  RoiSet roi;
  roi.classes.resize(spec.classes.size());
  for (std::size_t m = 0; m < spec.classes.size(); ++m)
    if (spec.classes[m].roi)
      roi.classes[m].push_back(to_pixels(*spec.classes[m].roi, spec.width, spec.height));
  return roi;
}

void validate(const PhantomSpec& spec) {
  if (spec.width == 0 || spec.height == 0)
    throw Error(ErrorCode::InvalidSpec, "image must be non-empty");
  if (spec.looks < 3) throw Error(ErrorCode::InvalidSpec, "looks must be an integer >= 3");
  if (spec.classes.empty() || spec.classes.size() > 255)
    throw Error(ErrorCode::InvalidSpec, "need 1..255 classes");
  for (std::size_t m = 0; m < spec.classes.size(); ++m)
    if (!spec.classes[m].sigma.is_positive_definite())
      throw Error(ErrorCode::InvalidSpec,
                  "class " + std::to_string(m + 1) + " covariance is not positive definite");

  const ClassMap truth = phantom_truth(spec);
  for (std::size_t i = 0; i < truth.size(); ++i)
    if (truth[i] == kUnclassified)
      throw Error(ErrorCode::InvalidSpec, "regions do not cover the whole image");

  const RoiSet roi = phantom_roi(spec);
  for (std::size_t m = 0; m < roi.classes.size(); ++m)
    for (const auto& r : roi.classes[m]) {
      if (r.x1 < r.x0 || r.y1 < r.y0)
        throw Error(ErrorCode::InvalidSpec, "class " + std::to_string(m + 1) + " ROI is empty");
      for (std::size_t y = r.y0; y <= r.y1; ++y)
        for (std::size_t x = r.x0; x <= r.x1; ++x)
          if (truth.at(x, y) != m + 1)
            throw Error(ErrorCode::InvalidSpec,
                        "class " + std::to_string(m + 1) + " ROI leaves its region");
    }
}

Phantom generate_phantom(const PhantomSpec& spec) {
  validate(spec);
  std::vector<LowerTriangular3> factors;
  for (const auto& c : spec.classes) factors.push_back(cholesky(c.sigma));

  Phantom p{CovarianceField(spec.width, spec.height), phantom_truth(spec)};
  const auto rows = static_cast<std::ptrdiff_t>(spec.height);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t yy = 0; yy < rows; ++yy) {
    const auto y = static_cast<std::size_t>(yy);
    Rng rng(derive_seed(spec.seed, y));
    for (std::size_t x = 0; x < spec.width; ++x)
      p.field.at(x, y) =
          sample_with_factor(factors[p.truth.at(x, y) - 1u], spec.looks, rng);
  }
  return p;
}

}  // namespace polsar
