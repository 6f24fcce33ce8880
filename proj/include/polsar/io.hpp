#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "polsar/classifier.hpp"
#include "polsar/grid.hpp"
#include "polsar/roi.hpp"

namespace polsar {

namespace fs = std::filesystem;

// Covariance images are a plain-text header plus a raw little-endian data
// file. Header keys: width, height, dtype (f32 | f64), byte_order (little)
// and optionally looks. Data is row-major, nine values per pixel:
// C11 C22 C33 ReC12 ImC12 ReC13 ImC13 ReC23 ImC23.

enum class SampleType { F32, F64 };

struct CovarianceImage {
  CovarianceField field;
  std::optional<double> looks;
  SampleType dtype = SampleType::F64;
  /// Pixels that failed the positive-definite check; reading still succeeds.
  std::vector<std::size_t> non_pd_pixels;
};

/// Header path used when only the data path is given.
fs::path header_path_for(const fs::path& data_path);

void write_covariance_image(const CovarianceField& field, const fs::path& header_path,
                            const fs::path& data_path, SampleType dtype = SampleType::F64,
                            std::optional<double> looks = std::nullopt);
/// Throws MalformedHeader, SizeMismatch or IoError.
CovarianceImage read_covariance_image(const fs::path& header_path, const fs::path& data_path);

/// Class maps: one byte per pixel, row-major, header (dtype u8) at
/// header_path_for(path). Throws SizeMismatch or MalformedHeader on read.
void write_classmap(const ClassMap& map, const fs::path& path);
ClassMap read_classmap(const fs::path& path);

/// ROI text: one `class x0 y0 x1 y1` rectangle per line (inclusive pixel
/// bounds, class ids from 1); '#' starts a comment. Throws MalformedRoi.
RoiSet parse_roi(std::istream& is);
RoiSet read_roi(const fs::path& path);
void write_roi(const RoiSet& roi, const fs::path& path);

using Rgb = std::array<std::uint8_t, 3>;

struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;
};

/// M fully saturated colours with evenly spaced hues, starting at red.
std::vector<Rgb> default_palette(std::size_t classes);

inline constexpr double kRenderEpsilon = 1e-12;

/// colour = sum_m c_m colour_m with c_m proportional to
/// 1 / (||S - Sigma_m||_F + eps), normalized to sum 1.
RgbImage render_field(const CovarianceField& field, const std::vector<HermitianMatrix3>& prototypes,
                      const std::vector<Rgb>& palette);
/// Flat class colours; label 0 is black.
RgbImage render_classmap(const ClassMap& map, const std::vector<Rgb>& palette);

/// render_field with the prototype covariances and the default palette,
/// written as PPM.
void render_rgb(const CovarianceField& field, const PrototypeSet& protos, const fs::path& path);

/// Binary PPM (P6, maxval 255). Throws IoError.
void write_ppm(const RgbImage& image, const fs::path& path);
RgbImage read_ppm(const fs::path& path);

}  // namespace polsar
