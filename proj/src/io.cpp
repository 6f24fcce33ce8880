#include "polsar/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "polsar/error.hpp"
#include "polsar/key_value.hpp"

namespace polsar {
namespace {

template <typename UInt>
void put_le(std::vector<char>& out, UInt v) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

template <typename UInt>
UInt get_le(const char* p) {
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    v |= static_cast<UInt>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

std::vector<char> read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const fs::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_all(path, std::vector<char>(text.begin(), text.end()));
}

struct Dimensions {
  std::size_t width, height;
};

Dimensions read_dimensions(const KeyValues& kv) {
  const long long w = kv.require_int("width");
  const long long h = kv.require_int("height");
  if (w <= 0 || h <= 0) throw Error(ErrorCode::MalformedHeader, "width and height must be > 0");
  if (kv.require("byte_order") != "little")
    throw Error(ErrorCode::MalformedHeader, "only byte_order: little is supported");
  return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
}

}  // namespace

fs::path header_path_for(const fs::path& data_path) {
  fs::path p = data_path;
  p += ".hdr";
  return p;
}

void write_covariance_image(const CovarianceField& field, const fs::path& header_path,
                            const fs::path& data_path, SampleType dtype,
                            std::optional<double> looks) {
  std::ostringstream hdr;
  hdr.precision(17);
  hdr << "width: " << field.width() << "\nheight: " << field.height()
      << "\ndtype: " << (dtype == SampleType::F32 ? "f32" : "f64") << "\nbyte_order: little\n";
  if (looks) hdr << "looks: " << *looks << '\n';
  write_text(header_path, hdr.str());

  std::vector<char> bytes;
  bytes.reserve(field.size() * 9 * (dtype == SampleType::F32 ? 4 : 8));
  for (const auto& m : field.cells())
    for (double v : m.packed()) {
      if (dtype == SampleType::F32)
        put_le(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      else
        put_le(bytes, std::bit_cast<std::uint64_t>(v));
    }
  write_all(data_path, bytes);
}

CovarianceImage read_covariance_image(const fs::path& header_path, const fs::path& data_path) {
  const KeyValues kv = KeyValues::load(header_path, ErrorCode::MalformedHeader);
  const Dimensions dim = read_dimensions(kv);
  CovarianceImage img;
  const std::string dtype = kv.require("dtype");
  if (dtype == "f32")
    img.dtype = SampleType::F32;
  else if (dtype == "f64")
    img.dtype = SampleType::F64;
  else
    throw Error(ErrorCode::MalformedHeader, "dtype must be f32 or f64, got '" + dtype + "'");
  if (kv.has("looks")) img.looks = kv.require_double("looks");

  const std::size_t elem = img.dtype == SampleType::F32 ? 4 : 8;
  const std::vector<char> bytes = read_all(data_path);
  const std::size_t expected = dim.width * dim.height * 9 * elem;
  if (bytes.size() != expected)
    throw Error(ErrorCode::SizeMismatch, data_path.string() + " has " +
                                             std::to_string(bytes.size()) + " bytes, expected " +
                                             std::to_string(expected));

  std::vector<HermitianMatrix3> cells(dim.width * dim.height);
  const char* p = bytes.data();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::array<double, 9> v{};
    for (double& x : v) {
      if (img.dtype == SampleType::F32)
        x = std::bit_cast<float>(get_le<std::uint32_t>(p));
      else
        x = std::bit_cast<double>(get_le<std::uint64_t>(p));
      p += elem;
    }
    cells[i] = HermitianMatrix3::from_packed(v);
    if (!cells[i].is_positive_definite()) img.non_pd_pixels.push_back(i);
  }
  img.field = CovarianceField(dim.width, dim.height, std::move(cells));
  return img;
}

void write_classmap(const ClassMap& map, const fs::path& path) {
  std::ostringstream hdr;
  hdr << "width: " << map.width() << "\nheight: " << map.height()
      << "\ndtype: u8\nbyte_order: little\n";
  write_text(header_path_for(path), hdr.str());
  write_all(path, std::vector<char>(map.cells().begin(), map.cells().end()));
}

ClassMap read_classmap(const fs::path& path) {
  const KeyValues kv = KeyValues::load(header_path_for(path), ErrorCode::MalformedHeader);
  const Dimensions dim = read_dimensions(kv);
  if (kv.require("dtype") != "u8")
    throw Error(ErrorCode::MalformedHeader, "class maps must have dtype: u8");
  const std::vector<char> bytes = read_all(path);
  if (bytes.size() != dim.width * dim.height)
    throw Error(ErrorCode::SizeMismatch, path.string() + " has " + std::to_string(bytes.size()) +
                                             " labels, header says " +
                                             std::to_string(dim.width) + "x" +
                                             std::to_string(dim.height));
  std::vector<std::uint8_t> labels(bytes.begin(), bytes.end());
  return ClassMap(dim.width, dim.height, std::move(labels));
}

RoiSet parse_roi(std::istream& is) {
  RoiSet roi;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    long long cls = 0, x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    std::istringstream cs(first);
    std::string rest;
    if (!(cs >> cls) || (cs >> rest) || !(ss >> x0 >> y0 >> x1 >> y1) || (ss >> rest) ||
        cls < 1 || cls > 255 || x0 < 0 || y0 < 0 || x1 < 0 || y1 < 0)
      throw Error(ErrorCode::MalformedRoi,
                  "line " + std::to_string(line_no) + ": expected 'class x0 y0 x1 y1'");
    if (x1 < x0 || y1 < y0)
      throw Error(ErrorCode::MalformedRoi,
                  "line " + std::to_string(line_no) + ": rectangle corners are inverted");
    if (roi.classes.size() < static_cast<std::size_t>(cls))
      roi.classes.resize(static_cast<std::size_t>(cls));
    roi.classes[static_cast<std::size_t>(cls - 1)].push_back(
        {static_cast<std::size_t>(x0), static_cast<std::size_t>(y0), static_cast<std::size_t>(x1),
         static_cast<std::size_t>(y1)});
  }
  return roi;
}

RoiSet read_roi(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_roi(in);
}

void write_roi(const RoiSet& roi, const fs::path& path) {
  std::ostringstream os;
  os << "# class x0 y0 x1 y1 (inclusive)\n";
  for (std::size_t m = 0; m < roi.classes.size(); ++m)
    for (const auto& r : roi.classes[m])
      os << (m + 1) << ' ' << r.x0 << ' ' << r.y0 << ' ' << r.x1 << ' ' << r.y1 << '\n';
  write_text(path, os.str());
}

std::vector<Rgb> default_palette(std::size_t classes) {
  std::vector<Rgb> palette;
  for (std::size_t m = 0; m < classes; ++m) {
    const double hue = 6.0 * static_cast<double>(m) / static_cast<double>(classes);
    const int sector = static_cast<int>(std::floor(hue)) % 6;
    const double f = hue - std::floor(hue);
    const auto up = static_cast<std::uint8_t>(std::lround(255.0 * f));
    const auto down = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - f)));
    switch (sector) {
      case 0: palette.push_back({255, up, 0}); break;
      case 1: palette.push_back({down, 255, 0}); break;
      case 2: palette.push_back({0, 255, up}); break;
      case 3: palette.push_back({0, down, 255}); break;
      case 4: palette.push_back({up, 0, 255}); break;
      default: palette.push_back({255, 0, down}); break;
    }
  }
  return palette;
}

RgbImage render_field(const CovarianceField& field, const std::vector<HermitianMatrix3>& prototypes,
                      const std::vector<Rgb>& palette) {
  if (palette.size() < prototypes.size() || prototypes.empty())
    throw Error(ErrorCode::InvalidArgument, "palette must cover every prototype");
  RgbImage img{field.width(), field.height(), std::vector<Rgb>(field.size())};
  const std::size_t classes = prototypes.size();
  const auto n = static_cast<std::ptrdiff_t>(field.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::vector<double> c(classes);
    double total = 0.0;
    for (std::size_t m = 0; m < classes; ++m) {
      c[m] = 1.0 / (frobenius_distance(field[i], prototypes[m]) + kRenderEpsilon);
      total += c[m];
    }
    Rgb out{};
    for (std::size_t ch = 0; ch < 3; ++ch) {
      double v = 0.0;
      for (std::size_t m = 0; m < classes; ++m) v += c[m] / total * palette[m][ch];
      out[ch] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
    img.pixels[i] = out;
  }
  return img;
}

RgbImage render_classmap(const ClassMap& map, const std::vector<Rgb>& palette) {
  RgbImage img{map.width(), map.height(), std::vector<Rgb>(map.size(), Rgb{0, 0, 0})};
  for (std::size_t i = 0; i < map.size(); ++i) {
    const std::size_t label = map[i];
    if (label == kUnclassified) continue;
    if (label > palette.size())
      throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(label) + " has no colour");
    img.pixels[i] = palette[label - 1];
  }
  return img;
}

void render_rgb(const CovarianceField& field, const PrototypeSet& protos, const fs::path& path) {
  std::vector<HermitianMatrix3> sigmas;
  for (const auto& m : protos.models) sigmas.push_back(m.sigma());
  write_ppm(render_field(field, sigmas, default_palette(sigmas.size())), path);
}

void write_ppm(const RgbImage& image, const fs::path& path) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<char> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + image.pixels.size() * 3);
  for (const auto& p : image.pixels)
    for (auto ch : p) bytes.push_back(static_cast<char>(ch));
  write_all(path, bytes);
}

RgbImage read_ppm(const fs::path& path) {
  const std::vector<char> bytes = read_all(path);
  std::string text(bytes.begin(), bytes.end());
  std::istringstream ss(text);
  std::string magic;
  std::size_t w = 0, h = 0, maxval = 0;
  if (!(ss >> magic >> w >> h >> maxval) || magic != "P6" || maxval != 255)
    throw Error(ErrorCode::IoError, path.string() + " is not an 8-bit P6 PPM");
  ss.get();
  const auto offset = static_cast<std::size_t>(ss.tellg());
  if (bytes.size() != offset + w * h * 3)
    throw Error(ErrorCode::SizeMismatch, path.string() + " has a truncated raster");
  RgbImage img{w, h, std::vector<Rgb>(w * h)};
  for (std::size_t i = 0; i < w * h; ++i)
    for (std::size_t ch = 0; ch < 3; ++ch)
      img.pixels[i][ch] = static_cast<std::uint8_t>(bytes[offset + 3 * i + ch]);
  return img;
}

}  // namespace polsar
