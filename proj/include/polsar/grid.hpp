#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "polsar/error.hpp"
#include "polsar/hermitian.hpp"

namespace polsar {

/// Row-major width x height image of T. x indexes columns, y rows.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, const T& fill = T{})
      : width_(width), height_(height), cells_(width * height, fill) {}
  Grid(std::size_t width, std::size_t height, std::vector<T> cells)
      : width_(width), height_(height), cells_(std::move(cells)) {
    if (cells_.size() != width_ * height_)
      throw Error(ErrorCode::SizeMismatch, "grid data does not match its dimensions");
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return cells_.size(); }

  T& at(std::size_t x, std::size_t y) { return cells_[y * width_ + x]; }
  const T& at(std::size_t x, std::size_t y) const { return cells_[y * width_ + x]; }
  T& operator[](std::size_t i) { return cells_[i]; }
  const T& operator[](std::size_t i) const { return cells_[i]; }

  std::vector<T>& cells() { return cells_; }
  const std::vector<T>& cells() const { return cells_; }

  bool same_shape(const Grid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> cells_;
};

/// Per-pixel covariance state of the image.
using CovarianceField = Grid<HermitianMatrix3>;

/// Class labels in 1..M; 0 marks an unclassified pixel.
using ClassMap = Grid<std::uint8_t>;
inline constexpr std::uint8_t kUnclassified = 0;

}  // namespace polsar
