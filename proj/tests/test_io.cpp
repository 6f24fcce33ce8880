#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polsar/classifier.hpp"
#include "polsar/error.hpp"
#include "polsar/io.hpp"
#include "support.hpp"

using namespace polsar;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("polsar_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_F(IoTest, CovarianceRoundTripF64) {
  const auto f = test::random_field(7, 5, 1);
  const auto data = dir_ / "img.cov";
  write_covariance_image(f, header_path_for(data), data, SampleType::F64, 4.0);
  const auto img = read_covariance_image(header_path_for(data), data);
  EXPECT_EQ(img.field, f);
  EXPECT_EQ(img.looks, 4.0);
  EXPECT_TRUE(img.non_pd_pixels.empty());
}

TEST_F(IoTest, CovarianceRoundTripF32) {
  const auto f = test::random_field(4, 3, 2);
  const auto data = dir_ / "img.cov";
  write_covariance_image(f, header_path_for(data), data, SampleType::F32);
  const auto img = read_covariance_image(header_path_for(data), data);
  EXPECT_FALSE(img.looks);
  for (std::size_t i = 0; i < f.size(); ++i)
    EXPECT_LT(test::max_abs_diff(img.field[i], f[i]), 1e-6 * frobenius_norm(f[i]));
  EXPECT_EQ(fs::file_size(data), 4u * 3u * 9u * 4u);
}

TEST_F(IoTest, IdentityLayout) {
  const auto data = dir_ / "one.cov";
  write_covariance_image(CovarianceField(1, 1, HermitianMatrix3::identity()), header_path_for(data),
                         data);
  std::ifstream in(data, std::ios::binary);
  double v[9];
  in.read(reinterpret_cast<char*>(v), sizeof v);
  ASSERT_EQ(in.gcount(), 72);
  const double want[9] = {1, 1, 1, 0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 9; ++i) EXPECT_EQ(v[i], want[i]);
}

TEST_F(IoTest, CovarianceErrors) {
  const auto f = test::random_field(4, 4, 3);
  const auto data = dir_ / "img.cov";
  write_covariance_image(f, header_path_for(data), data);
  fs::resize_file(data, fs::file_size(data) - 8);
  EXPECT_EQ(code_of([&] { read_covariance_image(header_path_for(data), data); }),
            ErrorCode::SizeMismatch);

  write_file(dir_ / "bad.hdr", "width: 4\nheight: 4\ndtype: f16\nbyte_order: little\n");
  EXPECT_EQ(code_of([&] { read_covariance_image(dir_ / "bad.hdr", data); }),
            ErrorCode::MalformedHeader);
  write_file(dir_ / "bad.hdr", "width: 4\nheight: 4\ndtype: f64\nbyte_order: big\n");
  EXPECT_EQ(code_of([&] { read_covariance_image(dir_ / "bad.hdr", data); }),
            ErrorCode::MalformedHeader);
  write_file(dir_ / "bad.hdr", "width 4\n");
  EXPECT_EQ(code_of([&] { read_covariance_image(dir_ / "bad.hdr", data); }),
            ErrorCode::MalformedHeader);
  EXPECT_EQ(code_of([&] { read_covariance_image(dir_ / "nope.hdr", data); }), ErrorCode::IoError);
}

TEST_F(IoTest, NonPdPixelsAreListed) {
  CovarianceField f(3, 1, HermitianMatrix3::identity());
  f[2] = HermitianMatrix3::diagonal(1, -1, 1);
  const auto data = dir_ / "img.cov";
  write_covariance_image(f, header_path_for(data), data);
  EXPECT_EQ(read_covariance_image(header_path_for(data), data).non_pd_pixels,
            std::vector<std::size_t>{2});
}

TEST_F(IoTest, ClassmapRoundTripAndErrors) {
  ClassMap m(9, 4);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(i % 4);
  const auto p = dir_ / "map.u8";
  write_classmap(m, p);
  EXPECT_EQ(read_classmap(p), m);
  write_file(header_path_for(p), "width: 10\nheight: 4\ndtype: u8\nbyte_order: little\n");
  EXPECT_EQ(code_of([&] { read_classmap(p); }), ErrorCode::SizeMismatch);
  write_file(header_path_for(p), "width: 9\nheight: 4\ndtype: f64\nbyte_order: little\n");
  EXPECT_EQ(code_of([&] { read_classmap(p); }), ErrorCode::MalformedHeader);
}

TEST_F(IoTest, RoiParsing) {
  std::istringstream good("# header\n1 0 0 4 4\n\n3 2 2 5 6  # trailing\n1 10 10 12 12\n");
  const auto roi = parse_roi(good);
  ASSERT_EQ(roi.class_count(), 3u);
  EXPECT_EQ(roi.classes[0].size(), 2u);
  EXPECT_TRUE(roi.classes[1].empty());
  EXPECT_EQ(roi.classes[2][0], (RoiRect{2, 2, 5, 6}));

  for (const char* bad : {"1 0 0 4\n", "0 0 0 1 1\n", "1 0 0 4 4 9\n", "a 0 0 1 1\n",
                          "1 5 0 4 4\n", "1 -1 0 4 4\n"}) {
    std::istringstream is(bad);
    EXPECT_EQ(code_of([&] { parse_roi(is); }), ErrorCode::MalformedRoi) << bad;
  }
  write_roi(roi, dir_ / "roi.txt");
  EXPECT_EQ(read_roi(dir_ / "roi.txt"), roi);
}

TEST_F(IoTest, PpmRoundTrip) {
  RgbImage img{3, 2, {{{1, 2, 3}}, {{4, 5, 6}}, {{7, 8, 9}}, {{255, 0, 0}}, {{0, 255, 0}}, {{0, 0, 255}}}};
  write_ppm(img, dir_ / "a.ppm");
  const auto back = read_ppm(dir_ / "a.ppm");
  EXPECT_EQ(back.width, 3u);
  EXPECT_EQ(back.height, 2u);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Render, PaletteAndClassmap) {
  const auto pal = default_palette(3);
  EXPECT_EQ(pal[0], (Rgb{255, 0, 0}));
  EXPECT_EQ(pal[1], (Rgb{0, 255, 0}));
  EXPECT_EQ(pal[2], (Rgb{0, 0, 255}));
  ClassMap m(3, 1);
  m[0] = 2;
  m[1] = 0;
  m[2] = 3;
  const auto img = render_classmap(m, pal);
  EXPECT_EQ(img.pixels[0], pal[1]);
  EXPECT_EQ(img.pixels[1], (Rgb{0, 0, 0}));
  EXPECT_EQ(img.pixels[2], pal[2]);
  m[0] = 4;
  EXPECT_THROW(render_classmap(m, pal), Error);
}

TEST(Render, FieldColours) {
  const std::vector<HermitianMatrix3> protos{HermitianMatrix3::diagonal(1, 0, 0) + HermitianMatrix3::identity(),
                                             HermitianMatrix3::diagonal(0, 1, 0) + HermitianMatrix3::identity(),
                                             HermitianMatrix3::diagonal(0, 0, 1) + HermitianMatrix3::identity()};
  const auto pal = default_palette(3);
  CovarianceField f(2, 1);
  f[0] = protos[1];
  f[1] = HermitianMatrix3::identity() + HermitianMatrix3::diagonal(1, 1, 1) * (1.0 / 3.0);
  const auto img = render_field(f, protos, pal);
  EXPECT_EQ(img.pixels[0], pal[1]);
  // equidistant: the mean of the palette, 255/3 = 85 per channel
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(img.pixels[1][c], 85, 1);
}
