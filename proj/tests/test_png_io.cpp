#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "vdcs/errors.hpp"
#include "vdcs/png_io.hpp"
#include "vdcs/rng.hpp"

using namespace vdcs;
namespace fs = std::filesystem;

namespace {

// Writes a PNG with an arbitrary color type / bit depth, bypassing the
// library's writer, to exercise the reader's rejection paths.
void write_raw_png(const fs::path& path, int color_type, int bit_depth, int channels) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  REQUIRE(f != nullptr);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, 4, 4, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const int bytes_per_px = channels * bit_depth / 8;
  std::vector<png_byte> row(static_cast<std::size_t>(4) * bytes_per_px, 42);
  for (int y = 0; y < 4; ++y) png_write_row(png, row.data());
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

}  // namespace

TEST_CASE("round trip preserves pixels and is byte-deterministic") {
  const fs::path dir = fs::temp_directory_path() / "vdcs_png_test";
  fs::create_directories(dir);

  RngStream rng = RngStream::from_seed(31337);
  Image8 img(21, 13);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.uniform_int(256));

  write_png(dir / "a.png", img, "note");
  write_png(dir / "b.png", img, "note");
  CHECK(read_png(dir / "a.png") == img);

  std::ifstream fa(dir / "a.png", std::ios::binary);
  std::ifstream fb(dir / "b.png", std::ios::binary);
  const std::string ba((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(ba == bb);

  fs::remove_all(dir);
}

TEST_CASE("reader accepts only 8-bit RGB") {
  const fs::path dir = fs::temp_directory_path() / "vdcs_png_reject";
  fs::create_directories(dir);

  write_raw_png(dir / "rgba.png", PNG_COLOR_TYPE_RGB_ALPHA, 8, 4);
  CHECK_THROWS_AS(read_png(dir / "rgba.png"), ValidationError);

  write_raw_png(dir / "gray.png", PNG_COLOR_TYPE_GRAY, 8, 1);
  CHECK_THROWS_AS(read_png(dir / "gray.png"), ValidationError);

  write_raw_png(dir / "rgb16.png", PNG_COLOR_TYPE_RGB, 16, 3);
  CHECK_THROWS_AS(read_png(dir / "rgb16.png"), ValidationError);

  write_raw_png(dir / "rgb8.png", PNG_COLOR_TYPE_RGB, 8, 3);
  CHECK_NOTHROW(read_png(dir / "rgb8.png"));

  fs::remove_all(dir);
}

TEST_CASE("missing and corrupt files raise I/O errors") {
  const fs::path dir = fs::temp_directory_path() / "vdcs_png_io_err";
  fs::create_directories(dir);

  CHECK_THROWS_AS(read_png(dir / "missing.png"), IoError);

  std::ofstream(dir / "junk.png") << "this is not a png";
  CHECK_THROWS_AS(read_png(dir / "junk.png"), IoError);

  Image8 img(2, 2, 7);
  CHECK_THROWS_AS(write_png(dir / "no_such_dir" / "x.png", img), IoError);

  fs::remove_all(dir);
}
