#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace vdcs {

// Round-half-to-even, the quantization rule used at every 8-bit boundary.
double round_half_even(double v);

// 8-bit RGB frame, row-major, channels interleaved R,G,B.
struct Image8 {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  Image8() = default;
  Image8(int h, int w, std::uint8_t fill = 0);
  Image8(int h, int w, std::vector<std::uint8_t> pixels);

  std::uint8_t& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  std::uint8_t at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  std::size_t size() const { return data.size(); }

  bool operator==(const Image8&) const = default;
};

// Normalized frame on [-1, 1], same layout as Image8, double precision.
struct ImageF {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  ImageF() = default;
  ImageF(int h, int w, double fill = 0.0);
  ImageF(int h, int w, std::vector<double> values);

  double& at(int y, int x, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  double at(int y, int x, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
};

// Single-channel map on [0, 1]. Dataset masks are exactly {0, 1}.
struct Mask {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Mask() = default;
  Mask(int h, int w, double fill = 0.0);

  double& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }

  bool is_binary() const;
};

// Odd-sized convolution kernel with nonnegative weights summing to 1
// (within 1e-9); validated on construction.
struct Kernel2D {
  int height = 0;
  int width = 0;
  std::vector<double> weights;

  Kernel2D(int h, int w, std::vector<double> w_values);

  double at(int y, int x) const { return weights[static_cast<std::size_t>(y) * width + x]; }

  static Kernel2D identity();
  static Kernel2D box(int size);
  // size x size Gaussian, weights exp(-(dx^2+dy^2)/(2 sigma^2)) normalized.
  static Kernel2D gaussian(int size, double sigma);
};

// v -> 2*(v/255) - 1.
ImageF normalize(const Image8& img);

// v -> clamp(round_half_even(255*(v+1)/2), 0, 255). Non-finite input throws.
Image8 denormalize(const ImageF& img);

// Per-channel correlation with replicate (edge-clamp) padding; double
// accumulation, quantized round-half-even and clamped to [0,255].
// Throws if the kernel is larger than the image in either dimension.
Image8 convolve(const Image8& img, const Kernel2D& k);

namespace detail {
// Same correlation without the kernel-fits-image precondition; replicate
// padding makes it well defined for any kernel size.
Image8 convolve_any(const Image8& img, const Kernel2D& k);
}  // namespace detail

// Same sliding correlation on a single-channel map, no quantization.
Mask convolve(const Mask& m, const Kernel2D& k);

// restored (x) m + b (x) (1 - m), mask broadcast across channels.
// Default background is constant black (-1,-1,-1) in normalized space.
ImageF composite(const ImageF& restored, const Mask& m,
                 const std::array<double, 3>& background = {-1.0, -1.0, -1.0});

}  // namespace vdcs
