#include "vdcs/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vdcs/errors.hpp"

namespace vdcs {

double round_half_even(double v) {
  // nearbyint under the default FE_TONEAREST mode is round-half-to-even.
  return std::nearbyint(v);
}

namespace {

void check_shape(int h, int w) {
  if (h <= 0 || w <= 0) {
    throw ValidationError("image dimensions must be positive, got " + std::to_string(h) + "x" +
                          std::to_string(w));
  }
}

std::uint8_t quantize_channel(double v) {
  const double r = round_half_even(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

}  // namespace

Image8::Image8(int h, int w, std::uint8_t fill) : height(h), width(w) {
  check_shape(h, w);
  data.assign(static_cast<std::size_t>(h) * w * 3, fill);
}

Image8::Image8(int h, int w, std::vector<std::uint8_t> pixels)
    : height(h), width(w), data(std::move(pixels)) {
  check_shape(h, w);
  if (data.size() != static_cast<std::size_t>(h) * w * 3) {
    throw ValidationError("Image8 data length must be height*width*3");
  }
}

ImageF::ImageF(int h, int w, double fill) : height(h), width(w) {
  check_shape(h, w);
  if (fill < -1.0 || fill > 1.0) throw ValidationError("ImageF fill outside [-1,1]");
  data.assign(static_cast<std::size_t>(h) * w * 3, fill);
}

ImageF::ImageF(int h, int w, std::vector<double> values)
    : height(h), width(w), data(std::move(values)) {
  check_shape(h, w);
  if (data.size() != static_cast<std::size_t>(h) * w * 3) {
    throw ValidationError("ImageF data length must be height*width*3");
  }
  for (double v : data) {
    if (!(v >= -1.0 && v <= 1.0)) throw ValidationError("ImageF value outside [-1,1]");
  }
}

Mask::Mask(int h, int w, double fill) : height(h), width(w) {
  check_shape(h, w);
  if (fill < 0.0 || fill > 1.0) throw ValidationError("Mask fill outside [0,1]");
  data.assign(static_cast<std::size_t>(h) * w, fill);
}

bool Mask::is_binary() const {
  return std::all_of(data.begin(), data.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

Kernel2D::Kernel2D(int h, int w, std::vector<double> w_values)
    : height(h), width(w), weights(std::move(w_values)) {
  check_shape(h, w);
  if (h % 2 == 0 || w % 2 == 0) throw ValidationError("Kernel2D dimensions must be odd");
  if (weights.size() != static_cast<std::size_t>(h) * w) {
    throw ValidationError("Kernel2D weights length must be height*width");
  }
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0)) throw ValidationError("Kernel2D weights must be nonnegative");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw ValidationError("Kernel2D weights must sum to 1");
}

Kernel2D Kernel2D::identity() { return Kernel2D(1, 1, {1.0}); }

Kernel2D Kernel2D::box(int size) {
  const double w = 1.0 / (static_cast<double>(size) * size);
  return Kernel2D(size, size, std::vector<double>(static_cast<std::size_t>(size) * size, w));
}

Kernel2D Kernel2D::gaussian(int size, double sigma) {
  if (sigma <= 0.0) throw ValidationError("gaussian kernel sigma must be positive");
  const int r = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size) * size);
  double sum = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      w[static_cast<std::size_t>(dy + r) * size + (dx + r)] = v;
      sum += v;
    }
  }
  for (double& v : w) v /= sum;
  return Kernel2D(size, size, std::move(w));
}

ImageF normalize(const Image8& img) {
  ImageF out;
  out.height = img.height;
  out.width = img.width;
  out.data.resize(img.data.size());
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    out.data[i] = 2.0 * (static_cast<double>(img.data[i]) / 255.0) - 1.0;
  }
  return out;
}

Image8 denormalize(const ImageF& img) {
  Image8 out;
  out.height = img.height;
  out.width = img.width;
  out.data.resize(img.data.size());
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const double v = img.data[i];
    if (!std::isfinite(v)) throw ValidationError("denormalize: non-finite value");
    out.data[i] = quantize_channel(255.0 * (v + 1.0) / 2.0);
  }
  return out;
}

namespace {

// Replicate-padded correlation at (y, x) for one channel.
template <typename At>
double correlate_at(const At& at, int h, int w, const Kernel2D& k, int y, int x) {
  const int ry = k.height / 2;
  const int rx = k.width / 2;
  double acc = 0.0;
  for (int ky = 0; ky < k.height; ++ky) {
    const int sy = std::clamp(y + ky - ry, 0, h - 1);
    for (int kx = 0; kx < k.width; ++kx) {
      const int sx = std::clamp(x + kx - rx, 0, w - 1);
      acc += k.at(ky, kx) * at(sy, sx);
    }
  }
  return acc;
}

void check_kernel_fits(int h, int w, const Kernel2D& k) {
  if (k.height > h || k.width > w) {
    throw ValidationError("kernel larger than image");
  }
}

}  // namespace

namespace detail {

Image8 convolve_any(const Image8& img, const Kernel2D& k) {
  Image8 out;
  out.height = img.height;
  out.width = img.width;
  out.data.resize(img.data.size());
  for (int c = 0; c < 3; ++c) {
    const auto at = [&](int y, int x) { return static_cast<double>(img.at(y, x, c)); };
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        out.at(y, x, c) = quantize_channel(correlate_at(at, img.height, img.width, k, y, x));
      }
    }
  }
  return out;
}

}  // namespace detail

Image8 convolve(const Image8& img, const Kernel2D& k) {
  check_kernel_fits(img.height, img.width, k);
  return detail::convolve_any(img, k);
}

Mask convolve(const Mask& m, const Kernel2D& k) {
  check_kernel_fits(m.height, m.width, k);
  Mask out(m.height, m.width);
  const auto at = [&](int y, int x) { return m.at(y, x); };
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      out.at(y, x) = std::clamp(correlate_at(at, m.height, m.width, k, y, x), 0.0, 1.0);
    }
  }
  return out;
}

ImageF composite(const ImageF& restored, const Mask& m, const std::array<double, 3>& background) {
  if (restored.height != m.height || restored.width != m.width) {
    throw ValidationError("composite: image and mask shapes disagree");
  }
  ImageF out;
  out.height = restored.height;
  out.width = restored.width;
  out.data.resize(restored.data.size());
  for (int y = 0; y < restored.height; ++y) {
    for (int x = 0; x < restored.width; ++x) {
      const double mv = m.at(y, x);
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = restored.at(y, x, c) * mv + background[c] * (1.0 - mv);
      }
    }
  }
  return out;
}

}  // namespace vdcs
