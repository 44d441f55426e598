#include "vdcs/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vdcs/errors.hpp"
#include "vdcs/jpeg_codec.hpp"

namespace vdcs {

namespace {

// 3x3 Gaussian, sigma 0.8: the minimal smoothing that removes
// rasterization aliasing from weather masks.
const Kernel2D& mask_smooth_kernel() {
  static const Kernel2D k = Kernel2D::gaussian(3, 0.8);
  return k;
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::clamp(round_half_even(v), 0.0, 255.0));
}

// Wu-style anti-aliased line; plot receives integer coordinates and a
// coverage in [0,1]. Endpoints get partial-step weighting.
template <typename Plot>
void raster_line_aa(double x0, double y0, double x1, double y1, Plot&& plot) {
  const bool steep = std::fabs(y1 - y0) > std::fabs(x1 - x0);
  if (steep) {
    std::swap(x0, y0);
    std::swap(x1, y1);
  }
  if (x0 > x1) {
    std::swap(x0, x1);
    std::swap(y0, y1);
  }
  const auto emit = [&](int x, int y, double cov) {
    if (cov <= 0.0) return;
    if (steep) {
      plot(y, x, std::min(cov, 1.0));
    } else {
      plot(x, y, std::min(cov, 1.0));
    }
  };

  const double dx = x1 - x0;
  const double gradient = dx == 0.0 ? 1.0 : (y1 - y0) / dx;

  // First endpoint.
  double xend = std::round(x0);
  double yend = y0 + gradient * (xend - x0);
  double xgap = 1.0 - (x0 + 0.5 - std::floor(x0 + 0.5));
  const int xpx1 = static_cast<int>(xend);
  {
    const int ypx = static_cast<int>(std::floor(yend));
    const double f = yend - std::floor(yend);
    emit(xpx1, ypx, (1.0 - f) * xgap);
    emit(xpx1, ypx + 1, f * xgap);
  }
  double intery = yend + gradient;

  // Second endpoint.
  xend = std::round(x1);
  yend = y1 + gradient * (xend - x1);
  xgap = x1 + 0.5 - std::floor(x1 + 0.5);
  const int xpx2 = static_cast<int>(xend);
  {
    const int ypx = static_cast<int>(std::floor(yend));
    const double f = yend - std::floor(yend);
    emit(xpx2, ypx, (1.0 - f) * xgap);
    emit(xpx2, ypx + 1, f * xgap);
  }

  for (int x = xpx1 + 1; x < xpx2; ++x) {
    const int ypx = static_cast<int>(std::floor(intery));
    const double f = intery - std::floor(intery);
    emit(x, ypx, 1.0 - f);
    emit(x, ypx + 1, f);
    intery += gradient;
  }
}

// Alpha blend o toward color c through mask m scaled by gamma.
Image8 blend_with_mask(const Image8& o, const Mask& m, double gamma,
                       const std::array<double, 3>& color) {
  Image8 out;
  out.height = o.height;
  out.width = o.width;
  out.data.resize(o.data.size());
  for (int y = 0; y < o.height; ++y) {
    for (int x = 0; x < o.width; ++x) {
      const double t = gamma * m.at(y, x);
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = quantize(blend_channel(o.at(y, x, c), t, color[c]));
      }
    }
  }
  return out;
}

void max_plot(Mask& m, int x, int y, double cov) {
  if (x < 0 || y < 0 || x >= m.width || y >= m.height) return;
  double& v = m.at(y, x);
  v = std::max(v, cov);
}

}  // namespace

std::string_view mode_name(CorruptionMode m) {
  switch (m) {
    case CorruptionMode::Rain: return "rain";
    case CorruptionMode::Haze: return "haze";
    case CorruptionMode::Snow: return "snow";
    case CorruptionMode::MotionBlur: return "motion_blur";
    case CorruptionMode::GaussianNoise: return "gaussian_noise";
    case CorruptionMode::LowLight: return "low_light";
    case CorruptionMode::Jpeg: return "jpeg";
  }
  throw ValidationError("invalid corruption mode code");
}

CorruptionMode mode_from_name(std::string_view name) {
  for (CorruptionMode m : kAllModes) {
    if (mode_name(m) == name) return m;
  }
  throw ValidationError("unknown corruption mode: " + std::string(name));
}

CorruptionMode mode_from_code(int code) {
  if (code < 1 || code > 7) {
    throw ValidationError("corruption mode code must lie in 1..7, got " + std::to_string(code));
  }
  return static_cast<CorruptionMode>(code);
}

Severity::Severity(double v) : value(v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError("severity must lie in [0,1], got " + std::to_string(v));
  }
}

double DegradationConfig::base_severity(CorruptionMode m) const {
  switch (m) {
    case CorruptionMode::Rain: return rain.base_severity;
    case CorruptionMode::Haze: return haze.base_severity;
    case CorruptionMode::Snow: return snow.base_severity;
    case CorruptionMode::MotionBlur: return motion_blur.base_severity;
    case CorruptionMode::GaussianNoise: return gaussian_noise.base_severity;
    case CorruptionMode::LowLight: return low_light.base_severity;
    case CorruptionMode::Jpeg: return jpeg.base_severity;
  }
  throw ValidationError("invalid corruption mode code");
}

int motion_blur_length(Severity iota, const MotionBlurParams& p) {
  const double raw = p.len_min + iota.value * (p.len_max - p.len_min);
  const int odd = 2 * static_cast<int>(round_half_even((raw - 1.0) / 2.0)) + 1;
  return std::max(3, odd);
}

int jpeg_quality(Severity iota, const JpegParams& p) {
  const double q = round_half_even(static_cast<double>(p.q_max) -
                                   iota.value * static_cast<double>(p.q_max - p.q_min));
  return static_cast<int>(std::clamp(q, static_cast<double>(p.q_min),
                                     static_cast<double>(p.q_max)));
}

double low_light_gain(Severity iota, const LowLightParams& p) {
  return 1.0 - iota.value * (1.0 - p.nu_min);
}

double gaussian_noise_sigma(Severity iota, const GaussianNoiseParams& p) {
  return iota.value * p.sigma_max;
}

int rain_streak_count(Severity iota, const RainParams& p) {
  return static_cast<int>(std::floor(p.count_factor * iota.value));
}

int snow_flake_count(Severity iota, const SnowParams& p) {
  return static_cast<int>(std::floor(p.count_factor * iota.value));
}

// Draw order per streak: start x, start y, length, angle (4 uniforms).
Image8 rain(const Image8& o, Severity iota, RngStream& rng, const RainParams& p,
            Mask* out_mask) {
  Mask m(o.height, o.width, 0.0);
  const int n = rain_streak_count(iota, p);
  for (int i = 0; i < n; ++i) {
    const double x0 = rng.uniform01() * o.width;
    const double y0 = rng.uniform01() * o.height;
    const double len = rng.uniform(p.len_min, p.len_max);
    const double angle =
        rng.uniform(p.angle_min_deg, p.angle_max_deg) * std::numbers::pi / 180.0;
    const double x1 = x0 + len * std::cos(angle);
    const double y1 = y0 + len * std::sin(angle);
    raster_line_aa(x0, y0, x1, y1, [&](int x, int y, double cov) { max_plot(m, x, y, cov); });
  }
  if (n > 0) m = convolve(m, mask_smooth_kernel());
  if (out_mask) *out_mask = m;
  return blend_with_mask(o, m, p.gamma, p.color);
}

// Draw order per flake: center x, center y, radius, brightness.
Image8 snow(const Image8& o, Severity iota, RngStream& rng, const SnowParams& p,
            Mask* out_mask) {
  Mask m(o.height, o.width, 0.0);
  const int n = snow_flake_count(iota, p);
  for (int i = 0; i < n; ++i) {
    const double cx = rng.uniform01() * o.width;
    const double cy = rng.uniform01() * o.height;
    const auto radius = static_cast<double>(
        p.radius_min + static_cast<int>(rng.uniform_int(
                           static_cast<std::uint64_t>(p.radius_max - p.radius_min + 1))));
    const double brightness = rng.uniform(p.brightness_min, p.brightness_max);
    const double value = brightness / 255.0;
    const int ylo = std::max(0, static_cast<int>(std::floor(cy - radius - 1.0)));
    const int yhi = std::min(o.height - 1, static_cast<int>(std::ceil(cy + radius + 1.0)));
    const int xlo = std::max(0, static_cast<int>(std::floor(cx - radius - 1.0)));
    const int xhi = std::min(o.width - 1, static_cast<int>(std::ceil(cx + radius + 1.0)));
    for (int y = ylo; y <= yhi; ++y) {
      for (int x = xlo; x <= xhi; ++x) {
        const double dist = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
        const double cov = std::clamp(radius + 0.5 - dist, 0.0, 1.0);
        if (cov > 0.0) max_plot(m, x, y, value * cov);
      }
    }
  }
  if (n > 0) m = convolve(m, mask_smooth_kernel());
  if (out_mask) *out_mask = m;
  return blend_with_mask(o, m, p.gamma, p.color);
}

// Deterministic: no RNG draws. Row profile rho(y) = sqrt(y/H).
Image8 haze(const Image8& o, Severity iota, const HazeParams& p) {
  const double alpha = p.alpha_scale * iota.value;
  Image8 out;
  out.height = o.height;
  out.width = o.width;
  out.data.resize(o.data.size());
  for (int y = 0; y < o.height; ++y) {
    const double rho = std::sqrt(static_cast<double>(y) / static_cast<double>(o.height));
    const double t = alpha * rho;
    for (int x = 0; x < o.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        out.at(y, x, c) = quantize(blend_channel(o.at(y, x, c), t, p.color[c]));
      }
    }
  }
  return out;
}

// One RNG draw: the kernel angle.
Image8 motion_blur(const Image8& o, Severity iota, RngStream& rng, const MotionBlurParams& p) {
  const double theta = rng.uniform01() * 2.0 * std::numbers::pi;
  const int len = motion_blur_length(iota, p);
  const int r = len / 2;
  std::vector<double> w(static_cast<std::size_t>(len) * len, 0.0);
  const double half = static_cast<double>(len - 1) / 2.0;
  const double cx = static_cast<double>(r);
  const double cy = static_cast<double>(r);
  raster_line_aa(cx - half * std::cos(theta), cy - half * std::sin(theta),
                 cx + half * std::cos(theta), cy + half * std::sin(theta),
                 [&](int x, int y, double cov) {
                   if (x < 0 || y < 0 || x >= len || y >= len) return;
                   w[static_cast<std::size_t>(y) * len + x] += cov;
                 });
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
  return detail::convolve_any(o, Kernel2D(len, len, std::move(w)));
}

// H*W*3 normal draws in row-major R,G,B order.
Image8 gaussian_noise(const Image8& o, Severity iota, RngStream& rng,
                      const GaussianNoiseParams& p) {
  const double sigma = gaussian_noise_sigma(iota, p);
  Image8 out;
  out.height = o.height;
  out.width = o.width;
  out.data.resize(o.data.size());
  for (std::size_t i = 0; i < o.data.size(); ++i) {
    out.data[i] = quantize(static_cast<double>(o.data[i]) + sigma * rng.normal());
  }
  return out;
}

// H*W*3 normal draws in row-major R,G,B order.
Image8 low_light(const Image8& o, Severity iota, RngStream& rng, const LowLightParams& p) {
  const double nu = low_light_gain(iota, p);
  const double sigma = iota.value * p.sigma;
  Image8 out;
  out.height = o.height;
  out.width = o.width;
  out.data.resize(o.data.size());
  for (std::size_t i = 0; i < o.data.size(); ++i) {
    out.data[i] = quantize(nu * static_cast<double>(o.data[i]) + sigma * rng.normal());
  }
  return out;
}

// Deterministic: no RNG draws.
Image8 jpeg_compress(const Image8& o, Severity iota, const JpegParams& p) {
  return jpeg_roundtrip(o, jpeg_quality(iota, p));
}

Image8 apply(CorruptionMode mode, const Image8& o, Severity iota, RngStream& rng,
             const DegradationConfig& cfg) {
  switch (mode) {
    case CorruptionMode::Rain: return rain(o, iota, rng, cfg.rain);
    case CorruptionMode::Haze: return haze(o, iota, cfg.haze);
    case CorruptionMode::Snow: return snow(o, iota, rng, cfg.snow);
    case CorruptionMode::MotionBlur: return motion_blur(o, iota, rng, cfg.motion_blur);
    case CorruptionMode::GaussianNoise: return gaussian_noise(o, iota, rng, cfg.gaussian_noise);
    case CorruptionMode::LowLight: return low_light(o, iota, rng, cfg.low_light);
    case CorruptionMode::Jpeg: return jpeg_compress(o, iota, cfg.jpeg);
  }
  throw ValidationError("invalid corruption mode code");
}

}  // namespace vdcs
