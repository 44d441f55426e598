#pragma once

#include <array>
#include <string_view>

#include "vdcs/image.hpp"
#include "vdcs/rng.hpp"

namespace vdcs {

// The seven corruption modes, codes 1..7 in this fixed order.
enum class CorruptionMode : int {
  Rain = 1,
  Haze = 2,
  Snow = 3,
  MotionBlur = 4,
  GaussianNoise = 5,
  LowLight = 6,
  Jpeg = 7,
};

inline constexpr std::array<CorruptionMode, 7> kAllModes = {
    CorruptionMode::Rain,        CorruptionMode::Haze,     CorruptionMode::Snow,
    CorruptionMode::MotionBlur,  CorruptionMode::GaussianNoise,
    CorruptionMode::LowLight,    CorruptionMode::Jpeg,
};

constexpr int mode_code(CorruptionMode m) { return static_cast<int>(m); }
std::string_view mode_name(CorruptionMode m);
CorruptionMode mode_from_name(std::string_view name);
CorruptionMode mode_from_code(int code);

// Scalar corruption strength in [0, 1]; validated on construction.
struct Severity {
  double value = 0.0;
  Severity() = default;
  Severity(double v);  // NOLINT(google-explicit-constructor)
};

struct RainParams {
  double gamma = 0.3;
  double count_factor = 500.0;
  double len_min = 3.0;
  double len_max = 10.0;
  double angle_min_deg = 80.0;
  double angle_max_deg = 100.0;
  std::array<double, 3> color = {255.0, 255.0, 255.0};
  double base_severity = 0.6;
};

struct SnowParams {
  double gamma = 0.5;
  double count_factor = 1000.0;
  int radius_min = 1;
  int radius_max = 2;
  double brightness_min = 200.0;
  double brightness_max = 255.0;
  std::array<double, 3> color = {255.0, 255.0, 255.0};
  double base_severity = 0.6;
};

struct HazeParams {
  double alpha_scale = 0.7;
  std::array<double, 3> color = {200.0, 200.0, 200.0};
  double base_severity = 0.6;
};

struct MotionBlurParams {
  double len_min = 5.0;
  double len_max = 25.0;
  double base_severity = 0.35;
};

struct GaussianNoiseParams {
  double sigma_max = 25.0;
  double base_severity = 0.5;
};

struct LowLightParams {
  double nu_min = 0.2;
  double sigma = 15.0;
  double base_severity = 0.7;
};

struct JpegParams {
  int q_min = 10;
  int q_max = 90;
  double base_severity = 0.7;
};

// Operator constants and per-mode base severities. Defaults are the
// benchmark values; overrides land in dataset manifests via the config
// hash.
struct DegradationConfig {
  RainParams rain;
  SnowParams snow;
  HazeParams haze;
  MotionBlurParams motion_blur;
  GaussianNoiseParams gaussian_noise;
  LowLightParams low_light;
  JpegParams jpeg;
  double severity_band_delta = 0.1;
  double severity_walk_sigma = 0.02;

  double base_severity(CorruptionMode m) const;
};

// (1 - t) * o + t * c for one channel, before quantization.
constexpr double blend_channel(double o, double t, double c) { return (1.0 - t) * o + t * c; }

// Blur length 5 + iota*(25-5), rounded to the nearest odd integer, min 3.
// Odd rounding: 2 * round_half_even((raw - 1) / 2) + 1.
int motion_blur_length(Severity iota, const MotionBlurParams& p = {});

// round(q_max - iota * (q_max - q_min)).
int jpeg_quality(Severity iota, const JpegParams& p = {});

// Exposure gain nu = 1 - iota * (1 - nu_min).
double low_light_gain(Severity iota, const LowLightParams& p = {});

// Noise scale sigma = iota * sigma_max, in 8-bit units.
double gaussian_noise_sigma(Severity iota, const GaussianNoiseParams& p = {});

// Streak and flake counts: floor(count_factor * iota).
int rain_streak_count(Severity iota, const RainParams& p = {});
int snow_flake_count(Severity iota, const SnowParams& p = {});

// The seven degradation operators. Each consumes a documented, fixed
// number and order of RNG draws (see the implementation notes); haze and
// jpeg_compress consume none. out_mask, when given, receives the
// smoothed weather mask of the run.
Image8 rain(const Image8& o, Severity iota, RngStream& rng, const RainParams& p = {},
            Mask* out_mask = nullptr);
Image8 snow(const Image8& o, Severity iota, RngStream& rng, const SnowParams& p = {},
            Mask* out_mask = nullptr);
Image8 haze(const Image8& o, Severity iota, const HazeParams& p = {});
Image8 motion_blur(const Image8& o, Severity iota, RngStream& rng,
                   const MotionBlurParams& p = {});
Image8 gaussian_noise(const Image8& o, Severity iota, RngStream& rng,
                      const GaussianNoiseParams& p = {});
Image8 low_light(const Image8& o, Severity iota, RngStream& rng, const LowLightParams& p = {});
Image8 jpeg_compress(const Image8& o, Severity iota, const JpegParams& p = {});

// Dispatch by mode.
Image8 apply(CorruptionMode mode, const Image8& o, Severity iota, RngStream& rng,
             const DegradationConfig& cfg = {});

}  // namespace vdcs
