#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vdcs/degrade.hpp"
#include "vdcs/errors.hpp"
#include "vdcs/image.hpp"
#include "vdcs/jpeg_codec.hpp"
#include "vdcs/rng.hpp"

using namespace vdcs;

namespace {

Image8 random_image(int h, int w, RngStream& rng) {
  Image8 img(h, w);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.uniform_int(256));
  return img;
}

}  // namespace

TEST_CASE("mode codes, names and order are stable") {
  CHECK(mode_code(CorruptionMode::Rain) == 1);
  CHECK(mode_code(CorruptionMode::Haze) == 2);
  CHECK(mode_code(CorruptionMode::Snow) == 3);
  CHECK(mode_code(CorruptionMode::MotionBlur) == 4);
  CHECK(mode_code(CorruptionMode::GaussianNoise) == 5);
  CHECK(mode_code(CorruptionMode::LowLight) == 6);
  CHECK(mode_code(CorruptionMode::Jpeg) == 7);
  for (CorruptionMode m : kAllModes) {
    CHECK(mode_from_name(mode_name(m)) == m);
    CHECK(mode_from_code(mode_code(m)) == m);
  }
  CHECK_THROWS_AS(mode_from_name("sleet"), ValidationError);
  CHECK_THROWS_AS(mode_from_code(0), ValidationError);
  CHECK_THROWS_AS(mode_from_code(8), ValidationError);
}

TEST_CASE("severity validates its range") {
  CHECK_NOTHROW(Severity(0.0));
  CHECK_NOTHROW(Severity(1.0));
  CHECK_THROWS_AS(Severity(-0.01), ValidationError);
  CHECK_THROWS_AS(Severity(1.01), ValidationError);
}

TEST_CASE("streak and flake counts follow floor(factor * severity)") {
  CHECK(rain_streak_count(Severity(0.6)) == 300);
  CHECK(rain_streak_count(Severity(0.0)) == 0);
  CHECK(rain_streak_count(Severity(1.0)) == 500);
  CHECK(snow_flake_count(Severity(0.6)) == 600);
  CHECK(snow_flake_count(Severity(0.0)) == 0);
}

TEST_CASE("alpha blend formula endpoints") {
  // Fully covered rain pixel on black: 0.3 * 255 = 76.5, one LSB around 77.
  const double rain_covered = round_half_even(blend_channel(0.0, 0.3, 255.0));
  CHECK(std::fabs(rain_covered - 77.0) <= 1.0);
  // Fully covered snow pixel on black with gamma 0.5: exactly 128 after
  // half-even rounding of 127.5.
  CHECK(round_half_even(blend_channel(0.0, 0.5, 255.0)) == 128.0);
  // Haze at the bottom-limit density: 0.58*100 + 0.42*200 = 142.
  CHECK(round_half_even(blend_channel(100.0, 0.7 * 0.6, 200.0)) == 142.0);
}

TEST_CASE("rain at zero severity is the identity and draws nothing") {
  RngStream rng = RngStream::from_seed(10);
  Image8 img = random_image(16, 16, rng);
  RngStream op = RngStream::from_seed(11);
  Mask m;
  CHECK(rain(img, Severity(0.0), op, {}, &m) == img);
  CHECK(op.counter() == 0);
  for (double v : m.data) CHECK(v == 0.0);
}

TEST_CASE("rain output obeys the blend law against its captured mask") {
  RngStream rng = RngStream::from_seed(12);
  const Image8 img = random_image(32, 32, rng);
  RngStream op = RngStream::from_seed(13);
  Mask m;
  const RainParams p;
  const Image8 out = rain(img, Severity(0.6), op, p, &m);
  CHECK(op.counter() == 4 * 300);  // 4 draws per streak
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      CHECK(m.at(y, x) >= 0.0);
      CHECK(m.at(y, x) <= 1.0);
      for (int c = 0; c < 3; ++c) {
        const double expect = blend_channel(img.at(y, x, c), p.gamma * m.at(y, x), p.color[c]);
        CHECK(std::fabs(out.at(y, x, c) - expect) <= 1.0);
      }
    }
  }
}

TEST_CASE("snow behaves like rain with its own constants") {
  RngStream rng = RngStream::from_seed(14);
  const Image8 img = random_image(32, 32, rng);
  RngStream op = RngStream::from_seed(15);
  Mask m;
  const SnowParams p;
  const Image8 out = snow(img, Severity(0.6), op, p, &m);
  CHECK(op.counter() == 4 * 600);  // 4 draws per flake
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double expect = blend_channel(img.at(y, x, c), p.gamma * m.at(y, x), p.color[c]);
        CHECK(std::fabs(out.at(y, x, c) - expect) <= 1.0);
      }
    }
  }

  RngStream op0 = RngStream::from_seed(16);
  CHECK(snow(img, Severity(0.0), op0) == img);
  CHECK(op0.counter() == 0);
}

TEST_CASE("haze is deterministic with the stated row profile") {
  RngStream rng = RngStream::from_seed(17);
  const Image8 img = random_image(24, 8, rng);

  CHECK(haze(img, Severity(0.0)) == img);

  const HazeParams p;
  const Image8 out = haze(img, Severity(0.6), p);
  // Top row has rho(0) = 0: unchanged.
  for (int x = 0; x < img.width; ++x) {
    for (int c = 0; c < 3; ++c) CHECK(out.at(0, x, c) == img.at(0, x, c));
  }
  const double alpha = p.alpha_scale * 0.6;
  for (int y = 0; y < img.height; ++y) {
    const double t = alpha * std::sqrt(static_cast<double>(y) / img.height);
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const double expect = blend_channel(img.at(y, x, c), t, p.color[c]);
        CHECK(std::fabs(out.at(y, x, c) - expect) <= 0.5 + 1e-9);
      }
    }
  }
}

TEST_CASE("haze brightness is monotone in severity on dark pixels") {
  Image8 img(10, 4, 90);
  int prev = -1;
  for (double iota : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const Image8 out = haze(img, Severity(iota));
    const int v = out.at(9, 0, 0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("motion blur length mapping") {
  CHECK(motion_blur_length(Severity(0.5)) == 15);
  CHECK(motion_blur_length(Severity(1.0)) == 25);
  CHECK(motion_blur_length(Severity(0.0)) == 5);
  // Never below 3 and always odd.
  MotionBlurParams tiny;
  tiny.len_min = 1.0;
  tiny.len_max = 2.0;
  for (double iota : {0.0, 0.3, 0.7, 1.0}) {
    const int len = motion_blur_length(Severity(iota), tiny);
    CHECK(len >= 3);
    CHECK(len % 2 == 1);
  }
}

TEST_CASE("motion blur leaves constant images unchanged and is not identity at zero severity") {
  Image8 flat(32, 32, 200);
  for (int seed = 0; seed < 5; ++seed) {
    RngStream op = RngStream::from_seed(seed);
    CHECK(motion_blur(flat, Severity(1.0), op) == flat);
  }

  RngStream rng = RngStream::from_seed(18);
  const Image8 img = random_image(32, 32, rng);
  RngStream op = RngStream::from_seed(19);
  const Image8 out = motion_blur(img, Severity(0.0), op);
  CHECK(op.counter() == 1);  // angle only
  CHECK(out != img);         // length 5 kernel still blurs
}

TEST_CASE("gaussian noise sigma scales with severity") {
  CHECK(0.5 * GaussianNoiseParams{}.sigma_max == 12.5);

  RngStream rng = RngStream::from_seed(20);
  const Image8 img = random_image(16, 16, rng);
  RngStream op = RngStream::from_seed(21);
  CHECK(gaussian_noise(img, Severity(0.0), op) == img);
  CHECK(op.counter() == img.data.size());  // draws consumed even at zero sigma
}

TEST_CASE("gaussian noise empirical std matches sigma at mid-gray") {
  // >= 1e5 samples across several frames; clipping at 128 +- 12.5 is
  // negligible.
  Image8 gray(84, 84, 128);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (int frame = 0; frame < 6; ++frame) {
    RngStream op = RngStream::from_seed(100 + frame);
    const Image8 out = gaussian_noise(gray, Severity(0.5), op);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
      const double d = static_cast<double>(out.data[i]) - 128.0;
      sum += d;
      sum_sq += d * d;
      ++n;
    }
  }
  CHECK(n >= 100000);
  const double mean = sum / static_cast<double>(n);
  const double stddev = std::sqrt(sum_sq / static_cast<double>(n) - mean * mean);
  CHECK(stddev >= 11.9);
  CHECK(stddev <= 13.1);
}

TEST_CASE("low light gain and noise") {
  const LowLightParams p;
  CHECK(1.0 - 0.7 * (1.0 - p.nu_min) == doctest::Approx(0.44).epsilon(1e-12));
  CHECK(1.0 - 1.0 * (1.0 - p.nu_min) == doctest::Approx(0.2).epsilon(1e-12));

  RngStream rng = RngStream::from_seed(22);
  const Image8 img = random_image(16, 16, rng);
  RngStream op = RngStream::from_seed(23);
  CHECK(low_light(img, Severity(0.0), op) == img);

  // Mean scaling at full severity: the noise is zero-mean, so the output
  // mean lands near nu * input mean.
  Image8 bright(84, 84, 200);
  RngStream op2 = RngStream::from_seed(24);
  const Image8 dark = low_light(bright, Severity(1.0), op2);
  double mean = 0.0;
  for (auto v : dark.data) mean += v;
  mean /= static_cast<double>(dark.data.size());
  CHECK(std::fabs(mean - 0.2 * 200.0) < 1.0);
}

TEST_CASE("jpeg quality mapping and mid-gray stability") {
  CHECK(jpeg_quality(Severity(0.7)) == 34);
  CHECK(jpeg_quality(Severity(0.0)) == 90);
  CHECK(jpeg_quality(Severity(1.0)) == 10);

  Image8 gray(48, 48, 128);
  for (double iota : {0.0, 0.5, 1.0}) {
    const Image8 out = jpeg_compress(gray, Severity(iota));
    for (auto v : out.data) CHECK(std::abs(static_cast<int>(v) - 128) <= 2);
  }
}

TEST_CASE("jpeg roundtrip is deterministic and rejects bad quality") {
  RngStream rng = RngStream::from_seed(25);
  const Image8 img = random_image(84, 84, rng);
  CHECK(jpeg_roundtrip(img, 34) == jpeg_roundtrip(img, 34));
  CHECK_THROWS_AS(jpeg_roundtrip(img, 0), ValidationError);
  CHECK_THROWS_AS(jpeg_roundtrip(img, 101), ValidationError);
  // Lower quality must not produce a pixel-identical frame on textured input.
  CHECK(jpeg_roundtrip(img, 10) != img);
}

TEST_CASE("apply dispatches and preserves determinism") {
  RngStream rng = RngStream::from_seed(26);
  const Image8 img = random_image(32, 32, rng);
  const DegradationConfig cfg;

  for (CorruptionMode m : kAllModes) {
    RngStream a = RngStream::from_seed(1000);
    RngStream b = RngStream::from_seed(1000);
    const Image8 out_a = apply(m, img, Severity(0.6), a, cfg);
    const Image8 out_b = apply(m, img, Severity(0.6), b, cfg);
    CHECK(out_a == out_b);
    CHECK(a.counter() == b.counter());
  }

  // Haze consumes zero draws through apply.
  RngStream h = RngStream::from_seed(1001);
  const Image8 hazed = apply(CorruptionMode::Haze, img, Severity(0.4), h, cfg);
  CHECK(h.counter() == 0);
  CHECK(hazed == haze(img, Severity(0.4), cfg.haze));

  // Gaussian noise at zero severity is the identity through apply.
  RngStream g = RngStream::from_seed(1002);
  CHECK(apply(CorruptionMode::GaussianNoise, img, Severity(0.0), g, cfg) == img);
}

TEST_CASE("operator outputs are valid frames") {
  RngStream rng = RngStream::from_seed(27);
  const Image8 img = random_image(20, 28, rng);
  for (CorruptionMode m : kAllModes) {
    RngStream op = RngStream::from_seed(500 + mode_code(m));
    const Image8 out = apply(m, img, Severity(0.9), op);
    CHECK(out.height == img.height);
    CHECK(out.width == img.width);
    CHECK(out.data.size() == img.data.size());
  }
}
