#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "vdcs/errors.hpp"
#include "vdcs/scheduler.hpp"

using namespace vdcs;

TEST_CASE("sticky matrix entries") {
  const TransitionMatrix pi = TransitionMatrix::sticky(0.8);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      if (i == j) {
        CHECK(pi.at(i, j) == doctest::Approx(0.8).epsilon(1e-12));
      } else {
        CHECK(std::fabs(pi.at(i, j) - 0.2 / 6.0) < 1e-12);
      }
    }
  }

  const TransitionMatrix eye = TransitionMatrix::sticky(1.0);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) CHECK(eye.at(i, j) == (i == j ? 1.0 : 0.0));
  }

  const TransitionMatrix uniform = TransitionMatrix::sticky(1.0 / 7.0);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) CHECK(std::fabs(uniform.at(i, j) - 1.0 / 7.0) < 1e-12);
  }

  CHECK_THROWS_AS(TransitionMatrix::sticky(1.2), ValidationError);
  CHECK_THROWS_AS(TransitionMatrix::sticky(-0.1), ValidationError);
}

TEST_CASE("transition matrix validation") {
  std::array<double, 49> bad{};
  bad[0] = 0.5;  // row 0 sums to 0.5
  for (int i = 1; i < 7; ++i) bad[static_cast<std::size_t>(i) * 7 + i] = 1.0;
  CHECK_THROWS_AS((TransitionMatrix(bad)), ValidationError);
}

TEST_CASE("severity bands for the paper base severities") {
  const DegradationConfig cfg;
  const SeverityBand rain = severity_band(CorruptionMode::Rain, cfg);
  CHECK(rain.lo == doctest::Approx(0.54).epsilon(1e-12));
  CHECK(rain.hi == doctest::Approx(0.66).epsilon(1e-12));
  const SeverityBand blur = severity_band(CorruptionMode::MotionBlur, cfg);
  CHECK(blur.lo == doctest::Approx(0.315).epsilon(1e-12));
  CHECK(blur.hi == doctest::Approx(0.385).epsilon(1e-12));
  const SeverityBand low = severity_band(CorruptionMode::LowLight, cfg);
  CHECK(low.lo == doctest::Approx(0.63).epsilon(1e-12));
  CHECK(low.hi == doctest::Approx(0.77).epsilon(1e-12));

  // The 0.1 floor binds for small base severities.
  DegradationConfig small = cfg;
  small.haze.base_severity = 0.1;
  const SeverityBand floored = severity_band(CorruptionMode::Haze, small);
  CHECK(floored.lo == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(floored.hi == doctest::Approx(0.11).epsilon(1e-12));

  // Bases far below the floor make the band empty, which is invalid.
  DegradationConfig tiny = cfg;
  tiny.haze.base_severity = 0.05;
  CHECK_THROWS_AS(severity_band(CorruptionMode::Haze, tiny), ValidationError);
}

TEST_CASE("identity chain never switches and walks inside the band") {
  const DegradationConfig cfg;
  const TransitionMatrix eye = TransitionMatrix::identity();
  ScheduleState s = schedule_start(RngStream::from_seed(40).substream(kScheduleStreamTag, 0), cfg);
  const CorruptionMode mode0 = s.mode;
  const SeverityBand band = severity_band(mode0, cfg);
  std::set<double> seen;
  for (int t = 0; t < 2000; ++t) {
    s = step(s, eye, cfg);
    CHECK(s.mode == mode0);
    CHECK(band.contains(s.severity.value));
    seen.insert(s.severity.value);
  }
  CHECK(seen.size() > 100);  // the walk actually moves
}

TEST_CASE("mode re-entry resamples severity uniformly in the new band") {
  // p_s = 0 forces a switch every step.
  const DegradationConfig cfg;
  const TransitionMatrix pi = TransitionMatrix::sticky(0.0);
  ScheduleState s = schedule_start(RngStream::from_seed(41).substream(kScheduleStreamTag, 0), cfg);
  const SeverityBand rain_band = severity_band(CorruptionMode::Rain, cfg);
  double rain_lo = 1.0;
  double rain_hi = 0.0;
  for (int t = 0; t < 5000; ++t) {
    const CorruptionMode before = s.mode;
    s = step(s, pi, cfg);
    CHECK(s.mode != before);
    CHECK(severity_band(s.mode, cfg).contains(s.severity.value));
    if (s.mode == CorruptionMode::Rain) {
      rain_lo = std::min(rain_lo, s.severity.value);
      rain_hi = std::max(rain_hi, s.severity.value);
    }
  }
  // Fresh uniform draws spread over the whole band; a residual random
  // walk from a fixed point could not reach both edges this fast.
  const double width = rain_band.hi - rain_band.lo;
  CHECK(rain_lo < rain_band.lo + 0.05 * width);
  CHECK(rain_hi > rain_band.hi - 0.05 * width);
}

TEST_CASE("schedule statistics at p_s = 0.8") {
  const DegradationConfig cfg;
  const TransitionMatrix pi = TransitionMatrix::sticky(0.8);
  const auto rows = schedule_trace(100000, pi, cfg, 7);
  const TraceStats st = compute_trace_stats(rows);
  REQUIRE(st.self_transition_rate.has_value());
  CHECK(std::fabs(*st.self_transition_rate - 0.8) < 0.01);
  CHECK(std::fabs(st.mean_segment_length - 5.0) < 0.25);
  for (int k = 0; k < 7; ++k) {
    CHECK(std::fabs(st.mode_marginal[k] - 1.0 / 7.0) < 0.01);
  }
}

TEST_CASE("mode marginals are uniform over a million steps") {
  // The symmetric sticky chain is doubly stochastic, so its stationary
  // distribution is uniform.
  const DegradationConfig cfg;
  const TransitionMatrix pi = TransitionMatrix::sticky(0.8);
  const auto rows = schedule_trace(1000000, pi, cfg, 99);
  const TraceStats st = compute_trace_stats(rows);
  for (int k = 0; k < 7; ++k) {
    CHECK(std::fabs(st.mode_marginal[k] - 1.0 / 7.0) < 0.01);
  }
}

TEST_CASE("corrupt_stream with a pinned haze state reduces to the haze operator") {
  Image8 frame(16, 16, 60);
  ScheduleState pinned;
  pinned.mode = CorruptionMode::Haze;
  pinned.severity = Severity(0.6);
  pinned.step = 0;
  pinned.rng = RngStream::from_seed(0).substream(kScheduleStreamTag, 0);

  const DegradationConfig cfg;
  const StreamResult out =
      corrupt_stream({frame}, TransitionMatrix::identity(), cfg, 0, pinned);
  REQUIRE(out.frames.size() == 1);
  CHECK(out.frames[0].image == haze(frame, Severity(0.6), cfg.haze));
  CHECK(out.trace[0].mode_code == mode_code(CorruptionMode::Haze));
  CHECK(out.trace[0].severity == 0.6);
}

TEST_CASE("corrupt_stream is deterministic and prefix-stable") {
  RngStream rng = RngStream::from_seed(50);
  std::vector<Image8> frames;
  for (int i = 0; i < 8; ++i) {
    Image8 img(12, 12);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.uniform_int(256));
    frames.push_back(std::move(img));
  }
  const DegradationConfig cfg;
  const TransitionMatrix pi = TransitionMatrix::sticky(0.8);

  const StreamResult a = corrupt_stream(frames, pi, cfg, 123);
  const StreamResult b = corrupt_stream(frames, pi, cfg, 123);
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    CHECK(a.frames[i].image == b.frames[i].image);
    CHECK(a.trace[i].severity == b.trace[i].severity);
  }

  // Outputs at position t depend only on the prefix.
  const std::vector<Image8> prefix(frames.begin(), frames.begin() + 4);
  const StreamResult c = corrupt_stream(prefix, pi, cfg, 123);
  for (std::size_t i = 0; i < c.frames.size(); ++i) {
    CHECK(c.frames[i].image == a.frames[i].image);
    CHECK(c.trace[i].mode_code == a.trace[i].mode_code);
  }

  CHECK_THROWS_AS(corrupt_stream({}, pi, cfg, 1), ValidationError);
}

TEST_CASE("trace files round-trip through JSONL") {
  const DegradationConfig cfg;
  const auto rows = schedule_trace(64, TransitionMatrix::sticky(0.8), cfg, 5);
  const auto path = std::filesystem::temp_directory_path() / "vdcs_trace_test.jsonl";
  write_trace(path, R"({"type":"header","seed":5})", rows);
  std::string header;
  const auto loaded = read_trace(path, &header);
  REQUIRE(loaded.size() == rows.size());
  CHECK(header.find("header") != std::string::npos);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(loaded[i].step == rows[i].step);
    CHECK(loaded[i].mode_code == rows[i].mode_code);
    CHECK(loaded[i].mode_name == rows[i].mode_name);
    CHECK(loaded[i].severity == rows[i].severity);
    CHECK(loaded[i].rng_counter_before == rows[i].rng_counter_before);
  }
  std::filesystem::remove(path);
}

TEST_CASE("trace stats handle a single-step trace") {
  const DegradationConfig cfg;
  const auto rows = schedule_trace(1, TransitionMatrix::identity(), cfg, 3);
  const TraceStats st = compute_trace_stats(rows);
  CHECK(st.steps == 1);
  CHECK_FALSE(st.self_transition_rate.has_value());
  CHECK(st.mean_segment_length == 1.0);
}

TEST_CASE("schedule draw counter advances two per step") {
  const DegradationConfig cfg;
  const auto rows = schedule_trace(10, TransitionMatrix::sticky(0.5), cfg, 8);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].rng_counter_before == 2 * i);
  }
}
