#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vdcs/degrade.hpp"
#include "vdcs/image.hpp"
#include "vdcs/rng.hpp"

namespace vdcs {

// Substream address tags under a run's root stream.
inline constexpr std::uint64_t kScheduleStreamTag = 1;
inline constexpr std::uint64_t kFrameStreamTag = 2;
inline constexpr std::uint64_t kSampleStreamTag = 3;
inline constexpr std::uint64_t kTheoryStreamTag = 4;

// Row-stochastic 7x7 transition matrix over the corruption modes.
struct TransitionMatrix {
  std::array<double, 49> p{};

  explicit TransitionMatrix(const std::array<double, 49>& entries);

  double at(int from, int to) const { return p[static_cast<std::size_t>(from) * 7 + to]; }

  // Diagonal p_s, off-diagonal (1 - p_s)/6.
  static TransitionMatrix sticky(double ps);
  static TransitionMatrix identity() { return sticky(1.0); }
};

// Per-mode severity interval: [max(0.1, (1-delta)*base), min(1, (1+delta)*base)].
struct SeverityBand {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
};

SeverityBand severity_band(CorruptionMode mode, const DegradationConfig& cfg);

// One step of the Markov-switching corruption process.
struct ScheduleState {
  CorruptionMode mode = CorruptionMode::Rain;
  Severity severity;
  std::uint64_t step = 0;
  RngStream rng;
};

// t = 0: mode uniform over the seven modes, severity uniform in the new
// mode's band. Draw order: mode, then severity.
ScheduleState schedule_start(RngStream stream, const DegradationConfig& cfg);

// Samples the next mode from the current row, then either re-draws the
// severity uniformly in the new band (on mode change) or moves it by a
// clipped N(0, walk_sigma^2) step. Draw order per step: mode, then
// severity. The band containment is asserted on every step.
ScheduleState step(const ScheduleState& state, const TransitionMatrix& pi,
                   const DegradationConfig& cfg);

struct TraceRow {
  std::uint64_t step = 0;
  int mode_code = 0;
  std::string mode_name;
  double severity = 0.0;
  std::uint64_t rng_counter_before = 0;
};

struct CorruptedFrame {
  Image8 image;
  CorruptionMode mode = CorruptionMode::Rain;
  Severity severity;
};

struct StreamResult {
  std::vector<CorruptedFrame> frames;
  std::vector<TraceRow> trace;
};

// Threads the schedule through the frame sequence. The schedule draws
// from substream (kScheduleStreamTag, 0) of the seed's root stream; the
// frame at timestep t is corrupted with substream
// (kFrameStreamTag + mode_code << 8, t), so outputs at position t depend
// only on frames[0..t] and (seed, pi, cfg). An explicit initial state
// overrides the t = 0 draws.
StreamResult corrupt_stream(const std::vector<Image8>& frames, const TransitionMatrix& pi,
                            const DegradationConfig& cfg, std::uint64_t seed,
                            const std::optional<ScheduleState>& initial = std::nullopt);

// Mode/severity trace alone, without touching pixels.
std::vector<TraceRow> schedule_trace(std::size_t steps, const TransitionMatrix& pi,
                                     const DegradationConfig& cfg, std::uint64_t seed,
                                     const std::optional<ScheduleState>& initial = std::nullopt);

// JSONL trace files: a header object line, then one row object per step.
void write_trace(const std::filesystem::path& path, const std::string& header_json,
                 const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace(const std::filesystem::path& path,
                                 std::string* header_json = nullptr);

struct TraceStats {
  std::size_t steps = 0;
  std::array<double, 7> mode_marginal{};         // indexed by code-1
  std::optional<double> self_transition_rate;    // empty for single-step traces
  double mean_segment_length = 0.0;
  std::array<double, 7> severity_min{};
  std::array<double, 7> severity_max{};
  std::array<double, 7> severity_mean{};
};

TraceStats compute_trace_stats(const std::vector<TraceRow>& rows);

}  // namespace vdcs
