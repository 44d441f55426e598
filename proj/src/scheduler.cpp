#include "vdcs/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vdcs/errors.hpp"

namespace vdcs {

using nlohmann::json;

TransitionMatrix::TransitionMatrix(const std::array<double, 49>& entries) : p(entries) {
  for (int i = 0; i < 7; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double v = at(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("transition matrix entries must lie in [0,1]");
      }
      row_sum += v;
    }
    if (std::fabs(row_sum - 1.0) > 1e-12) {
      throw ValidationError("transition matrix rows must sum to 1");
    }
  }
}

TransitionMatrix TransitionMatrix::sticky(double ps) {
  if (!(ps >= 0.0 && ps <= 1.0)) {
    throw ValidationError("sticky transition probability must lie in [0,1]");
  }
  std::array<double, 49> entries{};
  const double off = (1.0 - ps) / 6.0;
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      entries[static_cast<std::size_t>(i) * 7 + j] = i == j ? ps : off;
    }
  }
  // Exact rows: fold rounding residue into the diagonal.
  for (int i = 0; i < 7; ++i) {
    double sum_off = 0.0;
    for (int j = 0; j < 7; ++j) {
      if (j != i) sum_off += entries[static_cast<std::size_t>(i) * 7 + j];
    }
    entries[static_cast<std::size_t>(i) * 7 + i] = 1.0 - sum_off;
  }
  return TransitionMatrix(entries);
}

SeverityBand severity_band(CorruptionMode mode, const DegradationConfig& cfg) {
  const double base = cfg.base_severity(mode);
  const double delta = cfg.severity_band_delta;
  SeverityBand band;
  band.lo = std::max(0.1, (1.0 - delta) * base);
  band.hi = std::min(1.0, (1.0 + delta) * base);
  if (band.lo > band.hi) {
    throw ValidationError("severity band is empty for mode " + std::string(mode_name(mode)));
  }
  return band;
}

namespace {

CorruptionMode sample_mode(RngStream& rng, const TransitionMatrix& pi, int from_row) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (int j = 0; j < 7; ++j) {
    acc += pi.at(from_row, j);
    if (u < acc) return mode_from_code(j + 1);
  }
  return mode_from_code(7);
}

void assert_in_band(const ScheduleState& s, const DegradationConfig& cfg) {
  if (!severity_band(s.mode, cfg).contains(s.severity.value)) {
    throw std::logic_error("schedule severity left its mode band");
  }
}

}  // namespace

ScheduleState schedule_start(RngStream stream, const DegradationConfig& cfg) {
  ScheduleState s;
  s.rng = stream;
  s.mode = mode_from_code(static_cast<int>(s.rng.uniform_int(7)) + 1);
  const SeverityBand band = severity_band(s.mode, cfg);
  s.severity = Severity(s.rng.uniform(band.lo, band.hi));
  s.step = 0;
  assert_in_band(s, cfg);
  return s;
}

ScheduleState step(const ScheduleState& state, const TransitionMatrix& pi,
                   const DegradationConfig& cfg) {
  ScheduleState next = state;
  next.mode = sample_mode(next.rng, pi, mode_code(state.mode) - 1);
  const SeverityBand band = severity_band(next.mode, cfg);
  if (next.mode != state.mode) {
    next.severity = Severity(next.rng.uniform(band.lo, band.hi));
  } else {
    const double eta = cfg.severity_walk_sigma * next.rng.normal();
    next.severity = Severity(std::clamp(state.severity.value + eta, band.lo, band.hi));
  }
  next.step = state.step + 1;
  assert_in_band(next, cfg);
  return next;
}

namespace {

TraceRow make_row(const ScheduleState& s, std::uint64_t counter_before) {
  TraceRow row;
  row.step = s.step;
  row.mode_code = mode_code(s.mode);
  row.mode_name = std::string(mode_name(s.mode));
  row.severity = s.severity.value;
  row.rng_counter_before = counter_before;
  return row;
}

}  // namespace

std::vector<TraceRow> schedule_trace(std::size_t steps, const TransitionMatrix& pi,
                                     const DegradationConfig& cfg, std::uint64_t seed,
                                     const std::optional<ScheduleState>& initial) {
  std::vector<TraceRow> rows;
  rows.reserve(steps);
  if (steps == 0) return rows;

  ScheduleState state;
  if (initial) {
    state = *initial;
    assert_in_band(state, cfg);
    rows.push_back(make_row(state, state.rng.counter()));
  } else {
    RngStream stream = RngStream::from_seed(seed).substream(kScheduleStreamTag, 0);
    const std::uint64_t counter_before = stream.counter();
    state = schedule_start(stream, cfg);
    rows.push_back(make_row(state, counter_before));
  }
  for (std::size_t t = 1; t < steps; ++t) {
    const std::uint64_t counter_before = state.rng.counter();
    state = step(state, pi, cfg);
    rows.push_back(make_row(state, counter_before));
  }
  return rows;
}

StreamResult corrupt_stream(const std::vector<Image8>& frames, const TransitionMatrix& pi,
                            const DegradationConfig& cfg, std::uint64_t seed,
                            const std::optional<ScheduleState>& initial) {
  if (frames.empty()) throw ValidationError("corrupt_stream: frame sequence is empty");

  StreamResult result;
  result.trace = schedule_trace(frames.size(), pi, cfg, seed, initial);
  result.frames.reserve(frames.size());
  const RngStream root = RngStream::from_seed(seed);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const TraceRow& row = result.trace[t];
    const CorruptionMode mode = mode_from_code(row.mode_code);
    RngStream frame_rng = root.substream(
        kFrameStreamTag + (static_cast<std::uint64_t>(row.mode_code) << 8), t);
    CorruptedFrame out;
    out.image = apply(mode, frames[t], Severity(row.severity), frame_rng, cfg);
    out.mode = mode;
    out.severity = Severity(row.severity);
    result.frames.push_back(std::move(out));
  }
  return result;
}

void write_trace(const std::filesystem::path& path, const std::string& header_json,
                 const std::vector<TraceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open trace for writing: " + path.string());
  out << header_json << "\n";
  for (const TraceRow& r : rows) {
    json j;
    j["step"] = r.step;
    j["mode_code"] = r.mode_code;
    j["mode_name"] = r.mode_name;
    j["severity"] = r.severity;
    j["rng_counter_before"] = r.rng_counter_before;
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("failed writing trace: " + path.string());
}

std::vector<TraceRow> read_trace(const std::filesystem::path& path, std::string* header_json) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace: " + path.string());
  std::vector<TraceRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("malformed trace line: " + std::string(e.what()));
    }
    if (first && j.contains("type") && j["type"] == "header") {
      if (header_json) *header_json = line;
      first = false;
      continue;
    }
    first = false;
    TraceRow r;
    try {
      r.step = j.at("step").get<std::uint64_t>();
      r.mode_code = j.at("mode_code").get<int>();
      r.mode_name = j.at("mode_name").get<std::string>();
      r.severity = j.at("severity").get<double>();
      r.rng_counter_before = j.at("rng_counter_before").get<std::uint64_t>();
    } catch (const json::exception& e) {
      throw ValidationError("malformed trace row: " + std::string(e.what()));
    }
    if (r.mode_code < 1 || r.mode_code > 7 || r.severity < 0.0 || r.severity > 1.0) {
      throw ValidationError("trace row out of range");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

TraceStats compute_trace_stats(const std::vector<TraceRow>& rows) {
  TraceStats st;
  st.steps = rows.size();
  if (rows.empty()) return st;

  std::array<std::size_t, 7> counts{};
  std::array<double, 7> sums{};
  st.severity_min.fill(std::numeric_limits<double>::infinity());
  st.severity_max.fill(-std::numeric_limits<double>::infinity());
  std::size_t self = 0;
  std::size_t segments = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int k = rows[i].mode_code - 1;
    ++counts[k];
    sums[k] += rows[i].severity;
    st.severity_min[k] = std::min(st.severity_min[k], rows[i].severity);
    st.severity_max[k] = std::max(st.severity_max[k], rows[i].severity);
    if (i > 0) {
      if (rows[i].mode_code == rows[i - 1].mode_code) {
        ++self;
      } else {
        ++segments;
      }
    }
  }
  for (int k = 0; k < 7; ++k) {
    st.mode_marginal[k] = static_cast<double>(counts[k]) / static_cast<double>(rows.size());
    st.severity_mean[k] = counts[k] ? sums[k] / static_cast<double>(counts[k]) : 0.0;
    if (counts[k] == 0) {
      st.severity_min[k] = 0.0;
      st.severity_max[k] = 0.0;
    }
  }
  if (rows.size() > 1) {
    st.self_transition_rate =
        static_cast<double>(self) / static_cast<double>(rows.size() - 1);
  }
  st.mean_segment_length = static_cast<double>(rows.size()) / static_cast<double>(segments);
  return st;
}

}  // namespace vdcs
