#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vdcs/degrade.hpp"
#include "vdcs/image.hpp"
#include "vdcs/rng.hpp"
#include "vdcs/scheduler.hpp"

namespace vdcs {

struct ChromaKeyConfig {
  std::array<std::uint8_t, 3> reference = {0, 0, 0};
  int tolerance = 0;
};

// Foreground = any pixel whose Chebyshev (max per-channel) distance to
// the reference background color exceeds the tolerance. Output is {0,1}.
Mask chroma_key_mask(const Image8& uniform_bg_frame, const ChromaKeyConfig& cfg);

// Offline-dataset severity jitter: [(1-delta)*base, (1+delta)*base] ∩ [0,1].
// Unlike the scheduler band there is no 0.1 floor.
SeverityBand jitter_band(CorruptionMode mode, const DegradationConfig& cfg);

// Binary masks as 8-bit RGB PNG payloads (0 or 255 in every channel).
Image8 mask_to_image(const Mask& m);
Mask mask_from_image(const Image8& img);

struct Sample {
  Image8 degraded;
  Image8 clean;
  Image8 agent_only;
  Mask mask;
  CorruptionMode mode = CorruptionMode::Rain;
  Severity severity;
};

// One dataset tuple. Draw order: severity (one uniform in the jitter
// band), then the operator's own draws. clean and uniform_bg must share
// the same shape and depict the same physics state (caller's contract).
Sample make_sample(const Image8& clean, const Image8& uniform_bg, CorruptionMode mode,
                   const ChromaKeyConfig& chroma, const DegradationConfig& cfg, RngStream& rng);

struct SampleRecord {
  std::string sample_id;
  std::string task_name;
  int mode_code = 0;
  std::string mode_name;
  double severity = 0.0;
  std::string split;  // "train" or "val"
  std::string degraded_path;
  std::string clean_path;
  std::string agent_only_path;
  std::string mask_path;
  std::uint64_t seed = 0;
  std::uint64_t substream_index = 0;
};

struct DatasetSpec {
  std::filesystem::path input_root;
  std::filesystem::path output_root;
  std::vector<std::string> tasks;
  std::vector<CorruptionMode> modes;
  int samples_per_pair = 5000;
  double split_ratio = 0.9;
  std::uint64_t seed = 0;
  int expected_size = 84;
  int jobs = 1;
  DegradationConfig degrade;
  std::map<std::string, ChromaKeyConfig> chroma;  // required per task
};

struct DatasetManifest {
  std::string header_json;
  std::vector<SampleRecord> records;
};

// Algorithm: for each (task, mode) pair emit samples_per_pair records.
// Sample g = ((task_idx * |modes|) + mode_idx) * N + i draws from
// substream (kSampleStreamTag, g): split Bernoulli(split_ratio) first,
// then make_sample. Input frame pair i is pair i mod F of the task's
// frames, named <root>/<task>/<idx>_clean.png and <idx>_uniformbg.png.
// Samples are independent, so any job count yields identical bytes. The
// manifest is written atomically at the end.
DatasetManifest generate_dataset(const DatasetSpec& spec);

DatasetManifest read_manifest(const std::filesystem::path& path);

// Reloads the sample's files and rechecks every SampleRecord invariant.
void validate_record(const SampleRecord& record, const std::filesystem::path& manifest_dir,
                     int expected_size);

}  // namespace vdcs
