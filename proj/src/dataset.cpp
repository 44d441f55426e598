#include "vdcs/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "vdcs/config.hpp"
#include "vdcs/errors.hpp"
#include "vdcs/jpeg_codec.hpp"
#include "vdcs/png_io.hpp"
#include "vdcs/version.hpp"

namespace vdcs {

using nlohmann::json;
namespace fs = std::filesystem;

Mask chroma_key_mask(const Image8& frame, const ChromaKeyConfig& cfg) {
  if (cfg.tolerance < 0) throw ValidationError("chroma tolerance must be nonnegative");
  Mask m(frame.height, frame.width, 0.0);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      int dist = 0;
      for (int c = 0; c < 3; ++c) {
        dist = std::max(dist, std::abs(static_cast<int>(frame.at(y, x, c)) -
                                       static_cast<int>(cfg.reference[c])));
      }
      m.at(y, x) = dist > cfg.tolerance ? 1.0 : 0.0;
    }
  }
  return m;
}

SeverityBand jitter_band(CorruptionMode mode, const DegradationConfig& cfg) {
  const double base = cfg.base_severity(mode);
  SeverityBand band;
  band.lo = std::clamp((1.0 - cfg.severity_band_delta) * base, 0.0, 1.0);
  band.hi = std::clamp((1.0 + cfg.severity_band_delta) * base, 0.0, 1.0);
  return band;
}

Image8 mask_to_image(const Mask& m) {
  Image8 img(m.height, m.width);
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const auto v = static_cast<std::uint8_t>(
          std::clamp(round_half_even(255.0 * m.at(y, x)), 0.0, 255.0));
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = v;
    }
  }
  return img;
}

Mask mask_from_image(const Image8& img) {
  Mask m(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t v = img.at(y, x, 0);
      if (img.at(y, x, 1) != v || img.at(y, x, 2) != v) {
        throw ValidationError("mask image channels disagree");
      }
      m.at(y, x) = static_cast<double>(v) / 255.0;
    }
  }
  return m;
}

Sample make_sample(const Image8& clean, const Image8& uniform_bg, CorruptionMode mode,
                   const ChromaKeyConfig& chroma, const DegradationConfig& cfg,
                   RngStream& rng) {
  if (clean.height != uniform_bg.height || clean.width != uniform_bg.width) {
    throw ValidationError("clean and uniform-background frames have different shapes");
  }
  Sample s;
  const SeverityBand band = jitter_band(mode, cfg);
  s.severity = Severity(rng.uniform(band.lo, band.hi));
  s.mode = mode;
  s.clean = clean;
  s.degraded = apply(mode, clean, s.severity, rng, cfg);
  s.mask = chroma_key_mask(uniform_bg, chroma);
  s.agent_only = denormalize(composite(normalize(clean), s.mask));
  return s;
}

namespace {

json record_to_json(const SampleRecord& r) {
  json j;
  j["sample_id"] = r.sample_id;
  j["task_name"] = r.task_name;
  j["mode_code"] = r.mode_code;
  j["mode_name"] = r.mode_name;
  j["severity"] = r.severity;
  j["split"] = r.split;
  j["degraded_path"] = r.degraded_path;
  j["clean_path"] = r.clean_path;
  j["agent_only_path"] = r.agent_only_path;
  j["mask_path"] = r.mask_path;
  j["seed"] = r.seed;
  j["substream_index"] = r.substream_index;
  return j;
}

SampleRecord record_from_json(const json& j) {
  SampleRecord r;
  try {
    r.sample_id = j.at("sample_id").get<std::string>();
    r.task_name = j.at("task_name").get<std::string>();
    r.mode_code = j.at("mode_code").get<int>();
    r.mode_name = j.at("mode_name").get<std::string>();
    r.severity = j.at("severity").get<double>();
    r.split = j.at("split").get<std::string>();
    r.degraded_path = j.at("degraded_path").get<std::string>();
    r.clean_path = j.at("clean_path").get<std::string>();
    r.agent_only_path = j.at("agent_only_path").get<std::string>();
    r.mask_path = j.at("mask_path").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.substream_index = j.at("substream_index").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed manifest record: " + std::string(e.what()));
  }
  return r;
}

struct FramePair {
  Image8 clean;
  Image8 uniform_bg;
};

std::vector<FramePair> load_task_frames(const fs::path& task_dir, int expected_size) {
  if (!fs::is_directory(task_dir)) {
    throw IoError("task frame directory not found: " + task_dir.string());
  }
  std::vector<std::pair<long long, std::string>> stems;
  for (const auto& entry : fs::directory_iterator(task_dir)) {
    const std::string name = entry.path().filename().string();
    constexpr std::string_view suffix = "_clean.png";
    if (name.size() <= suffix.size() || !name.ends_with(suffix)) continue;
    const std::string stem = name.substr(0, name.size() - suffix.size());
    try {
      stems.emplace_back(std::stoll(stem), stem);
    } catch (const std::exception&) {
      throw ValidationError("frame filename is not <index>_clean.png: " + name);
    }
  }
  if (stems.empty()) {
    throw ValidationError("no <index>_clean.png frames in " + task_dir.string());
  }
  std::sort(stems.begin(), stems.end());

  std::vector<FramePair> pairs;
  pairs.reserve(stems.size());
  for (const auto& [idx, stem] : stems) {
    FramePair pair;
    pair.clean = read_png(task_dir / (stem + "_clean.png"));
    const fs::path bg_path = task_dir / (stem + "_uniformbg.png");
    if (!fs::exists(bg_path)) {
      throw IoError("missing uniform-background frame: " + bg_path.string());
    }
    pair.uniform_bg = read_png(bg_path);
    for (const Image8* img : {&pair.clean, &pair.uniform_bg}) {
      if (img->height != expected_size || img->width != expected_size) {
        throw ValidationError("input frames must be " + std::to_string(expected_size) + "x" +
                              std::to_string(expected_size) + ": " + stem);
      }
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::string sample_index_string(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05d", i);
  return buf;
}

}  // namespace

DatasetManifest generate_dataset(const DatasetSpec& spec) {
  if (spec.samples_per_pair < 0) throw ValidationError("samples per pair must be nonnegative");
  if (!(spec.split_ratio >= 0.0 && spec.split_ratio <= 1.0)) {
    throw ValidationError("split ratio must lie in [0,1]");
  }
  if (spec.tasks.empty()) throw ValidationError("task list is empty");
  if (spec.modes.empty()) throw ValidationError("mode list is empty");
  if (spec.jobs < 1) throw ValidationError("jobs must be at least 1");
  for (const std::string& task : spec.tasks) {
    if (!spec.chroma.contains(task)) {
      throw ValidationError("no chroma-key settings for task: " + task);
    }
  }

  std::error_code ec;
  fs::create_directories(spec.output_root, ec);
  if (ec) throw IoError("cannot create output directory: " + spec.output_root.string());

  // Preload frames and create directories up front; workers only compute
  // and write their own files.
  std::vector<std::vector<FramePair>> frames_by_task;
  if (spec.samples_per_pair > 0) {
    for (const std::string& task : spec.tasks) {
      frames_by_task.push_back(load_task_frames(spec.input_root / task, spec.expected_size));
      for (CorruptionMode mode : spec.modes) {
        fs::create_directories(spec.output_root / task / std::string(mode_name(mode)), ec);
        if (ec) throw IoError("cannot create output subdirectory for " + task);
      }
    }
  }

  const std::size_t n_tasks = spec.tasks.size();
  const std::size_t n_modes = spec.modes.size();
  const std::size_t n_per_pair = static_cast<std::size_t>(spec.samples_per_pair);
  const std::size_t total = n_tasks * n_modes * n_per_pair;
  std::vector<SampleRecord> records(total);

  const RngStream root = RngStream::from_seed(spec.seed);
  std::atomic<std::size_t> cursor{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  const auto worker = [&]() {
    try {
      while (true) {
        const std::size_t g = cursor.fetch_add(1);
        if (g >= total) return;
        {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (failure) return;
        }
        const std::size_t task_idx = g / (n_modes * n_per_pair);
        const std::size_t mode_idx = (g / n_per_pair) % n_modes;
        const auto i = static_cast<int>(g % n_per_pair);
        const std::string& task = spec.tasks[task_idx];
        const CorruptionMode mode = spec.modes[mode_idx];
        const auto& frames = frames_by_task[task_idx];
        const FramePair& pair = frames[static_cast<std::size_t>(i) % frames.size()];

        RngStream rng = root.substream(kSampleStreamTag, g);
        const bool train = rng.uniform01() < spec.split_ratio;
        Sample s = make_sample(pair.clean, pair.uniform_bg, mode, spec.chroma.at(task),
                               spec.degrade, rng);

        const std::string mode_dir = std::string(mode_name(mode));
        const std::string idx = sample_index_string(i);
        const std::string rel_base = task + "/" + mode_dir + "/" + idx;
        SampleRecord r;
        r.sample_id = rel_base;
        r.task_name = task;
        r.mode_code = mode_code(mode);
        r.mode_name = mode_dir;
        r.severity = s.severity.value;
        r.split = train ? "train" : "val";
        r.degraded_path = rel_base + "_degraded.png";
        r.clean_path = rel_base + "_clean.png";
        r.agent_only_path = rel_base + "_agent_only.png";
        r.mask_path = rel_base + "_mask.png";
        r.seed = spec.seed;
        r.substream_index = g;

        write_png(spec.output_root / r.degraded_path, s.degraded);
        write_png(spec.output_root / r.clean_path, s.clean);
        write_png(spec.output_root / r.agent_only_path, s.agent_only);
        write_png(spec.output_root / r.mask_path, mask_to_image(s.mask));
        records[g] = std::move(r);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (spec.jobs == 1 || total <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), total);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  json header;
  header["type"] = "header";
  header["engine_version"] = std::string(kEngineVersion);
  header["seed"] = spec.seed;
  header["config_hash"] = config_hash(spec.degrade);
  header["config"] = json::parse(config_to_json(spec.degrade));
  header["jpeg_library"] = jpeg_library_version();
  header["tasks"] = spec.tasks;
  json modes = json::array();
  for (CorruptionMode m : spec.modes) modes.push_back(std::string(mode_name(m)));
  header["modes"] = modes;
  header["samples_per_pair"] = spec.samples_per_pair;
  header["split_ratio"] = spec.split_ratio;
  header["expected_size"] = spec.expected_size;

  DatasetManifest manifest;
  manifest.header_json = header.dump();
  manifest.records = std::move(records);

  const fs::path manifest_path = spec.output_root / "manifest.jsonl";
  const fs::path tmp_path = spec.output_root / "manifest.jsonl.tmp";
  {
    std::ofstream out(tmp_path);
    if (!out) throw IoError("cannot open manifest for writing: " + tmp_path.string());
    out << manifest.header_json << "\n";
    for (const SampleRecord& r : manifest.records) out << record_to_json(r).dump() << "\n";
    if (!out) throw IoError("failed writing manifest: " + tmp_path.string());
  }
  fs::rename(tmp_path, manifest_path, ec);
  if (ec) throw IoError("cannot move manifest into place: " + manifest_path.string());
  return manifest;
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  DatasetManifest manifest;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("malformed manifest line: " + std::string(e.what()));
    }
    if (first) {
      first = false;
      if (j.contains("type") && j["type"] == "header") {
        manifest.header_json = line;
        continue;
      }
    }
    manifest.records.push_back(record_from_json(j));
  }
  return manifest;
}

void validate_record(const SampleRecord& record, const fs::path& manifest_dir,
                     int expected_size) {
  if (record.split != "train" && record.split != "val") {
    throw ValidationError("record split must be train or val: " + record.sample_id);
  }
  if (record.severity < 0.0 || record.severity > 1.0) {
    throw ValidationError("record severity out of [0,1]: " + record.sample_id);
  }
  if (std::string(mode_name(mode_from_code(record.mode_code))) != record.mode_name) {
    throw ValidationError("record mode code and name disagree: " + record.sample_id);
  }

  const Image8 degraded = read_png(manifest_dir / record.degraded_path);
  const Image8 clean = read_png(manifest_dir / record.clean_path);
  const Image8 agent_only = read_png(manifest_dir / record.agent_only_path);
  const Image8 mask_img = read_png(manifest_dir / record.mask_path);
  for (const Image8* img : {&degraded, &clean, &agent_only, &mask_img}) {
    if (img->height != expected_size || img->width != expected_size) {
      throw ValidationError("sample image has wrong shape: " + record.sample_id);
    }
  }

  const Mask mask = mask_from_image(mask_img);
  if (!mask.is_binary()) {
    throw ValidationError("sample mask is not binary: " + record.sample_id);
  }

  const Image8 expected_agent = denormalize(composite(normalize(clean), mask));
  for (std::size_t i = 0; i < expected_agent.data.size(); ++i) {
    const int diff = std::abs(static_cast<int>(expected_agent.data[i]) -
                              static_cast<int>(agent_only.data[i]));
    if (diff > 1) {
      throw ValidationError("agent_only differs from clean (x) mask composite: " +
                            record.sample_id);
    }
  }
}

}  // namespace vdcs
