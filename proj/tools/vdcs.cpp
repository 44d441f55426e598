// vdcs: deterministic visual-corruption engine and exact theory checks.
//
// Subcommands: corrupt, stream, gen-dataset, verify-theory, stats.
// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 theory
// violation.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vdcs/config.hpp"
#include "vdcs/dataset.hpp"
#include "vdcs/degrade.hpp"
#include "vdcs/errors.hpp"
#include "vdcs/infolab.hpp"
#include "vdcs/jpeg_codec.hpp"
#include "vdcs/png_io.hpp"
#include "vdcs/scheduler.hpp"
#include "vdcs/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CorruptArgs {
  std::string input;
  std::string output;
  std::string mode;
  double severity = 0.0;
  std::uint64_t seed = 0;
  std::string config_path;
};

struct StreamArgs {
  std::string frames_dir;
  std::string out_dir;
  double ps = 0.8;
  bool ps_given = false;
  std::string matrix_path;
  std::uint64_t seed = 0;
  int montage = 0;
  std::string config_path;
};

struct GenArgs {
  std::string input_root;
  std::string out_dir;
  std::vector<std::string> tasks;
  std::vector<std::string> modes = {"all"};
  int n = 5000;
  double split_ratio = 0.9;
  std::uint64_t seed = 0;
  int size = 84;
  int jobs = 1;
  std::vector<int> chroma_ref;
  int chroma_tol = -1;
  std::string config_path;
};

struct TheoryArgs {
  int instances = 1000;
  int max_alphabet = 4;
  std::uint64_t seed = 0;
  std::string out_path;
};

vdcs::EngineConfig load_engine_config(const std::string& path) {
  if (path.empty()) return {};
  return vdcs::load_config(path);
}

vdcs::TransitionMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vdcs::IoError("cannot open transition matrix file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw vdcs::ValidationError("malformed matrix JSON: " + std::string(e.what()));
  }
  if (!j.is_array() || j.size() != 7) {
    throw vdcs::ValidationError("transition matrix must be a 7x7 array of arrays");
  }
  std::array<double, 49> entries{};
  for (int i = 0; i < 7; ++i) {
    if (!j[i].is_array() || j[i].size() != 7) {
      throw vdcs::ValidationError("transition matrix must be a 7x7 array of arrays");
    }
    for (int k = 0; k < 7; ++k) entries[static_cast<std::size_t>(i) * 7 + k] = j[i][k];
  }
  return vdcs::TransitionMatrix(entries);
}

std::vector<vdcs::CorruptionMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<vdcs::CorruptionMode> modes;
  for (const std::string& name : names) {
    if (name == "all") {
      modes.assign(vdcs::kAllModes.begin(), vdcs::kAllModes.end());
      return modes;
    }
    modes.push_back(vdcs::mode_from_name(name));
  }
  return modes;
}

int run_corrupt(const CorruptArgs& args) {
  const vdcs::EngineConfig cfg = load_engine_config(args.config_path);
  const vdcs::CorruptionMode mode = vdcs::mode_from_name(args.mode);
  const vdcs::Severity iota(args.severity);
  const vdcs::Image8 input = vdcs::read_png(args.input);

  // Same derivation as frame 0 of `stream`, so single-frame runs agree
  // with stream prefixes.
  vdcs::RngStream rng = vdcs::RngStream::from_seed(args.seed).substream(
      vdcs::kFrameStreamTag + (static_cast<std::uint64_t>(vdcs::mode_code(mode)) << 8), 0);
  const std::uint64_t before = rng.counter();
  const vdcs::Image8 output = vdcs::apply(mode, input, iota, rng, cfg.degrade);

  const std::string hash = vdcs::config_hash(cfg.degrade);
  const std::string comment = "engine=" + std::string(vdcs::kEngineVersion) +
                              " seed=" + std::to_string(args.seed) + " mode=" + args.mode +
                              " severity=" + std::to_string(args.severity) +
                              " config=" + hash;
  vdcs::write_png(args.output, output, comment);

  std::cout << "mode=" << vdcs::mode_name(mode) << " severity=" << iota.value
            << " rng_draws=" << (rng.counter() - before) << " seed=" << args.seed
            << " config_hash=" << hash;
  if (mode == vdcs::CorruptionMode::Jpeg) {
    std::cout << " jpeg_quality=" << vdcs::jpeg_quality(iota, cfg.degrade.jpeg);
  }
  std::cout << "\n";
  return 0;
}

vdcs::Image8 montage_sheet(const std::vector<vdcs::Image8>& frames) {
  const int n = static_cast<int>(frames.size());
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int rows = (n + cols - 1) / cols;
  const int fh = frames[0].height;
  const int fw = frames[0].width;
  vdcs::Image8 sheet(rows * fh, cols * fw, 0);
  for (int i = 0; i < n; ++i) {
    const int oy = (i / cols) * fh;
    const int ox = (i % cols) * fw;
    for (int y = 0; y < fh; ++y) {
      for (int x = 0; x < fw; ++x) {
        for (int c = 0; c < 3; ++c) sheet.at(oy + y, ox + x, c) = frames[i].at(y, x, c);
      }
    }
  }
  return sheet;
}

int run_stream(const StreamArgs& args) {
  const vdcs::EngineConfig cfg = load_engine_config(args.config_path);
  const double ps = args.ps_given ? args.ps : cfg.ps;
  const vdcs::TransitionMatrix pi = args.matrix_path.empty()
                                        ? vdcs::TransitionMatrix::sticky(ps)
                                        : load_matrix(args.matrix_path);

  if (!fs::is_directory(args.frames_dir)) {
    throw vdcs::IoError("frames directory not found: " + args.frames_dir);
  }
  std::vector<fs::path> frame_paths;
  for (const auto& entry : fs::directory_iterator(args.frames_dir)) {
    if (entry.path().extension() == ".png") frame_paths.push_back(entry.path());
  }
  if (frame_paths.empty()) {
    throw vdcs::ValidationError("no PNG frames in " + args.frames_dir);
  }
  std::sort(frame_paths.begin(), frame_paths.end());

  fs::create_directories(args.out_dir);
  const std::string hash = vdcs::config_hash(cfg.degrade);
  const auto trace = vdcs::schedule_trace(frame_paths.size(), pi, cfg.degrade, args.seed);

  const vdcs::RngStream root = vdcs::RngStream::from_seed(args.seed);
  std::vector<vdcs::Image8> montage_buffer;
  int montage_index = 0;
  const auto flush_montage = [&]() {
    if (montage_buffer.empty()) return;
    char name[32];
    std::snprintf(name, sizeof(name), "montage_%05d.png", montage_index++);
    vdcs::write_png(fs::path(args.out_dir) / name, montage_sheet(montage_buffer));
    montage_buffer.clear();
  };

  for (std::size_t t = 0; t < frame_paths.size(); ++t) {
    const vdcs::Image8 frame = vdcs::read_png(frame_paths[t]);
    const auto mode = vdcs::mode_from_code(trace[t].mode_code);
    vdcs::RngStream rng = root.substream(
        vdcs::kFrameStreamTag + (static_cast<std::uint64_t>(trace[t].mode_code) << 8), t);
    const vdcs::Image8 out =
        vdcs::apply(mode, frame, vdcs::Severity(trace[t].severity), rng, cfg.degrade);
    char name[48];
    std::snprintf(name, sizeof(name), "corrupted_%05zu.png", t);
    vdcs::write_png(fs::path(args.out_dir) / name, out);
    if (args.montage > 0) {
      montage_buffer.push_back(out);
      if (static_cast<int>(montage_buffer.size()) == args.montage) flush_montage();
    }
  }
  flush_montage();

  json header;
  header["type"] = "header";
  header["engine_version"] = std::string(vdcs::kEngineVersion);
  header["seed"] = args.seed;
  header["config_hash"] = hash;
  header["config"] = json::parse(vdcs::config_to_json(cfg.degrade));
  if (args.matrix_path.empty()) {
    header["ps"] = ps;
  } else {
    header["matrix_file"] = args.matrix_path;
  }
  header["frames"] = frame_paths.size();
  vdcs::write_trace(fs::path(args.out_dir) / "trace.jsonl", header.dump(), trace);

  std::cout << "frames=" << frame_paths.size() << " seed=" << args.seed
            << " config_hash=" << hash
            << " trace=" << (fs::path(args.out_dir) / "trace.jsonl").string() << "\n";
  return 0;
}

int run_gen_dataset(const GenArgs& args) {
  const vdcs::EngineConfig cfg = load_engine_config(args.config_path);

  vdcs::DatasetSpec spec;
  spec.input_root = args.input_root;
  spec.output_root = args.out_dir;
  spec.tasks = args.tasks;
  spec.modes = parse_modes(args.modes);
  spec.samples_per_pair = args.n;
  spec.split_ratio = args.split_ratio;
  spec.seed = args.seed;
  spec.expected_size = args.size;
  spec.jobs = args.jobs;
  spec.degrade = cfg.degrade;

  // Per-task config entries win; global CLI flags fill the rest.
  for (const std::string& task : spec.tasks) {
    vdcs::ChromaKeyConfig ck;
    bool have_tol = false;
    const auto it = cfg.tasks.find(task);
    if (it != cfg.tasks.end()) {
      ck.reference = it->second.reference;
      if (it->second.has_tolerance()) {
        ck.tolerance = it->second.tolerance;
        have_tol = true;
      }
    }
    if (!args.chroma_ref.empty() && it == cfg.tasks.end()) {
      for (std::size_t c = 0; c < 3; ++c) {
        const int v = args.chroma_ref[c];
        if (v < 0 || v > 255) throw vdcs::ValidationError("--chroma-ref out of [0,255]");
        ck.reference[c] = static_cast<std::uint8_t>(v);
      }
    }
    if (!have_tol && args.chroma_tol >= 0) {
      ck.tolerance = args.chroma_tol;
      have_tol = true;
    }
    if (!have_tol) {
      throw vdcs::ValidationError(
          "chroma tolerance for task '" + task +
          "' missing: set --chroma-tol or a tasks.<name>.chroma_tol config entry");
    }
    spec.chroma[task] = ck;
  }

  const vdcs::DatasetManifest manifest = vdcs::generate_dataset(spec);
  std::size_t train = 0;
  for (const auto& r : manifest.records) train += r.split == "train" ? 1 : 0;
  std::cout << "samples=" << manifest.records.size() << " train=" << train
            << " val=" << (manifest.records.size() - train) << " seed=" << spec.seed
            << " config_hash=" << vdcs::config_hash(spec.degrade)
            << " manifest=" << (spec.output_root / "manifest.jsonl").string() << "\n";
  return 0;
}

int run_verify_theory(const TheoryArgs& args) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!args.out_path.empty()) {
    file.open(args.out_path);
    if (!file) throw vdcs::IoError("cannot open report file: " + args.out_path);
    out = &file;
  }
  const vdcs::info::SweepSummary summary =
      vdcs::info::run_theory_sweep(args.instances, args.max_alphabet, args.seed, out);
  std::cerr << "instances=" << summary.instances
            << " violations=" << summary.total_violations() << " seed=" << args.seed << "\n";
  return summary.total_violations() == 0 ? 0 : 3;
}

int run_stats(const std::string& trace_path) {
  std::string header;
  const auto rows = vdcs::read_trace(trace_path, &header);
  if (rows.empty()) throw vdcs::ValidationError("trace has no steps: " + trace_path);
  const vdcs::TraceStats st = vdcs::compute_trace_stats(rows);

  if (!header.empty()) std::cout << "header " << header << "\n";
  std::cout << "steps " << st.steps << "\n";
  if (st.self_transition_rate) {
    std::cout << "self_transition_rate " << *st.self_transition_rate << "\n";
  } else {
    std::cout << "self_transition_rate n/a\n";
  }
  std::cout << "mean_segment_length " << st.mean_segment_length << "\n";
  for (int k = 0; k < 7; ++k) {
    const auto mode = vdcs::mode_from_code(k + 1);
    std::cout << "mode " << vdcs::mode_name(mode) << " marginal " << st.mode_marginal[k];
    if (st.mode_marginal[k] > 0.0) {
      std::cout << " severity_min " << st.severity_min[k] << " severity_mean "
                << st.severity_mean[k] << " severity_max " << st.severity_max[k];
    }
    std::cout << "\n";
  }

  // Ten-bin severity histogram per mode over the observed range.
  for (int k = 0; k < 7; ++k) {
    if (st.mode_marginal[k] == 0.0) continue;
    const double lo = st.severity_min[k];
    const double hi = st.severity_max[k];
    std::array<std::size_t, 10> bins{};
    for (const auto& row : rows) {
      if (row.mode_code != k + 1) continue;
      int b = hi > lo ? static_cast<int>((row.severity - lo) / (hi - lo) * 10.0) : 0;
      b = std::clamp(b, 0, 9);
      ++bins[static_cast<std::size_t>(b)];
    }
    std::cout << "hist " << vdcs::mode_name(vdcs::mode_from_code(k + 1));
    for (std::size_t b : bins) std::cout << " " << b;
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vdcs: Markov-switching visual corruption engine"};
  app.require_subcommand(1);

  CorruptArgs corrupt_args;
  auto* corrupt = app.add_subcommand("corrupt", "Degrade a single PNG frame");
  corrupt->add_option("input", corrupt_args.input, "Input PNG")->required();
  corrupt->add_option("-o,--output", corrupt_args.output, "Output PNG")->required();
  corrupt->add_option("--mode", corrupt_args.mode, "Corruption mode name")->required();
  corrupt->add_option("--severity", corrupt_args.severity, "Severity in [0,1]")->required();
  corrupt->add_option("--seed", corrupt_args.seed, "RNG seed");
  corrupt->add_option("--config", corrupt_args.config_path, "JSON config file");

  StreamArgs stream_args;
  auto* stream = app.add_subcommand("stream", "Corrupt an ordered directory of frames");
  stream->add_option("frames", stream_args.frames_dir, "Directory of PNG frames")->required();
  stream->add_option("-o,--output", stream_args.out_dir, "Output directory")
      ->required()
      ->envname("VDCS_OUT_DIR");
  auto* ps_opt =
      stream->add_option("--ps", stream_args.ps, "Sticky self-transition probability");
  stream->add_option("--matrix", stream_args.matrix_path, "7x7 row-stochastic matrix JSON");
  stream->add_option("--seed", stream_args.seed, "RNG seed");
  stream->add_option("--montage", stream_args.montage, "Contact sheet every N frames");
  stream->add_option("--config", stream_args.config_path, "JSON config file");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen-dataset", "Generate a paired offline dataset");
  gen->add_option("input", gen_args.input_root, "Root of <task>/<idx>_clean.png frames")
      ->required();
  gen->add_option("-o,--output", gen_args.out_dir, "Output dataset directory")
      ->required()
      ->envname("VDCS_OUT_DIR");
  gen->add_option("--tasks", gen_args.tasks, "Task names")->required()->delimiter(',');
  gen->add_option("--modes", gen_args.modes, "Mode names or 'all'")->delimiter(',');
  gen->add_option("--n", gen_args.n, "Samples per (task, mode) pair");
  gen->add_option("--split-ratio", gen_args.split_ratio, "Train probability");
  gen->add_option("--seed", gen_args.seed, "RNG seed");
  gen->add_option("--size", gen_args.size, "Required input frame size");
  gen->add_option("--jobs", gen_args.jobs, "Worker threads");
  gen->add_option("--chroma-ref", gen_args.chroma_ref, "Background reference R,G,B")
      ->delimiter(',')
      ->expected(3);
  gen->add_option("--chroma-tol", gen_args.chroma_tol, "Chroma-key tolerance");
  gen->add_option("--config", gen_args.config_path, "JSON config file");

  TheoryArgs theory_args;
  auto* theory = app.add_subcommand("verify-theory", "Run the exact information-theory sweeps");
  theory->add_option("--instances", theory_args.instances, "Random instances");
  theory->add_option("--max-alphabet", theory_args.max_alphabet, "Alphabet size cap");
  theory->add_option("--seed", theory_args.seed, "RNG seed");
  theory->add_option("-o,--output", theory_args.out_path, "JSONL report file");

  std::string trace_path;
  auto* stats = app.add_subcommand("stats", "Summarize a stream trace");
  stats->add_option("trace", trace_path, "trace.jsonl from `stream`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*corrupt) return run_corrupt(corrupt_args);
    if (*stream) {
      stream_args.ps_given = ps_opt->count() > 0;
      return run_stream(stream_args);
    }
    if (*gen) return run_gen_dataset(gen_args);
    if (*theory) return run_verify_theory(theory_args);
    if (*stats) return run_stats(trace_path);
  } catch (const vdcs::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const vdcs::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
