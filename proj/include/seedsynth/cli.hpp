#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace seedsynth::cli {

// Shared flags. `timing` off pins wall_time_s to zero so runs with the same
// --seed are byte-identical.
struct CommonOptions {
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  double epsilon = 1e-8;
  std::size_t k = 8;
  bool timing = true;
};

struct TemplatesOptions {
  CommonOptions common;
  std::size_t width = 3;
  std::string out;  // catalog JSONL; empty: stdout only
};

struct BenchGenOptions {
  CommonOptions common;
  std::string family = "qft";
  std::size_t width = 3;
  std::size_t depth = 4;
  std::string out_qasm;
};

struct OptimizeOptions {
  CommonOptions common;
  std::string qasm_in;
  std::string strategy = "root";  // root | random | learned
  std::string model;              // required for learned
  std::size_t seeds_per_block = 3;
  std::size_t width = 3;          // partition width
  std::string qasm_out;
  std::string metrics_csv;
  std::string verify_json;
  std::string partition_json;
};

struct GenDatasetOptions {
  CommonOptions common;
  std::vector<std::string> families = {"qft", "tfim", "random_layers"};
  std::vector<std::size_t> widths = {3, 4, 5, 6};
  std::size_t variants = 4;  // circuits per (family, width)
  std::size_t depth = 4;
  std::string out;
};

// holdout format: "family=width,family=width"; training excludes the pairs,
// evaluation runs on exactly the pairs.
struct TrainOptions {
  CommonOptions common;
  std::string dataset;
  std::string holdout;
  std::string model_out;
  std::size_t epochs = 200;
  std::size_t pretrain_epochs = 50;
  std::size_t batch_size = 64;
  double learning_rate = 0.05;
  double noise_std = 0.05;
};

struct EvalOptions {
  CommonOptions common;
  std::string dataset;
  std::string holdout;
  std::string model;
  std::size_t seeds_per_block = 3;
  std::string metrics_csv;
};

struct EvalSummary {
  double top1 = 0.0;
  double top3 = 0.0;
  double mean_calls_root = 0.0;
  double mean_calls_learned = 0.0;
  double mean_calls_random = 0.0;
  double cnot_ratio_root = 0.0;
  double cnot_ratio_learned = 0.0;
  double cnot_ratio_random = 0.0;
  std::size_t held_out_count = 0;
};

int cmd_templates(const TemplatesOptions& opt, std::ostream& log);
int cmd_bench_gen(const BenchGenOptions& opt, std::ostream& log);
int cmd_optimize(const OptimizeOptions& opt, std::ostream& log);
int cmd_gen_dataset(const GenDatasetOptions& opt, std::ostream& log);
int cmd_train(const TrainOptions& opt, std::ostream& log);
int cmd_eval(const EvalOptions& opt, std::ostream& log,
             EvalSummary* summary_out = nullptr);

// Pinned metrics schema shared by optimize and eval.
inline constexpr const char* kMetricsCsvHeader =
    "block,strategy,instantiation_calls,cnot_before,cnot_after,cost,"
    "wall_time_s";

}  // namespace seedsynth::cli
