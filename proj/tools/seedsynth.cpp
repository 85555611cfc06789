#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "seedsynth/cli.hpp"
#include "seedsynth/kernels.hpp"

namespace {

void add_common(CLI::App* cmd, seedsynth::cli::CommonOptions& common) {
  cmd->add_option("--seed", common.seed, "RNG seed for reproducible runs");
  cmd->add_option("--jobs", common.jobs, "Worker threads for block fan-out");
  cmd->add_option("--epsilon", common.epsilon, "Instantiation success threshold");
  cmd->add_option("--k", common.k, "Maximum CNOTs in the template catalog");
  cmd->add_flag("!--no-timing", common.timing,
                "Write zero wall times so outputs are byte-reproducible");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unitary synthesis toolkit: template catalogs, seeded "
               "best-first synthesis, block-partitioned circuit optimization "
               "and the seed recommender."};
  app.require_subcommand(1);

  seedsynth::cli::TemplatesOptions templates_opt;
  auto* templates = app.add_subcommand("templates", "Export the PQC template catalog");
  add_common(templates, templates_opt.common);
  templates->add_option("--width", templates_opt.width, "Block width");
  templates->add_option("--out", templates_opt.out, "Catalog JSONL path");

  seedsynth::cli::BenchGenOptions bench_opt;
  auto* bench = app.add_subcommand("bench-gen", "Generate a benchmark circuit");
  add_common(bench, bench_opt.common);
  bench->add_option("--family", bench_opt.family, "qft | tfim | random_layers")
      ->required();
  bench->add_option("--width", bench_opt.width, "Qubit count")->required();
  bench->add_option("--depth", bench_opt.depth, "Layer count");
  bench->add_option("--out", bench_opt.out_qasm, "Output QASM path")->required();

  seedsynth::cli::OptimizeOptions optimize_opt;
  auto* optimize = app.add_subcommand(
      "optimize", "Partition, resynthesize and verify a circuit");
  add_common(optimize, optimize_opt.common);
  optimize->add_option("input", optimize_opt.qasm_in, "Input QASM")->required();
  optimize->add_option("--strategy", optimize_opt.strategy,
                       "root | random | learned");
  optimize->add_option("--model", optimize_opt.model,
                       "Recommender model (learned strategy)");
  optimize->add_option("--seeds-per-block", optimize_opt.seeds_per_block,
                       "Seeds proposed per block");
  optimize->add_option("--width", optimize_opt.width, "Partition width");
  optimize->add_option("--out", optimize_opt.qasm_out, "Optimized QASM path");
  optimize->add_option("--metrics", optimize_opt.metrics_csv, "Metrics CSV path");
  optimize->add_option("--verify", optimize_opt.verify_json,
                       "Verification JSON path");
  optimize->add_option("--partition-report", optimize_opt.partition_json,
                       "Partition report JSON path");

  seedsynth::cli::GenDatasetOptions dataset_opt;
  auto* dataset = app.add_subcommand(
      "gen-dataset", "Generate labeled block unitaries for training");
  add_common(dataset, dataset_opt.common);
  dataset->add_option("--families", dataset_opt.families, "Benchmark families");
  dataset->add_option("--widths", dataset_opt.widths, "Circuit widths");
  dataset->add_option("--variants", dataset_opt.variants,
                      "Circuits per family and width");
  dataset->add_option("--depth", dataset_opt.depth, "Benchmark layer count");
  dataset->add_option("--out", dataset_opt.out, "Dataset JSONL path")->required();

  seedsynth::cli::TrainOptions train_opt;
  auto* train = app.add_subcommand("train", "Train the seed recommender");
  add_common(train, train_opt.common);
  train->add_option("--dataset", train_opt.dataset, "Dataset JSONL")->required();
  train->add_option("--holdout", train_opt.holdout,
                    "family=width pairs excluded from training");
  train->add_option("--model-out", train_opt.model_out, "Model path")->required();
  train->add_option("--epochs", train_opt.epochs, "Finetune epochs");
  train->add_option("--pretrain-epochs", train_opt.pretrain_epochs,
                    "Denoising pretraining epochs");
  train->add_option("--batch-size", train_opt.batch_size, "Minibatch size");
  train->add_option("--lr", train_opt.learning_rate, "SGD learning rate");
  train->add_option("--noise-std", train_opt.noise_std,
                    "Pretraining input noise");

  seedsynth::cli::EvalOptions eval_opt;
  auto* eval = app.add_subcommand(
      "eval", "Held-out accuracy and per-strategy instantiation calls");
  add_common(eval, eval_opt.common);
  eval->add_option("--dataset", eval_opt.dataset, "Dataset JSONL")->required();
  eval->add_option("--holdout", eval_opt.holdout,
                   "family=width pairs to evaluate on");
  eval->add_option("--model", eval_opt.model, "Recommender model")->required();
  eval->add_option("--seeds-per-block", eval_opt.seeds_per_block,
                   "Seeds proposed per block");
  eval->add_option("--metrics", eval_opt.metrics_csv, "Metrics CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*templates) return seedsynth::cli::cmd_templates(templates_opt, std::cout);
    if (*bench) return seedsynth::cli::cmd_bench_gen(bench_opt, std::cout);
    if (*optimize) return seedsynth::cli::cmd_optimize(optimize_opt, std::cout);
    if (*dataset) return seedsynth::cli::cmd_gen_dataset(dataset_opt, std::cout);
    if (*train) return seedsynth::cli::cmd_train(train_opt, std::cout);
    if (*eval) return seedsynth::cli::cmd_eval(eval_opt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
