#include "seedsynth/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "seedsynth/bench.hpp"
#include "seedsynth/linalg.hpp"
#include "seedsynth/partition.hpp"
#include "seedsynth/qasm.hpp"
#include "seedsynth/recommend.hpp"
#include "seedsynth/rng.hpp"
#include "seedsynth/synth.hpp"

namespace seedsynth::cli {

namespace {

void parallel_for(std::size_t n, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const std::size_t count = std::min(jobs, n);
  workers.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (std::thread& t : workers) t.join();
}

std::uint64_t block_seed(std::uint64_t base, std::size_t index) {
  return Rng(base, 0xb10c).fork(index).next_u64();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_time(double seconds, bool timing) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", timing ? seconds : 0.0);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

// "family=width,family=width" -> set of pairs.
std::set<std::pair<std::string, std::size_t>> parse_holdout(
    const std::string& text) {
  std::set<std::pair<std::string, std::size_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("bad holdout entry '" + item +
                               "', expected family=width");
    }
    out.emplace(item.substr(0, eq),
                static_cast<std::size_t>(std::stoul(item.substr(eq + 1))));
  }
  return out;
}

// First topology whose edge set covers the block's CNOT edges; 0 if none.
std::size_t infer_topology_tag(const Circuit& local,
                               const TemplateCatalog& catalog) {
  for (std::size_t t = 0; t < catalog.topologies().size(); ++t) {
    bool ok = true;
    for (const GatePlacement& g : local.gates()) {
      if (g.kind == GateKind::cnot &&
          !catalog.topologies()[t].has_edge(g.q0, g.q1)) {
        ok = false;
        break;
      }
    }
    if (ok) return t;
  }
  return 0;
}

struct BlockOutcome {
  bool converged = false;
  Circuit replacement{1};
  double cost = 0.0;
  std::uint64_t calls = 0;
  std::size_t cnot_before = 0;
  std::size_t cnot_after = 0;
  double wall_time = 0.0;
};

}  // namespace

int cmd_templates(const TemplatesOptions& opt, std::ostream& log) {
  const TemplateCatalog catalog = catalog_for_width(opt.width, opt.common.k);
  if (!opt.out.empty()) {
    auto f = open_out(opt.out);
    catalog.export_jsonl(f);
  }
  log << "catalog width " << opt.width << " K " << catalog.k() << " size "
      << catalog.size() << "\n";
  return 0;
}

int cmd_bench_gen(const BenchGenOptions& opt, std::ostream& log) {
  const Circuit c = generate_benchmark(opt.family, opt.width, opt.depth,
                                       opt.common.seed);
  auto f = open_out(opt.out_qasm);
  f << emit_qasm(c);
  log << opt.family << " width " << opt.width << ": " << c.gates().size()
      << " gates, " << c.cnot_count() << " CNOTs -> " << opt.out_qasm << "\n";
  return 0;
}

int cmd_optimize(const OptimizeOptions& opt, std::ostream& log) {
  std::ifstream in(opt.qasm_in);
  if (!in) throw std::runtime_error("cannot open " + opt.qasm_in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Circuit source = parse_qasm(buffer.str());

  const bool learned = opt.strategy == "learned";
  const bool random = opt.strategy == "random";
  if (!learned && !random && opt.strategy != "root") {
    throw std::runtime_error("unknown strategy '" + opt.strategy + "'");
  }
  Recommender model;
  if (learned) {
    if (opt.model.empty()) {
      throw std::runtime_error("strategy=learned requires --model");
    }
    model = Recommender::load_file(opt.model);
  }

  const std::size_t w = std::min<std::size_t>(opt.width, source.n_qubits());
  const PartitionedCircuit parts = partition(source, w);

  std::map<std::size_t, TemplateCatalog> catalogs;
  for (const Block& b : parts.blocks) {
    if (!catalogs.count(b.width())) {
      catalogs.emplace(b.width(), catalog_for_width(b.width(), opt.common.k));
    }
  }
  if (learned) {
    const auto it = catalogs.find(3);
    if (it != catalogs.end() && it->second.size() != model.catalog_size()) {
      throw std::runtime_error("model catalog size does not match --k");
    }
  }

  MetricsContext metrics;
  std::vector<BlockOutcome> outcomes(parts.blocks.size());

  parallel_for(parts.blocks.size(), opt.common.jobs, [&](std::size_t bi) {
    const Block& b = parts.blocks[bi];
    const TemplateCatalog& catalog = catalogs.at(b.width());
    BlockOutcome& out = outcomes[bi];
    out.cnot_before = b.local.cnot_count();

    SearchConfig cfg;
    cfg.instantiation.epsilon = opt.common.epsilon;
    cfg.instantiation.rng_seed = block_seed(opt.common.seed, bi);

    MetricsContext local_metrics;
    const auto start = std::chrono::steady_clock::now();
    try {
      SynthesisResult result = [&] {
        if (random) {
          const auto seeds = random_seeds(
              catalog, std::min(opt.seeds_per_block, catalog.size()),
              block_seed(opt.common.seed ^ 0x5eed, bi));
          return seeded_synthesize(block_unitary(b), catalog, seeds, cfg,
                                   &local_metrics,
                                   SynthStrategy::random_seeded);
        }
        if (learned && b.width() == 3) {
          const auto seeds = model.recommend_seeds(
              catalog, block_unitary(b), infer_topology_tag(b.local, catalog),
              opt.seeds_per_block);
          return seeded_synthesize(block_unitary(b), catalog, seeds, cfg,
                                   &local_metrics, SynthStrategy::seeded);
        }
        return synthesize(block_unitary(b), catalog, cfg, &local_metrics);
      }();
      out.converged = true;
      out.cost = result.cost;
      out.cnot_after = result.circuit.cnot_count();
      out.replacement = std::move(result.circuit);
    } catch (const NoSolutionError& e) {
      out.converged = false;
      out.cost = e.best.cost;
      out.cnot_after = out.cnot_before;
    }
    out.calls = local_metrics.instantiation_calls.load();
    metrics.instantiation_calls.fetch_add(out.calls);
    out.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  });

  std::map<std::size_t, Circuit> replacements;
  for (std::size_t bi = 0; bi < outcomes.size(); ++bi) {
    if (outcomes[bi].converged) replacements.emplace(bi, outcomes[bi].replacement);
  }
  const Circuit optimized = reassemble(parts, replacements);

  if (!opt.qasm_out.empty()) {
    auto f = open_out(opt.qasm_out);
    f << emit_qasm(optimized);
  }

  if (!opt.metrics_csv.empty()) {
    auto f = open_out(opt.metrics_csv);
    f << kMetricsCsvHeader << "\n";
    for (std::size_t bi = 0; bi < outcomes.size(); ++bi) {
      const BlockOutcome& o = outcomes[bi];
      f << bi << ',' << opt.strategy << ',' << o.calls << ',' << o.cnot_before
        << ',' << o.cnot_after << ',' << format_double(o.cost) << ','
        << format_time(o.wall_time, opt.common.timing) << "\n";
    }
  }

  const VerificationReport report = verify_bound(parts, replacements);
  if (!opt.verify_json.empty()) {
    auto f = open_out(opt.verify_json);
    write_verification_report(f, opt.qasm_in, report);
  }
  if (!opt.partition_json.empty()) {
    auto f = open_out(opt.partition_json);
    write_partition_report(f, parts);
  }

  std::size_t failures = 0;
  std::uint64_t total_calls = 0;
  std::size_t cnots_before = 0, cnots_after = 0;
  for (const BlockOutcome& o : outcomes) {
    failures += o.converged ? 0 : 1;
    total_calls += o.calls;
    cnots_before += o.cnot_before;
    cnots_after += o.cnot_after;
  }
  log << "blocks " << outcomes.size() << " failures " << failures
      << " instantiation_calls " << total_calls << " mean_calls "
      << static_cast<double>(total_calls) /
             static_cast<double>(std::max<std::size_t>(1, outcomes.size()))
      << " cnots " << cnots_before << " -> " << cnots_after;
  if (cnots_before > 0) {
    log << " relative_cnot_ratio "
        << static_cast<double>(cnots_after) / static_cast<double>(cnots_before);
  }
  log << " total_bound " << report.total_bound;
  if (report.has_exact) log << " exact " << report.exact_distance;
  log << "\n";

  if (failures > 0 || !report.bound_ok) return 1;
  return 0;
}

int cmd_gen_dataset(const GenDatasetOptions& opt, std::ostream& log) {
  const TemplateCatalog catalog = catalog_for_width(3, opt.common.k);

  struct Job {
    std::string family;
    std::size_t width;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const std::string& family : opt.families) {
    for (const std::size_t width : opt.widths) {
      const std::size_t variants = family == "qft" ? 1 : opt.variants;
      for (std::size_t v = 0; v < variants; ++v) {
        jobs.push_back({family, width,
                        Rng(opt.common.seed, v).fork(width).next_u64()});
      }
    }
  }

  std::vector<DatasetReport> reports(jobs.size());
  MetricsContext metrics;
  parallel_for(jobs.size(), opt.common.jobs, [&](std::size_t ji) {
    const Job& job = jobs[ji];
    SearchConfig cfg;
    cfg.instantiation.epsilon = opt.common.epsilon;
    cfg.instantiation.rng_seed = job.seed;
    const Circuit c =
        generate_benchmark(job.family, job.width, opt.depth, job.seed);
    reports[ji] =
        generate_dataset({c}, job.family, catalog, cfg, &metrics);
  });

  auto f = open_out(opt.out);
  std::size_t total = 0, skipped = 0, failed = 0, samples = 0;
  for (const DatasetReport& r : reports) {
    write_dataset(f, r.samples, catalog.topologies().size());
    total += r.blocks_total;
    skipped += r.blocks_skipped_width;
    failed += r.blocks_failed;
    samples += r.samples.size();
  }
  log << "dataset " << samples << " samples from " << total << " blocks ("
      << skipped << " narrow, " << failed << " failed), "
      << metrics.instantiation_calls.load() << " instantiation calls -> "
      << opt.out << "\n";
  return samples == 0 ? 1 : 0;
}

namespace {

std::vector<LabeledUnitary> load_dataset_file(const std::string& path,
                                              std::size_t n_topologies) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_dataset(f, n_topologies);
}

}  // namespace

int cmd_train(const TrainOptions& opt, std::ostream& log) {
  const TemplateCatalog catalog = catalog_for_width(3, opt.common.k);
  const auto holdout = parse_holdout(opt.holdout);
  const auto all = load_dataset_file(opt.dataset, catalog.topologies().size());

  std::vector<LabeledUnitary> train;
  std::size_t held = 0;
  for (const LabeledUnitary& s : all) {
    if (holdout.count({s.family, s.circuit_width})) {
      ++held;
    } else {
      train.push_back(s);
    }
  }
  if (train.empty()) throw std::runtime_error("no training samples left");

  TrainConfig cfg;
  cfg.epochs = opt.epochs;
  cfg.batch_size = opt.batch_size;
  cfg.learning_rate = opt.learning_rate;
  cfg.noise_std = opt.noise_std;
  cfg.rng_seed = opt.common.seed;

  Recommender model(train.front().features.size(),
                    catalog.topologies().size(), catalog.size(),
                    opt.common.seed);
  TrainConfig pre_cfg = cfg;
  pre_cfg.epochs = opt.pretrain_epochs;
  const auto pre_losses = model.pretrain_denoise(train, pre_cfg);
  const auto fine_losses = model.finetune(train, cfg);

  std::size_t correct = 0;
  for (const LabeledUnitary& s : train) {
    const auto scores = model.scores(s);
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
      if (scores[i] > scores[best]) best = i;
    }
    correct += best == s.template_id ? 1 : 0;
  }

  model.save_file(opt.model_out);
  log << "trained on " << train.size() << " samples (" << held
      << " held out); pretrain loss " << pre_losses.front() << " -> "
      << pre_losses.back() << "; finetune loss " << fine_losses.front()
      << " -> " << fine_losses.back() << "; train top-1 "
      << static_cast<double>(correct) / static_cast<double>(train.size())
      << " -> " << opt.model_out << "\n";
  return 0;
}

int cmd_eval(const EvalOptions& opt, std::ostream& log,
             EvalSummary* summary_out) {
  const TemplateCatalog catalog = catalog_for_width(3, opt.common.k);
  const auto holdout = parse_holdout(opt.holdout);
  const auto all = load_dataset_file(opt.dataset, catalog.topologies().size());
  Recommender model = Recommender::load_file(opt.model);
  if (model.catalog_size() != catalog.size()) {
    throw std::runtime_error("model catalog size does not match --k");
  }

  std::vector<const LabeledUnitary*> eval_set;
  for (const LabeledUnitary& s : all) {
    if (holdout.empty() || holdout.count({s.family, s.circuit_width})) {
      eval_set.push_back(&s);
    }
  }
  if (eval_set.empty()) throw std::runtime_error("no held-out samples");

  struct Row {
    std::size_t label = 0;
    bool top1 = false;
    bool top3 = false;
    // per strategy: calls, cnots, cost, time
    std::uint64_t calls[3] = {0, 0, 0};
    std::size_t cnots[3] = {0, 0, 0};
    double cost[3] = {0.0, 0.0, 0.0};
    double wall[3] = {0.0, 0.0, 0.0};
    bool failed[3] = {false, false, false};
  };
  std::vector<Row> rows(eval_set.size());

  const std::size_t dim = 8;
  parallel_for(eval_set.size(), opt.common.jobs, [&](std::size_t i) {
    const LabeledUnitary& s = *eval_set[i];
    Row& row = rows[i];
    row.label = s.template_id;

    const UnitaryMatrix target = unitary_from_features(s.features, dim);
    const auto recommended = model.recommend_seeds(
        catalog, target, s.topology_tag, opt.seeds_per_block);
    row.top1 = !recommended.empty() && recommended.front() == s.template_id;
    row.top3 = std::find(recommended.begin(), recommended.end(),
                         s.template_id) != recommended.end();

    SearchConfig cfg;
    cfg.instantiation.epsilon = opt.common.epsilon;
    cfg.instantiation.rng_seed = block_seed(opt.common.seed, i);

    for (int strat = 0; strat < 3; ++strat) {
      MetricsContext metrics;
      const auto start = std::chrono::steady_clock::now();
      try {
        SynthesisResult result = [&] {
          switch (strat) {
            case 0:
              return synthesize(target, catalog, cfg, &metrics);
            case 1:
              return seeded_synthesize(target, catalog, recommended, cfg,
                                       &metrics, SynthStrategy::seeded);
            default: {
              const auto seeds = random_seeds(
                  catalog, std::min(opt.seeds_per_block, catalog.size()),
                  block_seed(opt.common.seed ^ 0x5eed, i));
              return seeded_synthesize(target, catalog, seeds, cfg, &metrics,
                                       SynthStrategy::random_seeded);
            }
          }
        }();
        row.cnots[strat] = result.circuit.cnot_count();
        row.cost[strat] = result.cost;
      } catch (const NoSolutionError& e) {
        row.failed[strat] = true;
        row.cost[strat] = e.best.cost;
        row.cnots[strat] = catalog.at(s.template_id).cnot_count();
      }
      row.calls[strat] = metrics.instantiation_calls.load();
      row.wall[strat] = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    }
  });

  static constexpr const char* kStrategyNames[3] = {"root", "learned",
                                                    "random"};
  if (!opt.metrics_csv.empty()) {
    auto f = open_out(opt.metrics_csv);
    f << kMetricsCsvHeader << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& row = rows[i];
      const std::size_t before = catalog.at(row.label).cnot_count();
      for (int strat = 0; strat < 3; ++strat) {
        f << i << ',' << kStrategyNames[strat] << ',' << row.calls[strat]
          << ',' << before << ',' << row.cnots[strat] << ','
          << format_double(row.cost[strat]) << ','
          << format_time(row.wall[strat], opt.common.timing) << "\n";
      }
    }
  }

  EvalSummary summary;
  summary.held_out_count = rows.size();
  double top1 = 0.0, top3 = 0.0;
  double calls[3] = {0.0, 0.0, 0.0};
  double before_total = 0.0;
  double after[3] = {0.0, 0.0, 0.0};
  for (const Row& row : rows) {
    top1 += row.top1 ? 1.0 : 0.0;
    top3 += row.top3 ? 1.0 : 0.0;
    before_total += static_cast<double>(catalog.at(row.label).cnot_count());
    for (int strat = 0; strat < 3; ++strat) {
      calls[strat] += static_cast<double>(row.calls[strat]);
      after[strat] += static_cast<double>(row.cnots[strat]);
    }
  }
  const double n = static_cast<double>(rows.size());
  summary.top1 = top1 / n;
  summary.top3 = top3 / n;
  summary.mean_calls_root = calls[0] / n;
  summary.mean_calls_learned = calls[1] / n;
  summary.mean_calls_random = calls[2] / n;
  if (before_total > 0.0) {
    summary.cnot_ratio_root = after[0] / before_total;
    summary.cnot_ratio_learned = after[1] / before_total;
    summary.cnot_ratio_random = after[2] / before_total;
  }

  log << "eval " << rows.size() << " held-out blocks: top-1 " << summary.top1
      << " top-3 " << summary.top3 << "\n";
  for (std::size_t tag = 0; tag < catalog.topologies().size(); ++tag) {
    std::size_t count = 0, t1 = 0, t3 = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (eval_set[i]->topology_tag != tag) continue;
      ++count;
      t1 += rows[i].top1 ? 1 : 0;
      t3 += rows[i].top3 ? 1 : 0;
    }
    if (count == 0) continue;
    log << "  topology " << tag << " (" << count << " blocks): top-1 "
        << static_cast<double>(t1) / static_cast<double>(count) << " top-3 "
        << static_cast<double>(t3) / static_cast<double>(count) << "\n";
  }
  log << "mean instantiation calls: root " << summary.mean_calls_root
      << " learned " << summary.mean_calls_learned << " random "
      << summary.mean_calls_random << "\n";
  if (summary.mean_calls_learned > 0.0 && summary.mean_calls_random > 0.0) {
    log << "speedup vs root (by calls): learned "
        << summary.mean_calls_root / summary.mean_calls_learned << "x random "
        << summary.mean_calls_root / summary.mean_calls_random << "x\n";
  }
  log << "relative cnot ratio: root " << summary.cnot_ratio_root
      << " learned " << summary.cnot_ratio_learned << " random "
      << summary.cnot_ratio_random << "\n";
  if (summary_out != nullptr) *summary_out = summary;
  return 0;
}

}  // namespace seedsynth::cli
