// Serial reference vs OpenMP kernels: dataset generation and batch decoding.
// Usage: stlc_bench [n_examples] [threads]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "stlc/dataset_io.hpp"
#include "stlc/generator.hpp"
#include "stlc/grammar.hpp"

using namespace stlc;
using Clock = std::chrono::steady_clock;

template <typename F>
double time_it(F&& f) {
  auto start = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20000;
  const int threads = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();
  std::printf("examples %zu, threads %d (cores %d)\n", n, threads, omp_get_num_procs());

  const TypingContext ctx = TypingContext::global();
  GenConfig cfg;
  cfg.n_examples = n;

  std::vector<Example> serial, parallel;
  double ts = time_it([&] { serial = gen_dataset_serial(cfg, ctx); });
  double tp = time_it([&] { parallel = gen_dataset(cfg, ctx, threads); });
  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i)
    same = example_to_jsonl(serial[i]) == example_to_jsonl(parallel[i]);
  std::printf("gen_dataset     serial %8.3f s  parallel %8.3f s  speedup %5.2fx  identical %s\n", ts,
              tp, ts / tp, same ? "yes" : "NO");

  const RuleTable table = build_rule_table(ctx);
  const auto width = static_cast<std::size_t>(table.id_count());
  std::mt19937_64 gen(1);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<ScoreMatrix> batch;
  batch.reserve(serial.size());
  for (const auto& ex : serial) {
    auto seq = encode_type_rules(ex.target_type, table);
    seq.push_back(RuleTable::kEos);
    ScoreMatrix m = ScoreMatrix::one_hot(seq, width);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (double& v : m.row(i)) v += noise(gen);
    batch.push_back(std::move(m));
  }
  std::vector<Type> ds, dp;
  omp_set_num_threads(threads);
  double tds = time_it([&] { ds = decode_batch_serial(batch, table); });
  double tdp = time_it([&] { dp = decode_batch(batch, table); });
  same = ds.size() == dp.size();
  for (std::size_t i = 0; same && i < ds.size(); ++i) same = ds[i] == dp[i];
  std::vector<Type> targets;
  for (const auto& ex : serial) targets.push_back(ex.target_type);
  std::printf("decode_batch    serial %8.3f s  parallel %8.3f s  speedup %5.2fx  identical %s  "
              "accuracy %.3f\n",
              tds, tdp, tds / tdp, same ? "yes" : "NO", batch_accuracy(dp, targets));
  return 0;
}
