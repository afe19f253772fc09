#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "stlc/core.hpp"

namespace stlc {

// Seedable generator with a portable stream: the raw engine is mt19937_64
// (bit-exact across standard libraries) and all derived draws are computed
// here rather than through <random> distributions, whose outputs are
// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n). n > 0.
  std::size_t below(std::size_t n);
  // Uniform in [0, 1) with 53 bits.
  double unit();
  bool bernoulli(double p) { return unit() < p; }

  // Independent stream for item `index` of a run seeded with `seed`.
  static Rng for_item(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

enum class SplitMode { TypeDisjoint, TermDisjoint };

struct GenConfig {
  std::uint64_t seed = 0;
  int max_type_depth = 7;
  int max_term_depth = 7;
  double p_branch = 0.5;
  std::size_t n_examples = 1000;
  double split_ratios[3] = {0.8, 0.1, 0.1};
  SplitMode split_mode = SplitMode::TypeDisjoint;

  // ContractError on depths < 1, p outside [0,1], or ratios that are
  // negative or do not sum to 1 within 1e-9.
  void validate() const;
};

struct Example {
  std::size_t id;
  Term term;  // BFS-renamed
  Type target_type;
  int term_depth;
  int type_depth;
};

Type gen_type(Rng& rng, const TypingContext& ctx, int max_depth, double p_branch);

// Throws GenerationError when the depth budget strands a subterm.
Term gen_term(Rng& rng, const Type& target, const TypingContext& ctx, int max_depth,
              double p_branch);

inline constexpr int kMaxConsecutiveRetries = 1000;

// Example `index` of the dataset described by `cfg`; draws from
// Rng::for_item(cfg.seed, index) only, so the result is independent of any
// other example.
Example generate_example(const GenConfig& cfg, const TypingContext& ctx, std::size_t index);

// Parallel over examples. `threads` <= 0 uses the OpenMP default. Output is
// identical for every thread count.
std::vector<Example> gen_dataset(const GenConfig& cfg, const TypingContext& ctx,
                                 int threads = 0);
std::vector<Example> gen_dataset_serial(const GenConfig& cfg, const TypingContext& ctx);

struct Splits {
  std::vector<Example> train;
  std::vector<Example> val;
  std::vector<Example> test;
};

// Groups examples by printed type (TypeDisjoint) or printed term
// (TermDisjoint) and assigns whole groups to splits, so no key crosses
// splits. ContractError on empty input or when there are fewer groups than
// splits with a positive ratio.
Splits split_dataset(const std::vector<Example>& examples, const GenConfig& cfg);

}  // namespace stlc
