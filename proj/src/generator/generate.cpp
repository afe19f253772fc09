#include <algorithm>
#include <cmath>
#include <exception>

#include <omp.h>

#include "stlc/generator.hpp"

namespace stlc {

void GenConfig::validate() const {
  if (max_type_depth < 1 || max_term_depth < 1)
    throw ContractError("depth limits must be >= 1");
  if (!(p_branch >= 0.0 && p_branch <= 1.0))
    throw ContractError("p_branch must lie in [0, 1]");
  double sum = 0.0;
  for (double r : split_ratios) {
    if (!(r >= 0.0)) throw ContractError("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ContractError("split ratios must sum to 1");
}

Type gen_type(Rng& rng, const TypingContext& ctx, int max_depth, double p_branch) {
  if (max_depth < 1) throw ContractError("gen_type: max_depth must be >= 1");
  if (ctx.base_types().empty()) throw ContractError("gen_type: context has no base types");
  // Flip first, then honour the depth limit.
  if (rng.bernoulli(p_branch) && max_depth > 1) {
    Type left = gen_type(rng, ctx, max_depth - 1, p_branch);
    Type right = gen_type(rng, ctx, max_depth - 1, p_branch);
    return Type::arrow(std::move(left), std::move(right));
  }
  const auto& bases = ctx.base_types();
  return Type::base(bases[rng.below(bases.size())]);
}

namespace {

// `budget` is the number of AST levels still available, this node included.
// A base target needs 3 levels for an application (app, abstraction, var);
// an arrow target needs 3 for anything beyond the depth-limit fallbacks.
class TermGenerator {
 public:
  TermGenerator(Rng& rng, const TypingContext& ctx, double p_branch)
      : rng_(rng), dynamic_(ctx), p_branch_(p_branch) {}

  Term gen(const Type& target, int budget) {
    if (budget < 1) throw GenerationError("depth budget exhausted");
    if (!target.is_arrow()) {
      if (budget < 3 || rng_.below(2) == 0) return variable(target);
      return application(target, budget);
    }
    if (budget <= 2) return at_limit(target, budget);

    auto vars = dynamic_.visible_of_type(target);
    enum Option { Var, Abs, App };
    std::vector<Option> options;
    if (!vars.empty()) options.push_back(Var);
    options.push_back(Abs);
    options.push_back(App);
    switch (options[rng_.below(options.size())]) {
      case Var:
        return Term::var(vars[rng_.below(vars.size())]);
      case Abs:
        return abstraction(target, budget);
      case App:
        return application(target, budget);
    }
    throw ContractError("unreachable option");
  }

 private:
  Term variable(const Type& target) {
    auto vars = dynamic_.visible_of_type(target);
    if (vars.empty()) throw GenerationError("no variable of type " + print_type(target));
    return Term::var(vars[rng_.below(vars.size())]);
  }

  Term application(const Type& target, int budget) {
    Type param = gen_type(rng_, dynamic_, budget - 1, p_branch_);
    Term fun = gen(Type::arrow(param, target), budget - 1);
    Term arg = gen(param, budget - 1);
    return Term::app(std::move(fun), std::move(arg));
  }

  Term abstraction(const Type& target, int budget) {
    std::string binder = pick_binder();
    TypingContext saved = dynamic_;
    dynamic_ = dynamic_.extended(binder, target.left());
    Term body = gen(target.right(), budget - 1);
    dynamic_ = std::move(saved);
    return Term::abs(std::move(binder), target.left(), std::move(body));
  }

  // A context variable of the target type, or an abstraction whose body is a
  // variable.
  Term at_limit(const Type& target, int budget) {
    auto vars = dynamic_.visible_of_type(target);
    bool abs_possible = budget >= 2 && (!target.right().is_arrow() ||
                                        target.left() == target.right() ||
                                        !dynamic_.visible_of_type(target.right()).empty());
    std::size_t n_options = (vars.empty() ? 0 : 1) + (abs_possible ? 1 : 0);
    if (n_options == 0)
      throw GenerationError("cannot produce " + print_type(target) + " at the depth limit");
    bool use_var = !vars.empty() && (!abs_possible || rng_.below(n_options) == 0);
    if (use_var) return Term::var(vars[rng_.below(vars.size())]);
    std::string binder = pick_binder();
    auto body_vars = dynamic_.extended(binder, target.left()).visible_of_type(target.right());
    if (body_vars.empty())
      throw GenerationError("binder shadows the only candidate body");
    std::string body = body_vars[rng_.below(body_vars.size())];
    return Term::abs(std::move(binder), target.left(), Term::var(std::move(body)));
  }

  // Uniform over names already used in this term plus one fresh name.
  std::string pick_binder() {
    std::size_t k = rng_.below(used_.size() + 1);
    if (k < used_.size()) return used_[k];
    std::string name;
    do {
      name = "v" + std::to_string(fresh_++);
    } while (dynamic_.find(name) && std::find(used_.begin(), used_.end(), name) == used_.end());
    used_.push_back(name);
    return name;
  }

  Rng& rng_;
  TypingContext dynamic_;
  double p_branch_;
  std::vector<std::string> used_;
  int fresh_ = 0;
};

}  // namespace

Term gen_term(Rng& rng, const Type& target, const TypingContext& ctx, int max_depth,
              double p_branch) {
  if (max_depth < 1) throw ContractError("gen_term: max_depth must be >= 1");
  return TermGenerator(rng, ctx, p_branch).gen(target, max_depth);
}

Example generate_example(const GenConfig& cfg, const TypingContext& ctx, std::size_t index) {
  Rng rng = Rng::for_item(cfg.seed, index);
  for (int attempt = 0; attempt <= kMaxConsecutiveRetries; ++attempt) {
    Type target = gen_type(rng, ctx, cfg.max_type_depth, cfg.p_branch);
    try {
      Term raw = gen_term(rng, target, ctx, cfg.max_term_depth, cfg.p_branch);
      Term term = bfs_rename(raw);
      int td = term_depth(term);
      int yd = type_depth(target);
      return Example{index, std::move(term), std::move(target), td, yd};
    } catch (const GenerationError&) {
    } catch (const VocabularyError&) {
    }
  }
  throw GenerationError("example " + std::to_string(index) + ": no term found after " +
                        std::to_string(kMaxConsecutiveRetries) +
                        " retries; the depth limits are too tight");
}

std::vector<Example> gen_dataset(const GenConfig& cfg, const TypingContext& ctx, int threads) {
  cfg.validate();
  std::vector<std::optional<Example>> slots(cfg.n_examples);
  std::exception_ptr failure;
  const long n = static_cast<long>(cfg.n_examples);
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(workers)
  for (long i = 0; i < n; ++i) {
    try {
      slots[static_cast<std::size_t>(i)] = generate_example(cfg, ctx, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(stlc_gen_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Example> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<Example> gen_dataset_serial(const GenConfig& cfg, const TypingContext& ctx) {
  cfg.validate();
  std::vector<Example> out;
  out.reserve(cfg.n_examples);
  for (std::size_t i = 0; i < cfg.n_examples; ++i) out.push_back(generate_example(cfg, ctx, i));
  return out;
}

}  // namespace stlc
