#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "stlc/dataset_io.hpp"
#include "stlc/generator.hpp"
#include "stlc/grammar.hpp"
#include "support.hpp"

using namespace stlc;

namespace {

const TypingContext G = TypingContext::global();
const Type T = Type::base("T");
const Type TT = Type::arrow(T, T);

std::string serialize(const std::vector<Example>& xs) {
  std::string out;
  for (const auto& x : xs) out += example_to_jsonl(x) + "\n";
  return out;
}

std::set<std::string> keys(const std::vector<Example>& xs, SplitMode mode) {
  std::set<std::string> out;
  for (const auto& x : xs)
    out.insert(mode == SplitMode::TypeDisjoint ? print_type(x.target_type) : print_term(x.term));
  return out;
}

Example make_example(std::size_t id, const char* term) {
  Term t = parse_term(term, G);
  Type ty = infer_type(t, G);
  return Example{id, t, ty, term_depth(t), type_depth(ty)};
}

}  // namespace

TEST_CASE("rng streams are reproducible and portable") {
  // mt19937_64 with default seed 5489 has a standardised 10000th output.
  std::mt19937_64 reference;
  reference.discard(9999);
  CHECK(reference() == 9981545732273789042ULL);

  Rng a = Rng::for_item(0, 5), b = Rng::for_item(0, 5), c = Rng::for_item(0, 6);
  CHECK(a.next() == b.next());
  CHECK(a.next() != c.next());
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.below(7) < 7u);
    double u = a.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  // First two outputs of the reference SplitMix64 stream seeded with 0.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("rng below is close to uniform") {
  Rng rng(42);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 30000; ++i) ++counts[rng.below(3)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 400);
}

TEST_CASE("gen_type forced cases") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    CHECK(gen_type(rng, G, 6, 0.0) == T);
    CHECK(gen_type(rng, G, 1, 1.0) == T);
  }
  // p = 1 fills the tree completely.
  Type full = gen_type(rng, G, 4, 1.0);
  CHECK(type_depth(full) == 4);
  CHECK(arrow_count(full) == 7);
}

TEST_CASE("gen_type golden value") {
  Rng rng(0);
  Type t = gen_type(rng, G, 3, 0.5);
  CHECK(type_depth(t) <= 3);
  CHECK(print_type(t) == "T -> T");
  Rng again(0);
  CHECK(gen_type(again, G, 3, 0.5) == t);
}

TEST_CASE("gen_term forced cases") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) CHECK(gen_term(rng, T, G, 1, 0.5) == Term::var("x"));

  // At depth 2 an arrow T -> T can only be a one-level abstraction whose body
  // is either the binder or x.
  std::set<std::string> seen;
  for (int i = 0; i < 200; ++i) seen.insert(print_term(bfs_rename(gen_term(rng, TT, G, 2, 0.5))));
  CHECK(seen == std::set<std::string>{"lambda bv0 : T . x", "lambda bv0 : T . bv0"});

  // No variable of type T -> T exists and there is no room for anything else.
  CHECK_THROWS_AS(gen_term(rng, TT, G, 1, 0.5), GenerationError);
}

TEST_CASE("gen_term golden value") {
  Rng rng(0);
  Term e = gen_term(rng, T, G, 4, 0.5);
  CHECK(infer_type(e, G) == T);
  CHECK(term_depth(e) <= 4);
  CHECK(print_term(bfs_rename(e)) == "x");
  Rng again(0);
  CHECK(gen_term(again, T, G, 4, 0.5) == e);
}

TEST_CASE("generated examples are sound and within bounds") {
  for (auto [td, ed] : {std::pair{7, 7}, {3, 5}, {5, 3}, {1, 1}, {2, 9}}) {
    GenConfig cfg = testing::small_config(99, 500, td, ed);
    auto data = gen_dataset(cfg, G);
    REQUIRE(data.size() == 500);
    const RuleTable table = build_rule_table(G);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& ex = data[i];
      CAPTURE(print_term(ex.term));
      CHECK(ex.id == i);
      CHECK(infer_type(ex.term, G) == ex.target_type);
      CHECK(term_depth(ex.term) <= ed);
      CHECK(type_depth(ex.target_type) <= td);
      CHECK(ex.term_depth == term_depth(ex.term));
      CHECK(ex.type_depth == type_depth(ex.target_type));
      CHECK(bfs_rename(ex.term) == ex.term);
      CHECK(binder_count(ex.term) <= kMaxBoundNames);
      // Every leaf is in the closed vocabulary.
      CHECK_NOTHROW(build_cst(ex.term, table));
    }
  }
}

TEST_CASE("generation is deterministic and thread-count independent") {
  GenConfig cfg = testing::small_config(2024, 1500);
  std::string serial = serialize(gen_dataset_serial(cfg, G));
  CHECK(serialize(gen_dataset(cfg, G, 1)) == serial);
  CHECK(serialize(gen_dataset(cfg, G, 4)) == serial);
  CHECK(serialize(gen_dataset(cfg, G, 7)) == serial);
  cfg.seed = 2025;
  CHECK(serialize(gen_dataset(cfg, G)) != serial);
}

TEST_CASE("examples do not depend on the dataset size") {
  auto small = gen_dataset(testing::small_config(8, 10), G);
  auto large = gen_dataset(testing::small_config(8, 100), G);
  for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i].term == large[i].term);
}

TEST_CASE("empty dataset and bad configs") {
  CHECK(gen_dataset(testing::small_config(0, 0), G).empty());
  GenConfig cfg;
  cfg.p_branch = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  cfg = GenConfig{};
  cfg.max_term_depth = 0;
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  cfg = GenConfig{};
  cfg.split_ratios[0] = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  CHECK_THROWS_AS(split_dataset({}, GenConfig{}), ContractError);
}

TEST_CASE("split examples") {
  GenConfig cfg;
  cfg.split_ratios[0] = 1.0;
  cfg.split_ratios[1] = 0.0;
  cfg.split_ratios[2] = 0.0;
  std::vector<Example> xs{make_example(0, "x"), make_example(1, "[lambda a : T . a x]")};
  Splits s = split_dataset(xs, cfg);
  CHECK(s.train.size() == 2);
  CHECK(s.val.empty());
  CHECK(s.test.empty());

  cfg.split_ratios[0] = 0.5;
  cfg.split_ratios[1] = 0.5;
  xs.push_back(make_example(2, "lambda a : T . a"));
  xs.push_back(make_example(3, "lambda a : T . x"));
  s = split_dataset(xs, cfg);
  CHECK(s.train.size() == 2);
  CHECK(s.val.size() == 2);
  CHECK(s.test.empty());
  auto a = keys(s.train, SplitMode::TypeDisjoint), b = keys(s.val, SplitMode::TypeDisjoint);
  CHECK(a.size() == 1);
  CHECK(b.size() == 1);
  CHECK(a != b);

  cfg.split_ratios[2] = 0.5;
  cfg.split_ratios[0] = 0.0;
  CHECK_THROWS_AS(split_dataset({make_example(0, "x")}, cfg), ContractError);
}

TEST_CASE("split sizes and disjointness on a generated dataset") {
  for (SplitMode mode : {SplitMode::TypeDisjoint, SplitMode::TermDisjoint}) {
    GenConfig cfg = testing::small_config(0, 1000);
    cfg.split_mode = mode;
    auto data = gen_dataset(cfg, G);
    Splits s = split_dataset(data, cfg);
    CHECK(s.train.size() + s.val.size() + s.test.size() == 1000);
    CHECK(std::abs(static_cast<double>(s.train.size()) / 1000.0 - 0.8) <= 0.05);
    CHECK(std::abs(static_cast<double>(s.val.size()) / 1000.0 - 0.1) <= 0.05);
    CHECK(std::abs(static_cast<double>(s.test.size()) / 1000.0 - 0.1) <= 0.05);

    auto ktr = keys(s.train, mode), kva = keys(s.val, mode), kte = keys(s.test, mode);
    for (const auto& k : ktr) {
      CHECK(kva.count(k) == 0);
      CHECK(kte.count(k) == 0);
    }
    for (const auto& k : kva) CHECK(kte.count(k) == 0);

    // Same config, same split.
    Splits again = split_dataset(data, cfg);
    CHECK(serialize(again.test) == serialize(s.test));
  }
}
