// Acceptance gate. Prints one PASS/FAIL line per criterion; with arguments,
// runs only the named criteria. Exit status is non-zero if any run criterion
// fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stlc/cli.hpp"
#include "stlc/dataset_io.hpp"
#include "stlc/grammar.hpp"
#include "stlc/optim.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace stlc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("stlc_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

const std::vector<std::string> kGenFlags = {"gen", "--seed", "0", "--n", "10000",
                                            "--max-type-depth", "7", "--max-term-depth", "7"};

std::vector<Example> load_dataset(const fs::path& file) {
  const TypingContext ctx = TypingContext::global();
  std::ifstream in(file);
  std::vector<Example> out;
  for (const auto& line : read_lines(in)) out.push_back(example_from_jsonl(line, ctx));
  return out;
}

// --- criteria ---

Outcome oracle_fidelity() {
  auto start = Clock::now();
  const TypingContext g = TypingContext::global();
  const Type t = Type::base("T");
  const Type tt = Type::arrow(t, t);
  const std::pair<const char*, Type> cases[] = {
      {"x", t},
      {"lambda x_0 : T . x", tt},
      {"[ lambda x_0 : T . x   x ]", t},
      {"lambda x_0 : T -> T . x", Type::arrow(tt, t)},
      {"[ [ lambda x_1 : T . lambda x_2 : T -> T . x_2  x ] lambda x_0 : T . x_0 ]", tt},
  };
  int ok = 0;
  for (const auto& [text, want] : cases) {
    try {
      ok += infer_type(parse_term(text, g), g) == want;
    } catch (const Error&) {
    }
  }
  double secs = seconds_since(start);
  return {ok == 5 && secs < 1.0, fmt("%d/5 worked examples, %.3f s (limit 1 s)", ok, secs)};
}

Outcome generator_soundness() {
  fs::path dir = scratch("soundness");
  auto start = Clock::now();
  std::vector<std::string> args = kGenFlags;
  args.insert(args.end(), {"--out", dir.string()});
  if (int code = run_cli(args); code != 0) return {false, fmt("gen exited with %d", code)};
  double gen_secs = seconds_since(start);

  const TypingContext g = TypingContext::global();
  auto data = load_dataset(dir / "dataset.jsonl");
  std::size_t ok = 0;
  for (const auto& ex : data) {
    bool sound = infer_type(ex.term, g) == ex.target_type;
    bool bounded = term_depth(ex.term) <= 7 && type_depth(ex.target_type) <= 7;
    ok += sound && bounded;
  }
  double secs = seconds_since(start);
  bool pass = data.size() == 10000 && ok == data.size() && secs < 10.0;
  return {pass, fmt("%zu/%zu sound and within depth 7/7; gen %.2f s, total %.2f s (limit 10 s)", ok,
                    data.size(), gen_secs, secs)};
}

Outcome codec_round_trip() {
  const double budget = 10.0;
  auto start = Clock::now();
  const RuleTable table = build_rule_table(TypingContext::global());
  const auto width = static_cast<std::size_t>(table.id_count());
  auto round_trips = [&](const Type& t) {
    auto seq = encode_type_rules(t, table);
    return decode_greedy(ScoreMatrix::one_hot(seq, width), table) == t;
  };

  // Generated targets.
  fs::path dir = scratch("codec");
  std::vector<std::string> args = kGenFlags;
  args.insert(args.end(), {"--out", dir.string()});
  if (int code = run_cli(args); code != 0) return {false, fmt("gen exited with %d", code)};
  auto data = load_dataset(dir / "dataset.jsonl");
  std::size_t gen_ok = 0;
  for (const auto& ex : data) gen_ok += round_trips(ex.target_type);

  // Exhaustive enumeration, layer by layer, for as long as the budget lasts.
  // Depth <= 6 has 458,330 types; depth 7 adds about 2.1e11 and depth 8 about
  // 4.4e22, far beyond any time budget.
  std::vector<Type> upto = testing::all_types_up_to(6);
  std::size_t enum_ok = 0, enumerated = 0;
  for (const auto& t : upto) {
    ++enumerated;
    enum_ok += round_trips(t);
  }
  const std::size_t upto6 = enumerated, ok6 = enum_ok;
  bool out_of_time = false;
  // Depth exactly 7: arrows whose larger side has depth exactly 6.
  std::vector<Type> exactly6;
  for (const auto& t : upto)
    if (type_depth(t) == 6) exactly6.push_back(t);
  for (std::size_t i = 0; i < exactly6.size() && !out_of_time; ++i) {
    for (std::size_t j = 0; j < upto.size(); ++j) {
      if ((j & 1023) == 0 && seconds_since(start) > budget) {
        out_of_time = true;
        break;
      }
      ++enumerated;
      enum_ok += round_trips(Type::arrow(exactly6[i], upto[j]));
    }
  }
  double secs = seconds_since(start);
  const double total8 = testing::count_types_up_to(8);
  bool exhaustive = !out_of_time && static_cast<double>(enumerated) >= total8;
  bool pass = exhaustive && enum_ok == enumerated && gen_ok == data.size() && data.size() == 10000 &&
              secs < budget;
  return {pass,
          fmt("generated targets %zu/%zu; depth<=6 exhaustive %zu/%zu; depth<=8 enumerated %zu of "
              "%.3g types (%zu ok) before the %.0f s budget ran out; %.2f s",
              gen_ok, data.size(), ok6, upto6, enumerated, total8,
              enum_ok, budget, secs)};
}

Outcome decoder_totality() {
  auto start = Clock::now();
  const RuleTable table = build_rule_table(TypingContext::global());
  std::mt19937_64 gen(20240611);
  std::uniform_int_distribution<int> length(0, 32);
  std::uniform_int_distribution<int> id(0, table.id_count() - 1);
  std::size_t types = 0, errors = 0, crashes = 0;
  for (int i = 0; i < 100000; ++i) {
    std::vector<int> ids(static_cast<std::size_t>(length(gen)));
    for (int& v : ids) v = id(gen);
    try {
      Type t = decode_greedy(ScoreMatrix::one_hot(ids, static_cast<std::size_t>(table.id_count())), table);
      (t.is_error() ? errors : types) += 1;
    } catch (...) {
      ++crashes;
    }
  }
  double secs = seconds_since(start);
  bool pass = crashes == 0 && types + errors == 100000 && secs < 10.0;
  return {pass, fmt("100000 sequences: %zu types, %zu error types, %zu exceptions; %.2f s (limit 10 s)",
                    types, errors, crashes, secs)};
}

Outcome adafactor_factorization() {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t rows = dim(gen), cols = dim(gen);
    std::vector<double> a(rows), b(cols), sq(rows * cols);
    for (double& x : a) x = normal(gen);
    for (double& x : b) x = normal(gen);
    // G = a b^T, so G^2 (elementwise) = (a^2)(b^2)^T is rank one.
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        double g = a[i] * b[j];
        sq[i * cols + j] = g * g;
      }
    auto v = optim::reconstruct_second_moment(optim::row_means(sq, rows, cols),
                                              optim::col_means(sq, rows, cols));
    for (std::size_t k = 0; k < sq.size(); ++k)
      if (sq[k] > 0.0) worst = std::max(worst, std::abs(v[k] - sq[k]) / sq[k]);
  }
  return {worst <= 1e-12, fmt("1000 rank-1 matrices up to 64x64, max relative error %.3g (limit 1e-12)", worst)};
}

Outcome adam_first_step() {
  optim::AdamState s;
  std::vector<double> p{0.0}, g{1.0};
  double d = optim::adam_step(s, p, g, optim::Hyper{}, 1e-3)[0];
  double hand = -1e-3 / (1.0 + 1e-8);
  double err = std::abs(d - -9.99999990e-4);
  bool pass = err <= 1e-12 && std::abs(d - hand) <= 1e-12;
  return {pass, fmt("delta = %.12e, |delta - (-9.99999990e-4)| = %.3g (limit 1e-12)", d, err)};
}

Outcome schedules() {
  using namespace optim;
  LinearWarmup w{1e-4, 2000};
  double w1 = schedule_value(w, 1000, 78), w2 = schedule_value(w, 2000, 78),
         w3 = schedule_value(w, 5000, 78);
  bool warm_ok = w1 == 5e-5 && w2 == 1e-4 && w3 == 1e-4;

  // First integer step at which step^-0.5 becomes the smaller argument.
  VaswaniNoam noam;
  long cross = 1;
  while (cross / noam.knee < 1.0 / std::sqrt(static_cast<double>(cross))) ++cross;
  double at = schedule_value(noam, cross, 78);
  bool noam_ok = cross == 4000 && std::abs(at - 5.139e-4) <= 1e-7;

  long cadence = anneal_cadence(78, 0.999);
  bool anneal_ok = cadence == 78 && cadence == std::min(78L, 2000L);

  return {warm_ok && noam_ok && anneal_ok,
          fmt("warmup {%g, %g, %g}; noam crosses at step %ld with %.7e; anneal cadence %ld", w1, w2,
              w3, cross, at, cadence)};
}

Outcome gradient_check() {
  using namespace optim;
  double worst = 0.0;
  const char* names[] = {"bowl", "illcond", "rosenbrock"};
  std::string per;
  for (int o = 0; o < 3; ++o) {
    Objective obj = parse_objective(names[o]);
    double local = 0.0;
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
      auto x = objective_start(obj, seed);
      auto g = objective_grad(obj, x);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-5 * std::max(1.0, std::abs(x[i]));
        auto up = x, down = x;
        up[i] += h;
        down[i] -= h;
        double fd = (objective_loss(obj, up) - objective_loss(obj, down)) / (2.0 * h);
        num += (g[i] - fd) * (g[i] - fd);
        den = std::max(den, std::max(g[i] * g[i], fd * fd));
      }
      local = std::max(local, std::sqrt(num) / std::max(std::sqrt(den), 1e-300));
    }
    worst = std::max(worst, local);
    per += fmt("%s%s %.2g", per.empty() ? "" : ", ", names[o], local);
  }
  return {worst <= 1e-6, "100 points each, max relative error: " + per + " (limit 1e-6)"};
}

Outcome determinism() {
  fs::path a = scratch("det_1"), b = scratch("det_4"), c = scratch("det_1_again");
  auto gen_into = [](const fs::path& dir, const char* threads) {
    std::vector<std::string> args = kGenFlags;
    args.insert(args.end(), {"--threads", threads, "--out", dir.string()});
    return run_cli(args);
  };
  if (gen_into(a, "1") || gen_into(b, "4") || gen_into(c, "1")) return {false, "gen failed"};
  int same = 0, total = 0;
  for (const char* f :
       {"dataset.jsonl", "train.jsonl", "val.jsonl", "test.jsonl", "rules.tsv", "vocab.json", "manifest.json"}) {
    std::string ref = slurp(a / f);
    total += 2;
    same += slurp(b / f) == ref;
    same += slurp(c / f) == ref;
  }
  return {same == total, fmt("%d/%d file comparisons byte-identical (threads 1, 4, and 1 again)", same, total)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {"oracle_fidelity", oracle_fidelity},
    {"generator_soundness", generator_soundness},
    {"codec_round_trip", codec_round_trip},
    {"decoder_totality", decoder_totality},
    {"adafactor_factorization", adafactor_factorization},
    {"adam_first_step", adam_first_step},
    {"schedules", schedules},
    {"gradient_check", gradient_check},
    {"determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  for (const auto& w : wanted) {
    bool known = false;
    for (const auto& c : kCriteria) known |= w == c.name;
    if (!known) {
      std::fprintf(stderr, "unknown criterion '%s'\n", w.c_str());
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
