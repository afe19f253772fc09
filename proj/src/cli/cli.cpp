#include "stlc/cli.hpp"

#include <filesystem>
#include <map>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stlc/dataset_io.hpp"
#include "stlc/optim.hpp"

namespace stlc::cli {

namespace fs = std::filesystem;

namespace {

// Thrown for bad flag values discovered after CLI11 parsing.
struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw Error("write to '" + path.string() + "' failed");
}

// Writes to `path`, or to `out` when path is empty.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty())
    out << content;
  else
    write_file(path, content);
}

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  fs::path p(path);
  if (fs::is_directory(p)) throw UsageError("--out '" + path + "' is a directory");
  fs::path parent = p.parent_path();
  if (!parent.empty() && !fs::is_directory(parent))
    throw UsageError("directory of --out '" + path + "' does not exist");
}

std::string jsonl(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::vector<std::string> lines_of(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_lines(in);
}

// --- gen ---

struct GenOptions {
  std::uint64_t seed = 0;
  std::size_t n = 1000;
  int max_type_depth = 7;
  int max_term_depth = 7;
  double p_branch = 0.5;
  std::string split = "0.8,0.1,0.1";
  std::string split_mode = "type";
  std::string out_dir = ".";
  int threads = 0;
};

GenConfig to_config(const GenOptions& o) {
  GenConfig cfg;
  cfg.seed = o.seed;
  cfg.n_examples = o.n;
  cfg.max_type_depth = o.max_type_depth;
  cfg.max_term_depth = o.max_term_depth;
  cfg.p_branch = o.p_branch;
  cfg.split_mode = o.split_mode == "term" ? SplitMode::TermDisjoint : SplitMode::TypeDisjoint;
  std::vector<double> ratios;
  std::stringstream ss(o.split);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      ratios.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("--split expects three comma-separated fractions");
    }
  }
  if (ratios.size() != 3) throw UsageError("--split expects three comma-separated fractions");
  std::copy(ratios.begin(), ratios.end(), cfg.split_ratios);
  try {
    cfg.validate();
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

int run_gen(const GenOptions& o, std::ostream& err) {
  GenConfig cfg = to_config(o);
  fs::path dir(o.out_dir);
  if (fs::exists(dir) && !fs::is_directory(dir))
    throw UsageError("--out '" + o.out_dir + "' is not a directory");
  fs::create_directories(dir);

  const TypingContext ctx = TypingContext::global();
  const RuleTable table = build_rule_table(ctx);
  const Vocab vocab(table);

  auto examples = gen_dataset(cfg, ctx, o.threads);
  Splits splits;
  if (!examples.empty()) splits = split_dataset(examples, cfg);

  auto to_lines = [](const std::vector<Example>& xs) {
    std::vector<std::string> lines;
    lines.reserve(xs.size());
    for (const auto& x : xs) lines.push_back(example_to_jsonl(x));
    return jsonl(lines);
  };

  const std::string rules = table.serialize();
  const std::string vocab_json = vocab.to_json();
  const std::pair<std::string, std::string> files[] = {
      {"dataset.jsonl", to_lines(examples)},
      {"train.jsonl", to_lines(splits.train)},
      {"val.jsonl", to_lines(splits.val)},
      {"test.jsonl", to_lines(splits.test)},
      {"rules.tsv", rules},
      {"vocab.json", vocab_json},
  };

  nlohmann::ordered_json manifest;
  manifest["schema"] = kSchemaVersion;
  manifest["config"] = nlohmann::ordered_json::parse(config_to_json(cfg));
  manifest["rules_hash"] = content_hash(rules);
  manifest["vocab_hash"] = content_hash(vocab_json);
  manifest["counts"] = {{"total", examples.size()},
                        {"train", splits.train.size()},
                        {"val", splits.val.size()},
                        {"test", splits.test.size()}};
  nlohmann::ordered_json hashes = nlohmann::ordered_json::object();
  for (const auto& [name, content] : files) {
    write_file(dir / name, content);
    hashes[name] = content_hash(content);
  }
  manifest["files"] = std::move(hashes);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  err << "gen: " << examples.size() << " examples (train " << splits.train.size() << ", val "
      << splits.val.size() << ", test " << splits.test.size() << ") -> " << dir.string() << "\n";
  return kOk;
}

// --- typecheck ---

int run_typecheck(const std::vector<std::string>& terms, const std::string& in_path,
                  std::ostream& out, std::ostream& err) {
  std::vector<std::string> inputs = terms;
  if (!in_path.empty()) {
    auto lines = lines_of(in_path);
    inputs.insert(inputs.end(), lines.begin(), lines.end());
  } else if (terms.empty()) {
    inputs = read_lines(std::cin);
  }
  const TypingContext ctx = TypingContext::global();
  int status = kOk;
  for (const auto& text : inputs) {
    try {
      out << print_type(infer_type(parse_term(text, ctx), ctx)) << "\n";
    } catch (const Error& e) {
      err << "typecheck: '" << text << "': " << e.what() << "\n";
      out << "<error>\n";
      status = kDataError;
    }
  }
  return status;
}

// --- encode ---

int run_encode(const std::string& in_path, const std::string& out_path,
               const std::string& oracle_path, int path_length, std::ostream& out,
               std::ostream& err) {
  check_output_path(out_path);
  check_output_path(oracle_path);
  const TypingContext ctx = TypingContext::global();
  const RuleTable table = build_rule_table(ctx);
  const Vocab vocab(table);
  std::vector<std::string> encoded;
  std::vector<std::string> oracle;
  for (const auto& line : lines_of(in_path)) {
    Example ex = example_from_jsonl(line, ctx);
    EncodedExample enc = encode_example(ex, table, vocab, path_length);
    encoded.push_back(encoded_to_jsonl(enc));
    if (!oracle_path.empty()) {
      Prediction p;
      p.id = enc.id;
      p.rows = ScoreMatrix::one_hot(enc.dec_rules_target, static_cast<std::size_t>(table.id_count()));
      oracle.push_back(prediction_to_jsonl(p));
    }
  }
  emit(out_path, jsonl(encoded), out);
  if (!oracle_path.empty()) write_file(oracle_path, jsonl(oracle));
  err << "encode: " << encoded.size() << " examples\n";
  return kOk;
}

// --- decode ---

int run_decode(const std::string& in_path, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  check_output_path(out_path);
  const RuleTable table = build_rule_table(TypingContext::global());
  std::vector<std::string> lines;
  std::size_t errors = 0;
  for (const auto& line : lines_of(in_path)) {
    Prediction p = prediction_from_jsonl(line);
    Type t = p.decode(table);
    nlohmann::ordered_json j;
    j["schema"] = kSchemaVersion;
    j["id"] = p.id;
    if (t.is_error()) {
      j["type"] = nullptr;
      ++errors;
    } else {
      j["type"] = print_type(t);
    }
    j["valid"] = !t.is_error();
    lines.push_back(j.dump());
  }
  emit(out_path, jsonl(lines), out);
  err << "decode: " << lines.size() << " predictions, " << errors << " decoded to the error type\n";
  return kOk;
}

// --- eval ---

int run_eval(const std::string& pred_path, const std::string& data_path,
             const std::string& out_path, std::ostream& out) {
  check_output_path(out_path);
  const TypingContext ctx = TypingContext::global();
  const RuleTable table = build_rule_table(ctx);

  std::map<std::size_t, Prediction> preds;
  for (const auto& line : lines_of(pred_path)) {
    Prediction p = prediction_from_jsonl(line);
    if (!preds.emplace(p.id, p).second)
      throw ContractError("duplicate prediction id " + std::to_string(p.id));
  }

  std::vector<Type> decoded, targets;
  std::size_t seq_hits = 0, error_types = 0;
  for (const auto& line : lines_of(data_path)) {
    Example ex = example_from_jsonl(line, ctx);
    auto it = preds.find(ex.id);
    if (it == preds.end()) throw ContractError("no prediction for example " + std::to_string(ex.id));
    Type t = it->second.decode(table);
    error_types += t.is_error();
    auto ids = it->second.ids();
    seq_hits += rule_sequence_match(ids, encode_type_rules(ex.target_type, table));
    decoded.push_back(std::move(t));
    targets.push_back(ex.target_type);
    preds.erase(it);
  }
  if (!preds.empty())
    throw ContractError("prediction id " + std::to_string(preds.begin()->first) +
                        " has no matching example");

  nlohmann::ordered_json report;
  report["schema"] = kSchemaVersion;
  report["n"] = targets.size();
  report["type_accuracy"] = batch_accuracy(decoded, targets);
  report["rule_exact_match"] =
      targets.empty() ? 0.0 : static_cast<double>(seq_hits) / static_cast<double>(targets.size());
  report["error_types"] = error_types;
  emit(out_path, report.dump() + "\n", out);
  return kOk;
}

// --- optsim ---

struct OptsimOptions {
  std::string optimizer = "adam";
  std::string schedule;
  double lr = 1e-3;
  long steps = 1000;
  std::uint64_t seed = 0;
  std::string objective = "bowl";
  long epoch_iters = 0;
  std::string defaults_path;
  std::string out_path;
};

int run_optsim(const OptsimOptions& o, std::ostream& out, std::ostream& err) {
  check_output_path(o.out_path);
  optim::Defaults defaults;
  if (!o.defaults_path.empty()) defaults = optim::parse_defaults(read_file(o.defaults_path));

  optim::SimConfig cfg;
  try {
    cfg.optimizer = optim::parse_optimizer(o.optimizer);
    cfg.objective = optim::parse_objective(o.objective);
    std::string schedule = o.schedule;
    if (schedule.empty()) schedule = cfg.optimizer == optim::OptimizerKind::Adafactor ? "anneal" : "const";
    cfg.schedule = optim::parse_schedule(schedule, o.lr);
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  if (auto* noam = std::get_if<optim::VaswaniNoam>(&cfg.schedule)) *noam = defaults.noam;
  if (auto* anneal = std::get_if<optim::AdafactorAnneal>(&cfg.schedule))
    anneal->beta2 = defaults.anneal_beta2;
  cfg.hyper = defaults.hyper;
  cfg.steps = o.steps;
  cfg.seed = o.seed;
  cfg.epoch_iters = o.epoch_iters > 0 ? o.epoch_iters : defaults.epoch_iters;
  cfg.divergence_loss = defaults.divergence_loss;

  auto traj = optim::simulate(cfg);
  emit(o.out_path, traj.csv(), out);
  if (traj.diverged) {
    err << "optsim: diverged at step " << traj.rows.back().step << "\n";
    return kDiverged;
  }
  err << "optsim: final loss "
      << (traj.rows.empty() ? optim::objective_loss(cfg.objective, optim::objective_start(cfg.objective, cfg.seed))
                            : traj.rows.back().loss)
      << "\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simply typed lambda calculus dataset and optimizer workbench", "stlc"};
  app.require_subcommand(1);

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen", "Generate a dataset, splits, rules, vocab and manifest");
  gen->add_option("--seed", gen_opts.seed, "Random seed");
  gen->add_option("--n", gen_opts.n, "Number of examples");
  gen->add_option("--max-type-depth", gen_opts.max_type_depth)->check(CLI::PositiveNumber);
  gen->add_option("--max-term-depth", gen_opts.max_term_depth)->check(CLI::PositiveNumber);
  gen->add_option("--p-branch", gen_opts.p_branch)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--split", gen_opts.split, "train,val,test fractions");
  gen->add_option("--split-mode", gen_opts.split_mode)->check(CLI::IsMember({"type", "term"}));
  gen->add_option("--out", gen_opts.out_dir, "Output directory");
  gen->add_option("--threads", gen_opts.threads, "Worker threads (0 = OpenMP default)");

  std::vector<std::string> tc_terms;
  std::string tc_in;
  auto* typecheck = app.add_subcommand("typecheck", "Print the inferred type of each term given as an argument, in --in, or on stdin");
  // Terms are taken from the leftover arguments so CLI11 does not read "[f x]" as a list.
  typecheck->allow_extras();
  typecheck->add_option("--in", tc_in, "File with one term per line")->check(CLI::ExistingFile);

  std::string enc_in, enc_out, enc_oracle;
  int path_length = kDefaultPathLength;
  auto* encode = app.add_subcommand("encode", "Encode a dataset for the model");
  encode->add_option("--in", enc_in, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  encode->add_option("--out", enc_out, "Encoded JSONL (default stdout)");
  encode->add_option("--oracle-predictions", enc_oracle,
                     "Also write one-hot predictions of the targets");
  encode->add_option("--path-length", path_length)->check(CLI::PositiveNumber);

  std::string dec_in, dec_out;
  auto* decode = app.add_subcommand("decode", "Greedy-decode predicted rule scores into types");
  decode->add_option("--in", dec_in, "Predictions JSONL")->required()->check(CLI::ExistingFile);
  decode->add_option("--out", dec_out, "Decoded JSONL (default stdout)");

  std::string ev_pred, ev_data, ev_out;
  auto* eval = app.add_subcommand("eval", "Score predictions against a dataset");
  eval->add_option("--pred", ev_pred, "Predictions JSONL")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", ev_data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", ev_out, "Report path (default stdout)");

  OptsimOptions sim;
  auto* optsim = app.add_subcommand("optsim", "Run an optimizer on an analytic objective");
  optsim->add_option("--optimizer", sim.optimizer)->check(CLI::IsMember({"adam", "radam", "adafactor"}));
  optsim->add_option("--schedule", sim.schedule, "const | warmup:K | noam | anneal[:N]");
  optsim->add_option("--lr", sim.lr);
  optsim->add_option("--steps", sim.steps)->check(CLI::NonNegativeNumber);
  optsim->add_option("--seed", sim.seed);
  optsim->add_option("--objective", sim.objective)
      ->check(CLI::IsMember({"bowl", "illcond", "rosenbrock"}));
  optsim->add_option("--epoch-iters", sim.epoch_iters, "Iterations per epoch for anneal");
  optsim->add_option("--defaults", sim.defaults_path, "key=value defaults file")
      ->check(CLI::ExistingFile);
  optsim->add_option("--out", sim.out_path, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) return run_gen(gen_opts, err);
    if (*typecheck) {
      tc_terms = typecheck->remaining();
      for (const auto& t : tc_terms)
        if (t.size() > 1 && t.front() == '-') throw UsageError("unknown flag '" + t + "'");
      return run_typecheck(tc_terms, tc_in, out, err);
    }
    if (*encode) return run_encode(enc_in, enc_out, enc_oracle, path_length, out, err);
    if (*decode) return run_decode(dec_in, dec_out, out, err);
    if (*eval) return run_eval(ev_pred, ev_data, ev_out, out);
    if (*optsim) return run_optsim(sim, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"stlc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace stlc::cli
