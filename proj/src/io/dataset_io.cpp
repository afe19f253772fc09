#include "stlc/dataset_io.hpp"

#include <cstdio>
#include <istream>

#include <json.hpp>

namespace stlc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parse_object(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ContractError(std::string("malformed JSON line: ") + e.what());
  }
  if (!j.is_object()) throw ContractError("JSONL record is not an object");
  if (j.contains("schema") && j.at("schema") != kSchemaVersion)
    throw ContractError("unsupported schema version " + j.at("schema").dump());
  return j;
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ContractError(std::string("record is missing \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ContractError(std::string("bad \"") + key + "\": " + e.what());
  }
}

std::vector<int> bools_to_ints(const std::vector<bool>& v) {
  return std::vector<int>(v.begin(), v.end());
}

}  // namespace

std::string example_to_jsonl(const Example& ex) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["id"] = ex.id;
  j["term"] = print_term(ex.term);
  j["type"] = print_type(ex.target_type);
  j["term_depth"] = ex.term_depth;
  j["type_depth"] = ex.type_depth;
  return j.dump();
}

Example example_from_jsonl(const std::string& line, const TypingContext& ctx) {
  json j = parse_object(line);
  Term term = parse_term(field<std::string>(j, "term"), ctx);
  Type type = parse_type(field<std::string>(j, "type"), ctx);
  Example ex{field<std::size_t>(j, "id"), term, type, term_depth(term), type_depth(type)};
  if (j.contains("term_depth") && field<int>(j, "term_depth") != ex.term_depth)
    throw ContractError("example " + std::to_string(ex.id) + ": recorded term_depth is wrong");
  if (j.contains("type_depth") && field<int>(j, "type_depth") != ex.type_depth)
    throw ContractError("example " + std::to_string(ex.id) + ": recorded type_depth is wrong");
  return ex;
}

std::string encoded_to_jsonl(const EncodedExample& ex) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["id"] = ex.id;
  j["enc_tokens"] = ex.enc_tokens;
  j["enc_mask"] = bools_to_ints(ex.enc_mask);
  j["paths"] = ex.paths;
  j["parent_symbol"] = ex.parent_symbol;
  j["parent_rule"] = ex.parent_rule;
  j["dec_rules_in"] = ex.dec_rules_in;
  j["dec_rules_target"] = ex.dec_rules_target;
  j["dec_mask"] = bools_to_ints(ex.dec_mask);
  return j.dump();
}

std::vector<int> Prediction::ids() const {
  if (!rows) return argmax;
  std::vector<int> out;
  out.reserve(rows->rows());
  for (std::size_t i = 0; i < rows->rows(); ++i) out.push_back(stlc::argmax(rows->row(i)));
  return out;
}

Type Prediction::decode(const RuleTable& table) const {
  if (rows) return decode_greedy(*rows, table);
  return decode_rule_ids(argmax, table);
}

Prediction prediction_from_jsonl(const std::string& line) {
  json j = parse_object(line);
  Prediction p;
  p.id = field<std::size_t>(j, "id");
  if (j.contains("rows"))
    p.rows = ScoreMatrix::from_rows(field<std::vector<std::vector<double>>>(j, "rows"));
  else if (j.contains("argmax"))
    p.argmax = field<std::vector<int>>(j, "argmax");
  else
    throw ContractError("prediction " + std::to_string(p.id) + " has neither \"rows\" nor \"argmax\"");
  return p;
}

std::string prediction_to_jsonl(const Prediction& p) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["id"] = p.id;
  if (p.rows) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < p.rows->rows(); ++i) {
      auto r = p.rows->row(i);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["rows"] = std::move(rows);
  } else {
    j["argmax"] = p.argmax;
  }
  return j.dump();
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::move(line));
  }
  return out;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::string split_mode_name(SplitMode mode) {
  return mode == SplitMode::TypeDisjoint ? "type" : "term";
}

std::string config_to_json(const GenConfig& cfg) {
  ordered_json j;
  j["seed"] = cfg.seed;
  j["max_type_depth"] = cfg.max_type_depth;
  j["max_term_depth"] = cfg.max_term_depth;
  j["p_branch"] = cfg.p_branch;
  j["n_examples"] = cfg.n_examples;
  j["split_ratios"] = {cfg.split_ratios[0], cfg.split_ratios[1], cfg.split_ratios[2]};
  j["split_mode"] = split_mode_name(cfg.split_mode);
  return j.dump();
}

}  // namespace stlc
