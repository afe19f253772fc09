#pragma once

// JSONL schemas shared by the CLI and the training harness. Every record
// carries "schema": 1.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stlc/generator.hpp"
#include "stlc/grammar.hpp"
#include "stlc/tokenizer.hpp"

namespace stlc {

inline constexpr int kSchemaVersion = 1;

// {"schema":1,"id":..,"term":..,"type":..,"term_depth":..,"type_depth":..}
std::string example_to_jsonl(const Example& ex);
// Re-parses term and type; ContractError if the recorded depths disagree.
Example example_from_jsonl(const std::string& line, const TypingContext& ctx);

std::string encoded_to_jsonl(const EncodedExample& ex);

// One line of a predictions file: either per-step scores or argmax ids.
struct Prediction {
  std::size_t id = 0;
  std::optional<ScoreMatrix> rows;
  std::vector<int> argmax;

  // Argmax per row when scores are present, else the ids as given.
  std::vector<int> ids() const;
  Type decode(const RuleTable& table) const;
};

Prediction prediction_from_jsonl(const std::string& line);
std::string prediction_to_jsonl(const Prediction& p);

// Non-empty lines of a JSONL stream.
std::vector<std::string> read_lines(std::istream& in);

// 64-bit FNV-1a, hex-encoded with an "fnv1a64:" prefix.
std::string content_hash(const std::string& bytes);

std::string split_mode_name(SplitMode mode);
std::string config_to_json(const GenConfig& cfg);

}  // namespace stlc
