#pragma once

// Model-facing index sequences derived from CSTs.

#include <string>
#include <unordered_map>
#include <vector>

#include "stlc/generator.hpp"
#include "stlc/grammar.hpp"

namespace stlc {

inline constexpr int kDefaultPathLength = 13;

// Symbol <-> index bijection: pad, sos, eos, then every grammar symbol in
// RuleTable order. Index size() is reserved as "no parent".
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kSos = 1;
  static constexpr int kEos = 2;

  explicit Vocab(const RuleTable& table);

  int size() const { return static_cast<int>(symbols_.size()); }
  int no_parent() const { return size(); }
  int index(const std::string& symbol) const;
  const std::string& symbol(int index) const { return symbols_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  // Vocab index of a RuleTable symbol index.
  int of_table_symbol(int table_symbol) const { return kEos + 1 + table_symbol; }

  // {"schema":1,"symbols":{symbol:index,...},"pad":0,"sos":1,"eos":2,"no_parent":N}
  std::string to_json() const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

struct TokenSequence {
  std::vector<int> tokens;
  std::vector<bool> mask;  // true exactly at pad positions
};

struct ParentIds {
  std::vector<int> symbol;
  std::vector<int> rule;
};

using PathMatrix = std::vector<std::vector<int>>;

// Every per-position field of the encoder side is aligned with the framed
// sequence [sos, BFS nodes..., eos].
struct EncodedExample {
  std::size_t id = 0;
  std::vector<int> enc_tokens;
  std::vector<bool> enc_mask;
  PathMatrix paths;
  std::vector<int> parent_symbol;
  std::vector<int> parent_rule;
  std::vector<int> dec_rules_in;
  std::vector<int> dec_rules_target;
  std::vector<bool> dec_mask;
};

// [sos, symbol of each node in BFS order..., eos].
TokenSequence encode_term_sequence(const Cst& cst, const Vocab& vocab);

// One row per framed position: the root-to-node symbol path, right-padded to
// `length`. sos/eos rows are all pad. VocabularyError when a path is longer
// than `length`.
PathMatrix extract_paths(const Cst& cst, const Vocab& vocab, int length = kDefaultPathLength);

// Parent symbol (vocab index) and parent producing rule per framed position;
// the root and the sos/eos positions get vocab.no_parent() /
// table.no_parent_rule().
ParentIds extract_parent_ids(const Cst& cst, const Vocab& vocab, const RuleTable& table);

struct DecoderIo {
  std::vector<int> rules_in;      // [sos] ++ rules
  std::vector<int> rules_target;  // rules ++ [eos]
};

DecoderIo build_decoder_io(const RuleSequence& rules);

EncodedExample encode_example(const Example& ex, const RuleTable& table, const Vocab& vocab,
                              int path_length = kDefaultPathLength);

struct Batch {
  std::size_t size = 0;
  std::size_t enc_len = 0;
  std::size_t dec_len = 0;
  std::vector<std::vector<int>> enc_tokens;
  std::vector<std::vector<bool>> enc_mask;
  std::vector<PathMatrix> paths;
  std::vector<std::vector<int>> parent_symbol;
  std::vector<std::vector<int>> parent_rule;
  std::vector<std::vector<int>> dec_rules_in;
  std::vector<std::vector<int>> dec_rules_target;
  std::vector<std::vector<bool>> dec_mask;
};

// Pads encoder fields to the longest encoder sequence and decoder fields to
// the longest decoder sequence. ContractError on an empty batch.
Batch pad_batch(const std::vector<EncodedExample>& examples, const Vocab& vocab,
                const RuleTable& table);

}  // namespace stlc
