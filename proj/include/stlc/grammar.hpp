#pragma once

// Preprocessed grammar, concrete syntax trees, and the type <-> rule-sequence
// codec used as the decoder target.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stlc/core.hpp"

namespace stlc {

inline constexpr int kNoRule = -1;

struct Rule {
  int id;
  int lhs;               // symbol index
  std::vector<int> rhs;  // symbol indices
};

// Grammar with the identifier regexes replaced by the closed vocabulary:
//
//   term : "lambda" term ":" type "." term
//        | "[" term term "]"
//        | <each context variable> | bv0 | ... | bv{n-1}
//   type : type "->" type
//        | <each base type>
//
// Rule ids count up from kFirstContentId in the order above; ids below it are
// the framing specials.
class RuleTable {
 public:
  static constexpr int kPad = 0;
  static constexpr int kSos = 1;
  static constexpr int kEos = 2;
  static constexpr int kFirstContentId = 3;

  static constexpr std::string_view kTermSymbol = "term";
  static constexpr std::string_view kTypeSymbol = "type";

  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(int id) const;
  bool is_content_rule(int id) const {
    return id >= kFirstContentId && id < id_count();
  }
  // Total id space, specials included. Also the reserved "no parent" rule id.
  int id_count() const { return kFirstContentId + static_cast<int>(rules_.size()); }
  int no_parent_rule() const { return id_count(); }

  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& symbol(int index) const { return symbols_.at(index); }
  bool is_nonterminal(int index) const { return nonterminal_.at(index); }
  int term_symbol() const { return term_symbol_; }
  int type_symbol() const { return type_symbol_; }

  int lambda_rule() const { return lambda_rule_; }
  int app_rule() const { return app_rule_; }
  int arrow_rule() const { return arrow_rule_; }
  // VocabularyError for names outside the table.
  int var_rule(std::string_view name) const;
  int base_rule(std::string_view name) const;

  // Header line followed by `<id>\t<lhs>\t<rhs>`, terminals double-quoted.
  std::string serialize() const;

 private:
  friend RuleTable build_rule_table(const TypingContext&, int);

  int intern(std::string_view symbol, bool nonterminal);
  int add_rule(std::string_view lhs, const std::vector<std::pair<std::string, bool>>& rhs);

  std::vector<std::string> symbols_;
  std::vector<bool> nonterminal_;
  std::unordered_map<std::string, int> symbol_index_;
  std::vector<Rule> rules_;
  std::unordered_map<std::string, int> var_rules_;
  std::unordered_map<std::string, int> base_rules_;
  int term_symbol_ = -1, type_symbol_ = -1;
  int lambda_rule_ = -1, app_rule_ = -1, arrow_rule_ = -1;
};

// Throws VocabularyError if a context name collides with a grammar keyword, a
// nonterminal, or a reserved bound name.
RuleTable build_rule_table(const TypingContext& ctx, int n_bound_names = kMaxBoundNames);

struct CstNode {
  int symbol;            // RuleTable symbol index
  int rule = kNoRule;    // producing rule; kNoRule for terminals
  int parent = -1;
  int depth = 1;         // nodes on the root path, this one included
  std::vector<int> children;
};

// Nodes are stored in BFS order, so a node's position is its BFS index and
// every parent precedes its children.
class Cst {
 public:
  explicit Cst(std::vector<CstNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<CstNode>& nodes() const { return nodes_; }
  const CstNode& node(std::size_t bfs_index) const { return nodes_.at(bfs_index); }
  std::size_t size() const { return nodes_.size(); }
  bool is_terminal(std::size_t bfs_index) const { return node(bfs_index).rule == kNoRule; }
  int height() const;

 private:
  std::vector<CstNode> nodes_;
};

Cst build_cst(const Term& e, const RuleTable& table);
Cst build_cst(const Type& t, const RuleTable& table);

// Terminal lexemes in left-to-right order; joined with spaces this is the
// printed form without parentheses.
std::vector<std::string> cst_frontier(const Cst& cst, const RuleTable& table);

using RuleSequence = std::vector<int>;

// Producing rules of the type CST's internal nodes, BFS order.
RuleSequence encode_type_rules(const Type& t, const RuleTable& table);

// Dense per-step scores over the rule id space.
class ScoreMatrix {
 public:
  ScoreMatrix(std::size_t rows, std::size_t width)
      : data_(rows * width, 0.0), rows_(rows), width_(width) {}
  // ContractError on ragged rows.
  static ScoreMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static ScoreMatrix one_hot(std::span<const int> ids, std::size_t width);

  std::size_t rows() const { return rows_; }
  std::size_t width() const { return width_; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * width_, width_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * width_, width_};
  }

 private:
  std::vector<double> data_;
  std::size_t rows_;
  std::size_t width_;
};

// Index of the largest score; ties go to the lowest index.
int argmax(std::span<const double> scores);

// Expands ids in BFS slot order. pad is skipped, eos stops decoding, and any
// id that cannot be applied yields Type::error().
Type decode_rule_ids(std::span<const int> ids, const RuleTable& table);

// Greedy synthesis: argmax per row, then decode_rule_ids. An empty matrix
// decodes to the error type; a width other than table.id_count() or a
// non-finite score is a ContractError.
Type decode_greedy(const ScoreMatrix& scores, const RuleTable& table);

std::vector<Type> decode_batch(const std::vector<ScoreMatrix>& batch, const RuleTable& table);
// Single-threaded reference for decode_batch.
std::vector<Type> decode_batch_serial(const std::vector<ScoreMatrix>& batch,
                                      const RuleTable& table);

// Structural equality where the error type matches nothing, itself included.
bool exact_match(const Type& pred, const Type& target);
double batch_accuracy(const std::vector<Type>& preds, const std::vector<Type>& targets);

// Teacher-forced check: predicted ids equal `target ++ [eos]` position by
// position over that length.
bool rule_sequence_match(std::span<const int> predicted, std::span<const int> target);

}  // namespace stlc
