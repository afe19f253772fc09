#include "stlc/tokenizer.hpp"

#include <json.hpp>

namespace stlc {

Vocab::Vocab(const RuleTable& table) {
  symbols_ = {"pad", "sos", "eos"};
  for (const auto& s : table.symbols()) {
    if (s == "pad" || s == "sos" || s == "eos")
      throw VocabularyError("grammar symbol '" + s + "' collides with a special token");
    symbols_.push_back(s);
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) index_.emplace(symbols_[i], static_cast<int>(i));
}

int Vocab::index(const std::string& symbol) const {
  auto it = index_.find(symbol);
  if (it == index_.end()) throw VocabularyError("symbol '" + symbol + "' is not in the vocabulary");
  return it->second;
}

std::string Vocab::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  nlohmann::ordered_json syms = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < symbols_.size(); ++i) syms[symbols_[i]] = i;
  j["symbols"] = std::move(syms);
  j["pad"] = kPad;
  j["sos"] = kSos;
  j["eos"] = kEos;
  j["no_parent"] = no_parent();
  return j.dump(2) + "\n";
}

TokenSequence encode_term_sequence(const Cst& cst, const Vocab& vocab) {
  if (cst.size() == 0) throw ContractError("empty CST");
  TokenSequence out;
  out.tokens.reserve(cst.size() + 2);
  out.tokens.push_back(Vocab::kSos);
  for (const auto& n : cst.nodes()) out.tokens.push_back(vocab.of_table_symbol(n.symbol));
  out.tokens.push_back(Vocab::kEos);
  out.mask.assign(out.tokens.size(), false);
  return out;
}

PathMatrix extract_paths(const Cst& cst, const Vocab& vocab, int length) {
  if (length < 1) throw ContractError("path length must be >= 1");
  const auto width = static_cast<std::size_t>(length);
  PathMatrix out;
  out.reserve(cst.size() + 2);
  out.emplace_back(width, Vocab::kPad);
  for (std::size_t i = 0; i < cst.size(); ++i) {
    const CstNode& n = cst.node(i);
    if (n.depth > length)
      throw VocabularyError("CST path of length " + std::to_string(n.depth) +
                            " exceeds the limit " + std::to_string(length));
    std::vector<int> row(width, Vocab::kPad);
    int at = static_cast<int>(i);
    for (int k = n.depth - 1; k >= 0; --k) {
      const CstNode& cur = cst.node(static_cast<std::size_t>(at));
      row[static_cast<std::size_t>(k)] = vocab.of_table_symbol(cur.symbol);
      at = cur.parent;
    }
    out.push_back(std::move(row));
  }
  out.emplace_back(width, Vocab::kPad);
  return out;
}

ParentIds extract_parent_ids(const Cst& cst, const Vocab& vocab, const RuleTable& table) {
  ParentIds out;
  out.symbol.push_back(vocab.no_parent());
  out.rule.push_back(table.no_parent_rule());
  for (const auto& n : cst.nodes()) {
    if (n.parent < 0) {
      out.symbol.push_back(vocab.no_parent());
      out.rule.push_back(table.no_parent_rule());
    } else {
      const CstNode& p = cst.node(static_cast<std::size_t>(n.parent));
      out.symbol.push_back(vocab.of_table_symbol(p.symbol));
      out.rule.push_back(p.rule);
    }
  }
  out.symbol.push_back(vocab.no_parent());
  out.rule.push_back(table.no_parent_rule());
  return out;
}

DecoderIo build_decoder_io(const RuleSequence& rules) {
  if (rules.empty()) throw ContractError("empty rule sequence");
  DecoderIo io;
  io.rules_in.reserve(rules.size() + 1);
  io.rules_in.push_back(RuleTable::kSos);
  io.rules_in.insert(io.rules_in.end(), rules.begin(), rules.end());
  io.rules_target = rules;
  io.rules_target.push_back(RuleTable::kEos);
  return io;
}

EncodedExample encode_example(const Example& ex, const RuleTable& table, const Vocab& vocab,
                              int path_length) {
  Cst cst = build_cst(ex.term, table);
  EncodedExample out;
  out.id = ex.id;
  auto seq = encode_term_sequence(cst, vocab);
  out.enc_tokens = std::move(seq.tokens);
  out.enc_mask = std::move(seq.mask);
  out.paths = extract_paths(cst, vocab, path_length);
  auto parents = extract_parent_ids(cst, vocab, table);
  out.parent_symbol = std::move(parents.symbol);
  out.parent_rule = std::move(parents.rule);
  auto io = build_decoder_io(encode_type_rules(ex.target_type, table));
  out.dec_rules_in = std::move(io.rules_in);
  out.dec_rules_target = std::move(io.rules_target);
  out.dec_mask.assign(out.dec_rules_in.size(), false);
  return out;
}

namespace {

template <typename T>
std::vector<T> padded(const std::vector<T>& v, std::size_t len, T fill) {
  std::vector<T> out = v;
  out.resize(len, fill);
  return out;
}

}  // namespace

Batch pad_batch(const std::vector<EncodedExample>& examples, const Vocab& vocab,
                const RuleTable& table) {
  if (examples.empty()) throw ContractError("pad_batch: empty batch");
  Batch b;
  b.size = examples.size();
  for (const auto& e : examples) {
    b.enc_len = std::max(b.enc_len, e.enc_tokens.size());
    b.dec_len = std::max(b.dec_len, e.dec_rules_in.size());
  }
  const std::size_t path_width = examples.front().paths.empty() ? 0 : examples.front().paths.front().size();
  for (const auto& e : examples) {
    b.enc_tokens.push_back(padded(e.enc_tokens, b.enc_len, Vocab::kPad));
    b.enc_mask.push_back(padded(e.enc_mask, b.enc_len, true));
    PathMatrix p = e.paths;
    p.resize(b.enc_len, std::vector<int>(path_width, Vocab::kPad));
    b.paths.push_back(std::move(p));
    b.parent_symbol.push_back(padded(e.parent_symbol, b.enc_len, vocab.no_parent()));
    b.parent_rule.push_back(padded(e.parent_rule, b.enc_len, table.no_parent_rule()));
    b.dec_rules_in.push_back(padded(e.dec_rules_in, b.dec_len, RuleTable::kPad));
    b.dec_rules_target.push_back(padded(e.dec_rules_target, b.dec_len, RuleTable::kPad));
    b.dec_mask.push_back(padded(e.dec_mask, b.dec_len, true));
  }
  return b;
}

}  // namespace stlc
