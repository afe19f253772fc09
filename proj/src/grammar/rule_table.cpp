#include <algorithm>
#include <set>
#include <sstream>

#include "stlc/grammar.hpp"

namespace stlc {

const Rule& RuleTable::rule(int id) const {
  if (!is_content_rule(id))
    throw ContractError("rule id " + std::to_string(id) + " is not a content rule");
  return rules_[static_cast<std::size_t>(id - kFirstContentId)];
}

int RuleTable::var_rule(std::string_view name) const {
  auto it = var_rules_.find(std::string(name));
  if (it == var_rules_.end())
    throw VocabularyError("variable '" + std::string(name) + "' is not in the vocabulary");
  return it->second;
}

int RuleTable::base_rule(std::string_view name) const {
  auto it = base_rules_.find(std::string(name));
  if (it == base_rules_.end())
    throw VocabularyError("base type '" + std::string(name) + "' is not in the vocabulary");
  return it->second;
}

int RuleTable::intern(std::string_view symbol, bool nonterminal) {
  auto [it, inserted] =
      symbol_index_.emplace(std::string(symbol), static_cast<int>(symbols_.size()));
  if (inserted) {
    symbols_.emplace_back(symbol);
    nonterminal_.push_back(nonterminal);
  } else if (nonterminal_[it->second] != nonterminal) {
    throw VocabularyError("symbol '" + std::string(symbol) +
                          "' is used as both terminal and nonterminal");
  }
  return it->second;
}

int RuleTable::add_rule(std::string_view lhs,
                        const std::vector<std::pair<std::string, bool>>& rhs) {
  Rule r{id_count(), intern(lhs, true), {}};
  for (const auto& [sym, nonterminal] : rhs) r.rhs.push_back(intern(sym, nonterminal));
  rules_.push_back(std::move(r));
  return rules_.back().id;
}

RuleTable build_rule_table(const TypingContext& ctx, int n_bound_names) {
  if (n_bound_names < 0 || n_bound_names > kMaxBoundNames)
    throw ContractError("n_bound_names must be in [0, " + std::to_string(kMaxBoundNames) + "]");

  const std::string term(RuleTable::kTermSymbol);
  const std::string type(RuleTable::kTypeSymbol);
  std::set<std::string> reserved{term, type, "lambda", "->", ":", ".", "[", "]"};
  for (int i = 0; i < kMaxBoundNames; ++i) reserved.insert(bound_name(i));

  std::vector<std::string> variables;
  for (const auto& b : ctx.bindings()) {
    if (reserved.count(b.name))
      throw VocabularyError("context variable '" + b.name + "' collides with a reserved symbol");
    if (std::find(variables.begin(), variables.end(), b.name) == variables.end())
      variables.push_back(b.name);
  }
  for (const auto& t : ctx.base_types())
    if (reserved.count(t))
      throw VocabularyError("base type '" + t + "' collides with a reserved symbol");

  RuleTable table;
  table.term_symbol_ = table.intern(term, true);
  table.lambda_rule_ = table.add_rule(
      term, {{"lambda", false}, {term, true}, {":", false}, {type, true}, {".", false}, {term, true}});
  table.type_symbol_ = table.intern(type, true);
  table.app_rule_ = table.add_rule(term, {{"[", false}, {term, true}, {term, true}, {"]", false}});
  for (const auto& v : variables) table.var_rules_[v] = table.add_rule(term, {{v, false}});
  for (int i = 0; i < n_bound_names; ++i) {
    std::string name = bound_name(i);
    table.var_rules_[name] = table.add_rule(term, {{name, false}});
  }
  table.arrow_rule_ = table.add_rule(type, {{type, true}, {"->", false}, {type, true}});
  for (const auto& t : ctx.base_types()) table.base_rules_[t] = table.add_rule(type, {{t, false}});
  return table;
}

std::string RuleTable::serialize() const {
  std::ostringstream out;
  out << "# pad=" << kPad << " sos=" << kSos << " eos=" << kEos
      << " no_parent=" << no_parent_rule() << " rules=" << rules_.size() << '\n';
  for (const Rule& r : rules_) {
    out << r.id << '\t' << symbols_[r.lhs] << '\t';
    for (std::size_t i = 0; i < r.rhs.size(); ++i) {
      if (i) out << ' ';
      int s = r.rhs[i];
      if (nonterminal_[s])
        out << symbols_[s];
      else
        out << '"' << symbols_[s] << '"';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace stlc
