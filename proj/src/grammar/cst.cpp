#include <algorithm>
#include <deque>

#include "stlc/grammar.hpp"

namespace stlc {
namespace {

// Builds the tree in construction order, then relabels it breadth-first.
class CstBuilder {
 public:
  explicit CstBuilder(const RuleTable& table) : table_(table) {}

  int add_term(const Term& e) {
    switch (e.kind()) {
      case Term::Kind::Var:
        return variable(e.name());
      case Term::Kind::Abs: {
        int n = internal(table_.lambda_rule());
        int binder = variable(e.name());
        int annot = add_type(e.annotation());
        int body = add_term(e.body());
        attach(n, {leaf("lambda"), binder, leaf(":"), annot, leaf("."), body});
        return n;
      }
      case Term::Kind::App: {
        int n = internal(table_.app_rule());
        int f = add_term(e.fun());
        int a = add_term(e.arg());
        attach(n, {leaf("["), f, a, leaf("]")});
        return n;
      }
    }
    throw ContractError("unreachable term kind");
  }

  int add_type(const Type& t) {
    if (t.is_error()) throw ContractError("the error type has no syntax tree");
    if (t.is_base()) {
      int n = internal(table_.base_rule(t.name()));
      attach(n, {terminal_of(table_.base_rule(t.name()))});
      return n;
    }
    int n = internal(table_.arrow_rule());
    int l = add_type(t.left());
    int r = add_type(t.right());
    attach(n, {l, leaf("->"), r});
    return n;
  }

  Cst finish(int root) {
    std::vector<int> order;
    std::vector<int> relabel(nodes_.size(), -1);
    std::deque<int> queue{root};
    while (!queue.empty()) {
      int n = queue.front();
      queue.pop_front();
      relabel[n] = static_cast<int>(order.size());
      order.push_back(n);
      for (int c : nodes_[n].children) queue.push_back(c);
    }
    std::vector<CstNode> out;
    out.reserve(order.size());
    for (int old : order) {
      CstNode node = nodes_[old];
      for (int& c : node.children) c = relabel[c];
      node.parent = node.parent < 0 ? -1 : relabel[node.parent];
      node.depth = node.parent < 0 ? 1 : out[node.parent].depth + 1;
      out.push_back(std::move(node));
    }
    return Cst(std::move(out));
  }

 private:
  int internal(int rule) {
    nodes_.push_back(CstNode{table_.rule(rule).lhs, rule, -1, 1, {}});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int terminal_of(int rule) {
    nodes_.push_back(CstNode{table_.rule(rule).rhs.front(), kNoRule, -1, 1, {}});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int variable(const std::string& name) {
    int rule = table_.var_rule(name);
    int n = internal(rule);
    attach(n, {terminal_of(rule)});
    return n;
  }

  int leaf(std::string_view lexeme) {
    const auto& symbols = table_.symbols();
    auto it = std::find(symbols.begin(), symbols.end(), lexeme);
    if (it == symbols.end())
      throw VocabularyError("terminal '" + std::string(lexeme) + "' is not in the grammar");
    nodes_.push_back(CstNode{static_cast<int>(it - symbols.begin()), kNoRule, -1, 1, {}});
    return static_cast<int>(nodes_.size()) - 1;
  }

  void attach(int parent, std::initializer_list<int> children) {
    for (int c : children) {
      nodes_[c].parent = parent;
      nodes_[parent].children.push_back(c);
    }
  }

  const RuleTable& table_;
  std::vector<CstNode> nodes_;
};

}  // namespace

int Cst::height() const {
  int h = 0;
  for (const auto& n : nodes_) h = std::max(h, n.depth);
  return h;
}

Cst build_cst(const Term& e, const RuleTable& table) {
  CstBuilder b(table);
  int root = b.add_term(e);
  return b.finish(root);
}

Cst build_cst(const Type& t, const RuleTable& table) {
  CstBuilder b(table);
  int root = b.add_type(t);
  return b.finish(root);
}

std::vector<std::string> cst_frontier(const Cst& cst, const RuleTable& table) {
  std::vector<std::string> out;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    const CstNode& node = cst.node(static_cast<std::size_t>(n));
    if (node.rule == kNoRule) out.push_back(table.symbol(node.symbol));
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
      stack.push_back(*it);
  }
  return out;
}

RuleSequence encode_type_rules(const Type& t, const RuleTable& table) {
  if (t.is_error()) throw ContractError("cannot encode the error type");
  // The internal nodes of a type CST are exactly the type's own nodes, so a
  // BFS over the type visits them in CST order.
  RuleSequence out;
  std::deque<const Type*> queue{&t};
  while (!queue.empty()) {
    const Type* cur = queue.front();
    queue.pop_front();
    if (cur->is_arrow()) {
      out.push_back(table.arrow_rule());
      queue.push_back(&cur->left());
      queue.push_back(&cur->right());
    } else {
      out.push_back(table.base_rule(cur->name()));
    }
  }
  return out;
}

}  // namespace stlc
