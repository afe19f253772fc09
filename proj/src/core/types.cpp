#include <algorithm>

#include "stlc/core.hpp"

namespace stlc {

struct Type::Node {
  Kind kind;
  std::string name;
  std::optional<Type> left;
  std::optional<Type> right;
};

Type::Kind Type::kind() const { return node_->kind; }

Type Type::base(std::string name) {
  return Type(std::make_shared<const Node>(
      Node{Kind::Base, std::move(name), std::nullopt, std::nullopt}));
}

Type Type::arrow(Type left, Type right) {
  if (left.is_error() || right.is_error())
    throw ContractError("error type cannot appear inside an arrow");
  return Type(std::make_shared<const Node>(
      Node{Kind::Arrow, {}, std::move(left), std::move(right)}));
}

Type Type::error() {
  static const Type instance(std::make_shared<const Node>(
      Node{Kind::Error, {}, std::nullopt, std::nullopt}));
  return instance;
}

const std::string& Type::name() const {
  if (!is_base()) throw ContractError("name() on a non-base type");
  return node_->name;
}

const Type& Type::left() const {
  if (!is_arrow()) throw ContractError("left() on a non-arrow type");
  return *node_->left;
}

const Type& Type::right() const {
  if (!is_arrow()) throw ContractError("right() on a non-arrow type");
  return *node_->right;
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Type::Kind::Base:
      return a.node_->name == b.node_->name;
    case Type::Kind::Arrow:
      return a.left() == b.left() && a.right() == b.right();
    case Type::Kind::Error:
      return true;
  }
  return false;
}

std::string print_type(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Base:
      return t.name();
    case Type::Kind::Error:
      return "<error>";
    case Type::Kind::Arrow: {
      std::string left = print_type(t.left());
      if (t.left().is_arrow()) left = "(" + left + ")";
      return left + " -> " + print_type(t.right());
    }
  }
  return {};
}

int type_depth(const Type& t) {
  if (t.is_arrow()) return 1 + std::max(type_depth(t.left()), type_depth(t.right()));
  return 1;
}

int arrow_count(const Type& t) {
  if (t.is_arrow()) return 1 + arrow_count(t.left()) + arrow_count(t.right());
  return 0;
}

// --- TypingContext ---

TypingContext::TypingContext(std::vector<std::string> base_types,
                             std::vector<Binding> bindings)
    : base_types_(std::move(base_types)), bindings_(std::move(bindings)) {}

TypingContext TypingContext::global() {
  return TypingContext({"T"}, {{"x", Type::base("T")}});
}

bool TypingContext::has_base_type(std::string_view name) const {
  return std::find(base_types_.begin(), base_types_.end(), name) !=
         base_types_.end();
}

const Type* TypingContext::find(std::string_view name) const {
  for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
    if (it->name == name) return &it->type;
  return nullptr;
}

const Type& TypingContext::lookup(std::string_view name) const {
  if (const Type* t = find(name)) return *t;
  throw TypeError("unbound variable '" + std::string(name) + "'");
}

TypingContext TypingContext::extended(std::string name, Type type) const {
  TypingContext out = *this;
  out.bindings_.push_back({std::move(name), std::move(type)});
  return out;
}

std::vector<std::string> TypingContext::visible_of_type(const Type& t) const {
  std::vector<std::string> seen;
  std::vector<std::string> out;
  for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it) {
    if (std::find(seen.begin(), seen.end(), it->name) != seen.end()) continue;
    seen.push_back(it->name);
    if (it->type == t) out.push_back(it->name);
  }
  return out;
}

}  // namespace stlc
