#pragma once

// Terms, types and typing contexts of the simply typed lambda calculus.
//
// Type and Term are immutable trees with shared structure; copying one is a
// reference-count bump. Every free function here is pure.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stlc/errors.hpp"

namespace stlc {

class Type {
 public:
  enum class Kind { Base, Arrow, Error };

  static Type base(std::string name);
  static Type arrow(Type left, Type right);
  // Sentinel produced only by the greedy decoder.
  static Type error();

  Kind kind() const;
  bool is_base() const { return kind() == Kind::Base; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_error() const { return kind() == Kind::Error; }

  // Only valid for Base.
  const std::string& name() const;
  // Only valid for Arrow.
  const Type& left() const;
  const Type& right() const;

  // Structural equality. Error equals Error here; see exact_match() for the
  // metric where it does not.
  friend bool operator==(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class Term {
 public:
  enum class Kind { Var, Abs, App };

  static Term var(std::string name);
  static Term abs(std::string binder, Type annotation, Term body);
  static Term app(Term fun, Term arg);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_abs() const { return kind() == Kind::Abs; }
  bool is_app() const { return kind() == Kind::App; }

  // Var name or Abs binder.
  const std::string& name() const;
  const Type& annotation() const;
  const Term& body() const;
  const Term& fun() const;
  const Term& arg() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Ordered variable -> type bindings over a declared base-type alphabet.
// Later bindings shadow earlier ones with the same name.
class TypingContext {
 public:
  struct Binding {
    std::string name;
    Type type;
  };

  TypingContext(std::vector<std::string> base_types,
                std::vector<Binding> bindings);

  // {x : T}
  static TypingContext global();

  const std::vector<std::string>& base_types() const { return base_types_; }
  const std::vector<Binding>& bindings() const { return bindings_; }
  bool has_base_type(std::string_view name) const;

  // Innermost binding for `name`, or nullptr.
  const Type* find(std::string_view name) const;
  // Throws TypeError for an absent name.
  const Type& lookup(std::string_view name) const;

  TypingContext extended(std::string name, Type type) const;

  // Names whose visible (innermost) binding has exactly type `t`, innermost
  // first.
  std::vector<std::string> visible_of_type(const Type& t) const;

 private:
  std::vector<std::string> base_types_;
  std::vector<Binding> bindings_;
};

// Concrete syntax:
//   term := "lambda" ident ":" type "." term | "[" term term "]" | ident
//   type := type "->" type | ident
// Parentheses group and never reach the tree. "λ" and "→" are accepted as
// spellings of "lambda" and "->". Arrows associate to the right.
Term parse_term(std::string_view text, const TypingContext& ctx);
Type parse_type(std::string_view text, const TypingContext& ctx);

// Canonical single-spaced forms: "lambda x : T . x", "[f x]", "(T -> T) -> T".
std::string print_term(const Term& t);
std::string print_type(const Type& t);

Type infer_type(const Term& e, const TypingContext& ctx);

int term_depth(const Term& e);
int type_depth(const Type& t);
int arrow_count(const Type& t);
int binder_count(const Term& e);

inline constexpr int kMaxBoundNames = 32;

// "bv0" .. "bv31".
std::string bound_name(int index);

// Renames every binder to bound_name(i), i being the binder's 0-based BFS
// rank among abstraction nodes; occurrences follow their binding site. Free
// variables are untouched. Throws VocabularyError past kMaxBoundNames binders.
Term bfs_rename(const Term& e);

}  // namespace stlc
