#include <algorithm>

#include "stlc/core.hpp"

namespace stlc {

struct Term::Node {
  Kind kind;
  std::string name;
  std::optional<Type> annotation;
  std::optional<Term> first;   // Abs body or App fun
  std::optional<Term> second;  // App arg
};

Term::Kind Term::kind() const { return node_->kind; }

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Var, std::move(name), std::nullopt, std::nullopt, std::nullopt}));
}

Term Term::abs(std::string binder, Type annotation, Term body) {
  if (annotation.is_error())
    throw ContractError("error type cannot annotate a binder");
  return Term(std::make_shared<const Node>(Node{Kind::Abs, std::move(binder),
                                                std::move(annotation),
                                                std::move(body), std::nullopt}));
}

Term Term::app(Term fun, Term arg) {
  return Term(std::make_shared<const Node>(
      Node{Kind::App, {}, std::nullopt, std::move(fun), std::move(arg)}));
}

const std::string& Term::name() const {
  if (is_app()) throw ContractError("name() on an application");
  return node_->name;
}

const Type& Term::annotation() const {
  if (!is_abs()) throw ContractError("annotation() on a non-abstraction");
  return *node_->annotation;
}

const Term& Term::body() const {
  if (!is_abs()) throw ContractError("body() on a non-abstraction");
  return *node_->first;
}

const Term& Term::fun() const {
  if (!is_app()) throw ContractError("fun() on a non-application");
  return *node_->first;
}

const Term& Term::arg() const {
  if (!is_app()) throw ContractError("arg() on a non-application");
  return *node_->second;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::Var:
      return a.name() == b.name();
    case Term::Kind::Abs:
      return a.name() == b.name() && a.annotation() == b.annotation() &&
             a.body() == b.body();
    case Term::Kind::App:
      return a.fun() == b.fun() && a.arg() == b.arg();
  }
  return false;
}

std::string print_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name();
    case Term::Kind::Abs:
      return "lambda " + t.name() + " : " + print_type(t.annotation()) + " . " +
             print_term(t.body());
    case Term::Kind::App:
      return "[" + print_term(t.fun()) + " " + print_term(t.arg()) + "]";
  }
  return {};
}

int term_depth(const Term& e) {
  switch (e.kind()) {
    case Term::Kind::Var:
      return 1;
    case Term::Kind::Abs:
      return 1 + term_depth(e.body());
    case Term::Kind::App:
      return 1 + std::max(term_depth(e.fun()), term_depth(e.arg()));
  }
  return 1;
}

int binder_count(const Term& e) {
  switch (e.kind()) {
    case Term::Kind::Var:
      return 0;
    case Term::Kind::Abs:
      return 1 + binder_count(e.body());
    case Term::Kind::App:
      return binder_count(e.fun()) + binder_count(e.arg());
  }
  return 0;
}

std::string bound_name(int index) { return "bv" + std::to_string(index); }

namespace {

void count_binders_per_level(const Term& e, std::size_t level,
                             std::vector<int>& counts) {
  if (counts.size() <= level) counts.resize(level + 1, 0);
  if (e.is_abs()) {
    ++counts[level];
    count_binders_per_level(e.body(), level + 1, counts);
  } else if (e.is_app()) {
    count_binders_per_level(e.fun(), level + 1, counts);
    count_binders_per_level(e.arg(), level + 1, counts);
  }
}

// Pre-order DFS meets the nodes of any one level left to right, so a binder's
// BFS rank is (binders on shallower levels) + (binders already seen on its
// own level).
struct Renamer {
  std::vector<int> next_rank;  // per level
  std::vector<std::pair<std::string, std::string>> scope;  // old -> new

  Term run(const Term& e, std::size_t level) {
    switch (e.kind()) {
      case Term::Kind::Var:
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == e.name()) return Term::var(it->second);
        return e;
      case Term::Kind::Abs: {
        std::string fresh = bound_name(next_rank[level]++);
        scope.emplace_back(e.name(), fresh);
        Term body = run(e.body(), level + 1);
        scope.pop_back();
        return Term::abs(std::move(fresh), e.annotation(), std::move(body));
      }
      case Term::Kind::App: {
        Term f = run(e.fun(), level + 1);
        Term a = run(e.arg(), level + 1);
        return Term::app(std::move(f), std::move(a));
      }
    }
    return e;
  }
};

}  // namespace

Term bfs_rename(const Term& e) {
  std::vector<int> counts;
  count_binders_per_level(e, 0, counts);
  int total = 0;
  std::vector<int> offsets(counts.size());
  for (std::size_t level = 0; level < counts.size(); ++level) {
    offsets[level] = total;
    total += counts[level];
  }
  if (total > kMaxBoundNames)
    throw VocabularyError("term has " + std::to_string(total) +
                          " binders; at most " +
                          std::to_string(kMaxBoundNames) + " are allowed");
  return Renamer{std::move(offsets), {}}.run(e, 0);
}

}  // namespace stlc
