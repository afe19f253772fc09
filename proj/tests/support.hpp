#pragma once

// Independent reference implementations used as test oracles. None of these
// call into the code they check.

#include <deque>
#include <string>
#include <vector>

#include "stlc/core.hpp"
#include "stlc/generator.hpp"

namespace stlc::testing {

// Nameless form: bound occurrences become #k (distance to the binder), free
// variables keep their names, binder names are dropped.
inline std::string de_bruijn(const Term& e, std::vector<std::string>& scope) {
  switch (e.kind()) {
    case Term::Kind::Var:
      for (std::size_t k = 0; k < scope.size(); ++k)
        if (scope[scope.size() - 1 - k] == e.name()) return "#" + std::to_string(k);
      return e.name();
    case Term::Kind::Abs: {
      scope.push_back(e.name());
      std::string body = de_bruijn(e.body(), scope);
      scope.pop_back();
      return "(L " + print_type(e.annotation()) + " " + body + ")";
    }
    case Term::Kind::App: {
      std::string f = de_bruijn(e.fun(), scope);
      return "(A " + f + " " + de_bruijn(e.arg(), scope) + ")";
    }
  }
  return {};
}

inline std::string de_bruijn(const Term& e) {
  std::vector<std::string> scope;
  return de_bruijn(e, scope);
}

// Binder names in level order, using an explicit queue.
inline std::vector<std::string> binders_bfs(const Term& e) {
  std::vector<std::string> out;
  std::deque<Term> queue{e};
  while (!queue.empty()) {
    Term t = queue.front();
    queue.pop_front();
    if (t.is_abs()) {
      out.push_back(t.name());
      queue.push_back(t.body());
    } else if (t.is_app()) {
      queue.push_back(t.fun());
      queue.push_back(t.arg());
    }
  }
  return out;
}

// Every type over {T} of depth <= d, by depth-layered products.
inline std::vector<Type> all_types_up_to(int d) {
  std::vector<Type> out{Type::base("T")};
  for (int depth = 2; depth <= d; ++depth) {
    std::vector<Type> next{Type::base("T")};
    for (const auto& l : out)
      for (const auto& r : out) next.push_back(Type::arrow(l, r));
    out = std::move(next);
  }
  return out;
}

// Number of types over one base type with depth <= d: N(1) = 1,
// N(d) = 1 + N(d-1)^2. Returned as a double since N(8) overflows 64 bits.
inline double count_types_up_to(int d) {
  double n = 1.0;
  for (int depth = 2; depth <= d; ++depth) n = 1.0 + n * n;
  return n;
}

// Type rules in BFS order, reading the type tree with an explicit queue:
// arrow -> `arrow_id`, base -> `base_id`.
inline std::vector<int> type_rules_bfs(const Type& t, int arrow_id, int base_id) {
  std::vector<int> out;
  std::deque<Type> queue{t};
  while (!queue.empty()) {
    Type u = queue.front();
    queue.pop_front();
    if (u.is_arrow()) {
      out.push_back(arrow_id);
      queue.push_back(u.left());
      queue.push_back(u.right());
    } else {
      out.push_back(base_id);
    }
  }
  return out;
}

inline GenConfig small_config(std::uint64_t seed, std::size_t n, int type_depth = 7,
                              int term_depth = 7) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.n_examples = n;
  cfg.max_type_depth = type_depth;
  cfg.max_term_depth = term_depth;
  return cfg;
}

}  // namespace stlc::testing
