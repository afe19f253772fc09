#include "stlc/core.hpp"

namespace stlc {
namespace {

struct Inferrer {
  const TypingContext& global;
  std::vector<std::pair<const std::string*, Type>> scope;

  const Type& lookup(const std::string& name) const {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (*it->first == name) return it->second;
    return global.lookup(name);
  }

  Type infer(const Term& e) {
    switch (e.kind()) {
      case Term::Kind::Var:
        return lookup(e.name());
      case Term::Kind::Abs: {
        scope.emplace_back(&e.name(), e.annotation());
        Type body = infer(e.body());
        scope.pop_back();
        return Type::arrow(e.annotation(), std::move(body));
      }
      case Term::Kind::App: {
        Type f = infer(e.fun());
        Type a = infer(e.arg());
        if (!f.is_arrow())
          throw TypeError("cannot apply '" + print_term(e.fun()) + "' of type " +
                          print_type(f));
        if (!(f.left() == a))
          throw TypeError("argument '" + print_term(e.arg()) + "' has type " +
                          print_type(a) + ", expected " + print_type(f.left()));
        return f.right();
      }
    }
    throw ContractError("unreachable term kind");
  }
};

}  // namespace

Type infer_type(const Term& e, const TypingContext& ctx) {
  return Inferrer{ctx, {}}.infer(e);
}

}  // namespace stlc
