#include <cctype>

#include "stlc/core.hpp"

namespace stlc {
namespace {

enum class Tok { Lambda, Colon, Dot, LBracket, RBracket, Arrow, LParen, RParen, Ident, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts_with = [&](std::string_view s) { return src.substr(i, s.size()) == s; };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t at = i;
    if (starts_with("->")) {
      out.push_back({Tok::Arrow, "->", at});
      i += 2;
    } else if (starts_with("→")) {  // →
      out.push_back({Tok::Arrow, "->", at});
      i += 3;
    } else if (starts_with("λ")) {  // λ
      out.push_back({Tok::Lambda, "lambda", at});
      i += 2;
    } else if (c == ':' || c == '.' || c == '[' || c == ']' || c == '(' || c == ')') {
      static constexpr std::pair<char, Tok> kPunct[] = {
          {':', Tok::Colon},    {'.', Tok::Dot},    {'[', Tok::LBracket},
          {']', Tok::RBracket}, {'(', Tok::LParen}, {')', Tok::RParen}};
      for (auto [ch, kind] : kPunct)
        if (ch == c) out.push_back({kind, std::string(1, c), at});
      ++i;
    } else if (is_ident_char(c)) {
      while (i < src.size() && is_ident_char(src[i])) ++i;
      std::string word(src.substr(at, i - at));
      out.push_back({word == "lambda" ? Tok::Lambda : Tok::Ident, word, at});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", at);
    }
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, const TypingContext& ctx) : toks_(lex(src)), ctx_(ctx) {}

  Term whole_term() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

  Type whole_type() {
    Type t = type();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }

  const Token& expect(Tok kind, const char* what) {
    const Token& t = peek();
    if (t.kind != kind)
      throw ParseError(std::string("expected ") + what + ", found '" +
                           (t.kind == Tok::End ? std::string("<end>") : t.text) + "'",
                       t.pos);
    ++pos_;
    return t;
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Lambda: {
        ++pos_;
        std::string binder = expect(Tok::Ident, "binder name").text;
        expect(Tok::Colon, "':'");
        Type annot = type();
        expect(Tok::Dot, "'.'");
        Term body = term();
        return Term::abs(std::move(binder), std::move(annot), std::move(body));
      }
      case Tok::LBracket: {
        ++pos_;
        Term f = term();
        Term a = term();
        expect(Tok::RBracket, "']'");
        return Term::app(std::move(f), std::move(a));
      }
      case Tok::LParen: {
        ++pos_;
        Term inner = term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        ++pos_;
        return Term::var(t.text);
      default:
        throw ParseError("expected a term, found '" +
                             (t.kind == Tok::End ? std::string("<end>") : t.text) + "'",
                         t.pos);
    }
  }

  Type type() {
    Type left = type_atom();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return Type::arrow(std::move(left), type());
    }
    return left;
  }

  Type type_atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      ++pos_;
      Type inner = type();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      if (!ctx_.has_base_type(t.text))
        throw ParseError("unknown base type '" + t.text + "'", t.pos);
      ++pos_;
      return Type::base(t.text);
    }
    throw ParseError("expected a type, found '" +
                         (t.kind == Tok::End ? std::string("<end>") : t.text) + "'",
                     t.pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const TypingContext& ctx_;
};

}  // namespace

Term parse_term(std::string_view text, const TypingContext& ctx) {
  return Parser(text, ctx).whole_term();
}

Type parse_type(std::string_view text, const TypingContext& ctx) {
  return Parser(text, ctx).whole_type();
}

}  // namespace stlc
