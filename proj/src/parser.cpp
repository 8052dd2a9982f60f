#include "cflab/parser.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "cflab/errors.hpp"

namespace cflab {

namespace {

enum class Tok {
  Ident,
  If,
  Then,
  Else,
  True,
  False,
  Not,
  Null,
  Head,
  Tail,
  Choose,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Equals,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

Tok keyword(const std::string& word) {
  if (word == "if") return Tok::If;
  if (word == "then") return Tok::Then;
  if (word == "else") return Tok::Else;
  if (word == "True") return Tok::True;
  if (word == "False") return Tok::False;
  if (word == "not") return Tok::Not;
  if (word == "null") return Tok::Null;
  if (word == "head") return Tok::Head;
  if (word == "tail") return Tok::Tail;
  if (word == "choose") return Tok::Choose;
  return Tok::Ident;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (; k > 0 && i < text.size(); --k, ++i) {
      if (text[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos start = pos;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      out.push_back({keyword(word), word, start});
      advance(j - i);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case '=': kind = Tok::Equals; break;
      default: throw SyntaxError(start, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), start});
    advance(1);
  }
  out.push_back({Tok::End, "", pos});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {
    for (const auto& t : toks_) {
      if (t.kind == Tok::Equals) {
        if (t.pos.line >= header_lines_.size()) header_lines_.resize(t.pos.line + 1, false);
        header_lines_[t.pos.line] = true;
      }
    }
  }

  std::vector<Definition> program() {
    std::vector<Definition> defs;
    while (raw().kind != Tok::End) defs.push_back(definition());
    return defs;
  }

 private:
  const Token& raw() const { return toks_[pos_]; }

  // Tokens on a later line that carries an '=' belong to the next definition.
  const Token& peek() const {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End && t.pos.line != body_line_ && t.pos.line < header_lines_.size() &&
        header_lines_[t.pos.line]) {
      return end_marker(t);
    }
    return t;
  }

  const Token& end_marker(const Token& at) const {
    boundary_ = {Tok::End, "", at.pos};
    return boundary_;
  }

  Token take() {
    Token t = peek();
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    std::string found = t.kind == Tok::End ? "end of definition" : "'" + t.text + "'";
    throw SyntaxError(t.pos, what + ", found " + found);
  }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    return take();
  }

  Definition definition() {
    const Token& name = raw();
    if (name.kind != Tok::Ident) fail(name, "expected a function name");
    std::size_t line = name.pos.line;
    Definition d;
    d.name = name.text;
    ++pos_;
    while (raw().kind == Tok::Ident && raw().pos.line == line) {
      d.params.push_back(raw().text);
      ++pos_;
    }
    if (raw().kind != Tok::Equals || raw().pos.line != line) {
      fail(raw(), "expected parameters then '=' on the line of '" + d.name + "'");
    }
    ++pos_;
    body_line_ = line;
    d.body = expr();
    if (peek().kind != Tok::End) fail(peek(), "unexpected token after body of '" + d.name + "'");
    body_line_ = 0;
    return d;
  }

  ExprPtr expr() {
    if (peek().kind == Tok::If) {
      take();
      ExprPtr c = expr();
      expect(Tok::Then, "'then'");
      ExprPtr a = expr();
      expect(Tok::Else, "'else'");
      ExprPtr b = expr();
      return ex::if_(std::move(c), std::move(a), std::move(b));
    }
    return application();
  }

  static bool starts_atom(Tok k) {
    return k == Tok::True || k == Tok::False || k == Tok::LBracket || k == Tok::Ident ||
           k == Tok::LParen;
  }

  ExprPtr application() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: take(); return ex::not_(atom());
      case Tok::Null: take(); return ex::null(atom());
      case Tok::Head: take(); return ex::head(atom());
      case Tok::Tail: take(); return ex::tail(atom());
      case Tok::Choose: {
        take();
        ExprPtr l = atom();
        ExprPtr r = atom();
        return ex::choose(std::move(l), std::move(r));
      }
      case Tok::Ident: {
        Token name = take();
        std::vector<ExprPtr> args;
        while (starts_atom(peek().kind)) args.push_back(atom());
        if (args.empty()) return ex::var(name.text);
        return ex::call(name.text, std::move(args));
      }
      default: return atom();
    }
  }

  ExprPtr atom() {
    Token t = take();
    switch (t.kind) {
      case Tok::True: return ex::t();
      case Tok::False: return ex::f();
      case Tok::LBracket: expect(Tok::RBracket, "']'"); return ex::nil();
      case Tok::Ident: return ex::var(t.text);
      case Tok::LParen: {
        ExprPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default: fail(t, "expected an expression");
    }
  }

  std::vector<Token> toks_;
  std::vector<bool> header_lines_;
  std::size_t pos_ = 0;
  std::size_t body_line_ = 0;
  mutable Token boundary_{Tok::End, "", {}};
};

}  // namespace

Program parse_program(std::string_view text, ProgramOptions options) {
  Parser parser(lex(text));
  return Program::validate(parser.program(), options);
}

BitString parse_input(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string_view s = text.substr(b, e - b);
  if (s.empty() || s.front() != '[') {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '0' && s[i] != '1') {
        throw SyntaxError({1, b + i + 1}, std::string("not a bit: '") + s[i] + "'");
      }
    }
    return BitString::from_compact(s);
  }
  BitString out;
  bool want_bit = true;
  bool closed = false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    char c = s[i];
    SourcePos at{1, b + i + 1};
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (closed) throw SyntaxError(at, "text after ']'");
    if (c == ']') {
      if (want_bit && !out.empty()) throw SyntaxError(at, "expected a bit before ']'");
      closed = true;
    } else if (c == '0' || c == '1') {
      if (!want_bit) throw SyntaxError(at, "expected ',' between bits");
      out.push_back(c == '1');
      want_bit = false;
    } else if (c == ',') {
      if (want_bit) throw SyntaxError(at, "expected a bit");
      want_bit = true;
    } else {
      throw SyntaxError(at, std::string("not a bit: '") + c + "'");
    }
  }
  if (!closed) throw SyntaxError({1, e + 1}, "missing ']'");
  return out;
}

}  // namespace cflab
