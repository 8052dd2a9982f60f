#include "cflab/printer.hpp"

namespace cflab {

namespace {

bool atomic(const Expr& e) {
  if (const auto* c = e.as<Expr::Call>()) return c->args.empty();
  return e.is<Expr::True>() || e.is<Expr::False>() || e.is<Expr::Nil>() || e.is<Expr::Var>();
}

void print(const Expr& e, bool as_atom, std::string& out);

void print_atom(const Expr& e, std::string& out) { print(e, true, out); }

void print(const Expr& e, bool as_atom, std::string& out) {
  bool parens = as_atom && !atomic(e);
  if (parens) out += '(';
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::True>) {
          out += "True";
        } else if constexpr (std::is_same_v<T, Expr::False>) {
          out += "False";
        } else if constexpr (std::is_same_v<T, Expr::Nil>) {
          out += "[]";
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          out += x.name;
        } else if constexpr (std::is_same_v<T, Expr::Base>) {
          out += to_string(x.op);
          out += ' ';
          print_atom(*x.arg, out);
        } else if constexpr (std::is_same_v<T, Expr::If>) {
          // Nested ifs in test and then-position are bracketed for the reader.
          out += "if ";
          print(*x.cond, x.cond->template is<Expr::If>(), out);
          out += " then ";
          print(*x.then_branch, x.then_branch->template is<Expr::If>(), out);
          out += " else ";
          print(*x.else_branch, false, out);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          out += x.fname;
          for (const auto& a : x.args) {
            out += ' ';
            print_atom(*a, out);
          }
        } else if constexpr (std::is_same_v<T, Expr::Choose>) {
          out += "choose ";
          print_atom(*x.left, out);
          out += ' ';
          print_atom(*x.right, out);
        }
      },
      e.node);
  if (parens) out += ')';
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::string out;
  print(e, false, out);
  return out;
}

std::string pretty_print(const Definition& d) {
  std::string out = d.name;
  for (const auto& p : d.params) {
    out += ' ';
    out += p;
  }
  out += " = ";
  print(*d.body, false, out);
  return out;
}

std::string pretty_print(const Program& p) {
  std::string out;
  for (const auto& d : p.definitions()) {
    out += pretty_print(d);
    out += '\n';
  }
  return out;
}

}  // namespace cflab
