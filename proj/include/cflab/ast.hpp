#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cflab {

enum class BaseOp { Not, Null, Head, Tail };

std::string_view to_string(BaseOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression tree of the cons-free language. Immutable once built; subtrees
/// are shared freely.
///
/// `Var::slot` and `Call::callee` are filled in by Program::validate and are
/// ignored by structural equality.
struct Expr {
  struct True {};
  struct False {};
  struct Nil {};
  struct Var {
    std::string name;
    int slot = -1;
  };
  struct Base {
    BaseOp op;
    ExprPtr arg;
  };
  struct If {
    ExprPtr cond;
    ExprPtr then_branch;
    ExprPtr else_branch;
  };
  struct Call {
    std::string fname;
    std::vector<ExprPtr> args;
    int callee = -1;
  };
  /// Nondeterministic binary choice; only admitted in NCF programs.
  struct Choose {
    ExprPtr left;
    ExprPtr right;
  };

  using Node = std::variant<True, False, Nil, Var, Base, If, Call, Choose>;
  Node node;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

bool operator==(const Expr& a, const Expr& b);

namespace ex {
ExprPtr t();
ExprPtr f();
ExprPtr nil();
ExprPtr boolean(bool b);
ExprPtr var(std::string name);
ExprPtr base(BaseOp op, ExprPtr arg);
ExprPtr not_(ExprPtr arg);
ExprPtr null(ExprPtr arg);
ExprPtr head(ExprPtr arg);
ExprPtr tail(ExprPtr arg);
ExprPtr if_(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch);
ExprPtr call(std::string fname, std::vector<ExprPtr> args = {});
ExprPtr choose(ExprPtr left, ExprPtr right);
/// Short-circuit conjunction / disjunction spelled with `if`.
ExprPtr and_(ExprPtr a, ExprPtr b);
ExprPtr or_(ExprPtr a, ExprPtr b);
ExprPtr all_of(std::vector<ExprPtr> conjuncts);
ExprPtr any_of(std::vector<ExprPtr> disjuncts);
}  // namespace ex

/// Number of expression nodes.
std::size_t expr_size(const Expr& e);
bool contains_choose(const Expr& e);

struct Definition {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;

  std::size_t arity() const { return params.size(); }
  bool operator==(const Definition& other) const;
};

struct ProgramOptions {
  /// Admit `choose` (the NCF extension).
  bool allow_choose = false;
};

/// A validated program. The first definition is the entry function.
class Program {
 public:
  /// Checks every program invariant and resolves variable slots and callee
  /// indices. Throws ValidationError.
  static Program validate(std::vector<Definition> definitions,
                          ProgramOptions options = {});

  const std::vector<Definition>& definitions() const { return defs_; }
  const Definition& definition(std::size_t i) const { return defs_[i]; }
  const Definition& entry() const { return defs_.front(); }
  std::size_t size() const { return defs_.size(); }
  std::optional<std::size_t> find(std::string_view name) const;

  bool allows_choose() const { return options_.allow_choose; }
  bool has_choose() const { return has_choose_; }
  std::size_t max_arity() const;
  /// Largest body size; bounds the nodes one body evaluation can visit.
  std::size_t max_body_size() const;
  std::size_t total_size() const;

  bool operator==(const Program& other) const { return defs_ == other.defs_; }

 private:
  Program() = default;
  std::vector<Definition> defs_;
  ProgramOptions options_;
  bool has_choose_ = false;
};

}  // namespace cflab
