#include "cflab/ast.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "cflab/errors.hpp"

namespace cflab {

std::string_view to_string(BaseOp op) {
  switch (op) {
    case BaseOp::Not: return "not";
    case BaseOp::Null: return "null";
    case BaseOp::Head: return "head";
    case BaseOp::Tail: return "tail";
  }
  return "?";
}

namespace {

bool same(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Expr::Var>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Expr::Base>) {
          return x.op == y.op && same(x.arg, y.arg);
        } else if constexpr (std::is_same_v<T, Expr::If>) {
          return same(x.cond, y.cond) && same(x.then_branch, y.then_branch) &&
                 same(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          if (x.fname != y.fname || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            if (!same(x.args[i], y.args[i])) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Expr::Choose>) {
          return same(x.left, y.left) && same(x.right, y.right);
        } else {
          return true;
        }
      },
      a.node);
}

namespace ex {

namespace {
ExprPtr make(Expr::Node node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }
}  // namespace

ExprPtr t() {
  static const ExprPtr e = make(Expr::True{});
  return e;
}
ExprPtr f() {
  static const ExprPtr e = make(Expr::False{});
  return e;
}
ExprPtr nil() {
  static const ExprPtr e = make(Expr::Nil{});
  return e;
}
ExprPtr boolean(bool b) { return b ? t() : f(); }
ExprPtr var(std::string name) { return make(Expr::Var{std::move(name)}); }
ExprPtr base(BaseOp op, ExprPtr arg) { return make(Expr::Base{op, std::move(arg)}); }
ExprPtr not_(ExprPtr arg) { return base(BaseOp::Not, std::move(arg)); }
ExprPtr null(ExprPtr arg) { return base(BaseOp::Null, std::move(arg)); }
ExprPtr head(ExprPtr arg) { return base(BaseOp::Head, std::move(arg)); }
ExprPtr tail(ExprPtr arg) { return base(BaseOp::Tail, std::move(arg)); }
ExprPtr if_(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch) {
  return make(Expr::If{std::move(cond), std::move(then_branch), std::move(else_branch)});
}
ExprPtr call(std::string fname, std::vector<ExprPtr> args) {
  return make(Expr::Call{std::move(fname), std::move(args)});
}
ExprPtr choose(ExprPtr left, ExprPtr right) {
  return make(Expr::Choose{std::move(left), std::move(right)});
}
ExprPtr and_(ExprPtr a, ExprPtr b) { return if_(std::move(a), std::move(b), f()); }
ExprPtr or_(ExprPtr a, ExprPtr b) { return if_(std::move(a), t(), std::move(b)); }

ExprPtr all_of(std::vector<ExprPtr> conjuncts) {
  if (conjuncts.empty()) return t();
  ExprPtr acc = conjuncts.back();
  for (std::size_t i = conjuncts.size() - 1; i-- > 0;) acc = and_(conjuncts[i], acc);
  return acc;
}

ExprPtr any_of(std::vector<ExprPtr> disjuncts) {
  if (disjuncts.empty()) return f();
  ExprPtr acc = disjuncts.back();
  for (std::size_t i = disjuncts.size() - 1; i-- > 0;) acc = or_(disjuncts[i], acc);
  return acc;
}

}  // namespace ex

std::size_t expr_size(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Base>) {
          return 1 + expr_size(*x.arg);
        } else if constexpr (std::is_same_v<T, Expr::If>) {
          return 1 + expr_size(*x.cond) + expr_size(*x.then_branch) + expr_size(*x.else_branch);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          std::size_t n = 1;
          for (const auto& a : x.args) n += expr_size(*a);
          return n;
        } else if constexpr (std::is_same_v<T, Expr::Choose>) {
          return 1 + expr_size(*x.left) + expr_size(*x.right);
        } else {
          return 1;
        }
      },
      e.node);
}

bool contains_choose(const Expr& e) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Base>) {
          return contains_choose(*x.arg);
        } else if constexpr (std::is_same_v<T, Expr::If>) {
          return contains_choose(*x.cond) || contains_choose(*x.then_branch) ||
                 contains_choose(*x.else_branch);
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          return std::any_of(x.args.begin(), x.args.end(),
                             [](const ExprPtr& a) { return contains_choose(*a); });
        } else if constexpr (std::is_same_v<T, Expr::Choose>) {
          return true;
        } else {
          return false;
        }
      },
      e.node);
}

bool Definition::operator==(const Definition& other) const {
  return name == other.name && params == other.params && same(body, other.body);
}

namespace {

class Resolver {
 public:
  Resolver(const std::vector<Definition>& defs, const ProgramOptions& options)
      : defs_(defs), options_(options) {
    for (std::size_t i = 0; i < defs.size(); ++i) index_.emplace(defs[i].name, i);
  }

  ExprPtr resolve(const Definition& d, const ExprPtr& e) {
    current_ = &d;
    return visit(e);
  }

 private:
  [[noreturn]] void fail(ValidationKind kind, const std::string& what) const {
    throw ValidationError(kind, "in '" + current_->name + "': " + what);
  }

  int slot_of(const std::string& name) const {
    const auto& ps = current_->params;
    auto it = std::find(ps.begin(), ps.end(), name);
    return it == ps.end() ? -1 : static_cast<int>(it - ps.begin());
  }

  ExprPtr resolved_call(const std::string& fname, std::vector<ExprPtr> args) {
    auto it = index_.find(fname);
    if (it == index_.end()) fail(ValidationKind::UnknownFunction, "no definition of '" + fname + "'");
    const Definition& callee = defs_[it->second];
    if (callee.arity() != args.size()) {
      fail(ValidationKind::ArityMismatch, "'" + fname + "' takes " +
                                              std::to_string(callee.arity()) + " argument(s), given " +
                                              std::to_string(args.size()));
    }
    Expr::Call c{fname, std::move(args), static_cast<int>(it->second)};
    return std::make_shared<const Expr>(Expr{std::move(c)});
  }

  ExprPtr visit(const ExprPtr& e) {
    return std::visit(
        [&](const auto& x) -> ExprPtr {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Var>) {
            int slot = slot_of(x.name);
            if (slot >= 0) return std::make_shared<const Expr>(Expr{Expr::Var{x.name, slot}});
            // A bare name that is not a parameter may be a nullary call.
            auto it = index_.find(x.name);
            if (it == index_.end()) fail(ValidationKind::UnboundVar, "'" + x.name + "' is not a parameter");
            return resolved_call(x.name, {});
          } else if constexpr (std::is_same_v<T, Expr::Base>) {
            return ex::base(x.op, visit(x.arg));
          } else if constexpr (std::is_same_v<T, Expr::If>) {
            return ex::if_(visit(x.cond), visit(x.then_branch), visit(x.else_branch));
          } else if constexpr (std::is_same_v<T, Expr::Call>) {
            std::vector<ExprPtr> args;
            args.reserve(x.args.size());
            for (const auto& a : x.args) args.push_back(visit(a));
            return resolved_call(x.fname, std::move(args));
          } else if constexpr (std::is_same_v<T, Expr::Choose>) {
            if (!options_.allow_choose) {
              fail(ValidationKind::ChooseNotEnabled, "'choose' requires a nondeterministic program");
            }
            return ex::choose(visit(x.left), visit(x.right));
          } else {
            return e;
          }
        },
        e->node);
  }

  const std::vector<Definition>& defs_;
  const ProgramOptions& options_;
  std::unordered_map<std::string, std::size_t> index_;
  const Definition* current_ = nullptr;
};

}  // namespace

Program Program::validate(std::vector<Definition> definitions, ProgramOptions options) {
  if (definitions.empty()) throw ValidationError(ValidationKind::EmptyProgram, "no definitions");
  std::unordered_set<std::string> names;
  for (const auto& d : definitions) {
    if (!names.insert(d.name).second) {
      throw ValidationError(ValidationKind::DuplicateDef, "'" + d.name + "' defined twice");
    }
    std::unordered_set<std::string> params;
    for (const auto& x : d.params) {
      if (!params.insert(x).second) {
        throw ValidationError(ValidationKind::DuplicateParam,
                              "in '" + d.name + "': parameter '" + x + "' repeated");
      }
    }
  }
  if (definitions.front().arity() != 1) {
    throw ValidationError(ValidationKind::EntryArity,
                          "entry '" + definitions.front().name + "' must take exactly one argument");
  }

  Program p;
  p.options_ = options;
  Resolver resolver(definitions, options);
  p.defs_.reserve(definitions.size());
  for (const auto& d : definitions) {
    Definition r{d.name, d.params, resolver.resolve(d, d.body)};
    p.has_choose_ = p.has_choose_ || contains_choose(*r.body);
    p.defs_.push_back(std::move(r));
  }
  return p;
}

std::optional<std::size_t> Program::find(std::string_view name) const {
  for (std::size_t i = 0; i < defs_.size(); ++i) {
    if (defs_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Program::max_arity() const {
  std::size_t m = 0;
  for (const auto& d : defs_) m = std::max(m, d.arity());
  return m;
}

std::size_t Program::max_body_size() const {
  std::size_t m = 0;
  for (const auto& d : defs_) m = std::max(m, expr_size(*d.body));
  return m;
}

std::size_t Program::total_size() const {
  std::size_t m = 0;
  for (const auto& d : defs_) m += expr_size(*d.body);
  return m;
}

}  // namespace cflab
