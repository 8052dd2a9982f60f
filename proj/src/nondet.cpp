#include "cflab/nondet.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>
#include <vector>

#include "cflab/errors.hpp"
#include "semantics.hpp"

namespace cflab {

// ---------------------------------------------------------------------------
// Backtracking search over choice resolutions
// ---------------------------------------------------------------------------

namespace {

class BranchRunner {
 public:
  BranchRunner(const Program& p, const BitString& x, const Budget& b) : p_(p), x_(x), b_(b) {}

  /// Runs one branch following `tape`, extending it with left choices.
  /// Returns nullopt if the branch got stuck.
  std::optional<Value> run(std::vector<bool>& tape, std::uint64_t& steps) {
    tape_ = &tape;
    pos_ = 0;
    steps_ = 0;
    try {
      tick();
      Env env{Value::suffix(0)};
      Value v = eval(*p_.entry().body, env);
      steps += steps_;
      tape.resize(pos_);
      return v;
    } catch (const Stuck&) {
      steps += steps_;
      tape.resize(pos_);
      return std::nullopt;
    }
  }

 private:
  void tick() {
    if (steps_ >= b_.max_steps) throw Timeout(b_.max_steps);
    ++steps_;
  }

  bool next_choice() {
    auto& tape = *tape_;
    if (pos_ == tape.size()) tape.push_back(false);
    return tape[pos_++];
  }

  Value eval(const Expr& e, const Env& env) {
    tick();
    return std::visit(
        [&](const auto& x) -> Value {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Var>) {
            return env[x.slot];
          } else if constexpr (std::is_same_v<T, Expr::Base>) {
            return detail::apply_base(x.op, eval(*x.arg, env), x_);
          } else if constexpr (std::is_same_v<T, Expr::If>) {
            bool c = detail::truth(eval(*x.cond, env));
            return eval(c ? *x.then_branch : *x.else_branch, env);
          } else if constexpr (std::is_same_v<T, Expr::Call>) {
            Env args;
            args.reserve(x.args.size());
            for (const auto& a : x.args) args.push_back(eval(*a, env));
            return eval(*p_.definition(static_cast<std::size_t>(x.callee)).body, args);
          } else if constexpr (std::is_same_v<T, Expr::Choose>) {
            return eval(next_choice() ? *x.right : *x.left, env);
          } else {
            return detail::constant(e, x_);
          }
        },
        e.node);
  }

  const Program& p_;
  const BitString& x_;
  Budget b_;
  std::vector<bool>* tape_ = nullptr;
  std::size_t pos_ = 0;
  std::uint64_t steps_ = 0;
};

}  // namespace

SearchStats ncf_search(const Program& p, const BitString& x, const Budget& b) {
  SearchStats stats;
  BranchRunner runner(p, x, b);
  std::vector<bool> tape;
  for (;;) {
    ++stats.branches;
    std::optional<Value> v = runner.run(tape, stats.total_steps);
    if (v && *v == kTrue) {
      stats.accepted = true;
      return stats;
    }
    while (!tape.empty() && tape.back()) tape.pop_back();
    if (tape.empty()) return stats;
    tape.back() = true;
  }
}

bool ncf_decide_search(const Program& p, const BitString& x, const Budget& b) {
  return ncf_search(p, x, b).accepted;
}

// ---------------------------------------------------------------------------
// Saturation
// ---------------------------------------------------------------------------

namespace {

/// Subset of V_x as a bitmap over value codes.
class ValueSet {
 public:
  explicit ValueSet(std::size_t universe) : words_((universe + 63) / 64, 0) {}

  bool insert(Value v) {
    std::uint64_t& w = words_[v.code() / 64];
    std::uint64_t bit = std::uint64_t{1} << (v.code() % 64);
    if (w & bit) return false;
    w |= bit;
    return true;
  }

  bool contains(Value v) const { return (words_[v.code() / 64] >> (v.code() % 64)) & 1u; }

  bool merge(const ValueSet& other) {
    bool changed = false;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t added = other.words_[i] & ~words_[i];
      if (added) {
        words_[i] |= added;
        changed = true;
      }
    }
    return changed;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int b = std::countr_zero(w);
        f(Value::from_code(static_cast<std::uint32_t>(i * 64 + b)));
        w &= w - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

class Saturator {
 public:
  Saturator(const Program& p, const BitString& x)
      : p_(p), x_(x), universe_(value_space_size(x.size())) {}

  SaturationStats run() {
    SaturationStats stats;
    std::uint32_t entry = intern(Config{0, Env{Value::suffix(0)}});
    while (!frontier_.empty()) {
      ++stats.rounds;
      std::vector<std::uint32_t> current;
      current.swap(frontier_);
      for (auto id : current) scheduled_[id] = false;
      for (auto id : current) {
        ++stats.body_evaluations;
        evaluating_ = id;
        Env args = nodes_[id].cfg.args;
        ValueSet vals = eval(*p_.definition(nodes_[id].cfg.function).body, args);
        if (nodes_[id].values.merge(vals)) {
          for (auto dep : nodes_[id].dependents) schedule(dep);
        }
      }
    }
    stats.accepted = nodes_[entry].values.contains(kTrue);
    stats.configs = nodes_.size();
    for (const auto& n : nodes_) stats.triples += n.values.size();
    return stats;
  }

 private:
  struct Node {
    Config cfg;
    ValueSet values;
    std::vector<std::uint32_t> dependents;
  };

  void schedule(std::uint32_t id) {
    if (scheduled_[id]) return;
    scheduled_[id] = true;
    frontier_.push_back(id);
  }

  std::uint32_t intern(Config cfg) {
    auto [it, fresh] = ids_.emplace(cfg, static_cast<std::uint32_t>(nodes_.size()));
    if (fresh) {
      nodes_.push_back(Node{std::move(cfg), ValueSet(universe_), {}});
      scheduled_.push_back(false);
      schedule(it->second);
    }
    return it->second;
  }

  void depend(std::uint32_t callee, std::uint32_t caller) {
    auto& deps = nodes_[callee].dependents;
    if (std::find(deps.begin(), deps.end(), caller) == deps.end()) deps.push_back(caller);
  }

  ValueSet singleton(Value v) const {
    ValueSet s(universe_);
    s.insert(v);
    return s;
  }

  ValueSet eval(const Expr& e, const Env& env) {
    return std::visit(
        [&](const auto& x) -> ValueSet {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Var>) {
            return singleton(env[x.slot]);
          } else if constexpr (std::is_same_v<T, Expr::Base>) {
            ValueSet out(universe_);
            eval(*x.arg, env).for_each([&](Value v) {
              if (auto r = detail::try_base(x.op, v, x_)) out.insert(*r);
            });
            return out;
          } else if constexpr (std::is_same_v<T, Expr::If>) {
            ValueSet test = eval(*x.cond, env);
            ValueSet out(universe_);
            if (test.contains(kTrue)) out.merge(eval(*x.then_branch, env));
            if (test.contains(kFalse)) out.merge(eval(*x.else_branch, env));
            return out;
          } else if constexpr (std::is_same_v<T, Expr::Call>) {
            std::vector<std::vector<Value>> choices;
            choices.reserve(x.args.size());
            for (const auto& a : x.args) {
              std::vector<Value> vs;
              eval(*a, env).for_each([&](Value v) { vs.push_back(v); });
              if (vs.empty()) return ValueSet(universe_);
              choices.push_back(std::move(vs));
            }
            ValueSet out(universe_);
            Env args(x.args.size());
            product(static_cast<std::uint32_t>(x.callee), choices, 0, args, out);
            return out;
          } else if constexpr (std::is_same_v<T, Expr::Choose>) {
            ValueSet out = eval(*x.left, env);
            out.merge(eval(*x.right, env));
            return out;
          } else {
            return singleton(detail::constant(e, x_));
          }
        },
        e.node);
  }

  void product(std::uint32_t fn, const std::vector<std::vector<Value>>& choices, std::size_t i,
               Env& args, ValueSet& out) {
    if (i == choices.size()) {
      std::uint32_t caller = evaluating_;
      std::uint32_t id = intern(Config{fn, args});
      depend(id, caller);
      out.merge(nodes_[id].values);
      return;
    }
    for (Value v : choices[i]) {
      args[i] = v;
      product(fn, choices, i + 1, args, out);
    }
  }

  const Program& p_;
  const BitString& x_;
  std::size_t universe_;
  std::vector<Node> nodes_;
  std::unordered_map<Config, std::uint32_t, ConfigHash> ids_;
  std::vector<std::uint32_t> frontier_;
  std::vector<bool> scheduled_;
  std::uint32_t evaluating_ = 0;
};

}  // namespace

SaturationStats ncf_saturate(const Program& p, const BitString& x) { return Saturator(p, x).run(); }

bool ncf_decide_saturate(const Program& p, const BitString& x) { return ncf_saturate(p, x).accepted; }

// ---------------------------------------------------------------------------
// Confirmation replay
// ---------------------------------------------------------------------------

std::uint64_t ConfirmStats::frame_bound() const {
  // ceil(log2(tree_size + 1))
  std::uint64_t v = tree_size + 1;
  std::uint64_t log = static_cast<std::uint64_t>(std::bit_width(v - 1));
  return log + 1;
}

namespace {

class Confirmer {
 public:
  Confirmer(const Program& p, const BitString& x) : p_(p), x_(x) {}

  void confirm(const CompNode* node, std::uint64_t frame) {
    max_frames = std::max(max_frames, frame);
    for (;;) {
      verify(*node);
      const auto& premises = node->children;
      if (premises.empty()) return;
      std::vector<const CompNode*> order;
      order.reserve(premises.size());
      for (const auto& c : premises) order.push_back(&c);
      std::stable_sort(order.begin(), order.end(),
                       [](const CompNode* a, const CompNode* b) { return a->size < b->size; });
      for (std::size_t i = 0; i + 1 < order.size(); ++i) confirm(order[i], frame + 1);
      node = order.back();
    }
  }

  std::uint64_t max_frames = 0;

 private:
  [[noreturn]] void mismatch(const CompNode& n, const std::string& what) const {
    throw OracleMismatch(std::string(to_string(n.rule)) + " node: " + what);
  }

  void expect(bool ok, const CompNode& n, const char* what) const {
    if (!ok) mismatch(n, what);
  }

  void premises(const CompNode& n, std::size_t count) const {
    if (n.children.size() != count) mismatch(n, "wrong number of premises");
  }

  void verify(const CompNode& n) const {
    if (n.rule == Rule::Run) {
      premises(n, 1);
      const CompNode& body = n.children[0];
      expect(body.expr == p_.entry().body.get(), n, "root premise is not the entry body");
      expect(body.env && *body.env == Env{Value::suffix(0)}, n, "entry not bound to the input");
      expect(body.value == n.value, n, "root value differs from its premise");
      return;
    }
    expect(n.expr != nullptr && n.env != nullptr, n, "missing judgment");
    const Expr& e = *n.expr;
    const Env& env = *n.env;
    for (const auto& c : n.children) {
      if (n.rule != Rule::Call || &c != &n.children.back()) {
        expect(c.env == n.env || (c.env && *c.env == env), n, "premise changed environment");
      }
    }
    switch (n.rule) {
      case Rule::Var: {
        const auto* v = e.as<Expr::Var>();
        expect(v && n.value == env[v->slot], n, "variable value");
        premises(n, 0);
        return;
      }
      case Rule::True:
      case Rule::False:
      case Rule::Nil:
        premises(n, 0);
        expect(n.value == detail::constant(e, x_), n, "constant value");
        return;
      case Rule::Not:
      case Rule::Null:
      case Rule::Head:
      case Rule::Tail: {
        const auto* b = e.as<Expr::Base>();
        premises(n, 1);
        expect(b && n.children[0].expr == b->arg.get(), n, "premise is not the argument");
        auto r = detail::try_base(b->op, n.children[0].value, x_);
        expect(r && *r == n.value, n, "base function value");
        return;
      }
      case Rule::IfTrue:
      case Rule::IfFalse: {
        const auto* i = e.as<Expr::If>();
        premises(n, 2);
        bool want = n.rule == Rule::IfTrue;
        expect(i && n.children[0].expr == i->cond.get(), n, "first premise is not the test");
        expect(n.children[0].value == Value::boolean(want), n, "test value");
        const Expr* branch = want ? i->then_branch.get() : i->else_branch.get();
        expect(n.children[1].expr == branch, n, "second premise is not the selected branch");
        expect(n.children[1].value == n.value, n, "branch value");
        return;
      }
      case Rule::Call: {
        const auto* c = e.as<Expr::Call>();
        expect(c != nullptr, n, "not a call");
        premises(n, c->args.size() + 1);
        Env args;
        for (std::size_t i = 0; i < c->args.size(); ++i) {
          expect(n.children[i].expr == c->args[i].get(), n, "argument premise");
          args.push_back(n.children[i].value);
        }
        const CompNode& body = n.children.back();
        expect(body.expr == p_.definition(static_cast<std::size_t>(c->callee)).body.get(), n,
               "last premise is not the callee body");
        expect(body.env && *body.env == args, n, "callee environment");
        expect(body.value == n.value, n, "call value");
        return;
      }
      case Rule::Run: return;
    }
  }

  const Program& p_;
  const BitString& x_;
};

}  // namespace

ConfirmStats confirm_tree(const Program& p, const CompNode& root, const BitString& x) {
  Confirmer c(p, x);
  c.confirm(&root, 1);
  ConfirmStats s;
  s.result = root.value;
  s.tree_size = root.size;
  s.max_confirm_frames = c.max_frames;
  s.bound_ok = s.max_confirm_frames <= s.frame_bound();
  return s;
}

ConfirmStats confirm_log2(const Program& p, const BitString& x, const Budget& b) {
  EvalOptions opts;
  opts.budget = b;
  TreeRun run = eval_tree(p, x, opts, true);
  return confirm_tree(p, *run.tree, x);
}

}  // namespace cflab
