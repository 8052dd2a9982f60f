#include "cflab/eval.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cflab/errors.hpp"
#include "semantics.hpp"

namespace cflab {

std::size_t ConfigHash::operator()(const Config& c) const noexcept {
  return EnvHash{}(c.args) * 31 + c.function;
}

std::string format_config(const Program& p, const BitString& x, const Config& c) {
  const Definition& d = p.definition(c.function);
  std::string s = "(" + d.name + ", [";
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) s += ", ";
    s += d.params[i] + " -> " + format_value(c.args[i], x);
  }
  return s + "])";
}

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::Run: return "run";
    case Rule::Var: return "var";
    case Rule::True: return "true";
    case Rule::False: return "false";
    case Rule::Nil: return "nil";
    case Rule::Not: return "not";
    case Rule::Null: return "null";
    case Rule::Head: return "head";
    case Rule::Tail: return "tail";
    case Rule::IfTrue: return "if-true";
    case Rule::IfFalse: return "if-false";
    case Rule::Call: return "call";
  }
  return "?";
}

std::uint64_t reach_bound(const Program& p, std::size_t n) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t base = 3 + static_cast<std::uint64_t>(n);
  std::uint64_t total = 0;
  for (const auto& d : p.definitions()) {
    std::uint64_t term = 1;
    for (std::size_t i = 0; i < d.arity(); ++i) {
      if (term > kMax / base) return kMax;
      term *= base;
    }
    if (total > kMax - term) return kMax;
    total += term;
  }
  return total;
}

std::size_t value_bits(std::size_t n) {
  std::size_t size = value_space_size(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < size) ++bits;
  return bits;
}

namespace {

// Peak number of values held while evaluating `e` left to right, its own
// result included.
std::size_t live_values(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Base>) {
          return live_values(*x.arg);
        } else if constexpr (std::is_same_v<T, Expr::If>) {
          return std::max({live_values(*x.cond), live_values(*x.then_branch),
                           live_values(*x.else_branch)});
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          std::size_t peak = 1;
          for (std::size_t i = 0; i < x.args.size(); ++i) {
            peak = std::max(peak, i + live_values(*x.args[i]));
          }
          return peak;
        } else if constexpr (std::is_same_v<T, Expr::Choose>) {
          return std::max(live_values(*x.left), live_values(*x.right));
        } else {
          return 1;
        }
      },
      e.node);
}

}  // namespace

std::size_t frame_slots(const Definition& d) { return d.arity() + live_values(*d.body); }

namespace {

void require_deterministic(const Program& p, const char* engine) {
  if (p.has_choose()) {
    throw std::invalid_argument(std::string(engine) +
                                " evaluates deterministic programs only; use an NCF engine");
  }
}

/// State and rule semantics shared by the deterministic engines.
class Machine {
 protected:
  Machine(const Program& p, const BitString& x, const EvalOptions& opts, std::string engine)
      : p_(p), x_(x), opts_(opts) {
    stats_.engine = std::move(engine);
    stats_.input_len = x.size();
  }

  Env entry_env() const { return Env{Value::suffix(0)}; }

  void tick(std::uint64_t depth) {
    if (stats_.time_steps >= opts_.budget.max_steps) throw Timeout(opts_.budget.max_steps);
    ++stats_.time_steps;
    if (depth > stats_.tree_depth) stats_.tree_depth = depth;
  }

  // Counts steps without a budget; used by the memoizing engine.
  void count(std::uint64_t depth) {
    ++stats_.time_steps;
    if (depth > stats_.tree_depth) stats_.tree_depth = depth;
  }

  Value produce(Value v) {
    if (opts_.check_suffix_lemma && !in_value_space(v, x_.size())) ++stats_.suffix_violations;
    return v;
  }

  void check_env(const Definition& d, const Env& env) {
    if (!opts_.check_suffix_lemma) return;
    if (env.size() != d.arity()) ++stats_.suffix_violations;
    for (Value v : env) {
      if (!in_value_space(v, x_.size())) ++stats_.suffix_violations;
    }
  }

  /// Returns true when `c` has not been called before.
  bool record_call(const Config& c) {
    ++stats_.call_history_length;
    if (opts_.record_history) stats_.history.push_back(c);
    if (seen_.find(c) != seen_.end()) return false;
    seen_.insert(c);
    stats_.distinct_configs = seen_.size();
    return true;
  }

  Value apply_base(BaseOp op, Value v) const { return detail::apply_base(op, v, x_); }
  static bool truth(Value v) { return detail::truth(v); }
  Value constant(const Expr& e) const { return detail::constant(e, x_); }

  const Program& p_;
  const BitString& x_;
  EvalOptions opts_;
  RunStats stats_;
  std::unordered_set<Config, ConfigHash> seen_;
};

Rule base_rule(BaseOp op) {
  switch (op) {
    case BaseOp::Not: return Rule::Not;
    case BaseOp::Null: return Rule::Null;
    case BaseOp::Head: return Rule::Head;
    case BaseOp::Tail: return Rule::Tail;
  }
  return Rule::Not;
}

Rule constant_rule(const Expr& e) {
  if (e.is<Expr::True>()) return Rule::True;
  if (e.is<Expr::False>()) return Rule::False;
  return Rule::Nil;
}

/// Computation-tree builder. With Keep=false only the counters are kept.
template <bool Keep>
class TreeEvaluator : Machine {
 public:
  TreeEvaluator(const Program& p, const BitString& x, const EvalOptions& opts)
      : Machine(p, x, opts, "tree") {}

  TreeRun run() {
    TreeRun out;
    CompNode root;
    tick(1);
    Env env = entry_env();
    check_env(p_.entry(), env);
    record_call(Config{0, env});
    auto handle = std::make_shared<const Env>(std::move(env));
    CompNode* body = nullptr;
    if constexpr (Keep) {
      root.rule = Rule::Run;
      root.env = handle;
      root.children.resize(1);
      body = &root.children.front();
    }
    Value v = eval(*p_.entry().body, handle, 2, body);
    stats_.result = v;
    if constexpr (Keep) {
      root.value = v;
      root.size = 1 + root.children.front().size;
      out.tree = std::move(root);
    }
    out.stats = std::move(stats_);
    return out;
  }

  const std::optional<Config>& first_repeated() const { return first_repeated_; }

 private:
  using EnvHandle = std::shared_ptr<const Env>;

  Value eval(const Expr& e, const EnvHandle& env, std::uint64_t depth, CompNode* node) {
    tick(depth);
    Value v = std::visit(
        [&](const auto& x) -> Value {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Var>) {
            if constexpr (Keep) node->rule = Rule::Var;
            return (*env)[x.slot];
          } else if constexpr (std::is_same_v<T, Expr::Base>) {
            CompNode* child = open(node, 1, base_rule(x.op));
            Value a = eval(*x.arg, env, depth + 1, child);
            return apply_base(x.op, a);
          } else if constexpr (std::is_same_v<T, Expr::If>) {
            CompNode* test = open(node, 2, Rule::IfTrue);
            bool c = truth(eval(*x.cond, env, depth + 1, test));
            if constexpr (Keep) node->rule = c ? Rule::IfTrue : Rule::IfFalse;
            CompNode* branch = next(node);
            return eval(c ? *x.then_branch : *x.else_branch, env, depth + 1, branch);
          } else if constexpr (std::is_same_v<T, Expr::Call>) {
            CompNode* child = open(node, x.args.size() + 1, Rule::Call);
            Config cfg{static_cast<std::uint32_t>(x.callee), {}};
            cfg.args.reserve(x.args.size());
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (i) child = next(node);
              cfg.args.push_back(eval(*x.args[i], env, depth + 1, child));
            }
            const Definition& d = p_.definition(cfg.function);
            check_env(d, cfg.args);
            if (!record_call(cfg) && !first_repeated_) first_repeated_ = cfg;
            CompNode* body = x.args.empty() ? child : next(node);
            auto callee_env = std::make_shared<const Env>(std::move(cfg.args));
            return eval(*d.body, callee_env, depth + 1, body);
          } else if constexpr (std::is_same_v<T, Expr::Choose>) {
            throw std::logic_error("choose reached a deterministic engine");
          } else {
            if constexpr (Keep) node->rule = constant_rule(e);
            return constant(e);
          }
        },
        e.node);
    v = produce(v);
    if constexpr (Keep) {
      node->expr = &e;
      node->env = env;
      node->value = v;
      std::uint64_t size = 1;
      for (const auto& c : node->children) size += c.size;
      node->size = size;
    }
    return v;
  }

  // Starts the premise list of `node`; returns the first premise slot.
  static CompNode* open(CompNode* node, std::size_t premises, Rule rule) {
    if constexpr (Keep) {
      node->rule = rule;
      node->children.reserve(premises);
      node->children.emplace_back();
      return &node->children.back();
    } else {
      (void)node, (void)premises, (void)rule;
      return nullptr;
    }
  }

  static CompNode* next(CompNode* node) {
    if constexpr (Keep) {
      node->children.emplace_back();
      return &node->children.back();
    } else {
      (void)node;
      return nullptr;
    }
  }

  std::optional<Config> first_repeated_;
};

class StackMachine : Machine {
 public:
  StackMachine(const Program& p, const BitString& x, bool tco, const EvalOptions& opts)
      : Machine(p, x, opts, tco ? "stack-tco" : "stack"), tco_(tco) {
    for (const auto& d : p.definitions()) slots_.push_back(frame_slots(d));
  }

  RunStats run() {
    tick(1);
    Env env = entry_env();
    check_env(p_.entry(), env);
    record_call(Config{0, env});
    stats_.result = produce(invoke(0, std::move(env), 2));
    stats_.max_space_bits = max_slots_ * value_bits(x_.size());
    return std::move(stats_);
  }

 private:
  struct TailCall {
    std::uint32_t function;
    Env args;
    std::uint64_t depth;
  };

  void push(std::uint32_t fn) {
    ++frames_;
    live_slots_ += slots_[fn];
    stats_.max_frames = std::max<std::uint64_t>(stats_.max_frames, frames_);
    max_slots_ = std::max(max_slots_, live_slots_);
  }

  void pop(std::uint32_t fn) {
    --frames_;
    live_slots_ -= slots_[fn];
  }

  // The callee's record replaces the caller's.
  void overwrite(std::uint32_t from, std::uint32_t to) {
    live_slots_ = live_slots_ - slots_[from] + slots_[to];
    max_slots_ = std::max(max_slots_, live_slots_);
  }

  Value invoke(std::uint32_t fn, Env env, std::uint64_t depth) {
    push(fn);
    std::uint32_t current = fn;
    for (;;) {
      Value v = eval(*p_.definition(current).body, env, depth, true);
      if (!pending_) {
        pop(current);
        return v;
      }
      TailCall next = std::move(*pending_);
      pending_.reset();
      overwrite(current, next.function);
      current = next.function;
      env = std::move(next.args);
      depth = next.depth;
    }
  }

  Value eval(const Expr& e, const Env& env, std::uint64_t depth, bool tail) {
    tick(depth);
    return std::visit(
        [&](const auto& x) -> Value {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Var>) {
            return produce(env[x.slot]);
          } else if constexpr (std::is_same_v<T, Expr::Base>) {
            return produce(apply_base(x.op, eval(*x.arg, env, depth + 1, false)));
          } else if constexpr (std::is_same_v<T, Expr::If>) {
            bool c = truth(eval(*x.cond, env, depth + 1, false));
            return eval(c ? *x.then_branch : *x.else_branch, env, depth + 1, tail);
          } else if constexpr (std::is_same_v<T, Expr::Call>) {
            Config cfg{static_cast<std::uint32_t>(x.callee), {}};
            cfg.args.reserve(x.args.size());
            for (const auto& a : x.args) cfg.args.push_back(eval(*a, env, depth + 1, false));
            check_env(p_.definition(cfg.function), cfg.args);
            record_call(cfg);
            if (tco_ && tail) {
              pending_ = TailCall{cfg.function, std::move(cfg.args), depth + 1};
              return Value{};
            }
            return produce(invoke(cfg.function, std::move(cfg.args), depth + 1));
          } else if constexpr (std::is_same_v<T, Expr::Choose>) {
            throw std::logic_error("choose reached a deterministic engine");
          } else {
            return constant(e);
          }
        },
        e.node);
  }

  bool tco_;
  std::vector<std::size_t> slots_;
  std::uint64_t frames_ = 0;
  std::size_t live_slots_ = 0;
  std::size_t max_slots_ = 0;
  std::optional<TailCall> pending_;
};

class MemoEvaluator : Machine {
 public:
  MemoEvaluator(const Program& p, const BitString& x, const EvalOptions& opts)
      : Machine(p, x, opts, "memo"), bound_(reach_bound(p, x.size())) {}

  Value call(std::uint32_t fn, Env args) {
    Config cfg{fn, std::move(args)};
    note_call(cfg);
    return enter(std::move(cfg), 1);
  }

  RunStats run() {
    count(1);
    Env env = entry_env();
    check_env(p_.entry(), env);
    Config entry{0, std::move(env)};
    note_call(entry);
    Value v = enter(std::move(entry), 2);
    stats_.result = v;
    stats_.cache_entries = cache_.size();
    stats_.distinct_configs = cache_.size();
    return std::move(stats_);
  }

 private:
  void note_call(const Config& cfg) {
    ++stats_.call_history_length;
    if (opts_.record_history) stats_.history.push_back(cfg);
  }

  Value enter(Config cfg, std::uint64_t depth) {
    if (auto it = cache_.find(cfg); it != cache_.end()) {
      ++stats_.cache_hits;
      return it->second;
    }
    if (active_.count(cfg)) {
      throw ReachBoundExceeded("configuration " + format_config(p_, x_, cfg) +
                               " re-entered while still being evaluated");
    }
    if (cache_.size() + active_.size() >= bound_) {
      throw ReachBoundExceeded("more than " + std::to_string(bound_) + " distinct configurations");
    }
    active_.insert(cfg);
    Value v = eval(*p_.definition(cfg.function).body, cfg.args, depth);
    active_.erase(cfg);
    cache_.emplace(std::move(cfg), v);
    return v;
  }

  Value eval(const Expr& e, const Env& env, std::uint64_t depth) {
    count(depth);
    return std::visit(
        [&](const auto& x) -> Value {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Var>) {
            return produce(env[x.slot]);
          } else if constexpr (std::is_same_v<T, Expr::Base>) {
            return produce(apply_base(x.op, eval(*x.arg, env, depth + 1)));
          } else if constexpr (std::is_same_v<T, Expr::If>) {
            bool c = truth(eval(*x.cond, env, depth + 1));
            return eval(c ? *x.then_branch : *x.else_branch, env, depth + 1);
          } else if constexpr (std::is_same_v<T, Expr::Call>) {
            Config cfg{static_cast<std::uint32_t>(x.callee), {}};
            cfg.args.reserve(x.args.size());
            for (const auto& a : x.args) cfg.args.push_back(eval(*a, env, depth + 1));
            check_env(p_.definition(cfg.function), cfg.args);
            note_call(cfg);
            return produce(enter(std::move(cfg), depth + 1));
          } else if constexpr (std::is_same_v<T, Expr::Choose>) {
            throw std::logic_error("choose reached a deterministic engine");
          } else {
            return constant(e);
          }
        },
        e.node);
  }

  std::uint64_t bound_;
  std::unordered_map<Config, Value, ConfigHash> cache_;
  std::unordered_set<Config, ConfigHash> active_;
};

}  // namespace

TreeRun eval_tree(const Program& p, const BitString& x, const EvalOptions& opts, bool keep_tree) {
  require_deterministic(p, "eval_tree");
  if (keep_tree) return TreeEvaluator<true>(p, x, opts).run();
  return TreeEvaluator<false>(p, x, opts).run();
}

RunStats eval_stack(const Program& p, const BitString& x, bool tco, const EvalOptions& opts) {
  require_deterministic(p, "eval_stack");
  return StackMachine(p, x, tco, opts).run();
}

RunStats eval_memo(const Program& p, const BitString& x, const EvalOptions& opts) {
  require_deterministic(p, "eval_memo");
  return MemoEvaluator(p, x, opts).run();
}

OverlapReport detect_call_overlap(const Program& p, const BitString& x, const Budget& b) {
  require_deterministic(p, "detect_call_overlap");
  EvalOptions opts;
  opts.budget = b;
  TreeEvaluator<false> engine(p, x, opts);
  TreeRun run = engine.run();
  OverlapReport r;
  r.call_history_length = run.stats.call_history_length;
  r.distinct_configs = run.stats.distinct_configs;
  r.first_repeated = engine.first_repeated();
  r.overlap = r.first_repeated.has_value();
  return r;
}

Value apply_function(const Program& p, const BitString& x, std::string_view fname,
                     std::span<const Value> args) {
  require_deterministic(p, "apply_function");
  auto fn = p.find(fname);
  if (!fn) throw std::invalid_argument("no function named '" + std::string(fname) + "'");
  if (p.definition(*fn).arity() != args.size()) {
    throw std::invalid_argument("wrong argument count for '" + std::string(fname) + "'");
  }
  for (Value v : args) {
    if (!in_value_space(v, x.size())) throw std::invalid_argument("argument outside V_x");
  }
  MemoEvaluator engine(p, x, {});
  return engine.call(static_cast<std::uint32_t>(*fn), Env(args.begin(), args.end()));
}

}  // namespace cflab
