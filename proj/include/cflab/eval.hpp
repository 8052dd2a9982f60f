#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cflab/ast.hpp"
#include "cflab/value.hpp"

namespace cflab {

struct Budget {
  static constexpr std::uint64_t kDefaultSteps = 10'000'000;
  std::uint64_t max_steps = kDefaultSteps;
};

struct EvalOptions {
  Budget budget;
  /// Check every produced value and binding against V_x.
  bool check_suffix_lemma = false;
  /// Keep the full call history (not only its length and distinct set).
  bool record_history = false;
};

/// A defined-function activation: which function, with which arguments.
struct Config {
  std::uint32_t function = 0;
  Env args;

  bool operator==(const Config&) const = default;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const noexcept;
};

std::string format_config(const Program& p, const BitString& x, const Config& c);

/// Instrumentation of one run. Counters an engine does not maintain stay 0.
struct RunStats {
  std::string engine;
  std::size_t input_len = 0;
  Value result;
  /// Nodes of the computation tree, root included.
  std::uint64_t time_steps = 0;
  std::uint64_t tree_depth = 0;
  std::uint64_t call_history_length = 0;
  std::uint64_t distinct_configs = 0;
  std::uint64_t max_frames = 0;
  std::uint64_t max_space_bits = 0;
  std::uint64_t cache_entries = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t suffix_violations = 0;
  /// Populated only with EvalOptions::record_history.
  std::vector<Config> history;

  bool overlap() const { return call_history_length > distinct_configs; }
};

/// Inference rule instantiated by a computation-tree node.
enum class Rule {
  Run,  ///< root: the program applied to its input
  Var,
  True,
  False,
  Nil,
  Not,
  Null,
  Head,
  Tail,
  IfTrue,
  IfFalse,
  Call,
};

std::string_view to_string(Rule r);

/// One judgment `p, env |- expr -> value` with its premises in left-to-right
/// order. `expr` is null for the root.
struct CompNode {
  Rule rule = Rule::Run;
  const Expr* expr = nullptr;
  std::shared_ptr<const Env> env;
  Value value;
  std::vector<CompNode> children;
  /// Node count of this subtree.
  std::uint64_t size = 1;
};

struct TreeRun {
  /// Present only when the tree was requested.
  std::optional<CompNode> tree;
  RunStats stats;
};

/// Builds the computation tree bottom-up and left to right.
/// Throws Timeout or Stuck.
TreeRun eval_tree(const Program& p, const BitString& x, const EvalOptions& opts = {},
                  bool keep_tree = true);

/// Activation-record machine. With `tco`, a call in tail position overwrites
/// the caller's frame. Throws Timeout or Stuck.
RunStats eval_stack(const Program& p, const BitString& x, bool tco,
                    const EvalOptions& opts = {});

/// Caches (function, args, value) triples; each configuration's body is
/// evaluated at most once. Throws ReachBoundExceeded on a provable loop and
/// Stuck. The budget is not consulted.
RunStats eval_memo(const Program& p, const BitString& x, const EvalOptions& opts = {});

struct OverlapReport {
  bool overlap = false;
  std::optional<Config> first_repeated;
  std::uint64_t call_history_length = 0;
  std::uint64_t distinct_configs = 0;
};

OverlapReport detect_call_overlap(const Program& p, const BitString& x,
                                  const Budget& b = {});

/// Sum over definitions of (3 + n)^arity, saturating at UINT64_MAX.
std::uint64_t reach_bound(const Program& p, std::size_t n);

/// Slots of one activation record: parameters plus the peak number of
/// intermediate values the body holds at once.
std::size_t frame_slots(const Definition& d);
/// Bits to store one element of V_x: ceil(log2(n + 3)).
std::size_t value_bits(std::size_t n);

/// Evaluates one defined function on explicit arguments with the memoizing
/// engine. Used to probe helper functions of generated programs.
Value apply_function(const Program& p, const BitString& x, std::string_view fname,
                     std::span<const Value> args);

}  // namespace cflab
