#pragma once

#include <cstdint>

#include "cflab/ast.hpp"
#include "cflab/eval.hpp"
#include "cflab/value.hpp"

namespace cflab {

struct SearchStats {
  bool accepted = false;
  std::uint64_t branches = 0;
  std::uint64_t total_steps = 0;
};

/// Depth-first enumeration of choice resolutions, left branch first. Each
/// branch gets the full budget; a stuck branch simply fails. Throws Timeout
/// when a branch exhausts its budget before any branch accepted.
SearchStats ncf_search(const Program& p, const BitString& x, const Budget& b = {});
bool ncf_decide_search(const Program& p, const BitString& x, const Budget& b = {});

struct SaturationStats {
  bool accepted = false;
  /// Derived (configuration, value) pairs.
  std::uint64_t triples = 0;
  std::uint64_t configs = 0;
  std::uint64_t rounds = 0;
  /// Body evaluations performed across all rounds.
  std::uint64_t body_evaluations = 0;
};

/// Least fixed point of derivable (configuration, value) triples, computed
/// semi-naively: a round re-evaluates only configurations that are new or
/// whose callees gained values in the previous round.
SaturationStats ncf_saturate(const Program& p, const BitString& x);
bool ncf_decide_saturate(const Program& p, const BitString& x);

struct ConfirmStats {
  Value result;
  std::uint64_t max_confirm_frames = 0;
  std::uint64_t tree_size = 0;
  bool bound_ok = false;

  /// ceil(log2(tree_size + 1)) + 1
  std::uint64_t frame_bound() const;
};

/// Replays the space-saving confirmation of a computation tree: every
/// non-largest premise is confirmed by a pushed frame (smallest first), the
/// largest one tail-recursively in the current frame. Guesses come from an
/// eval_tree run. Throws OracleMismatch if a node does not instantiate its
/// rule, and whatever eval_tree throws.
ConfirmStats confirm_log2(const Program& p, const BitString& x, const Budget& b = {});
ConfirmStats confirm_tree(const Program& p, const CompNode& root, const BitString& x);

}  // namespace cflab
