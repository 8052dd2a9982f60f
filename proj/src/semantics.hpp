#pragma once

#include <optional>
#include <stdexcept>

#include "cflab/ast.hpp"
#include "cflab/errors.hpp"
#include "cflab/value.hpp"

namespace cflab::detail {

/// The base-function rules. Throws Stuck where no rule applies.
inline Value apply_base(BaseOp op, Value v, const BitString& x) {
  const std::size_t n = x.size();
  switch (op) {
    case BaseOp::Not:
      if (!v.is_bool()) throw Stuck("not applied to a list");
      return Value::boolean(!v.as_bool());
    case BaseOp::Null:
      if (!v.is_suffix()) throw Stuck("null applied to a boolean");
      return Value::boolean(v.offset() == n);
    case BaseOp::Head:
      if (!v.is_suffix()) throw Stuck("head applied to a boolean");
      if (v.offset() == n) throw Stuck("head applied to []");
      return Value::boolean(x[v.offset()]);
    case BaseOp::Tail:
      if (!v.is_suffix()) throw Stuck("tail applied to a boolean");
      if (v.offset() == n) throw Stuck("tail applied to []");
      return Value::suffix(v.offset() + 1);
  }
  throw std::logic_error("unknown base op");
}

/// Same rules, with "no rule applies" as an empty result.
inline std::optional<Value> try_base(BaseOp op, Value v, const BitString& x) {
  const std::size_t n = x.size();
  switch (op) {
    case BaseOp::Not:
      if (!v.is_bool()) return std::nullopt;
      return Value::boolean(!v.as_bool());
    case BaseOp::Null:
      if (!v.is_suffix()) return std::nullopt;
      return Value::boolean(v.offset() == n);
    case BaseOp::Head:
      if (!v.is_suffix() || v.offset() == n) return std::nullopt;
      return Value::boolean(x[v.offset()]);
    case BaseOp::Tail:
      if (!v.is_suffix() || v.offset() == n) return std::nullopt;
      return Value::suffix(v.offset() + 1);
  }
  return std::nullopt;
}

inline bool truth(Value v) {
  if (!v.is_bool()) throw Stuck("if-test is not a boolean");
  return v.as_bool();
}

inline Value constant(const Expr& e, const BitString& x) {
  if (e.is<Expr::True>()) return kTrue;
  if (e.is<Expr::False>()) return kFalse;
  return Value::suffix(static_cast<std::uint32_t>(x.size()));
}

}  // namespace cflab::detail
