#include "cflab/analysis.hpp"

#include <algorithm>

namespace cflab {

std::string_view to_string(AlphaClass a) {
  switch (a) {
    case AlphaClass::X: return "X";
    case AlphaClass::T: return "T";
    case AlphaClass::N: return "N";
  }
  return "?";
}

std::string_view to_string(CallSiteKind k) {
  switch (k) {
    case CallSiteKind::Tail: return "tail";
    case CallSiteKind::LinearNonTail: return "linear-nontail";
    case CallSiteKind::Nested: return "nested";
  }
  return "?";
}

AlphaClass alpha(const Expr& e) {
  return std::visit(
      [](const auto& x) -> AlphaClass {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Expr::Base>) {
          return alpha(*x.arg) == AlphaClass::X ? AlphaClass::X : AlphaClass::N;
        } else if constexpr (std::is_same_v<T, Expr::Call>) {
          for (const auto& a : x.args) {
            if (alpha(*a) != AlphaClass::X) return AlphaClass::N;
          }
          return AlphaClass::T;
        } else if constexpr (std::is_same_v<T, Expr::If>) {
          if (alpha(*x.cond) != AlphaClass::X) return AlphaClass::N;
          return std::max(alpha(*x.then_branch), alpha(*x.else_branch));
        } else if constexpr (std::is_same_v<T, Expr::Choose>) {
          return std::max(alpha(*x.left), alpha(*x.right));
        } else {
          // constants and variables
          return AlphaClass::X;
        }
      },
      e.node);
}

bool is_cftr(const Program& p) {
  return std::all_of(p.definitions().begin(), p.definitions().end(),
                     [](const Definition& d) { return alpha(*d.body) != AlphaClass::N; });
}

std::size_t CallShapeReport::count(CallSiteKind k) const {
  return static_cast<std::size_t>(
      std::count_if(sites.begin(), sites.end(), [k](const CallSite& s) { return s.kind == k; }));
}

namespace {

struct SiteCollector {
  const std::string& def;
  std::vector<CallSite>& out;

  void walk(const Expr& e, const std::string& path, bool tail, bool in_arg) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Expr::Base>) {
            walk(*x.arg, path + ".arg", false, in_arg);
          } else if constexpr (std::is_same_v<T, Expr::If>) {
            walk(*x.cond, path + ".cond", false, in_arg);
            walk(*x.then_branch, path + ".then", tail, in_arg);
            walk(*x.else_branch, path + ".else", tail, in_arg);
          } else if constexpr (std::is_same_v<T, Expr::Choose>) {
            walk(*x.left, path + ".left", tail, in_arg);
            walk(*x.right, path + ".right", tail, in_arg);
          } else if constexpr (std::is_same_v<T, Expr::Call>) {
            CallSiteKind kind = in_arg ? CallSiteKind::Nested
                                : tail ? CallSiteKind::Tail
                                       : CallSiteKind::LinearNonTail;
            out.push_back({def, x.fname, path, kind});
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              walk(*x.args[i], path + ".arg" + std::to_string(i), false, true);
            }
          }
        },
        e.node);
  }
};

}  // namespace

CallShapeReport call_shape_report(const Program& p) {
  CallShapeReport r;
  for (const auto& d : p.definitions()) {
    r.definitions.push_back({d.name, alpha(*d.body)});
    SiteCollector{d.name, r.sites}.walk(*d.body, "body", true, false);
  }
  r.is_cftr = is_cftr(p);
  r.all_calls_linear = r.count(CallSiteKind::Nested) == 0;
  return r;
}

}  // namespace cflab
