#pragma once

#include "wfg/expr.hpp"
#include "wfg/value.hpp"

namespace wfg {

/// Reference semantics of the expression language. Every free variable of
/// `e` must be bound in `env` to a value of its declared sort; otherwise an
/// EvalError is thrown. Addition wraps modulo 2^width and subtraction is
/// floored at zero.
Value eval_expr(const ExprPtr& e, const Env& env);

} // namespace wfg
