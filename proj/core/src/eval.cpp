#include "wfg/eval.hpp"

#include "wfg/error.hpp"

namespace wfg {

namespace {

std::uint64_t mask(unsigned width) { return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1; }

} // namespace

Value eval_expr(const ExprPtr& e, const Env& env) {
  const auto& args = e->args();
  switch (e->op()) {
  case Op::Var: {
    auto it = env.find(e->name());
    if (it == env.end()) throw EvalError("unbound variable '" + e->name() + "'");
    if (!same_sort(it->second.sort(), e->sort())) {
      throw EvalError("variable '" + e->name() + "' bound to " + it->second.to_string() + ", expected sort " +
                      e->sort()->to_string());
    }
    return it->second;
  }
  case Op::Const: return e->constant();
  case Op::Field: return eval_expr(args[0], env).items().at(e->indices()[0]);
  case Op::Update: {
    Value r = eval_expr(args[0], env);
    std::vector<Value> fields = r.items();
    for (std::size_t i = 0; i < e->indices().size(); ++i) fields[e->indices()[i]] = eval_expr(args[i + 1], env);
    return Value::record(e->sort(), std::move(fields));
  }
  case Op::Make:
  case Op::Tuple: {
    std::vector<Value> items;
    items.reserve(args.size());
    for (const auto& a : args) items.push_back(eval_expr(a, env));
    return e->op() == Op::Make ? Value::record(e->sort(), std::move(items)) : Value::tuple(e->sort(), std::move(items));
  }
  case Op::Ite: return eval_expr(args[0], env).as_bool() ? eval_expr(args[1], env) : eval_expr(args[2], env);
  case Op::Case: {
    const std::uint64_t x = eval_expr(args[0], env).as_nat();
    for (std::size_t i = 0; i < e->case_keys().size(); ++i) {
      for (auto k : e->case_keys()[i]) {
        if (k == x) return eval_expr(args[i + 1], env);
      }
    }
    return eval_expr(args.back(), env);
  }
  case Op::Eq: return Value::boolean(eval_expr(args[0], env) == eval_expr(args[1], env));
  case Op::Lt: return Value::boolean(eval_expr(args[0], env).as_nat() < eval_expr(args[1], env).as_nat());
  case Op::Le: return Value::boolean(eval_expr(args[0], env).as_nat() <= eval_expr(args[1], env).as_nat());
  case Op::Add: {
    const unsigned w = e->sort()->width();
    return Value::nat((eval_expr(args[0], env).as_nat() + eval_expr(args[1], env).as_nat()) & mask(w), w);
  }
  case Op::Sub: {
    const auto a = eval_expr(args[0], env).as_nat();
    const auto b = eval_expr(args[1], env).as_nat();
    return Value::nat(a >= b ? a - b : 0, e->sort()->width());
  }
  case Op::Not: return Value::boolean(!eval_expr(args[0], env).as_bool());
  case Op::And:
    for (const auto& a : args) {
      if (!eval_expr(a, env).as_bool()) return Value::boolean(false);
    }
    return Value::boolean(true);
  case Op::Or:
    for (const auto& a : args) {
      if (eval_expr(a, env).as_bool()) return Value::boolean(true);
    }
    return Value::boolean(false);
  }
  throw EvalError("unknown operator");
}

} // namespace wfg
