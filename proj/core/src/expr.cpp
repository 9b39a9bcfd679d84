#include "wfg/expr.hpp"

#include "wfg/error.hpp"

#include <unordered_map>

namespace wfg {

Expr::Expr(Init init)
    : op_(init.op), sort_(std::move(init.sort)), name_(std::move(init.name)),
      constant_(std::move(init.constant)), args_(std::move(init.args)),
      indices_(std::move(init.indices)), case_keys_(std::move(init.case_keys)) {}

namespace {

ExprPtr make_expr(Expr::Init init) { return std::make_shared<const Expr>(std::move(init)); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw SortError(msg);
}

void require_bool(const ExprPtr& e, const char* op) {
  require(e->sort()->kind() == SortKind::Bool,
          std::string(op) + ": expected bool operand, got " + e->sort()->to_string() + " in " + to_string(e));
}

void require_nat_pair(const ExprPtr& a, const ExprPtr& b, const char* op) {
  require(a->sort()->kind() == SortKind::Nat && b->sort()->kind() == SortKind::Nat,
          std::string(op) + ": expected nat operands in " + to_string(a) + ", " + to_string(b));
  require(a->sort()->width() == b->sort()->width(),
          std::string(op) + ": width mismatch " + a->sort()->to_string() + " vs " + b->sort()->to_string());
}

} // namespace

namespace ex {

ExprPtr var(std::string name, SortPtr sort) {
  require(sort != nullptr, "variable '" + name + "' has no sort");
  return make_expr({Op::Var, std::move(sort), std::move(name), {}, {}, {}, {}});
}

ExprPtr constant(Value v) {
  auto sort = v.sort();
  return make_expr({Op::Const, std::move(sort), {}, std::move(v), {}, {}, {}});
}

ExprPtr boolean(bool b) { return constant(Value::boolean(b)); }

ExprPtr nat(std::uint64_t v, unsigned width) { return constant(Value::nat(v, width)); }

ExprPtr field(ExprPtr record, std::string_view name) {
  const auto& s = record->sort();
  require(s->kind() == SortKind::Record || s->kind() == SortKind::Tuple,
          "field access '" + std::string(name) + "' on non-record " + s->to_string());
  auto idx = s->field_index(name);
  require(idx.has_value(), "unknown field '" + std::string(name) + "' of " + s->to_string());
  auto fs = s->fields()[*idx].sort;
  return make_expr({Op::Field, std::move(fs), std::string(name), {}, {std::move(record)}, {*idx}, {}});
}

ExprPtr update(ExprPtr record, std::vector<std::pair<std::string, ExprPtr>> changes) {
  const auto s = record->sort();
  require(s->kind() == SortKind::Record, "update of non-record " + s->to_string());
  std::vector<ExprPtr> args{std::move(record)};
  std::vector<std::size_t> idx;
  for (auto& [name, value] : changes) {
    auto i = s->field_index(name);
    require(i.has_value(), "unknown field '" + name + "' of " + s->name());
    for (auto prev : idx) require(prev != *i, "field '" + name + "' updated twice");
    require(same_sort(value->sort(), s->fields()[*i].sort),
            "update of '" + name + "' expects " + s->fields()[*i].sort->to_string() + ", got " +
                value->sort()->to_string());
    idx.push_back(*i);
    args.push_back(std::move(value));
  }
  return make_expr({Op::Update, s, {}, {}, std::move(args), std::move(idx), {}});
}

ExprPtr make(SortPtr record_sort, std::vector<ExprPtr> fields) {
  require(record_sort->kind() == SortKind::Record, "make of non-record sort");
  require(fields.size() == record_sort->fields().size(), "make " + record_sort->name() + ": wrong field count");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    require(same_sort(fields[i]->sort(), record_sort->fields()[i].sort),
            "make " + record_sort->name() + ": field '" + record_sort->fields()[i].name + "' expects " +
                record_sort->fields()[i].sort->to_string());
  }
  return make_expr({Op::Make, std::move(record_sort), {}, {}, std::move(fields), {}, {}});
}

ExprPtr tuple(std::vector<std::pair<std::string, ExprPtr>> items) {
  std::vector<Field> fields;
  std::vector<ExprPtr> args;
  for (auto& [k, e] : items) {
    fields.push_back({k, e->sort()});
    args.push_back(std::move(e));
  }
  return make_expr({Op::Tuple, Sort::tuple(std::move(fields)), {}, {}, std::move(args), {}, {}});
}

ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b) {
  require_bool(c, "if");
  require(same_sort(a->sort(), b->sort()),
          "if: branch sorts differ: " + a->sort()->to_string() + " vs " + b->sort()->to_string());
  auto s = a->sort();
  return make_expr({Op::Ite, std::move(s), {}, {}, {std::move(c), std::move(a), std::move(b)}, {}, {}});
}

ExprPtr case_nat(ExprPtr scrutinee, std::vector<std::pair<std::vector<std::uint64_t>, ExprPtr>> arms,
                 ExprPtr otherwise) {
  require(scrutinee->sort()->kind() == SortKind::Nat, "case: scrutinee must be a nat");
  require(otherwise != nullptr, "case: a default arm is required");
  const unsigned w = scrutinee->sort()->width();
  std::vector<ExprPtr> args{std::move(scrutinee)};
  std::vector<std::vector<std::uint64_t>> keys;
  std::set<std::uint64_t> seen;
  for (auto& [ks, body] : arms) {
    require(!ks.empty(), "case: empty key list");
    for (auto k : ks) {
      require(w >= 64 || (k >> w) == 0, "case: key " + std::to_string(k) + " exceeds scrutinee width");
      require(seen.insert(k).second, "case: duplicate key " + std::to_string(k));
    }
    require(same_sort(body->sort(), otherwise->sort()), "case: arm sorts differ");
    keys.push_back(std::move(ks));
    args.push_back(std::move(body));
  }
  auto s = otherwise->sort();
  args.push_back(std::move(otherwise));
  return make_expr({Op::Case, std::move(s), {}, {}, std::move(args), {}, std::move(keys)});
}

ExprPtr eq(ExprPtr a, ExprPtr b) {
  require(same_sort(a->sort(), b->sort()),
          "=: operand sorts differ: " + a->sort()->to_string() + " vs " + b->sort()->to_string());
  return make_expr({Op::Eq, Sort::boolean(), {}, {}, {std::move(a), std::move(b)}, {}, {}});
}

ExprPtr lt(ExprPtr a, ExprPtr b) {
  require_nat_pair(a, b, "<");
  return make_expr({Op::Lt, Sort::boolean(), {}, {}, {std::move(a), std::move(b)}, {}, {}});
}

ExprPtr le(ExprPtr a, ExprPtr b) {
  require_nat_pair(a, b, "<=");
  return make_expr({Op::Le, Sort::boolean(), {}, {}, {std::move(a), std::move(b)}, {}, {}});
}

ExprPtr add(ExprPtr a, ExprPtr b) {
  require_nat_pair(a, b, "+");
  auto s = a->sort();
  return make_expr({Op::Add, std::move(s), {}, {}, {std::move(a), std::move(b)}, {}, {}});
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  require_nat_pair(a, b, "-");
  auto s = a->sort();
  return make_expr({Op::Sub, std::move(s), {}, {}, {std::move(a), std::move(b)}, {}, {}});
}

ExprPtr not_(ExprPtr a) {
  require_bool(a, "not");
  return make_expr({Op::Not, Sort::boolean(), {}, {}, {std::move(a)}, {}, {}});
}

ExprPtr and_(std::vector<ExprPtr> xs) {
  if (xs.empty()) return boolean(true);
  if (xs.size() == 1) {
    require_bool(xs[0], "and");
    return xs[0];
  }
  for (const auto& x : xs) require_bool(x, "and");
  return make_expr({Op::And, Sort::boolean(), {}, {}, std::move(xs), {}, {}});
}

ExprPtr or_(std::vector<ExprPtr> xs) {
  if (xs.empty()) return boolean(false);
  if (xs.size() == 1) {
    require_bool(xs[0], "or");
    return xs[0];
  }
  for (const auto& x : xs) require_bool(x, "or");
  return make_expr({Op::Or, Sort::boolean(), {}, {}, std::move(xs), {}, {}});
}

ExprPtr implies(ExprPtr a, ExprPtr b) { return or_({not_(std::move(a)), std::move(b)}); }

ExprPtr iff(ExprPtr a, ExprPtr b) {
  require_bool(a, "iff");
  require_bool(b, "iff");
  return eq(std::move(a), std::move(b));
}

ExprPtr lex_lt(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  require(a.size() == b.size(), "lexicographic comparison of tuples with different lengths");
  ExprPtr result = boolean(false);
  for (std::size_t i = a.size(); i-- > 0;) {
    result = or_({lt(a[i], b[i]), and_({eq(a[i], b[i]), result})});
  }
  return result;
}

ExprPtr lex_le(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  require(a.size() == b.size(), "lexicographic comparison of tuples with different lengths");
  ExprPtr result = boolean(true);
  for (std::size_t i = a.size(); i-- > 0;) {
    result = or_({lt(a[i], b[i]), and_({eq(a[i], b[i]), result})});
  }
  return result;
}

} // namespace ex

namespace {

void collect_free(const ExprPtr& e, std::set<std::string>& out, std::set<const Expr*>& seen) {
  if (!seen.insert(e.get()).second) return;
  if (e->op() == Op::Var) {
    out.insert(e->name());
    return;
  }
  for (const auto& a : e->args()) collect_free(a, out, seen);
}

ExprPtr subst_rec(const ExprPtr& e, const std::map<std::string, ExprPtr>& s,
                  std::unordered_map<const Expr*, ExprPtr>& memo) {
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  ExprPtr out;
  if (e->op() == Op::Var) {
    auto it = s.find(e->name());
    if (it == s.end()) {
      out = e;
    } else {
      require(same_sort(it->second->sort(), e->sort()),
              "substitution for '" + e->name() + "' has sort " + it->second->sort()->to_string() +
                  ", expected " + e->sort()->to_string());
      out = it->second;
    }
  } else if (e->args().empty()) {
    out = e;
  } else {
    std::vector<ExprPtr> args;
    bool changed = false;
    for (const auto& a : e->args()) {
      args.push_back(subst_rec(a, s, memo));
      changed = changed || args.back() != a;
    }
    if (!changed) {
      out = e;
    } else {
      out = make_expr({e->op(), e->sort(), e->name(), e->constant(), std::move(args), e->indices(),
                       e->case_keys()});
    }
  }
  memo.emplace(e.get(), out);
  return out;
}

void render(const ExprPtr& e, std::string& out) {
  auto list = [&](const char* head) {
    out += '(';
    out += head;
    for (const auto& a : e->args()) {
      out += ' ';
      render(a, out);
    }
    out += ')';
  };
  switch (e->op()) {
  case Op::Var: out += e->name(); return;
  case Op::Const:
    if (e->sort()->kind() == SortKind::Bool) {
      out += e->constant().as_bool() ? "t" : "nil";
    } else if (e->sort()->kind() == SortKind::Enum) {
      out += "(enum " + e->sort()->name() + " " + e->constant().enum_symbol() + ")";
    } else if (e->sort()->kind() == SortKind::Nat) {
      out += std::to_string(e->constant().as_nat());
    } else {
      out += "(quote " + e->constant().to_string() + ")";
    }
    return;
  case Op::Field:
    render(e->args()[0], out);
    out += "." + e->name();
    return;
  case Op::Update:
    out += "(update ";
    render(e->args()[0], out);
    for (std::size_t i = 0; i < e->indices().size(); ++i) {
      out += " :" + e->sort()->fields()[e->indices()[i]].name + " ";
      render(e->args()[i + 1], out);
    }
    out += ')';
    return;
  case Op::Make:
    out += "(make " + e->sort()->name();
    for (std::size_t i = 0; i < e->args().size(); ++i) {
      out += " :" + e->sort()->fields()[i].name + " ";
      render(e->args()[i], out);
    }
    out += ')';
    return;
  case Op::Tuple:
    out += "(tuple";
    for (std::size_t i = 0; i < e->args().size(); ++i) {
      out += " (:" + e->sort()->fields()[i].name + " ";
      render(e->args()[i], out);
      out += ')';
    }
    out += ')';
    return;
  case Op::Ite: list("if"); return;
  case Op::Case: {
    out += "(case ";
    render(e->args()[0], out);
    for (std::size_t i = 0; i < e->case_keys().size(); ++i) {
      out += " (";
      const auto& ks = e->case_keys()[i];
      if (ks.size() == 1) {
        out += std::to_string(ks[0]);
      } else {
        out += '(';
        for (std::size_t k = 0; k < ks.size(); ++k) {
          if (k) out += ' ';
          out += std::to_string(ks[k]);
        }
        out += ')';
      }
      out += ' ';
      render(e->args()[i + 1], out);
      out += ')';
    }
    out += " (t ";
    render(e->args().back(), out);
    out += "))";
    return;
  }
  case Op::Eq: list("="); return;
  case Op::Lt: list("<"); return;
  case Op::Le: list("<="); return;
  case Op::Add: list("+"); return;
  case Op::Sub: list("-"); return;
  case Op::Not: list("not"); return;
  case Op::And: list("and"); return;
  case Op::Or: list("or"); return;
  }
}

} // namespace

std::set<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> out;
  std::set<const Expr*> seen;
  collect_free(e, out, seen);
  return out;
}

ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& subst) {
  if (subst.empty()) return e;
  std::unordered_map<const Expr*, ExprPtr> memo;
  return subst_rec(e, subst, memo);
}

std::string to_string(const ExprPtr& e) {
  std::string out;
  render(e, out);
  return out;
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (a->op() != b->op() || !same_sort(a->sort(), b->sort())) return false;
  if (a->name() != b->name() || a->indices() != b->indices() || a->case_keys() != b->case_keys()) return false;
  if (a->op() == Op::Const && !(a->constant() == b->constant())) return false;
  if (a->args().size() != b->args().size()) return false;
  for (std::size_t i = 0; i < a->args().size(); ++i) {
    if (!same_expr(a->args()[i], b->args()[i])) return false;
  }
  return true;
}

} // namespace wfg
