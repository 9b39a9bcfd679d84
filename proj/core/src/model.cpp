#include "wfg/model.hpp"

#include "wfg/error.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace wfg {

namespace {

std::string at(const SExpr& e) { return std::to_string(e.line) + ":" + std::to_string(e.column) + ": "; }

[[noreturn]] void sort_fail(const SExpr& e, const std::string& msg) { throw SortError(at(e) + msg); }

[[noreturn]] void syntax_fail(const SExpr& e, const std::string& msg) { throw ParseError(msg, e.line, e.column); }

template <class F>
ExprPtr guarded(const SExpr& e, F&& build) {
  try {
    return build();
  } catch (const SortError& err) {
    sort_fail(e, err.what());
  } catch (const EvalError& err) {
    sort_fail(e, err.what());
  }
}

const std::string& symbol_text(const SExpr& e, const char* what) {
  if (!e.is_symbol()) syntax_fail(e, std::string("expected ") + what + ", got " + to_string(e));
  return e.text;
}

} // namespace

class ModelBuilder {
public:
  ModelBuilder(Model& m, const ParamOverrides& overrides) : m_(m), overrides_(overrides) {}

  void build(std::string_view text) {
    auto forms = read_sexprs(text);
    if (forms.empty()) throw ParseError("expected model header", 1, 1);
    SExpr& top = forms.front();
    if (!top.is_form("model")) syntax_fail(top, "expected model header");
    if (forms.size() > 1) syntax_fail(forms[1], "unexpected form after the model");
    if (top.items.size() < 2) syntax_fail(top, "model needs a name");
    m_.name_ = symbol_text(top.items[1], "model name");

    for (std::size_t i = 2; i < top.items.size(); ++i) {
      SExpr& d = top.items[i];
      if (!d.is_list() || d.items.empty() || !d.items[0].is_symbol()) syntax_fail(d, "expected a declaration");
      declare(d);
    }
    for (const auto& [name, _] : overrides_) {
      if (!m_.params_.count(name)) throw SortError("unknown parameter '" + name + "'");
    }
    if (!m_.state_sort_) syntax_fail(top, "model has no (state ...) declaration");
    for (const auto& map : m_.maps_) {
      if (map.relation == RelationKind::Step) {
        if (!m_.init_) sort_fail(top, "map '" + map.name + "' uses the step relation but the model has no init");
        if (!m_.role("next") || !m_.role("done")) {
          sort_fail(top, "map '" + map.name + "' uses the step relation but next/done are not bound");
        }
      } else if (!m_.role("blok")) {
        sort_fail(top, "map '" + map.name + "' uses the blok relation but blok is not bound");
      }
    }
    m_.forms_ = std::move(forms);
  }

private:
  using Scope = std::map<std::string, SortPtr, std::less<>>;

  void declare(SExpr& d) {
    const std::string& head = d.items[0].text;
    if (head == "param") return declare_param(d);
    if (head == "enum") return declare_enum(d);
    if (head == "record") return declare_record(d);
    if (head == "state" || head == "shared") return declare_state(d, head == "state");
    if (head == "define") return declare_define(d);
    if (head == "next" || head == "shared-next" || head == "blok" || head == "done") return declare_role(d, head);
    if (head == "init") return declare_init(d);
    if (head == "invariant") return declare_invariant(d);
    if (head == "map") return declare_map(d);
    syntax_fail(d, "unknown declaration '" + head + "'");
  }

  void fresh_name(const SExpr& e, const std::string& name) {
    if (!names_.insert(name).second) sort_fail(e, "duplicate definition of '" + name + "'");
  }

  void declare_param(SExpr& d) {
    if (d.items.size() != 3 || !d.items[2].is_integer()) syntax_fail(d, "expected (param NAME INTEGER)");
    const auto& name = symbol_text(d.items[1], "parameter name");
    fresh_name(d.items[1], name);
    std::uint64_t v = d.items[2].integer;
    if (auto it = overrides_.find(name); it != overrides_.end()) {
      if (it->second < 0) throw SortError("parameter '" + name + "' must be non-negative");
      v = static_cast<std::uint64_t>(it->second);
      d.items[2].integer = v;
      d.items[2].text = std::to_string(v);
    }
    if (v > 0xffffffffULL) sort_fail(d.items[2], "parameter '" + name + "' is too large");
    m_.params_[name] = static_cast<std::int64_t>(v);
  }

  void declare_enum(const SExpr& d) {
    if (d.items.size() < 3) syntax_fail(d, "expected (enum NAME SYMBOL...)");
    const auto& name = symbol_text(d.items[1], "enum name");
    fresh_name(d.items[1], name);
    std::vector<std::string> syms;
    for (std::size_t i = 2; i < d.items.size(); ++i) syms.push_back(symbol_text(d.items[i], "enum symbol"));
    try {
      m_.sorts_[name] = Sort::enumeration(name, std::move(syms));
    } catch (const SortError& e) {
      sort_fail(d, e.what());
    }
  }

  void declare_record(const SExpr& d) {
    if (d.items.size() < 3) syntax_fail(d, "expected (record NAME (FIELD SORT)...)");
    const auto& name = symbol_text(d.items[1], "record name");
    fresh_name(d.items[1], name);
    std::vector<Field> fields;
    std::set<std::string> seen;
    for (std::size_t i = 2; i < d.items.size(); ++i) {
      const SExpr& f = d.items[i];
      if (!f.is_list() || f.items.size() != 2) syntax_fail(f, "expected (FIELD SORT)");
      const auto& fname = symbol_text(f.items[0], "field name");
      if (fname.find('.') != std::string::npos) syntax_fail(f.items[0], "field names may not contain '.'");
      if (!seen.insert(fname).second) sort_fail(f, "duplicate field '" + fname + "'");
      fields.push_back({fname, parse_sort(f.items[1])});
    }
    m_.sorts_[name] = Sort::record(name, std::move(fields));
  }

  void declare_state(const SExpr& d, bool state) {
    if (d.items.size() != 2) syntax_fail(d, "expected (state SORT)");
    auto s = parse_sort(d.items[1]);
    if (s->kind() != SortKind::Record) sort_fail(d.items[1], "state sorts must be records");
    auto& slot = state ? m_.state_sort_ : m_.shared_sort_;
    if (slot) sort_fail(d, std::string("duplicate ") + (state ? "state" : "shared") + " declaration");
    slot = s;
  }

  VarDecls parse_params(const SExpr& list, Scope& scope) {
    if (!list.is_list()) syntax_fail(list, "expected a parameter list");
    VarDecls out;
    for (const auto& p : list.items) {
      if (!p.is_list() || p.items.size() != 2) syntax_fail(p, "expected (NAME SORT)");
      const auto& pname = symbol_text(p.items[0], "parameter name");
      if (scope.count(pname)) sort_fail(p, "duplicate parameter '" + pname + "'");
      auto s = parse_sort(p.items[1]);
      scope[pname] = s;
      out.emplace_back(pname, s);
    }
    return out;
  }

  void declare_define(const SExpr& d) {
    if (d.items.size() != 5) syntax_fail(d, "expected (define NAME (PARAMS) SORT BODY)");
    const auto& name = symbol_text(d.items[1], "function name");
    fresh_name(d.items[1], name);
    Scope scope;
    FunctionDef f;
    f.name = name;
    f.params = parse_params(d.items[2], scope);
    f.result = parse_sort(d.items[3]);
    f.body = elab(d.items[4], scope, f.result);
    m_.functions_.push_back(std::move(f));
  }

  const FunctionDef& lookup_function(const SExpr& e) {
    const auto& name = symbol_text(e, "function name");
    for (const auto& f : m_.functions_) {
      if (f.name == name) return f;
    }
    sort_fail(e, "unknown function '" + name + "'");
  }

  void declare_role(const SExpr& d, const std::string& role) {
    if (d.items.size() != 2) syntax_fail(d, "expected (" + role + " FUNCTION)");
    if (m_.roles_.count(role)) sort_fail(d, "duplicate " + role + " declaration");
    const auto& f = lookup_function(d.items[1]);
    if (!m_.state_sort_) sort_fail(d, "declare the state sort before binding " + role);
    const auto& st = m_.state_sort_;
    auto sig_ok = [&](std::vector<SortPtr> params, const SortPtr& result) {
      if (f.params.size() != params.size() || !same_sort(f.result, result)) return false;
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (!same_sort(f.params[i].second, params[i])) return false;
      }
      return true;
    };
    bool ok = false;
    if (role == "next" || role == "shared-next") {
      if (!m_.shared_sort_) sort_fail(d, "declare the shared sort before binding " + role);
      const auto& sh = m_.shared_sort_;
      ok = role == "next" ? sig_ok({st, sh}, st) : sig_ok({sh, st}, sh);
    } else if (role == "blok") {
      ok = sig_ok({st, st}, Sort::boolean());
    } else {
      ok = sig_ok({st}, Sort::boolean());
    }
    if (!ok) sort_fail(d.items[1], "function '" + f.name + "' has the wrong signature for " + role);
    m_.roles_[role] = f.name;
  }

  void declare_init(const SExpr& d) {
    if (d.items.size() != 4) syntax_fail(d, "expected (init (PARAMS) HYP TERM)");
    if (m_.init_) sort_fail(d, "duplicate init declaration");
    if (!m_.state_sort_) sort_fail(d, "declare the state sort before init");
    Scope scope;
    InitDecl init;
    init.vars = parse_params(d.items[1], scope);
    init.hyp = elab(d.items[2], scope, Sort::boolean());
    init.term = elab(d.items[3], scope, m_.state_sort_);
    m_.init_ = std::move(init);
  }

  std::string bound_var(const SExpr& list, Scope& scope) {
    if (!list.is_list() || list.items.size() != 1) syntax_fail(list, "expected (VAR)");
    const auto& v = symbol_text(list.items[0], "variable");
    if (!m_.state_sort_) sort_fail(list, "declare the state sort first");
    scope[v] = m_.state_sort_;
    return v;
  }

  void declare_invariant(const SExpr& d) {
    if (d.items.size() != 4 && d.items.size() != 6) syntax_fail(d, "expected (invariant NAME (VAR) BODY [:split (EXPR...)])");
    const auto& name = symbol_text(d.items[1], "invariant name");
    fresh_name(d.items[1], name);
    Scope scope;
    InvariantDecl inv;
    inv.name = name;
    inv.var = bound_var(d.items[2], scope);
    inv.body = elab(d.items[3], scope, Sort::boolean());
    if (d.items.size() == 6) {
      if (!d.items[4].is_keyword() || d.items[4].text != "split" || !d.items[5].is_list()) {
        syntax_fail(d.items[4], "expected :split (EXPR...)");
      }
      for (const auto& e : d.items[5].items) inv.split.push_back(elab(e, scope, nullptr));
    }
    m_.invariants_.push_back(std::move(inv));
  }

  void declare_map(const SExpr& d) {
    if (d.items.size() < 3) syntax_fail(d, "expected (map NAME (VAR) :node EXPR :measures (...) :relation REL)");
    const auto& name = symbol_text(d.items[1], "map name");
    fresh_name(d.items[1], name);
    Scope scope;
    MapDecl m;
    m.name = name;
    m.var = bound_var(d.items[2], scope);
    bool have_node = false, have_measures = false, have_relation = false;
    for (std::size_t i = 3; i < d.items.size(); i += 2) {
      const SExpr& key = d.items[i];
      if (!key.is_keyword()) syntax_fail(key, "expected a keyword");
      if (i + 1 >= d.items.size()) syntax_fail(key, "missing value for :" + key.text);
      const SExpr& val = d.items[i + 1];
      if (key.text == "node") {
        if (have_node) sort_fail(key, "duplicate :node");
        have_node = true;
        m.node = elab(val, scope, nullptr);
        if (m.node->sort()->kind() != SortKind::Tuple) sort_fail(val, "map node must be a tuple");
      } else if (key.text == "measures") {
        if (have_measures) sort_fail(key, "duplicate :measures");
        have_measures = true;
        if (!val.is_list()) syntax_fail(val, "expected ((NAME EXPR...)...)");
        std::set<std::string> seen;
        for (const auto& ms : val.items) {
          if (!ms.is_list() || ms.items.size() < 2) syntax_fail(ms, "expected (NAME EXPR...)");
          MeasureDecl md;
          md.name = symbol_text(ms.items[0], "measure name");
          if (!seen.insert(md.name).second) sort_fail(ms, "duplicate measure '" + md.name + "'");
          for (std::size_t k = 1; k < ms.items.size(); ++k) {
            auto c = elab(ms.items[k], scope, nullptr);
            if (c->sort()->kind() != SortKind::Nat) sort_fail(ms.items[k], "measure components must be naturals");
            md.components.push_back(std::move(c));
          }
          m.measures.push_back(std::move(md));
        }
      } else if (key.text == "relation") {
        if (have_relation) sort_fail(key, "duplicate :relation");
        have_relation = true;
        if (val.is_symbol("step")) {
          m.relation = RelationKind::Step;
        } else if (val.is_form("blok") && val.items.size() == 2) {
          m.relation = RelationKind::Blok;
          m.invariant = symbol_text(val.items[1], "invariant name");
          bool found = false;
          for (const auto& inv : m_.invariants_) found = found || inv.name == m.invariant;
          if (!found) sort_fail(val.items[1], "unknown invariant '" + m.invariant + "'");
        } else {
          syntax_fail(val, "expected step or (blok INVARIANT)");
        }
      } else {
        syntax_fail(key, "unknown map option :" + key.text);
      }
    }
    if (!have_node) sort_fail(d, "map '" + name + "' has no :node");
    m_.maps_.push_back(std::move(m));
  }

  std::uint64_t param_or_int(const SExpr& e) {
    if (e.is_integer()) return e.integer;
    if (e.is_symbol()) {
      auto it = m_.params_.find(e.text);
      if (it != m_.params_.end()) return static_cast<std::uint64_t>(it->second);
    }
    if (e.is_form("bits") && e.items.size() == 2) return bits_for(param_or_int(e.items[1]));
    sort_fail(e, "expected an integer, parameter or (bits ...), got " + to_string(e));
  }

  SortPtr parse_sort(const SExpr& e) {
    if (e.is_symbol("bool")) return Sort::boolean();
    if (e.is_symbol()) {
      auto it = m_.sorts_.find(e.text);
      if (it == m_.sorts_.end()) sort_fail(e, "unknown sort '" + e.text + "'");
      return it->second;
    }
    if (e.is_form("nat") && e.items.size() == 2) {
      auto w = param_or_int(e.items[1]);
      if (w < 1 || w > Sort::kMaxNatWidth) sort_fail(e, "nat width must be in 1.." + std::to_string(Sort::kMaxNatWidth));
      return Sort::nat(static_cast<unsigned>(w));
    }
    sort_fail(e, "unknown sort " + to_string(e));
  }

  // Expressions.

  bool is_param_ref(const SExpr& e, const Scope& scope) const {
    return e.is_symbol() && !scope.count(e.text) && m_.params_.count(e.text);
  }

  bool is_literal(const SExpr& e, const Scope& scope) const { return e.is_integer() || is_param_ref(e, scope); }

  std::uint64_t literal_value(const SExpr& e) const {
    return e.is_integer() ? e.integer : static_cast<std::uint64_t>(m_.params_.at(e.text));
  }

  ExprPtr nat_literal(const SExpr& e, const SortPtr& expected) {
    const std::uint64_t v = literal_value(e);
    if (!expected) return ex::nat(v, bits_for(v));
    if (expected->kind() != SortKind::Nat) {
      sort_fail(e, "natural literal " + std::to_string(v) + " where " + expected->to_string() + " is expected");
    }
    if (expected->width() < 64 && (v >> expected->width()) != 0) {
      sort_fail(e, "literal " + std::to_string(v) + " does not fit in " + expected->to_string());
    }
    return ex::nat(v, expected->width());
  }

  ExprPtr check(const SExpr& e, ExprPtr x, const SortPtr& expected) {
    if (expected && !same_sort(x->sort(), expected)) {
      sort_fail(e, "expected " + expected->to_string() + ", got " + x->sort()->to_string() + " in " + to_string(e));
    }
    return x;
  }

  // Elaborates a group of expressions that must share one sort.
  std::vector<ExprPtr> elab_same(const std::vector<const SExpr*>& es, const Scope& scope, SortPtr expected) {
    std::vector<ExprPtr> out(es.size());
    if (!expected) {
      for (std::size_t i = 0; i < es.size() && !expected; ++i) {
        if (!is_literal(*es[i], scope)) {
          out[i] = elab(*es[i], scope, nullptr);
          expected = out[i]->sort();
        }
      }
      if (!expected) {
        unsigned w = 1;
        for (const auto* e : es) w = std::max(w, bits_for(literal_value(*e)));
        if (w > Sort::kMaxNatWidth) sort_fail(*es[0], "literal too large");
        expected = Sort::nat(w);
      }
    }
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (!out[i]) out[i] = elab(*es[i], scope, expected);
    }
    return out;
  }

  ExprPtr elab(const SExpr& e, const Scope& scope, const SortPtr& expected) {
    switch (e.kind) {
    case SExpr::Kind::Integer: return nat_literal(e, expected);
    case SExpr::Kind::Keyword: sort_fail(e, "unexpected keyword :" + e.text);
    case SExpr::Kind::Symbol: return check(e, elab_symbol(e, scope, expected), expected);
    case SExpr::Kind::List: break;
    }
    if (e.items.empty()) sort_fail(e, "empty expression");
    if (!e.items[0].is_symbol()) sort_fail(e, "expected an operator, got " + to_string(e.items[0]));
    return check(e, elab_form(e, scope, expected), expected);
  }

  ExprPtr elab_symbol(const SExpr& e, const Scope& scope, const SortPtr& expected) {
    const std::string& s = e.text;
    if (s == "t") return ex::boolean(true);
    if (s == "nil") return ex::boolean(false);
    if (auto it = scope.find(s); it != scope.end()) return ex::var(s, it->second);
    if (m_.params_.count(s)) return nat_literal(e, expected);
    if (auto dot = s.find('.'); dot != std::string::npos && dot > 0) {
      auto it = scope.find(std::string_view(s).substr(0, dot));
      if (it == scope.end()) sort_fail(e, "unknown variable '" + s.substr(0, dot) + "'");
      ExprPtr x = ex::var(it->first, it->second);
      std::size_t pos = dot + 1;
      for (;;) {
        auto next = s.find('.', pos);
        std::string fname = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        const auto& rs = x->sort();
        if ((rs->kind() != SortKind::Record && rs->kind() != SortKind::Tuple) || !rs->field_index(fname)) {
          sort_fail(e, "unknown field '" + fname + "' of " + rs->to_string());
        }
        x = ex::field(x, fname);
        if (next == std::string::npos) break;
        pos = next + 1;
      }
      return x;
    }
    if (expected && expected->kind() == SortKind::Enum) {
      if (auto idx = expected->symbol_index(s)) return ex::constant(Value::enumeration(expected, *idx));
    }
    sort_fail(e, "unknown variable '" + s + "'");
  }

  std::vector<ExprPtr> elab_bools(const SExpr& e, const Scope& scope) {
    std::vector<ExprPtr> xs;
    for (std::size_t i = 1; i < e.items.size(); ++i) xs.push_back(elab(e.items[i], scope, Sort::boolean()));
    return xs;
  }

  void arity(const SExpr& e, std::size_t n) {
    if (e.items.size() != n + 1) {
      sort_fail(e, "'" + e.items[0].text + "' expects " + std::to_string(n) + " argument(s), got " +
                       std::to_string(e.items.size() - 1));
    }
  }

  ExprPtr elab_form(const SExpr& e, const Scope& scope, const SortPtr& expected) {
    const std::string& op = e.items[0].text;
    const auto& it = e.items;

    if (op == "if") {
      arity(e, 3);
      auto c = elab(it[1], scope, Sort::boolean());
      auto ab = elab_same({&it[2], &it[3]}, scope, expected);
      return guarded(e, [&] { return ex::ite(c, ab[0], ab[1]); });
    }
    if (op == "case") return elab_case(e, scope, expected);
    if (op == "=" || op == "<" || op == "<=" || op == ">" || op == ">=") {
      arity(e, 2);
      auto ab = elab_same({&it[1], &it[2]}, scope, nullptr);
      return guarded(e, [&] {
        if (op == "=") return ex::eq(ab[0], ab[1]);
        if (op == "<") return ex::lt(ab[0], ab[1]);
        if (op == "<=") return ex::le(ab[0], ab[1]);
        if (op == ">") return ex::gt(ab[0], ab[1]);
        return ex::ge(ab[0], ab[1]);
      });
    }
    if (op == "+" || op == "-") {
      arity(e, 2);
      auto ab = elab_same({&it[1], &it[2]}, scope, expected);
      return guarded(e, [&] { return op == "+" ? ex::add(ab[0], ab[1]) : ex::sub(ab[0], ab[1]); });
    }
    if (op == "1+" || op == "1-") {
      arity(e, 1);
      auto x = elab(it[1], scope, expected);
      if (x->sort()->kind() != SortKind::Nat) sort_fail(e, op + " expects a natural");
      auto one = ex::nat(1, x->sort()->width());
      return op == "1+" ? ex::add(x, one) : ex::sub(x, one);
    }
    if (op == "not") {
      arity(e, 1);
      return ex::not_(elab(it[1], scope, Sort::boolean()));
    }
    if (op == "and") return ex::and_(elab_bools(e, scope));
    if (op == "or") return ex::or_(elab_bools(e, scope));
    if (op == "implies" || op == "iff") {
      arity(e, 2);
      auto xs = elab_bools(e, scope);
      return op == "implies" ? ex::implies(xs[0], xs[1]) : ex::iff(xs[0], xs[1]);
    }
    if (op == "update") {
      if (it.size() < 2 || it.size() % 2 != 0) sort_fail(e, "expected (update RECORD :FIELD EXPR...)");
      auto r = elab(it[1], scope, expected);
      const auto& rs = r->sort();
      if (rs->kind() != SortKind::Record) sort_fail(it[1], "update of non-record " + rs->to_string());
      std::vector<std::pair<std::string, ExprPtr>> changes;
      for (std::size_t i = 2; i < it.size(); i += 2) {
        if (!it[i].is_keyword()) syntax_fail(it[i], "expected a field keyword");
        auto idx = rs->field_index(it[i].text);
        if (!idx) sort_fail(it[i], "unknown field '" + it[i].text + "' of " + rs->name());
        changes.emplace_back(it[i].text, elab(it[i + 1], scope, rs->fields()[*idx].sort));
      }
      return guarded(e, [&] { return ex::update(r, std::move(changes)); });
    }
    if (op == "make") {
      if (it.size() < 2 || it.size() % 2 != 0) sort_fail(e, "expected (make SORT :FIELD EXPR...)");
      auto rs = parse_sort(it[1]);
      if (rs->kind() != SortKind::Record) sort_fail(it[1], "make of non-record " + rs->to_string());
      std::vector<ExprPtr> fields(rs->fields().size());
      for (std::size_t i = 2; i < it.size(); i += 2) {
        if (!it[i].is_keyword()) syntax_fail(it[i], "expected a field keyword");
        auto idx = rs->field_index(it[i].text);
        if (!idx) sort_fail(it[i], "unknown field '" + it[i].text + "' of " + rs->name());
        if (fields[*idx]) sort_fail(it[i], "field '" + it[i].text + "' given twice");
        fields[*idx] = elab(it[i + 1], scope, rs->fields()[*idx].sort);
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!fields[i]) sort_fail(e, "make " + rs->name() + ": missing field '" + rs->fields()[i].name + "'");
      }
      return guarded(e, [&] { return ex::make(rs, std::move(fields)); });
    }
    if (op == "tuple") {
      std::vector<std::pair<std::string, ExprPtr>> items;
      std::set<std::string> seen;
      for (std::size_t i = 1; i < it.size(); ++i) {
        const SExpr& kv = it[i];
        if (!kv.is_list() || kv.items.size() != 2 || !kv.items[0].is_keyword()) syntax_fail(kv, "expected (:KEY EXPR)");
        if (!seen.insert(kv.items[0].text).second) sort_fail(kv, "duplicate tuple key :" + kv.items[0].text);
        items.emplace_back(kv.items[0].text, elab(kv.items[1], scope, nullptr));
      }
      return ex::tuple(std::move(items));
    }
    if (op == "enum") {
      arity(e, 2);
      auto s = parse_sort(it[1]);
      if (s->kind() != SortKind::Enum) sort_fail(it[1], to_string(it[1]) + " is not an enum");
      const auto& sym = symbol_text(it[2], "enum symbol");
      auto idx = s->symbol_index(sym);
      if (!idx) sort_fail(it[2], "unknown symbol '" + sym + "' of enum " + s->name());
      return ex::constant(Value::enumeration(s, *idx));
    }
    for (const auto& f : m_.functions_) {
      if (f.name != op) continue;
      arity(e, f.params.size());
      std::map<std::string, ExprPtr> subst;
      for (std::size_t i = 0; i < f.params.size(); ++i) {
        subst[f.params[i].first] = elab(it[i + 1], scope, f.params[i].second);
      }
      return substitute(f.body, subst);
    }
    for (const auto& inv : m_.invariants_) {
      if (inv.name != op) continue;
      arity(e, 1);
      return substitute(inv.body, {{inv.var, elab(it[1], scope, m_.state_sort_)}});
    }
    sort_fail(e.items[0], "unknown operator '" + op + "'");
  }

  ExprPtr elab_case(const SExpr& e, const Scope& scope, const SortPtr& expected) {
    const auto& it = e.items;
    if (it.size() < 3) sort_fail(e, "expected (case EXPR (KEY BODY)... (t DEFAULT))");
    auto x = elab(it[1], scope, nullptr);
    if (x->sort()->kind() != SortKind::Nat) sort_fail(it[1], "case scrutinee must be a natural");
    const SExpr& last = it.back();
    if (!last.is_list() || last.items.size() != 2 || !last.items[0].is_symbol("t")) {
      sort_fail(last, "case needs a default arm (t ...)");
    }
    std::vector<const SExpr*> bodies;
    std::vector<std::vector<std::uint64_t>> keys;
    for (std::size_t i = 2; i + 1 < it.size(); ++i) {
      const SExpr& arm = it[i];
      if (!arm.is_list() || arm.items.size() != 2) syntax_fail(arm, "expected (KEY BODY)");
      std::vector<std::uint64_t> ks;
      const SExpr& k = arm.items[0];
      if (k.is_list()) {
        for (const auto& kk : k.items) {
          if (!is_literal(kk, scope)) sort_fail(kk, "case keys must be naturals");
          ks.push_back(literal_value(kk));
        }
      } else if (is_literal(k, scope)) {
        ks.push_back(literal_value(k));
      } else {
        sort_fail(k, "case keys must be naturals");
      }
      keys.push_back(std::move(ks));
      bodies.push_back(&arm.items[1]);
    }
    bodies.push_back(&last.items[1]);
    auto xs = elab_same(bodies, scope, expected);
    std::vector<std::pair<std::vector<std::uint64_t>, ExprPtr>> arms;
    for (std::size_t i = 0; i < keys.size(); ++i) arms.emplace_back(std::move(keys[i]), xs[i]);
    return guarded(e, [&] { return ex::case_nat(x, std::move(arms), xs.back()); });
  }

  Model& m_;
  const ParamOverrides& overrides_;
  std::set<std::string> names_;
};

std::int64_t Model::param(std::string_view name) const {
  auto it = params_.find(std::string(name));
  if (it == params_.end()) throw Error("unknown parameter '" + std::string(name) + "'");
  return it->second;
}

const FunctionDef& Model::function(std::string_view name) const {
  for (const auto& f : functions_) {
    if (f.name == name) return f;
  }
  throw Error("unknown function '" + std::string(name) + "'");
}

bool Model::has_function(std::string_view name) const {
  for (const auto& f : functions_) {
    if (f.name == name) return true;
  }
  return false;
}

const InitDecl& Model::init() const {
  if (!init_) throw Error("model '" + name_ + "' has no init declaration");
  return *init_;
}

const std::optional<std::string>& Model::role(std::string_view role) const {
  static const std::optional<std::string> none;
  auto it = roles_.find(role);
  return it == roles_.end() ? none : it->second;
}

ExprPtr Model::apply(std::string_view function, std::vector<ExprPtr> args) const {
  const auto& f = this->function(function);
  if (args.size() != f.params.size()) throw SortError("wrong argument count for '" + f.name + "'");
  std::map<std::string, ExprPtr> subst;
  for (std::size_t i = 0; i < args.size(); ++i) subst[f.params[i].first] = std::move(args[i]);
  return substitute(f.body, subst);
}

namespace {
const std::string& bound(const Model& m, std::string_view role) {
  const auto& r = m.role(role);
  if (!r) throw Error("model '" + m.name() + "' does not bind " + std::string(role));
  return *r;
}
} // namespace

ExprPtr Model::next(ExprPtr state, ExprPtr shared) const {
  return apply(bound(*this, "next"), {std::move(state), std::move(shared)});
}

ExprPtr Model::shared_next(ExprPtr shared, ExprPtr state) const {
  return apply(bound(*this, "shared-next"), {std::move(shared), std::move(state)});
}

ExprPtr Model::blok(ExprPtr a, ExprPtr b) const { return apply(bound(*this, "blok"), {std::move(a), std::move(b)}); }

ExprPtr Model::done(ExprPtr state) const { return apply(bound(*this, "done"), {std::move(state)}); }

const InvariantDecl& Model::invariant(std::string_view name) const {
  for (const auto& inv : invariants_) {
    if (inv.name == name) return inv;
  }
  throw Error("unknown invariant '" + std::string(name) + "'");
}

ExprPtr Model::invariant_of(std::string_view name, ExprPtr state) const {
  const auto& inv = invariant(name);
  return substitute(inv.body, {{inv.var, std::move(state)}});
}

const MapDecl& Model::map(std::string_view name) const {
  for (const auto& m : maps_) {
    if (m.name == name) return m;
  }
  throw Error("unknown map '" + std::string(name) + "'");
}

ExprPtr Model::node_of(const MapDecl& m, ExprPtr state) const { return substitute(m.node, {{m.var, std::move(state)}}); }

std::vector<ExprPtr> Model::measure_of(const MapDecl& m, std::size_t measure, ExprPtr state) const {
  std::vector<ExprPtr> out;
  for (const auto& c : m.measures.at(measure).components) out.push_back(substitute(c, {{m.var, state}}));
  return out;
}

std::string Model::canonical_text() const {
  std::string out;
  for (const auto& f : forms_) out += pretty(f) + "\n";
  return out;
}

Model parse_model(std::string_view text, const ParamOverrides& overrides) {
  Model m;
  ModelBuilder(m, overrides).build(text);
  return m;
}

Model load_model(const std::string& path, const ParamOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), overrides);
}

} // namespace wfg
