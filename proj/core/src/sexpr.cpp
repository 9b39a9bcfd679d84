#include "wfg/sexpr.hpp"

#include "wfg/error.hpp"

#include <cctype>
#include <limits>

namespace wfg {

bool SExpr::is_form(std::string_view head) const {
  return kind == Kind::List && !items.empty() && items.front().is_symbol(head);
}

SExpr SExpr::symbol(std::string name) {
  SExpr e;
  e.kind = Kind::Symbol;
  e.text = std::move(name);
  return e;
}

SExpr SExpr::keyword(std::string name) {
  SExpr e;
  e.kind = Kind::Keyword;
  e.text = std::move(name);
  return e;
}

SExpr SExpr::number(std::uint64_t v) {
  SExpr e;
  e.kind = Kind::Integer;
  e.integer = v;
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items) {
  SExpr e;
  e.kind = Kind::List;
  e.items = std::move(items);
  return e;
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
  case SExpr::Kind::Symbol:
  case SExpr::Kind::Keyword: return a.text == b.text;
  case SExpr::Kind::Integer: return a.integer == b.integer;
  case SExpr::Kind::List: return a.items == b.items;
  }
  return false;
}

namespace {

class Reader {
public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

private:
  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';';
  }

  static bool is_atom_char(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    switch (c) {
    case '-': case '+': case '*': case '/': case '<': case '>': case '=': case '!':
    case '?': case '_': case '.': case '%': case '&': case '^': case '~': case '$':
    case ':':
      return true;
    default:
      return false;
    }
  }

  [[noreturn]] void fail(const std::string& msg, int line, int col) const {
    throw ParseError(msg, line, col);
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input", line_, col_);
    const int line = line_;
    const int col = col_;
    char c = text_[pos_];
    if (c == '(') {
      if (++depth_ > kMaxDepth) fail("nesting too deep", line, col);
      advance();
      SExpr e = SExpr::list({});
      e.line = line;
      e.column = col;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated list", line, col);
        if (text_[pos_] == ')') {
          advance();
          --depth_;
          return e;
        }
        e.items.push_back(read());
      }
    }
    if (c == ')') fail("unexpected ')'", line, col);

    std::string tok;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) {
      if (!is_atom_char(text_[pos_])) {
        fail(std::string("unexpected character '") + text_[pos_] + "'", line_, col_);
      }
      tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_]))));
      advance();
    }

    SExpr e;
    e.line = line;
    e.column = col;
    if (tok.front() == ':') {
      if (tok.size() == 1) fail("empty keyword", line, col);
      e.kind = SExpr::Kind::Keyword;
      e.text = tok.substr(1);
      return e;
    }
    bool digits = true;
    for (char ch : tok) digits = digits && std::isdigit(static_cast<unsigned char>(ch));
    if (digits) {
      std::uint64_t v = 0;
      for (char ch : tok) {
        std::uint64_t d = static_cast<std::uint64_t>(ch - '0');
        if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) fail("integer literal too large", line, col);
        v = v * 10 + d;
      }
      e.kind = SExpr::Kind::Integer;
      e.integer = v;
      e.text = tok;
      return e;
    }
    e.kind = SExpr::Kind::Symbol;
    e.text = std::move(tok);
    return e;
  }

  static constexpr int kMaxDepth = 1000;

  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  int line_ = 1;
  int col_ = 1;
};

void render(const SExpr& e, std::string& out) {
  switch (e.kind) {
  case SExpr::Kind::Symbol: out += e.text; break;
  case SExpr::Kind::Keyword: out += ':'; out += e.text; break;
  case SExpr::Kind::Integer: out += std::to_string(e.integer); break;
  case SExpr::Kind::List:
    out += '(';
    for (std::size_t i = 0; i < e.items.size(); ++i) {
      if (i) out += ' ';
      render(e.items[i], out);
    }
    out += ')';
    break;
  }
}

void render_pretty(const SExpr& e, std::size_t indent, std::size_t width, std::string& out) {
  std::string flat = to_string(e);
  if (!e.is_list() || e.items.empty() || indent + flat.size() <= width) {
    out += flat;
    return;
  }
  out += '(';
  render_pretty(e.items.front(), indent + 1, width, out);
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    out += '\n';
    out.append(indent + 2, ' ');
    render_pretty(e.items[i], indent + 2, width, out);
  }
  out += ')';
}

} // namespace

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

std::string to_string(const SExpr& e) {
  std::string out;
  render(e, out);
  return out;
}

std::string pretty(const SExpr& e, std::size_t width) {
  std::string out;
  render_pretty(e, 0, width, out);
  return out;
}

} // namespace wfg
