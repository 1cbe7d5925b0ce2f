#include "mpst/surface.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <sstream>

namespace mpst {

namespace {

std::string describe_expected(const std::set<std::string>& expected) {
  std::string out;
  for (const auto& e : expected) {
    if (!out.empty()) out += ", ";
    out += e;
  }
  return out;
}

}  // namespace

ParseError::ParseError(int line, int col, std::set<std::string> expected, const std::string& found)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": unexpected " + found +
                         (expected.empty() ? std::string()
                                           : "; expected one of: " + describe_expected(expected))),
      line_(line),
      col_(col),
      expected_(std::move(expected)),
      found_(found) {}

LoadError::LoadError(int line, int col, const std::string& msg)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
      line_(line),
      col_(col) {}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { LIdent, UIdent, Keyword, Nat, Str, Sym, Eof };

struct Token {
  Tok kind;
  std::string text;  // identifier, keyword, symbol, digits, or decoded string
  int line;
  int col;
};

const std::set<std::string_view>& keywords() {
  static const std::set<std::string_view> kw = {
      "end", "rec", "if", "then", "else", "true", "false", "not", "participant", "type",
      "proc", "nat", "int", "str", "bool", "unit"};
  return kw;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Eof: return "end of input";
    case Tok::Str: return "string literal";
    case Tok::Nat: return "number '" + t.text + "'";
    case Tok::Keyword: return "keyword '" + t.text + "'";
    case Tok::Sym: return "'" + t.text + "'";
    default: return "identifier '" + t.text + "'";
  }
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int tl = line, tc = col;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                src[j] == '\'')) {
        ++j;
      }
      std::string word(src.substr(i, j - i));
      Tok kind = keywords().count(word)            ? Tok::Keyword
                 : std::isupper(static_cast<unsigned char>(word[0])) ? Tok::UIdent
                                                     : Tok::LIdent;
      if (word[0] == '_') kind = Tok::LIdent;
      out.push_back({kind, std::move(word), tl, tc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Nat, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::string value;
      advance(1);
      bool closed = false;
      while (i < src.size()) {
        char d = src[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\') {
          if (i + 1 >= src.size()) break;
          char e = src[i + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default:
              throw ParseError(line, col, {"escape \\n, \\t, \\\", \\\\"},
                               std::string("escape '\\") + e + "'");
          }
          advance(2);
          continue;
        }
        value += d;
        advance(1);
      }
      if (!closed) throw ParseError(tl, tc, {"closing '\"'"}, "unterminated string literal");
      out.push_back({Tok::Str, std::move(value), tl, tc});
      continue;
    }
    if (i + 1 < src.size()) {
      std::string_view two = src.substr(i, 2);
      if (two == "&&" || two == "||") {
        out.push_back({Tok::Sym, std::string(two), tl, tc});
        advance(2);
        continue;
      }
    }
    static const std::string_view singles = "!?()<>.+-:=";
    if (singles.find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), tl, tc});
      advance(1);
      continue;
    }
    std::string shown = c < 0x20 || c >= 0x7f ? "byte 0x" + [&] {
      std::ostringstream os;
      os << std::hex << static_cast<int>(c);
      return os.str();
    }()
                                                : std::string("character '") + static_cast<char>(c) + "'";
    throw ParseError(tl, tc, {}, shown);
  }
  out.push_back({Tok::Eof, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  // Grammar entry points -----------------------------------------------------

  SessionType type_sum() {
    SessionType left = type_unit();
    if (accept_sym("+")) return SessionType::sum(std::move(left), type_sum());
    return left;
  }

  Process proc_sum() {
    Process left = proc_unit();
    if (accept_sym("+")) return Process::sum(std::move(left), proc_sum());
    return left;
  }

  Expr expr() { return expr_or(); }

  void finish() {
    if (peek().kind != Tok::Eof) {
      note("end of input");
      fail();
    }
  }

  SourceFile file() {
    SourceFile f;
    std::set<std::string> seen;
    while (!at_eof()) {
      const Token& kw = peek();
      expect_keyword("participant");
      std::string name = lower_ident("participant name");
      if (!seen.insert(name).second) {
        throw LoadError(kw.line, kw.col, "duplicate participant '" + name + "'");
      }
      expect_keyword("type");
      const Token& at = peek();
      SessionType t = type_sum();
      if (auto issue = well_formedness_issue(t)) {
        throw LoadError(at.line, at.col, "declared type of '" + name + "' is ill-formed: " + *issue);
      }
      expect_keyword("proc");
      Process p = proc_sum();
      f.participants.push_back({std::move(name), std::move(t), std::move(p), kw.line});
    }
    return f;
  }

  TypeEnv env() {
    TypeEnv::Map m;
    while (!at_eof()) {
      const Token& at = peek();
      std::string name = lower_ident("participant name");
      expect_sym(":");
      const Token& tt = peek();
      SessionType t = type_sum();
      if (auto issue = well_formedness_issue(t)) {
        throw LoadError(tt.line, tt.col, "type of '" + name + "' is ill-formed: " + *issue);
      }
      if (!m.emplace(name, std::move(t)).second) {
        throw LoadError(at.line, at.col, "duplicate participant '" + name + "'");
      }
    }
    return TypeEnv(std::move(m));
  }

 private:
  // Types --------------------------------------------------------------------

  SessionType type_unit() {
    if (accept_keyword("rec")) {
      std::string var = upper_ident("type variable");
      expect_sym(".");
      return SessionType::mu(std::move(var), type_sum());
    }
    if (accept_keyword("end")) return SessionType::end();
    if (peek().kind == Tok::UIdent) return SessionType::var(take().text);
    note("type variable");
    if (accept_sym("(")) {
      SessionType inner = type_sum();
      expect_sym(")");
      return inner;
    }
    if (peek().kind == Tok::LIdent) {
      std::string peer = take().text;
      Polarity pol;
      if (accept_sym("!")) {
        pol = Polarity::Send;
      } else if (accept_sym("?")) {
        pol = Polarity::Receive;
      } else {
        fail();
      }
      std::string label = lower_ident("label");
      expect_sym("(");
      Sort s = sort();
      expect_sym(")");
      expect_sym(".");
      return SessionType::prefix(pol, std::move(peer), std::move(label), s, type_unit());
    }
    note("participant name");
    fail();
  }

  Sort sort() {
    const Token& t = peek();
    if (t.kind == Tok::Keyword) {
      if (auto s = sort_from_string(t.text)) {
        take();
        return *s;
      }
    }
    for (const char* s : {"nat", "int", "str", "bool", "unit"}) note(std::string("'") + s + "'");
    fail();
  }

  // Processes ----------------------------------------------------------------

  Process proc_unit() {
    if (accept_keyword("rec")) {
      std::string var = upper_ident("process variable");
      expect_sym(".");
      return Process::mu(std::move(var), proc_sum());
    }
    if (accept_keyword("if")) {
      Expr c = expr();
      expect_keyword("then");
      Process t = proc_unit();
      expect_keyword("else");
      Process e = proc_unit();
      return Process::if_then_else(std::move(c), std::move(t), std::move(e));
    }
    if (peek().kind == Tok::Nat && peek().text == "0") {
      take();
      return Process::inaction();
    }
    note("'0'");
    if (peek().kind == Tok::UIdent) return Process::pvar(take().text);
    note("process variable");
    if (accept_sym("(")) {
      Process inner = proc_sum();
      expect_sym(")");
      return inner;
    }
    if (peek().kind == Tok::LIdent) {
      std::string peer = take().text;
      if (accept_sym("!")) {
        std::string label = lower_ident("label");
        expect_sym("<");
        Expr payload = accept_sym(">") ? Expr::lit(Value::unit()) : [&] {
          Expr e = expr();
          expect_sym(">");
          return e;
        }();
        expect_sym(".");
        return Process::send(std::move(peer), std::move(label), std::move(payload), proc_unit());
      }
      if (accept_sym("?")) {
        std::string label = lower_ident("label");
        expect_sym("(");
        std::string binder = lower_ident("variable");
        expect_sym(")");
        expect_sym(".");
        return Process::recv(std::move(peer), std::move(label), std::move(binder), proc_unit());
      }
      fail();
    }
    note("participant name");
    fail();
  }

  // Expressions --------------------------------------------------------------

  Expr expr_or() {
    Expr e = expr_and();
    while (accept_sym("||")) e = Expr::disj(std::move(e), expr_and());
    return e;
  }

  Expr expr_and() {
    Expr e = expr_cmp();
    while (accept_sym("&&")) e = Expr::conj(std::move(e), expr_cmp());
    return e;
  }

  Expr expr_cmp() {
    Expr e = expr_unary();
    if (accept_sym("<")) return Expr::lt(std::move(e), expr_unary());
    if (accept_sym("=")) return Expr::eq(std::move(e), expr_unary());
    return e;
  }

  Expr expr_unary() {
    if (accept_keyword("not")) return Expr::negate(expr_unary());
    return expr_atom();
  }

  Expr expr_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Nat: {
        take();
        return Expr::lit(Value::nat(parse_u64(t)));
      }
      case Tok::Str: return Expr::lit(Value::str(take().text));
      case Tok::LIdent: return Expr::var(take().text);
      case Tok::Keyword:
        if (t.text == "true" || t.text == "false") {
          take();
          return Expr::lit(Value::boolean(t.text == "true"));
        }
        break;
      default: break;
    }
    note("literal");
    note("variable");
    note("'not'");
    if (accept_sym("+") || (peek().kind == Tok::Sym && peek().text == "-")) {
      bool negative = false;
      if (peek().kind == Tok::Sym && peek().text == "-") {
        take();
        negative = true;
      }
      if (peek().kind != Tok::Nat) {
        note("number");
        fail();
      }
      const Token& digits = take();
      std::uint64_t mag = parse_u64(digits);
      constexpr std::uint64_t max_pos = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
      if (negative) {
        if (mag > max_pos + 1) throw ParseError(digits.line, digits.col, {}, "int literal out of range");
        std::int64_t v = mag == max_pos + 1 ? std::numeric_limits<std::int64_t>::min()
                                            : -static_cast<std::int64_t>(mag);
        return Expr::lit(Value::integer(v));
      }
      if (mag > max_pos) throw ParseError(digits.line, digits.col, {}, "int literal out of range");
      return Expr::lit(Value::integer(static_cast<std::int64_t>(mag)));
    }
    note("'-'");
    if (accept_sym("(")) {
      if (accept_sym(")")) return Expr::lit(Value::unit());
      Expr e = expr();
      expect_sym(")");
      return e;
    }
    fail();
  }

  static std::uint64_t parse_u64(const Token& t) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
      throw ParseError(t.line, t.col, {}, "nat literal out of range '" + t.text + "'");
    }
    return v;
  }

  // Token plumbing -----------------------------------------------------------

  const Token& peek() const { return toks_[pos_]; }
  bool at_eof() const { return peek().kind == Tok::Eof; }

  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    expected_.clear();
    return t;
  }

  void note(std::string what) { expected_.insert(std::move(what)); }

  [[noreturn]] void fail() {
    const Token& t = peek();
    throw ParseError(t.line, t.col, expected_, describe(t));
  }

  bool accept_sym(std::string_view s) {
    if (peek().kind == Tok::Sym && peek().text == s) {
      take();
      return true;
    }
    note("'" + std::string(s) + "'");
    return false;
  }

  void expect_sym(std::string_view s) {
    if (!accept_sym(s)) fail();
  }

  bool accept_keyword(std::string_view k) {
    if (peek().kind == Tok::Keyword && peek().text == k) {
      take();
      return true;
    }
    note("'" + std::string(k) + "'");
    return false;
  }

  void expect_keyword(std::string_view k) {
    if (!accept_keyword(k)) fail();
  }

  std::string lower_ident(const char* what) {
    if (peek().kind == Tok::LIdent) return take().text;
    note(what);
    fail();
  }

  std::string upper_ident(const char* what) {
    if (peek().kind == Tok::UIdent) return take().text;
    note(what);
    fail();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> expected_;
};

// ---------------------------------------------------------------------------
// Printer

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void print_expr_into(std::string& out, const Expr& e);

void print_operand(std::string& out, const Expr& e) {
  if (e.is_binary()) {
    out += '(';
    print_expr_into(out, e);
    out += ')';
  } else {
    print_expr_into(out, e);
  }
}

void print_expr_into(std::string& out, const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Lit: out += print_value(e.value()); return;
    case K::Var: out += e.var_name(); return;
    case K::Not:
      out += "not ";
      print_operand(out, e.lhs());
      return;
    default: break;
  }
  const char* op = e.kind() == K::Lt ? " < " : e.kind() == K::Eq ? " = " : e.kind() == K::And ? " && " : " || ";
  print_operand(out, e.lhs());
  out += op;
  print_operand(out, e.rhs());
}

// `rightmost`: nothing in the enclosing text follows this term, so a
// trailing `rec` body cannot swallow a following summand.
void print_type_into(std::string& out, const SessionType& t, bool rightmost);

void print_type_unit(std::string& out, const SessionType& t, bool rightmost) {
  if (t.is_sum()) {
    out += '(';
    print_type_into(out, t, true);
    out += ')';
  } else {
    print_type_into(out, t, rightmost);
  }
}

void print_type_into(std::string& out, const SessionType& t, bool rightmost) {
  switch (t.kind()) {
    case SessionType::Kind::End: out += "end"; return;
    case SessionType::Kind::Var: out += t.var_name(); return;
    case SessionType::Kind::Mu:
      if (!rightmost) out += '(';
      out += "rec " + t.var_name() + " . ";
      print_type_into(out, t.body(), true);
      if (!rightmost) out += ')';
      return;
    case SessionType::Kind::Sum:
      print_type_unit(out, t.left(), false);
      out += " + ";
      print_type_into(out, t.right(), rightmost);
      return;
    default:
      out += t.peer();
      out += t.kind() == SessionType::Kind::Out ? '!' : '?';
      out += t.label();
      out += '(';
      out += to_string(t.payload());
      out += ").";
      print_type_unit(out, t.cont(), rightmost);
  }
}

void print_proc_into(std::string& out, const Process& p, bool rightmost);

void print_proc_unit(std::string& out, const Process& p, bool rightmost) {
  if (p.kind() == Process::Kind::Sum) {
    out += '(';
    print_proc_into(out, p, true);
    out += ')';
  } else {
    print_proc_into(out, p, rightmost);
  }
}

void print_proc_into(std::string& out, const Process& p, bool rightmost) {
  using K = Process::Kind;
  switch (p.kind()) {
    case K::Inaction: out += '0'; return;
    case K::PVar: out += p.pvar_name(); return;
    case K::Mu:
      if (!rightmost) out += '(';
      out += "rec " + p.pvar_name() + " . ";
      print_proc_into(out, p.body(), true);
      if (!rightmost) out += ')';
      return;
    case K::Sum:
      print_proc_unit(out, p.left(), false);
      out += " + ";
      print_proc_into(out, p.right(), rightmost);
      return;
    case K::If:
      out += "if ";
      print_expr_into(out, p.cond());
      out += " then ";
      print_proc_unit(out, p.then_branch(), false);
      out += " else ";
      print_proc_unit(out, p.else_branch(), rightmost);
      return;
    case K::Send:
      out += p.peer() + "!" + p.label() + "<";
      print_expr_into(out, p.payload());
      out += ">.";
      print_proc_unit(out, p.cont(), rightmost);
      return;
    case K::Recv:
      out += p.peer() + "?" + p.label() + "(" + p.binder() + ").";
      print_proc_unit(out, p.cont(), rightmost);
      return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API

Session SourceFile::to_session() const {
  std::vector<Thread> threads;
  threads.reserve(participants.size());
  for (const auto& d : participants) threads.push_back({d.name, d.body});
  return Session(std::move(threads));
}

TypeEnv SourceFile::declared_env() const {
  TypeEnv::Map m;
  for (const auto& d : participants) m.emplace(d.name, d.declared_type);
  return TypeEnv(std::move(m));
}

SessionType parse_type(std::string_view text) {
  Parser p(text);
  SessionType t = p.type_sum();
  p.finish();
  return t;
}

Process parse_process(std::string_view text) {
  Parser p(text);
  Process proc = p.proc_sum();
  p.finish();
  return proc;
}

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Expr e = p.expr();
  p.finish();
  return e;
}

SourceFile parse_file(std::string_view text) {
  Parser p(text);
  return p.file();
}

TypeEnv parse_env(std::string_view text) {
  Parser p(text);
  return p.env();
}

std::string print_value(const Value& v) {
  switch (v.sort()) {
    case Sort::Nat: return std::to_string(v.as_nat());
    case Sort::Int: return (v.as_int() < 0 ? "" : "+") + std::to_string(v.as_int());
    case Sort::Str: return quote(v.as_str());
    case Sort::Bool: return v.as_bool() ? "true" : "false";
    case Sort::Unit: return "()";
  }
  return "?";
}

std::string print_type(const SessionType& t) {
  std::string out;
  print_type_into(out, t, true);
  return out;
}

std::string print_process(const Process& p) {
  std::string out;
  print_proc_into(out, p, true);
  return out;
}

std::string print_expr(const Expr& e) {
  std::string out;
  print_expr_into(out, e);
  return out;
}

std::string print_env(const TypeEnv& d) {
  std::string out;
  for (const auto& [p, t] : d) {
    if (!out.empty()) out += '\n';
    out += p + " : " + print_type(t);
  }
  return out;
}

std::string print_session(const Session& m) {
  std::string out;
  for (const auto& t : m.threads()) {
    if (!out.empty()) out += " | ";
    out += t.participant + " <| " + print_process(t.body);
  }
  return out;
}

std::string print_file(const SourceFile& f) {
  std::string out;
  for (const auto& d : f.participants) {
    out += "participant " + d.name + "\n  type " + print_type(d.declared_type) + "\n  proc " +
           print_process(d.body) + "\n";
  }
  return out;
}

}  // namespace mpst
