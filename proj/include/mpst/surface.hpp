#ifndef MPST_SURFACE_HPP
#define MPST_SURFACE_HPP

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpst/syntax.hpp"

namespace mpst {

/// Malformed text. Carries a 1-based position and the tokens that would
/// have been accepted there.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, std::set<std::string> expected, const std::string& found);

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  int line_;
  int col_;
  std::set<std::string> expected_;
  std::string found_;
};

/// Text parses but violates a load-time rule (well-formedness, duplicates).
class LoadError : public std::runtime_error {
 public:
  LoadError(int line, int col, const std::string& msg);
  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

struct ParticipantDecl {
  Participant name;
  SessionType declared_type;
  Process body;
  int line = 0;
};

struct SourceFile {
  std::vector<ParticipantDecl> participants;

  Session to_session() const;
  TypeEnv declared_env() const;
};

SessionType parse_type(std::string_view text);
Process parse_process(std::string_view text);
Expr parse_expr(std::string_view text);

/// `.mps` contents: `participant <name> type <T> proc <P>` blocks. Declared
/// types must be well formed.
SourceFile parse_file(std::string_view text);

/// `.env` contents: `name : type` bindings. Types must be well formed.
TypeEnv parse_env(std::string_view text);

std::string print_type(const SessionType& t);
std::string print_process(const Process& p);
std::string print_expr(const Expr& e);
std::string print_value(const Value& v);
/// One `p : T` line per binding in participant order, no trailing newline.
std::string print_env(const TypeEnv& d);
/// `p <| P | q <| Q` in thread order.
std::string print_session(const Session& m);
std::string print_file(const SourceFile& f);

}  // namespace mpst

#endif  // MPST_SURFACE_HPP
