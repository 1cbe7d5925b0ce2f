#ifndef MPST_TYPING_HPP
#define MPST_TYPING_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpst/compliance.hpp"
#include "mpst/env_lts.hpp"
#include "mpst/syntax.hpp"

namespace mpst {

class SortError : public std::runtime_error {
 public:
  SortError(Expr e, const std::string& reason);
  const Expr& expr() const noexcept { return expr_; }

 private:
  Expr expr_;
};

class ParticipantMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Γ: sorts of value variables and the recursive types of process variables.
struct Context {
  std::map<VarName, Sort, std::less<>> sorts;
  std::map<ProcVar, SessionType, std::less<>> procs;

  Context with_sort(const VarName& x, Sort s) const;
  /// Throws NotRecursive unless `t` is a `rec`.
  Context with_proc(const ProcVar& chi, const SessionType& t) const;
};

Sort sort_expr(const Context& ctx, const Expr& e);

/// One rule application of a successful typing derivation.
struct Derivation {
  std::string rule;
  Process process;
  SessionType type;
  std::vector<Derivation> premises;

  /// Rule names in pre-order.
  std::vector<std::string> rules() const;
  std::string render(int indent = 0) const;
};

struct TypingFailure {
  std::string position;
  std::string rule;
  std::string message;
  std::string to_string() const;
};

struct CheckOptions {
  /// Route a prefix directly to the summand carrying its label.
  bool label_fast_path = true;
};

struct ProcessCheck {
  bool ok = false;
  std::optional<Derivation> derivation;
  /// Deepest failed alternative when !ok.
  std::optional<TypingFailure> failure;
};

ProcessCheck check_process(const Context& ctx, const Process& p, const SessionType& t,
                           const CheckOptions& opts = {});

struct ThreadResult {
  Participant participant;
  bool ok = false;
  std::optional<Derivation> derivation;
};

struct BlockResult {
  TypeEnv env;
  ClosureReport report;
};

struct TypingVerdict {
  bool ok = false;
  std::vector<TypingFailure> failures;
  std::vector<ThreadResult> threads;
  std::vector<BlockResult> blocks;
};

struct SessionCheckOptions {
  CheckOptions process;
  ClosureOptions closure;
};

/// T-Thr for every thread, then T-Ses on every minimal block of `declared`.
TypingVerdict check_session(const Session& m, const TypeEnv& declared, const Oracle& omega,
                            const SessionCheckOptions& opts = {});

nlohmann::json to_json(const TypingVerdict& v);

}  // namespace mpst

#endif  // MPST_TYPING_HPP
