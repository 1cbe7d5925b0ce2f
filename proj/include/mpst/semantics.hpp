#ifndef MPST_SEMANTICS_HPP
#define MPST_SEMANTICS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpst/action.hpp"
#include "mpst/syntax.hpp"

namespace mpst {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Value eval_expr(const Expr& e);

/// Input or output offered by a single thread. Inputs leave the value open:
/// it is supplied by the matching sender when the communication fires.
struct ThreadAction {
  Polarity direction;
  Participant peer;
  Label label;
  std::optional<Value> value;  // outputs only
};

struct ThreadStep {
  ThreadAction action;
  /// Continuation. For inputs `binder` is still free in it.
  Process cont;
  VarName binder;

  /// Continuation after receiving `v` (inputs), or `cont` as is (outputs).
  Process receive(const Value& v) const;
};

/// Prefix steps of one thread, sum branches left to right. Outputs whose
/// payload fails to evaluate offer no step.
std::vector<ThreadStep> thread_transitions(const Thread& t);

struct SessionStep {
  SessionAction action;
  Session next;
};

/// All successors of a closed session. Threads are scanned in order; for
/// each thread its internal step (if any) comes first, then communications
/// in which it receives, ordered by sender position and branch order.
std::vector<SessionStep> session_transitions(const Session& m);

/// Every thread is `0`.
bool is_ended(const Session& m);

struct Trace {
  std::vector<SessionStep> steps;
  bool stopped_early = false;  // no transition enabled before max_steps
};

/// Uniformly random run driven by a seeded mt19937_64.
Trace simulate(const Session& m, std::uint64_t seed, std::size_t max_steps);

/// `<action> ; <pretty session>` per step, newline terminated.
std::string format_trace(const Trace& trace);

}  // namespace mpst

#endif  // MPST_SEMANTICS_HPP
