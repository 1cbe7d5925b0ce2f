#include "mpst/semantics.hpp"

#include <random>

#include "mpst/surface.hpp"

namespace mpst {

std::string to_string(const Action& a) {
  if (a.is_tau()) return "τ_" + a.participant;
  return a.label + "@" + a.receiver + "⋈" + a.sender;
}

Value eval_expr(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Lit: return e.value();
    case K::Var: throw EvalError("free variable '" + e.var_name() + "'");
    case K::Not: {
      Value v = eval_expr(e.lhs());
      if (v.sort() != Sort::Bool) throw EvalError("not: operand is " + std::string(to_string(v.sort())));
      return Value::boolean(!v.as_bool());
    }
    default: break;
  }
  Value a = eval_expr(e.lhs());
  Value b = eval_expr(e.rhs());
  switch (e.kind()) {
    case K::Lt:
      if (a.sort() != b.sort()) throw EvalError("<: operand sorts differ");
      if (a.sort() == Sort::Nat) return Value::boolean(a.as_nat() < b.as_nat());
      if (a.sort() == Sort::Int) return Value::boolean(a.as_int() < b.as_int());
      throw EvalError("<: operands are not numeric");
    case K::Eq:
      if (a.sort() != b.sort()) throw EvalError("=: operand sorts differ");
      return Value::boolean(a == b);
    case K::And:
    case K::Or:
      if (a.sort() != Sort::Bool || b.sort() != Sort::Bool) throw EvalError("connective on non-bool");
      return Value::boolean(e.kind() == K::And ? (a.as_bool() && b.as_bool())
                                               : (a.as_bool() || b.as_bool()));
    default: break;
  }
  throw EvalError("unreachable expression kind");
}

Process ThreadStep::receive(const Value& v) const {
  if (action.direction == Polarity::Send) return cont;
  return substitute_value(cont, binder, v);
}

namespace {

void collect_steps(const Process& p, std::vector<ThreadStep>& out) {
  switch (p.kind()) {
    case Process::Kind::Sum:
      collect_steps(p.left(), out);
      collect_steps(p.right(), out);
      return;
    case Process::Kind::Send:
      try {
        Value v = eval_expr(p.payload());
        out.push_back({{Polarity::Send, p.peer(), p.label(), std::move(v)}, p.cont(), {}});
      } catch (const EvalError&) {
        // stuck output: no R-Out instance
      }
      return;
    case Process::Kind::Recv:
      out.push_back({{Polarity::Receive, p.peer(), p.label(), std::nullopt}, p.cont(), p.binder()});
      return;
    default: return;
  }
}

std::optional<Process> internal_step(const Process& p) {
  if (p.kind() == Process::Kind::Mu) return unfold(p);
  if (p.kind() == Process::Kind::If) {
    try {
      Value c = eval_expr(p.cond());
      if (c.sort() == Sort::Bool) return c.as_bool() ? p.then_branch() : p.else_branch();
    } catch (const EvalError&) {
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<ThreadStep> thread_transitions(const Thread& t) {
  std::vector<ThreadStep> out;
  collect_steps(t.body, out);
  return out;
}

std::vector<SessionStep> session_transitions(const Session& m) {
  std::vector<SessionStep> out;
  std::vector<std::vector<ThreadStep>> offers;
  offers.reserve(m.size());
  for (const auto& t : m.threads()) offers.push_back(thread_transitions(t));

  for (std::size_t i = 0; i < m.size(); ++i) {
    const Thread& receiver = m[i];
    if (auto next = internal_step(receiver.body)) {
      out.push_back({Action::tau(receiver.participant), m.with_body(i, *next)});
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      const Thread& sender = m[j];
      for (const auto& in : offers[i]) {
        if (in.action.direction != Polarity::Receive || in.action.peer != sender.participant) continue;
        for (const auto& outp : offers[j]) {
          if (outp.action.direction != Polarity::Send || outp.action.peer != receiver.participant ||
              outp.action.label != in.action.label) {
            continue;
          }
          Session next = m.with_body(i, in.receive(*outp.action.value)).with_body(j, outp.cont);
          out.push_back({Action::sync(in.action.label, receiver.participant, sender.participant),
                         std::move(next)});
        }
      }
    }
  }
  return out;
}

bool is_ended(const Session& m) {
  for (const auto& t : m.threads()) {
    if (t.body.kind() != Process::Kind::Inaction) return false;
  }
  return true;
}

Trace simulate(const Session& m, std::uint64_t seed, std::size_t max_steps) {
  std::mt19937_64 rng(seed);
  Trace trace;
  Session cur = m;
  for (std::size_t k = 0; k < max_steps; ++k) {
    auto succ = session_transitions(cur);
    if (succ.empty()) {
      trace.stopped_early = true;
      break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
    SessionStep chosen = std::move(succ[pick(rng)]);
    cur = chosen.next;
    trace.steps.push_back(std::move(chosen));
  }
  return trace;
}

std::string format_trace(const Trace& trace) {
  std::string out;
  for (const auto& s : trace.steps) {
    out += to_string(s.action) + " ; " + print_session(s.next) + "\n";
  }
  return out;
}

}  // namespace mpst
