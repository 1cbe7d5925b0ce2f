#include "mpst/typing.hpp"

#include <algorithm>
#include <set>

#include "mpst/surface.hpp"

namespace mpst {

SortError::SortError(Expr e, const std::string& reason)
    : std::runtime_error(reason + " in '" + print_expr(e) + "'"), expr_(std::move(e)) {}

Context Context::with_sort(const VarName& x, Sort s) const {
  Context c = *this;
  c.sorts[x] = s;
  return c;
}

Context Context::with_proc(const ProcVar& chi, const SessionType& t) const {
  if (!t.is_mu()) throw NotRecursive("process variable " + chi + " needs a recursive type");
  Context c = *this;
  c.procs.insert_or_assign(chi, t);
  return c;
}

Sort sort_expr(const Context& ctx, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Lit: return e.value().sort();
    case Expr::Kind::Var: {
      auto it = ctx.sorts.find(e.var_name());
      if (it == ctx.sorts.end()) throw SortError(e, "unbound variable " + e.var_name());
      return it->second;
    }
    case Expr::Kind::Lt: {
      Sort a = sort_expr(ctx, e.lhs());
      Sort b = sort_expr(ctx, e.rhs());
      if (a != b || (a != Sort::Nat && a != Sort::Int)) {
        throw SortError(e, "'<' needs two nat or two int operands, got " + std::string(to_string(a)) +
                               " and " + std::string(to_string(b)));
      }
      return Sort::Bool;
    }
    case Expr::Kind::Eq: {
      Sort a = sort_expr(ctx, e.lhs());
      Sort b = sort_expr(ctx, e.rhs());
      if (a != b) {
        throw SortError(e, "'=' compares " + std::string(to_string(a)) + " with " +
                               std::string(to_string(b)));
      }
      return Sort::Bool;
    }
    case Expr::Kind::Not:
      if (sort_expr(ctx, e.lhs()) != Sort::Bool) throw SortError(e, "'not' needs a bool operand");
      return Sort::Bool;
    case Expr::Kind::And:
    case Expr::Kind::Or:
      if (sort_expr(ctx, e.lhs()) != Sort::Bool || sort_expr(ctx, e.rhs()) != Sort::Bool) {
        throw SortError(e, "boolean connective needs bool operands");
      }
      return Sort::Bool;
  }
  throw SortError(e, "unknown expression");
}

std::vector<std::string> Derivation::rules() const {
  std::vector<std::string> out{rule};
  for (const auto& d : premises) {
    auto sub = d.rules();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::string Derivation::render(int indent) const {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += rule + "  " + print_process(process) + " : " + print_type(type) + "\n";
  for (const auto& d : premises) out += d.render(indent + 1);
  return out;
}

std::string TypingFailure::to_string() const {
  std::string out;
  if (!position.empty()) out += position + ": ";
  return out + rule + ": " + message;
}

namespace {

class Checker {
 public:
  explicit Checker(const CheckOptions& opts) : opts_(opts) {}

  std::optional<Derivation> check(const Context& ctx, const Process& p, const SessionType& t, int depth) {
    using PK = Process::Kind;
    switch (p.kind()) {
      case PK::Inaction:
        if (t.is_end()) return Derivation{"T-End", p, t, {}};
        break;
      case PK::Mu: {
        if (!t.is_mu()) {
          fail(depth, "T-Rec", "recursive process needs a recursive type, got " + print_type(t));
          break;
        }
        Context inner = ctx.with_proc(p.pvar_name(), t);
        if (auto d = check(inner, p.body(), unfold(t), depth + 1)) return Derivation{"T-Rec", p, t, {*d}};
        break;
      }
      case PK::PVar: {
        auto it = ctx.procs.find(p.pvar_name());
        if (it == ctx.procs.end()) {
          fail(depth, "T-Var", "unbound process variable " + p.pvar_name());
        } else if (!t.is_mu()) {
          fail(depth, "T-Var", "process variable " + p.pvar_name() + " used against non-recursive type " +
                                   print_type(t));
        } else if (!(it->second == t)) {
          fail(depth, "T-Var", "process variable " + p.pvar_name() + " is bound to " + print_type(it->second) +
                                   ", not " + print_type(t));
        } else {
          return Derivation{"T-Var", p, t, {}};
        }
        break;
      }
      case PK::If: {
        try {
          if (sort_expr(ctx, p.cond()) != Sort::Bool) {
            fail(depth, "T-If", "condition is not bool");
            break;
          }
        } catch (const SortError& e) {
          fail(depth, "T-If", e.what());
          break;
        }
        auto a = check(ctx, p.then_branch(), t, depth + 1);
        if (!a) break;
        auto b = check(ctx, p.else_branch(), t, depth + 1);
        if (!b) break;
        return Derivation{"T-If", p, t, {*a, *b}};
      }
      case PK::Send:
      case PK::Recv:
        if (t.is_prefix()) return prefix(ctx, p, t, depth);
        break;
      case PK::Sum:
        if (t.is_sum()) {
          auto a = check(ctx, p.left(), t.left(), depth + 1);
          if (a) {
            if (auto b = check(ctx, p.right(), t.right(), depth + 1)) return Derivation{"T-Sum", p, t, {*a, *b}};
          }
        }
        break;
    }
    if (t.is_sum()) return weaken(ctx, p, t, depth);
    if (p.kind() != PK::If && p.kind() != PK::Mu && p.kind() != PK::PVar) {
      fail(depth, rule_for(p), "process " + print_process(p) + " does not match type " + print_type(t));
    }
    return std::nullopt;
  }

  std::optional<TypingFailure> failure() const { return best_; }

 private:
  static std::string rule_for(const Process& p) {
    switch (p.kind()) {
      case Process::Kind::Send: return "T-Out";
      case Process::Kind::Recv: return "T-Inp";
      case Process::Kind::Sum: return "T-Sum";
      case Process::Kind::Inaction: return "T-End";
      default: return "T-Sum";
    }
  }

  std::optional<Derivation> weaken(const Context& ctx, const Process& p, const SessionType& t, int depth) {
    bool try_left = true, try_right = true;
    if (opts_.label_fast_path && p.is_prefix()) {
      auto has = [&](const SessionType& side) {
        for (const auto& l : tagged_labels(side)) {
          if (l.label == p.label()) return true;
        }
        return false;
      };
      try_left = has(t.left());
      try_right = !try_left && has(t.right());
      if (!try_left && !try_right) {
        fail(depth, rule_for(p), "label " + p.label() + " is not offered by " + print_type(t));
        return std::nullopt;
      }
    }
    if (try_left) {
      if (auto d = check(ctx, p, t.left(), depth + 1)) return Derivation{"T-Sum-L", p, t, {*d}};
    }
    if (try_right) {
      if (auto d = check(ctx, p, t.right(), depth + 1)) return Derivation{"T-Sum-R", p, t, {*d}};
    }
    return std::nullopt;
  }

  std::optional<Derivation> prefix(const Context& ctx, const Process& p, const SessionType& t, int depth) {
    const bool send = p.kind() == Process::Kind::Send;
    const std::string rule = send ? "T-Out" : "T-Inp";
    if (t.prefix_polarity() != (send ? Polarity::Send : Polarity::Receive)) {
      fail(depth, rule, std::string(send ? "output" : "input") + " against " + print_type(t));
      return std::nullopt;
    }
    if (p.peer() != t.peer() || p.label() != t.label()) {
      fail(depth, rule,
           "prefix " + p.peer() + (send ? "!" : "?") + p.label() + " does not match " + print_type(t));
      return std::nullopt;
    }
    std::optional<Derivation> d;
    if (send) {
      try {
        Sort s = sort_expr(ctx, p.payload());
        if (s != t.payload()) {
          fail(depth, rule, "payload has sort " + std::string(to_string(s)) + ", expected " +
                                std::string(to_string(t.payload())));
          return std::nullopt;
        }
      } catch (const SortError& e) {
        fail(depth, rule, e.what());
        return std::nullopt;
      }
      d = check(ctx, p.cont(), t.cont(), depth + 1);
    } else {
      d = check(ctx.with_sort(p.binder(), t.payload()), p.cont(), t.cont(), depth + 1);
    }
    if (!d) return std::nullopt;
    return Derivation{rule, p, t, {*d}};
  }

  void fail(int depth, const std::string& rule, const std::string& msg) {
    if (!best_ || depth > best_depth_) {
      best_ = TypingFailure{"", rule, msg};
      best_depth_ = depth;
    }
  }

  const CheckOptions& opts_;
  std::optional<TypingFailure> best_;
  int best_depth_ = -1;
};

}  // namespace

ProcessCheck check_process(const Context& ctx, const Process& p, const SessionType& t, const CheckOptions& opts) {
  Checker c(opts);
  ProcessCheck out;
  out.derivation = c.check(ctx, p, t, 0);
  out.ok = out.derivation.has_value();
  if (!out.ok) {
    out.failure = c.failure();
    if (!out.failure) out.failure = TypingFailure{"", "T-Thr", "no rule applies"};
  }
  return out;
}

TypingVerdict check_session(const Session& m, const TypeEnv& declared, const Oracle& omega,
                            const SessionCheckOptions& opts) {
  std::set<Participant> threads, decl;
  for (const auto& th : m.threads()) threads.insert(th.participant);
  for (const auto& [p, _] : declared) decl.insert(p);
  if (threads != decl) throw ParticipantMismatch("session participants differ from declared environment");

  TypingVerdict v;
  for (const auto& th : m.threads()) {
    const SessionType& t = declared.at(th.participant);
    ThreadResult r{th.participant, false, std::nullopt};
    if (auto issue = well_formedness_issue(t)) {
      v.failures.push_back({th.participant, "T-Thr", "declared type is not well formed: " + *issue});
    } else {
      auto pc = check_process(Context{}, th.body, t, opts.process);
      r.ok = pc.ok;
      r.derivation = std::move(pc.derivation);
      if (!pc.ok) {
        TypingFailure f = *pc.failure;
        f.position = th.participant;
        v.failures.push_back(std::move(f));
      }
    }
    v.threads.push_back(std::move(r));
  }
  if (!declared.empty()) {
    std::size_t i = 0;
    for (auto& block : minimal_partition(declared)) {
      ClosureReport rep = compliance(omega, block, opts.closure);
      if (!rep.verdict) {
        std::string msg = "block is not compliant";
        if (const ClosureLeaf* w = rep.witness()) {
          msg += "; " + std::string(to_string(w->kind)) + " at {" + print_env(w->env) + "}";
          std::replace(msg.begin(), msg.end(), '\n', ',');
        }
        v.failures.push_back({"block " + std::to_string(i), "T-Ses", msg});
      }
      v.blocks.push_back({std::move(block), std::move(rep)});
      ++i;
    }
  }
  v.ok = v.failures.empty();
  return v;
}

nlohmann::json to_json(const TypingVerdict& v) {
  nlohmann::json j;
  j["ok"] = v.ok;
  j["failures"] = nlohmann::json::array();
  for (const auto& f : v.failures) {
    j["failures"].push_back({{"position", f.position}, {"rule", f.rule}, {"message", f.message}});
  }
  j["threads"] = nlohmann::json::array();
  for (const auto& t : v.threads) {
    nlohmann::json tj{{"participant", t.participant}, {"ok", t.ok}};
    if (t.derivation) tj["rules"] = t.derivation->rules();
    j["threads"].push_back(tj);
  }
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : v.blocks) {
    nlohmann::json bj = to_json(b.report);
    bj["env"] = print_env(b.env);
    j["blocks"].push_back(bj);
  }
  return j;
}

}  // namespace mpst
