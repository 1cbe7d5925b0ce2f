#include "mpst/compliance.hpp"

#include <memory>

#include "mpst/surface.hpp"

namespace mpst {

RedexUniverse redex_universe(const TypeEnv& d, std::size_t cap) {
  RedexUniverse out;
  for (const auto& [p, t] : d) {
    auto& set = out[p];
    std::vector<SessionType> todo{t};
    set.insert(t);
    auto add = [&](const SessionType& x) {
      if (set.insert(x).second) {
        if (set.size() > cap) {
          throw UniverseCapExceeded("redex universe of '" + p + "' exceeds " + std::to_string(cap) +
                                    " types");
        }
        todo.push_back(x);
      }
    };
    while (!todo.empty()) {
      SessionType cur = std::move(todo.back());
      todo.pop_back();
      for (const auto& s : type_transitions(cur)) {
        add(s.next);
        if (s.remnant) add(*s.remnant);
      }
    }
  }
  return out;
}

bool ClosureLeaf::is_error() const noexcept {
  switch (kind) {
    case Kind::Consumed: return false;
    case Kind::FixpointLoop: return !sound;
    default: return true;
  }
}

std::string_view to_string(ClosureLeaf::Kind k) noexcept {
  switch (k) {
    case ClosureLeaf::Kind::Consumed: return "consumed";
    case ClosureLeaf::Kind::StuckDeadlock: return "deadlock";
    case ClosureLeaf::Kind::FixpointLoop: return "fixpoint";
    case ClosureLeaf::Kind::Mismatch: return "mismatch";
    case ClosureLeaf::Kind::NotMinimal: return "not-minimal";
  }
  return "?";
}

const ClosureLeaf* ClosureReport::witness() const {
  for (const auto& l : leaves) {
    if (l.is_error()) return &l;
  }
  return nullptr;
}

std::optional<std::pair<Participant, Participant>> is_mismatch(const TypeEnv& d) {
  for (auto i = d.begin(); i != d.end(); ++i) {
    auto qi = top(i->second);
    if (!qi) continue;
    for (auto j = std::next(i); j != d.end(); ++j) {
      if (*qi != j->first) continue;
      auto pj = top(j->second);
      if (pj && *pj == i->first && mismatch2(i->second, j->second)) return std::make_pair(i->first, j->first);
    }
  }
  return std::nullopt;
}

bool is_consumed(const TypeEnv& d) {
  for (const auto& [_, t] : d) {
    if (!t.is_end()) return false;
  }
  return true;
}

bool is_deadlock(const TypeEnv& d) { return env_transitions(d).empty() && !is_consumed(d); }

bool is_error(const TypeEnv& d) { return is_mismatch(d).has_value() || is_deadlock(d); }

namespace {

struct PathNode {
  TypeEnv env;
  std::string step;  // label of the edge into env
  std::shared_ptr<const PathNode> parent;
};
using PathPtr = std::shared_ptr<const PathNode>;

bool on_path(const PathPtr& path, const TypeEnv& env) {
  for (const PathNode* n = path.get(); n; n = n->parent.get()) {
    if (n->env == env) return true;
  }
  return false;
}

void fill_path(ClosureLeaf& leaf, const PathPtr& path, const std::string& step_in) {
  std::vector<const PathNode*> chain;
  for (const PathNode* n = path.get(); n; n = n->parent.get()) chain.push_back(n);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    leaf.path.push_back((*it)->env);
    if (!(*it)->step.empty()) leaf.steps.push_back((*it)->step);
  }
  if (!step_in.empty()) leaf.steps.push_back(step_in);
}

class Explorer {
 public:
  Explorer(const Oracle& omega, const TypeEnv& root, const ClosureOptions& opts)
      : omega_(omega), opts_(opts), universe_(redex_universe(root, opts.universe_cap)) {}

  struct Outcome {
    std::optional<DetStep> step;
    bool leaf = false;
  };

  // Classifies `env` as a leaf or returns its deterministic step.
  Outcome visit(const TypeEnv& env, const PathPtr& path, const std::string& step_in,
                std::vector<ClosureLeaf>& leaves) {
    ++explored_;
    if (opts_.node_cap != 0 && explored_ > opts_.node_cap) {
      throw ExplorationCapExceeded("closure explored more than " + std::to_string(opts_.node_cap) +
                                   " configurations");
    }
    check_in_universe(env);
    auto make_leaf = [&](ClosureLeaf::Kind k) -> ClosureLeaf& {
      ClosureLeaf leaf{k, env, {}, {}, std::nullopt, true};
      fill_path(leaf, path, step_in);
      leaves.push_back(std::move(leaf));
      return leaves.back();
    };
    if (!is_minimal(env)) {
      make_leaf(ClosureLeaf::Kind::NotMinimal);
      return {std::nullopt, true};
    }
    if (on_path(path, env)) {
      OracleReply r = omega_(env);
      ClosureLeaf& leaf = make_leaf(ClosureLeaf::Kind::FixpointLoop);
      leaf.sound = r.kind != OracleReply::Kind::Ret0 && !is_mismatch(env).has_value();
      return {std::nullopt, true};
    }
    try {
      auto step = det_step(omega_, env, opts_.label_order);
      if (!step) {
        make_leaf(is_consumed(env) ? ClosureLeaf::Kind::Consumed : ClosureLeaf::Kind::StuckDeadlock);
        return {std::nullopt, true};
      }
      return {std::move(step), false};
    } catch (const MismatchDetected& m) {
      make_leaf(ClosureLeaf::Kind::Mismatch).pair = std::make_pair(m.p(), m.q());
      return {std::nullopt, true};
    }
  }

  std::size_t explored() const noexcept { return explored_; }

 private:
  void check_in_universe(const TypeEnv& env) const {
    for (const auto& [p, t] : env) {
      auto it = universe_.find(p);
      if (it == universe_.end() || !it->second.count(t)) {
        throw std::logic_error("closure reached a binding of '" + p +
                               "' outside its saturated redex universe");
      }
    }
  }

  const Oracle& omega_;
  const ClosureOptions& opts_;
  RedexUniverse universe_;
  std::size_t explored_ = 0;
};

std::string continuation_label(const Action& a) { return "cont[" + to_string(a) + "]"; }

void explore_full(Explorer& ex, const TypeEnv& root, std::vector<ClosureLeaf>& leaves) {
  struct Frame {
    TypeEnv env;
    PathPtr path;
    std::string step_in;
  };
  std::vector<Frame> stack{{root, nullptr, ""}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    auto outcome = ex.visit(f.env, f.path, f.step_in, leaves);
    if (outcome.leaf) continue;
    auto here = std::make_shared<const PathNode>(PathNode{f.env, f.step_in, f.path});
    DetStep& s = *outcome.step;
    if (s.continuation) stack.push_back({std::move(*s.continuation), here, continuation_label(s.action)});
    stack.push_back({std::move(s.redex), here, to_string(s.action)});
  }
}

// Redex first; the continuation only when the redex subtree ends in a
// mismatch or a loop.
void explore_exceptions(Explorer& ex, const TypeEnv& env, const PathPtr& path, const std::string& step_in,
                        std::vector<ClosureLeaf>& leaves) {
  auto outcome = ex.visit(env, path, step_in, leaves);
  if (outcome.leaf) return;
  auto here = std::make_shared<const PathNode>(PathNode{env, step_in, path});
  DetStep& s = *outcome.step;
  const std::size_t before = leaves.size();
  explore_exceptions(ex, s.redex, here, to_string(s.action), leaves);
  if (!s.continuation) return;
  bool caught = false;
  for (std::size_t i = before; i < leaves.size(); ++i) {
    auto k = leaves[i].kind;
    if (k == ClosureLeaf::Kind::Mismatch || k == ClosureLeaf::Kind::FixpointLoop) caught = true;
  }
  if (caught) explore_exceptions(ex, *s.continuation, here, continuation_label(s.action), leaves);
}

}  // namespace

ClosureReport closure(const Oracle& omega, const TypeEnv& d, const ClosureOptions& opts) {
  ClosureReport report;
  Explorer ex(omega, d, opts);
  if (opts.paper_exceptions) {
    explore_exceptions(ex, d, nullptr, "", report.leaves);
  } else {
    explore_full(ex, d, report.leaves);
  }
  report.explored = ex.explored();
  report.verdict = report.witness() == nullptr;
  return report;
}

ClosureReport compliance(const Oracle& omega, const TypeEnv& d, const ClosureOptions& opts) {
  return closure(omega, d, opts);
}

nlohmann::json to_json(const ClosureLeaf& leaf) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(leaf.kind));
  j["env"] = print_env(leaf.env);
  j["path"] = leaf.steps;
  if (leaf.pair) j["pair"] = {leaf.pair->first, leaf.pair->second};
  if (leaf.kind == ClosureLeaf::Kind::FixpointLoop) j["sound"] = leaf.sound;
  return j;
}

nlohmann::json to_json(const ClosureReport& report) {
  nlohmann::json j;
  j["verdict"] = report.verdict;
  j["explored"] = report.explored;
  j["leaves"] = nlohmann::json::array();
  for (const auto& l : report.leaves) j["leaves"].push_back(to_json(l));
  if (const ClosureLeaf* w = report.witness()) j["witness"] = to_json(*w);
  return j;
}

}  // namespace mpst
