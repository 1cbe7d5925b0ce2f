#include "mpst/brute.hpp"

#include <deque>
#include <unordered_map>

#include "mpst/compliance.hpp"
#include "mpst/semantics.hpp"

namespace mpst {

ReachSet reachable_envs(const TypeEnv& d, std::size_t cap) {
  ReachSet r;
  std::unordered_map<TypeEnv, std::size_t> index;
  auto intern = [&](const TypeEnv& e) {
    auto [it, fresh] = index.emplace(e, r.nodes.size());
    if (fresh) {
      if (r.nodes.size() >= cap) throw CapExceeded("more than " + std::to_string(cap) + " reachable environments");
      r.nodes.push_back(e);
      r.visited.insert(e);
    }
    return std::make_pair(it->second, fresh);
  };
  intern(d);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    auto steps = env_transitions(r.nodes[i]);
    if (steps.empty()) r.stuck.insert(r.nodes[i]);
    for (auto& s : steps) {
      auto [j, _] = intern(s.next);
      r.edges.push_back({i, s.action, j});
    }
  }
  return r;
}

bool reference_verdict(const TypeEnv& d, std::size_t cap) {
  ReachSet r = reachable_envs(d, cap);
  for (const auto& e : r.nodes) {
    if (is_mismatch(e)) return false;
  }
  for (const auto& e : r.stuck) {
    if (!is_consumed(e)) return false;
  }
  return true;
}

std::vector<SessionState> explore_session(const Session& m, std::size_t depth, std::size_t cap) {
  std::vector<SessionState> out;
  std::unordered_set<Session> seen{m};
  std::deque<std::pair<Session, std::size_t>> queue{{m, 0}};
  while (!queue.empty()) {
    auto [s, k] = std::move(queue.front());
    queue.pop_front();
    auto steps = session_transitions(s);
    SessionState::Tag tag = steps.empty() ? (is_ended(s) ? SessionState::Tag::Ended : SessionState::Tag::Stuck)
                                          : SessionState::Tag::Live;
    out.push_back({s, tag, k});
    if (k == depth) continue;
    for (auto& st : steps) {
      if (seen.insert(st.next).second) {
        if (seen.size() > cap) throw CapExceeded("more than " + std::to_string(cap) + " session states");
        queue.emplace_back(std::move(st.next), k + 1);
      }
    }
  }
  return out;
}

}  // namespace mpst
