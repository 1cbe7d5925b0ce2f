#ifndef MPST_BRUTE_HPP
#define MPST_BRUTE_HPP

#include <cstddef>
#include <unordered_set>
#include <vector>

#include "mpst/action.hpp"
#include "mpst/env_lts.hpp"
#include "mpst/syntax.hpp"

namespace mpst {

/// Exhaustive reachability over the non-deterministic environment LTS.
struct ReachSet {
  /// Discovery order; nodes[0] is the start.
  std::vector<TypeEnv> nodes;
  std::unordered_set<TypeEnv> visited;
  std::unordered_set<TypeEnv> stuck;
  std::vector<EnvEdge> edges;  // indices into nodes
};

ReachSet reachable_envs(const TypeEnv& d, std::size_t cap = 50000);

/// No reachable environment is a mismatch and no stuck one is a deadlock.
bool reference_verdict(const TypeEnv& d, std::size_t cap = 50000);

struct SessionState {
  enum class Tag : std::uint8_t { Ended, Stuck, Live };
  Session session;
  Tag tag;
  std::size_t depth;  // BFS distance from the start
};

/// Every session reachable in at most `depth` steps, deduplicated up to
/// syntactic equality, in BFS order. Throws CapExceeded past `cap` states.
std::vector<SessionState> explore_session(const Session& m, std::size_t depth, std::size_t cap = 100000);

}  // namespace mpst

#endif  // MPST_BRUTE_HPP
