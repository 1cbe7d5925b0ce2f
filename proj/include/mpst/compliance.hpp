#ifndef MPST_COMPLIANCE_HPP
#define MPST_COMPLIANCE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mpst/env_lts.hpp"
#include "mpst/syntax.hpp"

namespace mpst {

class UniverseCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

class ExplorationCapExceeded : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};

/// Per participant, every type the deterministic system can bind it to.
using RedexUniverse = std::map<Participant, std::unordered_set<SessionType>, std::less<>>;

/// Saturates each binding under unfolding, prefix continuations, and
/// remnants of sums. Throws UniverseCapExceeded past `cap` types for one
/// participant.
RedexUniverse redex_universe(const TypeEnv& d, std::size_t cap = 10000);

struct ClosureLeaf {
  enum class Kind : std::uint8_t { Consumed, StuckDeadlock, FixpointLoop, Mismatch, NotMinimal };

  Kind kind;
  TypeEnv env;
  /// Environments from the root down to (excluding) `env`.
  std::vector<TypeEnv> path;
  /// Edge labels along the path; steps[i] leads into path[i+1] (or env).
  std::vector<std::string> steps;
  std::optional<std::pair<Participant, Participant>> pair;  // Mismatch
  bool sound = true;                                        // FixpointLoop

  bool is_error() const noexcept;
};

std::string_view to_string(ClosureLeaf::Kind k) noexcept;

struct ClosureReport {
  std::vector<ClosureLeaf> leaves;
  std::size_t explored = 0;
  bool verdict = false;

  /// First error leaf in exploration order.
  const ClosureLeaf* witness() const;
};

struct ClosureOptions {
  LabelOrder label_order = LabelOrder::Lex;
  std::size_t universe_cap = 10000;
  /// Bound on explored configurations; 0 disables it.
  std::size_t node_cap = 2000000;
  /// Diagnostic: explore a sum continuation only when the redex subtree
  /// ends in a mismatch or a loop. No soundness claim.
  bool paper_exceptions = false;
};

ClosureReport closure(const Oracle& omega, const TypeEnv& d, const ClosureOptions& opts = {});

std::optional<std::pair<Participant, Participant>> is_mismatch(const TypeEnv& d);
bool is_consumed(const TypeEnv& d);
bool is_deadlock(const TypeEnv& d);
bool is_error(const TypeEnv& d);

ClosureReport compliance(const Oracle& omega, const TypeEnv& d, const ClosureOptions& opts = {});

nlohmann::json to_json(const ClosureLeaf& leaf);
nlohmann::json to_json(const ClosureReport& report);

}  // namespace mpst

#endif  // MPST_COMPLIANCE_HPP
