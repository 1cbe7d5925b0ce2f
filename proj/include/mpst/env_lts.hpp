#ifndef MPST_ENV_LTS_HPP
#define MPST_ENV_LTS_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpst/action.hpp"
#include "mpst/syntax.hpp"

namespace mpst {

// ---------------------------------------------------------------------------
// Type-level steps

/// Discarded sum branches. nullopt is the neutral placeholder.
using Remnant = std::optional<SessionType>;

/// Remnant sum: Sum when both sides are types, else whichever side exists.
Remnant remnant_plus(const Remnant& a, const Remnant& b);

struct PrefixAction {
  Polarity direction;
  Participant peer;
  Label label;
  Sort sort;
  friend bool operator==(const PrefixAction&, const PrefixAction&) = default;
};

struct TypeStep {
  std::optional<PrefixAction> prefix;  // nullopt: τ (unfolding)
  SessionType next;
  Remnant remnant;
};

/// Prefix steps through sums (left to right) and the τ step of `rec`.
std::vector<TypeStep> type_transitions(const SessionType& t);

// ---------------------------------------------------------------------------
// Non-deterministic environment steps

struct EnvStep {
  EnvAction action;
  TypeEnv next;
};

/// τ_p for every recursive binding, then every communication, receivers in
/// participant order, senders in participant order, branches left to right.
std::vector<EnvStep> env_transitions(const TypeEnv& d);

// ---------------------------------------------------------------------------
// Oracles

struct OracleReply {
  enum class Kind : std::uint8_t { Ret0, Ret1, Ret2 };
  Kind kind = Kind::Ret0;
  Participant p;
  Participant q;

  static OracleReply none() { return {}; }
  static OracleReply unfold(Participant p) { return {Kind::Ret1, std::move(p), {}}; }
  static OracleReply pair(Participant p, Participant q) { return {Kind::Ret2, std::move(p), std::move(q)}; }
  friend bool operator==(const OracleReply&, const OracleReply&) = default;
};

std::string to_string(const OracleReply& r);

using Oracle = std::function<OracleReply(const TypeEnv&)>;

/// Ascending scan: first recursive binding, else least mutual-top pair.
Oracle default_oracle();
/// Same policy with a descending scan.
Oracle alt_oracle();

/// The reply respects the enabled actions of `d`.
bool is_fair_reply(const TypeEnv& d, const OracleReply& reply);

// ---------------------------------------------------------------------------
// Deterministic step

enum class LabelOrder : std::uint8_t { Lex, Syntactic };

class MismatchDetected : public std::runtime_error {
 public:
  MismatchDetected(TypeEnv env, Participant p, Participant q);
  const TypeEnv& env() const noexcept { return env_; }
  const Participant& p() const noexcept { return p_; }
  const Participant& q() const noexcept { return q_; }

 private:
  TypeEnv env_;
  Participant p_;
  Participant q_;
};

class OracleNotFair : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class EmptyEnvironment : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DetStep {
  EnvAction action;
  TypeEnv redex;
  /// Environment of untaken branches, or nullopt for the empty placeholder.
  std::optional<TypeEnv> continuation;
};

/// Two types facing each other cannot synchronise: same polarity, or no
/// common tagged label.
bool mismatch2(const SessionType& t1, const SessionType& t2);

/// Labels both types offer at top level, in the order `det_step` tries them.
/// `order_source` supplies occurrence order for LabelOrder::Syntactic.
std::vector<TaggedLabel> common_labels(const SessionType& t1, const SessionType& t2,
                                       LabelOrder order, const SessionType& order_source);

/// nullopt when the oracle answers Ret0. Throws MismatchDetected or
/// OracleNotFair.
std::optional<DetStep> det_step(const Oracle& omega, const TypeEnv& d,
                                LabelOrder order = LabelOrder::Lex);

// ---------------------------------------------------------------------------
// Minimal partition

/// Blocks of participants whose non-ended members share no party. End-typed
/// bindings join the first block. Blocks are ordered by least participant.
std::vector<TypeEnv> minimal_partition(const TypeEnv& d);
bool is_minimal(const TypeEnv& d);

// ---------------------------------------------------------------------------
// Graph export

struct EnvEdge {
  std::size_t from;
  EnvAction action;
  std::size_t to;
};

std::string render_dot(const std::vector<TypeEnv>& nodes, const std::vector<EnvEdge>& edges);

}  // namespace mpst

#endif  // MPST_ENV_LTS_HPP
