#ifndef MPST_ACTION_HPP
#define MPST_ACTION_HPP

#include <string>

#include "mpst/syntax.hpp"

namespace mpst {

/// Step label shared by session and environment transition systems: either
/// an internal step of one participant, or `label@receiver⋈sender`.
struct Action {
  enum class Kind : std::uint8_t { Tau, Sync };

  Kind kind = Kind::Tau;
  Participant participant;  // Tau only
  Label label;              // Sync only
  Participant receiver;
  Participant sender;

  static Action tau(Participant p) {
    Action a;
    a.kind = Kind::Tau;
    a.participant = std::move(p);
    return a;
  }
  static Action sync(Label l, Participant receiver, Participant sender) {
    Action a;
    a.kind = Kind::Sync;
    a.label = std::move(l);
    a.receiver = std::move(receiver);
    a.sender = std::move(sender);
    return a;
  }

  bool is_tau() const noexcept { return kind == Kind::Tau; }

  friend bool operator==(const Action&, const Action&) = default;
};

/// `τ_p` or `l@p⋈q`.
std::string to_string(const Action& a);

using SessionAction = Action;
using EnvAction = Action;

}  // namespace mpst

#endif  // MPST_ACTION_HPP
