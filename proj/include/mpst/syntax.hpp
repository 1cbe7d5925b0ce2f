#ifndef MPST_SYNTAX_HPP
#define MPST_SYNTAX_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mpst {

using Participant = std::string;
using Label = std::string;
using TypeVar = std::string;
using VarName = std::string;
using ProcVar = std::string;

enum class Sort : std::uint8_t { Nat, Int, Str, Bool, Unit };

std::string_view to_string(Sort s) noexcept;
std::optional<Sort> sort_from_string(std::string_view text) noexcept;

/// Direction of a prefix: `!` sends, `?` receives.
enum class Polarity : std::uint8_t { Send, Receive };

/// A label paired with its payload sort, written l@S.
struct TaggedLabel {
  Label label;
  Sort sort;
  friend auto operator<=>(const TaggedLabel&, const TaggedLabel&) = default;
};

class NotRecursive : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configured exploration bound was reached before a result was known.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline std::size_t hash_mix(std::size_t seed, std::size_t value) noexcept {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Session types

/// Immutable iso-recursive session type. Copies share structure; equality is
/// syntactic, so `rec X . T` never equals its unfolding unless X is unused.
class SessionType {
 public:
  enum class Kind : std::uint8_t { Out, In, Sum, End, Mu, Var };

  SessionType();  // end

  static SessionType out(Participant peer, Label label, Sort payload, SessionType cont);
  static SessionType in(Participant peer, Label label, Sort payload, SessionType cont);
  static SessionType prefix(Polarity pol, Participant peer, Label label, Sort payload,
                            SessionType cont);
  static SessionType sum(SessionType left, SessionType right);
  static SessionType end();
  static SessionType mu(TypeVar var, SessionType body);
  static SessionType var(TypeVar var);

  Kind kind() const noexcept;
  bool is_prefix() const noexcept { return kind() == Kind::Out || kind() == Kind::In; }
  bool is_sum() const noexcept { return kind() == Kind::Sum; }
  bool is_end() const noexcept { return kind() == Kind::End; }
  bool is_mu() const noexcept { return kind() == Kind::Mu; }
  bool is_var() const noexcept { return kind() == Kind::Var; }

  // Prefix accessors (Out / In).
  Polarity prefix_polarity() const;
  const Participant& peer() const;
  const Label& label() const;
  Sort payload() const;
  const SessionType& cont() const;

  // Sum accessors.
  const SessionType& left() const;
  const SessionType& right() const;

  // Mu / Var accessors.
  const TypeVar& var_name() const;
  const SessionType& body() const;

  std::size_t hash() const noexcept;
  /// Number of constructors in the term.
  std::size_t size() const noexcept;

  friend bool operator==(const SessionType& a, const SessionType& b) noexcept;

 private:
  struct Node;
  explicit SessionType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static SessionType make(Node node);

  std::shared_ptr<const Node> node_;
};

struct SessionType::Node {
  Kind kind = Kind::End;
  std::string name;  // peer for prefixes, variable for Mu/Var
  Label label;
  Sort sort = Sort::Unit;
  std::vector<SessionType> kids;  // cont | left,right | body
  std::size_t hash = 0;
  std::size_t size = 1;
};

// ---------------------------------------------------------------------------
// Values and expressions

struct Unit {
  friend bool operator==(Unit, Unit) noexcept { return true; }
};

class Value {
 public:
  using Data = std::variant<std::uint64_t, std::int64_t, std::string, bool, Unit>;

  static Value nat(std::uint64_t n) { return Value(Sort::Nat, n); }
  static Value integer(std::int64_t z) { return Value(Sort::Int, z); }
  static Value str(std::string s) { return Value(Sort::Str, std::move(s)); }
  static Value boolean(bool b) { return Value(Sort::Bool, b); }
  static Value unit() { return Value(Sort::Unit, Unit{}); }

  Sort sort() const noexcept { return sort_; }
  std::uint64_t as_nat() const { return std::get<std::uint64_t>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  const std::string& as_str() const { return std::get<std::string>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const Data& data() const noexcept { return data_; }

  std::size_t hash() const noexcept;
  friend bool operator==(const Value&, const Value&) = default;

 private:
  Value(Sort sort, Data data) : sort_(sort), data_(std::move(data)) {}
  Sort sort_;
  Data data_;
};

class Expr {
 public:
  enum class Kind : std::uint8_t { Lit, Var, Lt, Eq, Not, And, Or };

  Expr();  // unit literal
  static Expr lit(Value v);
  static Expr var(VarName x);
  static Expr lt(Expr a, Expr b);
  static Expr eq(Expr a, Expr b);
  static Expr negate(Expr a);
  static Expr conj(Expr a, Expr b);
  static Expr disj(Expr a, Expr b);

  Kind kind() const noexcept;
  bool is_binary() const noexcept;
  const Value& value() const;
  const VarName& var_name() const;
  const Expr& lhs() const;  // also the operand of Not
  const Expr& rhs() const;

  std::size_t hash() const noexcept;
  friend bool operator==(const Expr& a, const Expr& b) noexcept;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Node node);
  std::shared_ptr<const Node> node_;
};

struct Expr::Node {
  Kind kind = Kind::Lit;
  std::optional<Value> value;
  VarName name;
  std::vector<Expr> kids;
  std::size_t hash = 0;
};

// ---------------------------------------------------------------------------
// Processes and sessions

class Process {
 public:
  enum class Kind : std::uint8_t { Send, Recv, Sum, Mu, PVar, If, Inaction };

  Process();  // 0
  static Process send(Participant peer, Label label, Expr payload, Process cont);
  static Process recv(Participant peer, Label label, VarName binder, Process cont);
  static Process sum(Process left, Process right);
  static Process mu(ProcVar pvar, Process body);
  static Process pvar(ProcVar pvar);
  static Process if_then_else(Expr cond, Process then_branch, Process else_branch);
  static Process inaction();

  Kind kind() const noexcept;
  bool is_prefix() const noexcept { return kind() == Kind::Send || kind() == Kind::Recv; }

  const Participant& peer() const;
  const Label& label() const;
  const Expr& payload() const;  // Send
  const VarName& binder() const;  // Recv
  const Process& cont() const;  // Send / Recv
  const Process& left() const;
  const Process& right() const;
  const ProcVar& pvar_name() const;  // Mu / PVar
  const Process& body() const;  // Mu
  const Expr& cond() const;
  const Process& then_branch() const;
  const Process& else_branch() const;

  std::size_t hash() const noexcept;
  std::size_t size() const noexcept;
  friend bool operator==(const Process& a, const Process& b) noexcept;

 private:
  struct Node;
  explicit Process(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Process make(Node node);
  std::shared_ptr<const Node> node_;
};

struct Process::Node {
  Kind kind = Kind::Inaction;
  std::string name;  // peer or pvar
  Label label;
  VarName binder;
  std::optional<Expr> expr;  // payload or condition
  std::vector<Process> kids;
  std::size_t hash = 0;
  std::size_t size = 1;
};

struct Thread {
  Participant participant;
  Process body;
  friend bool operator==(const Thread&, const Thread&) = default;
};

class DuplicateParticipant : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parallel composition of threads, kept in file order. Participants are
/// pairwise distinct.
class Session {
 public:
  Session() = default;
  explicit Session(std::vector<Thread> threads);

  const std::vector<Thread>& threads() const noexcept { return threads_; }
  std::size_t size() const noexcept { return threads_.size(); }
  const Thread& operator[](std::size_t i) const { return threads_[i]; }
  std::optional<std::size_t> index_of(std::string_view p) const;

  Session with_body(std::size_t i, Process body) const;
  std::size_t hash() const noexcept;

  friend bool operator==(const Session&, const Session&) = default;

 private:
  std::vector<Thread> threads_;
};

/// Structural congruence: equality up to permutation of threads.
bool congruent(const Session& a, const Session& b);

// ---------------------------------------------------------------------------
// Type environments

/// Finite map from participants to session types, iterated in ascending
/// participant order. Equality is pointwise syntactic.
class TypeEnv {
 public:
  using Map = std::map<Participant, SessionType, std::less<>>;

  TypeEnv() = default;
  explicit TypeEnv(Map bindings);
  TypeEnv(std::initializer_list<std::pair<const Participant, SessionType>> init);

  bool empty() const noexcept { return bindings_.empty(); }
  std::size_t size() const noexcept { return bindings_.size(); }
  bool contains(std::string_view p) const { return bindings_.find(p) != bindings_.end(); }
  const SessionType& at(std::string_view p) const;
  const SessionType* find(std::string_view p) const;

  /// Copy with `p` bound to `t` (added or replaced).
  TypeEnv with(const Participant& p, SessionType t) const;
  std::vector<Participant> domain() const;

  Map::const_iterator begin() const noexcept { return bindings_.begin(); }
  Map::const_iterator end() const noexcept { return bindings_.end(); }
  const Map& bindings() const noexcept { return bindings_; }

  std::size_t hash() const noexcept { return hash_; }
  friend bool operator==(const TypeEnv& a, const TypeEnv& b) noexcept {
    return a.hash_ == b.hash_ && a.bindings_ == b.bindings_;
  }

 private:
  void rehash() noexcept;
  Map bindings_;
  std::size_t hash_ = 0;
};

// ---------------------------------------------------------------------------
// Substitution

SessionType substitute_type(const SessionType& body, const TypeVar& var,
                            const SessionType& replacement);

/// T{rec X . T / X} for `t = rec X . T`; throws NotRecursive otherwise.
SessionType unfold(const SessionType& t);

Process substitute_proc(const Process& body, const ProcVar& pvar, const Process& replacement);
Process substitute_value(const Process& body, const VarName& var, const Value& v);
Expr substitute_expr(const Expr& e, const VarName& var, const Value& v);

/// P{rec X . P / X} for `p = rec X . P`; throws NotRecursive otherwise.
Process unfold(const Process& p);

// ---------------------------------------------------------------------------
// Well-formedness and structural helpers

std::set<TypeVar> free_type_vars(const SessionType& t);
bool is_closed(const SessionType& t);

/// Every type variable occurs guarded by an input or output prefix.
bool is_contractive(const SessionType& t);

std::multiset<Label> labels_multiset(const SessionType& t);
std::optional<Polarity> polarity(const SessionType& t);
std::optional<Participant> participant_of(const SessionType& t);
bool is_uniform_sum(const SessionType& t);
bool is_well_behaved(const SessionType& t);

bool is_well_formed_type(const SessionType& t);
/// Human-readable reason a type is not well formed, or nullopt if it is.
std::optional<std::string> well_formedness_issue(const SessionType& t);

bool is_well_formed_env(const TypeEnv& d);

std::set<Participant> parties(const SessionType& t);
std::set<Participant> parties_env(const TypeEnv& d);

/// Tagged labels of the top-level prefixes (no descent into continuations).
std::set<TaggedLabel> tagged_labels(const SessionType& t);

/// Unguarded peer of a prefix or sum; nullopt for end, rec and variables.
std::optional<Participant> top(const SessionType& t);

}  // namespace mpst

template <>
struct std::hash<mpst::SessionType> {
  std::size_t operator()(const mpst::SessionType& t) const noexcept { return t.hash(); }
};
template <>
struct std::hash<mpst::Process> {
  std::size_t operator()(const mpst::Process& p) const noexcept { return p.hash(); }
};
template <>
struct std::hash<mpst::TypeEnv> {
  std::size_t operator()(const mpst::TypeEnv& d) const noexcept { return d.hash(); }
};
template <>
struct std::hash<mpst::Session> {
  std::size_t operator()(const mpst::Session& m) const noexcept { return m.hash(); }
};

#endif  // MPST_SYNTAX_HPP
