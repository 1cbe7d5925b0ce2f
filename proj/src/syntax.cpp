#include "mpst/syntax.hpp"

#include <algorithm>
#include <utility>

namespace mpst {

namespace {

std::size_t str_hash(std::string_view s) noexcept { return std::hash<std::string_view>{}(s); }

[[noreturn]] void wrong_kind(const char* what) {
  throw std::logic_error(std::string("accessor on wrong constructor: ") + what);
}

}  // namespace

std::string_view to_string(Sort s) noexcept {
  switch (s) {
    case Sort::Nat: return "nat";
    case Sort::Int: return "int";
    case Sort::Str: return "str";
    case Sort::Bool: return "bool";
    case Sort::Unit: return "unit";
  }
  return "?";
}

std::optional<Sort> sort_from_string(std::string_view text) noexcept {
  if (text == "nat") return Sort::Nat;
  if (text == "int") return Sort::Int;
  if (text == "str") return Sort::Str;
  if (text == "bool") return Sort::Bool;
  if (text == "unit") return Sort::Unit;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SessionType

SessionType SessionType::make(Node node) {
  std::size_t h = detail::hash_mix(static_cast<std::size_t>(node.kind) + 1, str_hash(node.name));
  h = detail::hash_mix(h, str_hash(node.label));
  h = detail::hash_mix(h, static_cast<std::size_t>(node.sort));
  std::size_t size = 1;
  for (const auto& k : node.kids) {
    h = detail::hash_mix(h, k.hash());
    size += k.size();
  }
  node.hash = h;
  node.size = size;
  return SessionType(std::make_shared<const Node>(std::move(node)));
}

SessionType::SessionType() : SessionType(end()) {}

SessionType SessionType::end() {
  static const SessionType shared = make(Node{});
  return shared;
}

SessionType SessionType::prefix(Polarity pol, Participant peer, Label label, Sort payload,
                                SessionType cont) {
  Node n;
  n.kind = pol == Polarity::Send ? Kind::Out : Kind::In;
  n.name = std::move(peer);
  n.label = std::move(label);
  n.sort = payload;
  n.kids.push_back(std::move(cont));
  return make(std::move(n));
}

SessionType SessionType::out(Participant peer, Label label, Sort payload, SessionType cont) {
  return prefix(Polarity::Send, std::move(peer), std::move(label), payload, std::move(cont));
}

SessionType SessionType::in(Participant peer, Label label, Sort payload, SessionType cont) {
  return prefix(Polarity::Receive, std::move(peer), std::move(label), payload, std::move(cont));
}

SessionType SessionType::sum(SessionType left, SessionType right) {
  Node n;
  n.kind = Kind::Sum;
  n.kids = {std::move(left), std::move(right)};
  return make(std::move(n));
}

SessionType SessionType::mu(TypeVar var, SessionType body) {
  Node n;
  n.kind = Kind::Mu;
  n.name = std::move(var);
  n.kids.push_back(std::move(body));
  return make(std::move(n));
}

SessionType SessionType::var(TypeVar var) {
  Node n;
  n.kind = Kind::Var;
  n.name = std::move(var);
  return make(std::move(n));
}

SessionType::Kind SessionType::kind() const noexcept { return node_->kind; }

Polarity SessionType::prefix_polarity() const {
  if (!is_prefix()) wrong_kind("prefix_polarity");
  return kind() == Kind::Out ? Polarity::Send : Polarity::Receive;
}
const Participant& SessionType::peer() const {
  if (!is_prefix()) wrong_kind("peer");
  return node_->name;
}
const Label& SessionType::label() const {
  if (!is_prefix()) wrong_kind("label");
  return node_->label;
}
Sort SessionType::payload() const {
  if (!is_prefix()) wrong_kind("payload");
  return node_->sort;
}
const SessionType& SessionType::cont() const {
  if (!is_prefix()) wrong_kind("cont");
  return node_->kids[0];
}
const SessionType& SessionType::left() const {
  if (!is_sum()) wrong_kind("left");
  return node_->kids[0];
}
const SessionType& SessionType::right() const {
  if (!is_sum()) wrong_kind("right");
  return node_->kids[1];
}
const TypeVar& SessionType::var_name() const {
  if (!is_mu() && !is_var()) wrong_kind("var_name");
  return node_->name;
}
const SessionType& SessionType::body() const {
  if (!is_mu()) wrong_kind("body");
  return node_->kids[0];
}

std::size_t SessionType::hash() const noexcept { return node_->hash; }
std::size_t SessionType::size() const noexcept { return node_->size; }

bool operator==(const SessionType& a, const SessionType& b) noexcept {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.hash != y.hash || x.size != y.size || x.kind != y.kind) return false;
  if (x.name != y.name || x.label != y.label || x.sort != y.sort) return false;
  return x.kids == y.kids;
}

// ---------------------------------------------------------------------------
// Value / Expr

std::size_t Value::hash() const noexcept {
  std::size_t h = static_cast<std::size_t>(sort_) + 17;
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Unit>) {
          h = detail::hash_mix(h, 0);
        } else {
          h = detail::hash_mix(h, std::hash<V>{}(v));
        }
      },
      data_);
  return h;
}

Expr Expr::make(Node node) {
  std::size_t h = detail::hash_mix(static_cast<std::size_t>(node.kind) + 101, str_hash(node.name));
  if (node.value) h = detail::hash_mix(h, node.value->hash());
  for (const auto& k : node.kids) h = detail::hash_mix(h, k.hash());
  node.hash = h;
  return Expr(std::make_shared<const Node>(std::move(node)));
}

Expr::Expr() : Expr(lit(Value::unit())) {}

Expr Expr::lit(Value v) {
  Node n;
  n.kind = Kind::Lit;
  n.value = std::move(v);
  return make(std::move(n));
}
Expr Expr::var(VarName x) {
  Node n;
  n.kind = Kind::Var;
  n.name = std::move(x);
  return make(std::move(n));
}

#define MPST_BINARY(k, a, b)                \
  [&] {                                     \
    Node n;                                 \
    n.kind = k;                             \
    n.kids = {std::move(a), std::move(b)};  \
    return make(std::move(n));              \
  }()

Expr Expr::lt(Expr a, Expr b) { return MPST_BINARY(Kind::Lt, a, b); }
Expr Expr::eq(Expr a, Expr b) { return MPST_BINARY(Kind::Eq, a, b); }
Expr Expr::conj(Expr a, Expr b) { return MPST_BINARY(Kind::And, a, b); }
Expr Expr::disj(Expr a, Expr b) { return MPST_BINARY(Kind::Or, a, b); }
#undef MPST_BINARY
Expr Expr::negate(Expr a) {
  Node n;
  n.kind = Kind::Not;
  n.kids.push_back(std::move(a));
  return make(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
bool Expr::is_binary() const noexcept {
  switch (kind()) {
    case Kind::Lt:
    case Kind::Eq:
    case Kind::And:
    case Kind::Or: return true;
    default: return false;
  }
}
const Value& Expr::value() const {
  if (kind() != Kind::Lit) wrong_kind("value");
  return *node_->value;
}
const VarName& Expr::var_name() const {
  if (kind() != Kind::Var) wrong_kind("var_name");
  return node_->name;
}
const Expr& Expr::lhs() const {
  if (node_->kids.empty()) wrong_kind("lhs");
  return node_->kids[0];
}
const Expr& Expr::rhs() const {
  if (node_->kids.size() < 2) wrong_kind("rhs");
  return node_->kids[1];
}
std::size_t Expr::hash() const noexcept { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) noexcept {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.hash == y.hash && x.kind == y.kind && x.name == y.name && x.value == y.value &&
         x.kids == y.kids;
}

// ---------------------------------------------------------------------------
// Process

Process Process::make(Node node) {
  std::size_t h = detail::hash_mix(static_cast<std::size_t>(node.kind) + 211, str_hash(node.name));
  h = detail::hash_mix(h, str_hash(node.label));
  h = detail::hash_mix(h, str_hash(node.binder));
  if (node.expr) h = detail::hash_mix(h, node.expr->hash());
  std::size_t size = 1;
  for (const auto& k : node.kids) {
    h = detail::hash_mix(h, k.hash());
    size += k.size();
  }
  node.hash = h;
  node.size = size;
  return Process(std::make_shared<const Node>(std::move(node)));
}

Process::Process() : Process(inaction()) {}

Process Process::inaction() {
  static const Process shared = make(Node{});
  return shared;
}

Process Process::send(Participant peer, Label label, Expr payload, Process cont) {
  Node n;
  n.kind = Kind::Send;
  n.name = std::move(peer);
  n.label = std::move(label);
  n.expr = std::move(payload);
  n.kids.push_back(std::move(cont));
  return make(std::move(n));
}

Process Process::recv(Participant peer, Label label, VarName binder, Process cont) {
  Node n;
  n.kind = Kind::Recv;
  n.name = std::move(peer);
  n.label = std::move(label);
  n.binder = std::move(binder);
  n.kids.push_back(std::move(cont));
  return make(std::move(n));
}

Process Process::sum(Process left, Process right) {
  Node n;
  n.kind = Kind::Sum;
  n.kids = {std::move(left), std::move(right)};
  return make(std::move(n));
}

Process Process::mu(ProcVar pvar, Process body) {
  Node n;
  n.kind = Kind::Mu;
  n.name = std::move(pvar);
  n.kids.push_back(std::move(body));
  return make(std::move(n));
}

Process Process::pvar(ProcVar pvar) {
  Node n;
  n.kind = Kind::PVar;
  n.name = std::move(pvar);
  return make(std::move(n));
}

Process Process::if_then_else(Expr cond, Process then_branch, Process else_branch) {
  Node n;
  n.kind = Kind::If;
  n.expr = std::move(cond);
  n.kids = {std::move(then_branch), std::move(else_branch)};
  return make(std::move(n));
}

Process::Kind Process::kind() const noexcept { return node_->kind; }

const Participant& Process::peer() const {
  if (!is_prefix()) wrong_kind("peer");
  return node_->name;
}
const Label& Process::label() const {
  if (!is_prefix()) wrong_kind("label");
  return node_->label;
}
const Expr& Process::payload() const {
  if (kind() != Kind::Send) wrong_kind("payload");
  return *node_->expr;
}
const VarName& Process::binder() const {
  if (kind() != Kind::Recv) wrong_kind("binder");
  return node_->binder;
}
const Process& Process::cont() const {
  if (!is_prefix()) wrong_kind("cont");
  return node_->kids[0];
}
const Process& Process::left() const {
  if (kind() != Kind::Sum) wrong_kind("left");
  return node_->kids[0];
}
const Process& Process::right() const {
  if (kind() != Kind::Sum) wrong_kind("right");
  return node_->kids[1];
}
const ProcVar& Process::pvar_name() const {
  if (kind() != Kind::Mu && kind() != Kind::PVar) wrong_kind("pvar_name");
  return node_->name;
}
const Process& Process::body() const {
  if (kind() != Kind::Mu) wrong_kind("body");
  return node_->kids[0];
}
const Expr& Process::cond() const {
  if (kind() != Kind::If) wrong_kind("cond");
  return *node_->expr;
}
const Process& Process::then_branch() const {
  if (kind() != Kind::If) wrong_kind("then_branch");
  return node_->kids[0];
}
const Process& Process::else_branch() const {
  if (kind() != Kind::If) wrong_kind("else_branch");
  return node_->kids[1];
}
std::size_t Process::hash() const noexcept { return node_->hash; }
std::size_t Process::size() const noexcept { return node_->size; }

bool operator==(const Process& a, const Process& b) noexcept {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.hash == y.hash && x.size == y.size && x.kind == y.kind && x.name == y.name &&
         x.label == y.label && x.binder == y.binder && x.expr == y.expr && x.kids == y.kids;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(std::vector<Thread> threads) : threads_(std::move(threads)) {
  std::set<std::string_view> seen;
  for (const auto& t : threads_) {
    if (!seen.insert(t.participant).second) {
      throw DuplicateParticipant("duplicate participant '" + t.participant + "'");
    }
  }
}

std::optional<std::size_t> Session::index_of(std::string_view p) const {
  for (std::size_t i = 0; i < threads_.size(); ++i) {
    if (threads_[i].participant == p) return i;
  }
  return std::nullopt;
}

Session Session::with_body(std::size_t i, Process body) const {
  Session copy = *this;
  copy.threads_.at(i).body = std::move(body);
  return copy;
}

std::size_t Session::hash() const noexcept {
  std::size_t h = 0x51ed;
  for (const auto& t : threads_) {
    h = detail::hash_mix(h, str_hash(t.participant));
    h = detail::hash_mix(h, t.body.hash());
  }
  return h;
}

bool congruent(const Session& a, const Session& b) {
  if (a.size() != b.size()) return false;
  for (const auto& t : a.threads()) {
    auto j = b.index_of(t.participant);
    if (!j || !(b[*j].body == t.body)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// TypeEnv

TypeEnv::TypeEnv(Map bindings) : bindings_(std::move(bindings)) { rehash(); }

TypeEnv::TypeEnv(std::initializer_list<std::pair<const Participant, SessionType>> init)
    : bindings_(init) {
  rehash();
}

const SessionType& TypeEnv::at(std::string_view p) const {
  auto it = bindings_.find(p);
  if (it == bindings_.end()) throw std::out_of_range("participant not in environment: " + std::string(p));
  return it->second;
}

const SessionType* TypeEnv::find(std::string_view p) const {
  auto it = bindings_.find(p);
  return it == bindings_.end() ? nullptr : &it->second;
}

TypeEnv TypeEnv::with(const Participant& p, SessionType t) const {
  TypeEnv copy = *this;
  copy.bindings_.insert_or_assign(p, std::move(t));
  copy.rehash();
  return copy;
}

std::vector<Participant> TypeEnv::domain() const {
  std::vector<Participant> out;
  out.reserve(bindings_.size());
  for (const auto& [p, _] : bindings_) out.push_back(p);
  return out;
}

void TypeEnv::rehash() noexcept {
  std::size_t h = 0xe47;
  for (const auto& [p, t] : bindings_) {
    h = detail::hash_mix(h, str_hash(p));
    h = detail::hash_mix(h, t.hash());
  }
  hash_ = h;
}

// ---------------------------------------------------------------------------
// Substitution

SessionType substitute_type(const SessionType& body, const TypeVar& var,
                            const SessionType& replacement) {
  switch (body.kind()) {
    case SessionType::Kind::End: return body;
    case SessionType::Kind::Var: return body.var_name() == var ? replacement : body;
    case SessionType::Kind::Mu:
      if (body.var_name() == var) return body;  // shadowed
      return SessionType::mu(body.var_name(), substitute_type(body.body(), var, replacement));
    case SessionType::Kind::Sum:
      return SessionType::sum(substitute_type(body.left(), var, replacement),
                              substitute_type(body.right(), var, replacement));
    case SessionType::Kind::Out:
    case SessionType::Kind::In:
      return SessionType::prefix(body.prefix_polarity(), body.peer(), body.label(), body.payload(),
                                 substitute_type(body.cont(), var, replacement));
  }
  return body;
}

SessionType unfold(const SessionType& t) {
  if (!t.is_mu()) throw NotRecursive("unfold: type is not recursive");
  return substitute_type(t.body(), t.var_name(), t);
}

Process substitute_proc(const Process& body, const ProcVar& pvar, const Process& replacement) {
  using K = Process::Kind;
  switch (body.kind()) {
    case K::Inaction: return body;
    case K::PVar: return body.pvar_name() == pvar ? replacement : body;
    case K::Mu:
      if (body.pvar_name() == pvar) return body;
      return Process::mu(body.pvar_name(), substitute_proc(body.body(), pvar, replacement));
    case K::Sum:
      return Process::sum(substitute_proc(body.left(), pvar, replacement),
                          substitute_proc(body.right(), pvar, replacement));
    case K::Send:
      return Process::send(body.peer(), body.label(), body.payload(),
                           substitute_proc(body.cont(), pvar, replacement));
    case K::Recv:
      return Process::recv(body.peer(), body.label(), body.binder(),
                           substitute_proc(body.cont(), pvar, replacement));
    case K::If:
      return Process::if_then_else(body.cond(), substitute_proc(body.then_branch(), pvar, replacement),
                                   substitute_proc(body.else_branch(), pvar, replacement));
  }
  return body;
}

Process unfold(const Process& p) {
  if (p.kind() != Process::Kind::Mu) throw NotRecursive("unfold: process is not recursive");
  return substitute_proc(p.body(), p.pvar_name(), p);
}

Expr substitute_expr(const Expr& e, const VarName& var, const Value& v) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Lit: return e;
    case K::Var: return e.var_name() == var ? Expr::lit(v) : e;
    case K::Not: return Expr::negate(substitute_expr(e.lhs(), var, v));
    case K::Lt: return Expr::lt(substitute_expr(e.lhs(), var, v), substitute_expr(e.rhs(), var, v));
    case K::Eq: return Expr::eq(substitute_expr(e.lhs(), var, v), substitute_expr(e.rhs(), var, v));
    case K::And:
      return Expr::conj(substitute_expr(e.lhs(), var, v), substitute_expr(e.rhs(), var, v));
    case K::Or:
      return Expr::disj(substitute_expr(e.lhs(), var, v), substitute_expr(e.rhs(), var, v));
  }
  return e;
}

Process substitute_value(const Process& body, const VarName& var, const Value& v) {
  using K = Process::Kind;
  switch (body.kind()) {
    case K::Inaction:
    case K::PVar: return body;
    case K::Mu: return Process::mu(body.pvar_name(), substitute_value(body.body(), var, v));
    case K::Sum:
      return Process::sum(substitute_value(body.left(), var, v), substitute_value(body.right(), var, v));
    case K::Send:
      return Process::send(body.peer(), body.label(), substitute_expr(body.payload(), var, v),
                           substitute_value(body.cont(), var, v));
    case K::Recv:
      if (body.binder() == var) return body;  // rebinds var
      return Process::recv(body.peer(), body.label(), body.binder(),
                           substitute_value(body.cont(), var, v));
    case K::If:
      return Process::if_then_else(substitute_expr(body.cond(), var, v),
                                   substitute_value(body.then_branch(), var, v),
                                   substitute_value(body.else_branch(), var, v));
  }
  return body;
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

void collect_free(const SessionType& t, std::set<TypeVar>& bound, std::set<TypeVar>& out) {
  switch (t.kind()) {
    case SessionType::Kind::End: return;
    case SessionType::Kind::Var:
      if (!bound.count(t.var_name())) out.insert(t.var_name());
      return;
    case SessionType::Kind::Mu: {
      bool fresh = bound.insert(t.var_name()).second;
      collect_free(t.body(), bound, out);
      if (fresh) bound.erase(t.var_name());
      return;
    }
    case SessionType::Kind::Sum:
      collect_free(t.left(), bound, out);
      collect_free(t.right(), bound, out);
      return;
    default: collect_free(t.cont(), bound, out);
  }
}

// True if `var` occurs free in t without an intervening prefix.
bool unguarded_occurs(const SessionType& t, const TypeVar& var) {
  switch (t.kind()) {
    case SessionType::Kind::Var: return t.var_name() == var;
    case SessionType::Kind::Mu: return t.var_name() != var && unguarded_occurs(t.body(), var);
    case SessionType::Kind::Sum: return unguarded_occurs(t.left(), var) || unguarded_occurs(t.right(), var);
    default: return false;
  }
}

}  // namespace

std::set<TypeVar> free_type_vars(const SessionType& t) {
  std::set<TypeVar> bound, out;
  collect_free(t, bound, out);
  return out;
}

bool is_closed(const SessionType& t) { return free_type_vars(t).empty(); }

bool is_contractive(const SessionType& t) {
  switch (t.kind()) {
    case SessionType::Kind::End:
    case SessionType::Kind::Var: return true;
    case SessionType::Kind::Mu:
      return !unguarded_occurs(t.body(), t.var_name()) && is_contractive(t.body());
    case SessionType::Kind::Sum: return is_contractive(t.left()) && is_contractive(t.right());
    default: return is_contractive(t.cont());
  }
}

std::multiset<Label> labels_multiset(const SessionType& t) {
  std::multiset<Label> out;
  if (t.is_prefix()) {
    out.insert(t.label());
  } else if (t.is_sum()) {
    out = labels_multiset(t.left());
    auto r = labels_multiset(t.right());
    out.insert(r.begin(), r.end());
  }
  return out;
}

std::optional<Polarity> polarity(const SessionType& t) {
  if (t.is_prefix()) return t.prefix_polarity();
  if (t.is_sum()) {
    auto l = polarity(t.left());
    auto r = polarity(t.right());
    if (l && r && *l == *r) return l;
  }
  return std::nullopt;
}

std::optional<Participant> participant_of(const SessionType& t) {
  if (t.is_prefix()) return t.peer();
  if (t.is_sum()) {
    auto l = participant_of(t.left());
    auto r = participant_of(t.right());
    if (l && r && *l == *r) return l;
  }
  return std::nullopt;
}

bool is_uniform_sum(const SessionType& t) {
  if (!t.is_sum()) return false;
  auto labels = labels_multiset(t);
  for (const auto& l : labels) {
    if (labels.count(l) > 1) return false;
  }
  return polarity(t).has_value() && participant_of(t).has_value();
}

bool is_well_behaved(const SessionType& t) {
  switch (t.kind()) {
    case SessionType::Kind::End:
    case SessionType::Kind::Var: return true;
    case SessionType::Kind::Mu: return is_well_behaved(t.body());
    case SessionType::Kind::Sum:
      return is_uniform_sum(t) && is_well_behaved(t.left()) && is_well_behaved(t.right());
    default: return is_well_behaved(t.cont());
  }
}

bool is_well_formed_type(const SessionType& t) { return !well_formedness_issue(t).has_value(); }

std::optional<std::string> well_formedness_issue(const SessionType& t) {
  if (!is_contractive(t)) return std::string("not contractive: a type variable occurs unguarded");
  auto free = free_type_vars(t);
  if (!free.empty()) return "not closed: free type variable " + *free.begin();
  if (!is_well_behaved(t)) {
    return std::string(
        "not well-behaved: a sum is not uniform (duplicate label, mixed polarity, or mixed peer)");
  }
  return std::nullopt;
}

bool is_well_formed_env(const TypeEnv& d) {
  return std::all_of(d.begin(), d.end(), [](const auto& kv) { return is_well_formed_type(kv.second); });
}

std::set<Participant> parties(const SessionType& t) {
  std::set<Participant> out;
  std::vector<const SessionType*> todo{&t};
  while (!todo.empty()) {
    const SessionType* cur = todo.back();
    todo.pop_back();
    switch (cur->kind()) {
      case SessionType::Kind::End:
      case SessionType::Kind::Var: break;
      case SessionType::Kind::Mu: todo.push_back(&cur->body()); break;
      case SessionType::Kind::Sum:
        todo.push_back(&cur->left());
        todo.push_back(&cur->right());
        break;
      default:
        out.insert(cur->peer());
        todo.push_back(&cur->cont());
    }
  }
  return out;
}

std::set<Participant> parties_env(const TypeEnv& d) {
  std::set<Participant> out;
  for (const auto& [p, t] : d) {
    out.insert(p);
    auto ps = parties(t);
    out.insert(ps.begin(), ps.end());
  }
  return out;
}

std::set<TaggedLabel> tagged_labels(const SessionType& t) {
  std::set<TaggedLabel> out;
  if (t.is_prefix()) {
    out.insert({t.label(), t.payload()});
  } else if (t.is_sum()) {
    out = tagged_labels(t.left());
    out.merge(tagged_labels(t.right()));
  }
  return out;
}

std::optional<Participant> top(const SessionType& t) {
  const SessionType* cur = &t;
  while (cur->is_sum()) cur = &cur->left();
  if (cur->is_prefix()) return cur->peer();
  return std::nullopt;
}

}  // namespace mpst
