#include "mpst/env_lts.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mpst/surface.hpp"

namespace mpst {

Remnant remnant_plus(const Remnant& a, const Remnant& b) {
  if (a && b) return SessionType::sum(*a, *b);
  return a ? a : b;
}

namespace {

void prefix_steps(const SessionType& t, std::vector<TypeStep>& out) {
  if (t.is_prefix()) {
    out.push_back({PrefixAction{t.prefix_polarity(), t.peer(), t.label(), t.payload()}, t.cont(),
                   std::nullopt});
    return;
  }
  if (!t.is_sum()) return;
  std::vector<TypeStep> left, right;
  prefix_steps(t.left(), left);
  prefix_steps(t.right(), right);
  for (auto& s : left) {
    s.remnant = remnant_plus(s.remnant, t.right());
    out.push_back(std::move(s));
  }
  for (auto& s : right) {
    s.remnant = remnant_plus(t.left(), s.remnant);
    out.push_back(std::move(s));
  }
}

}  // namespace

std::vector<TypeStep> type_transitions(const SessionType& t) {
  std::vector<TypeStep> out;
  if (t.is_mu()) {
    out.push_back({std::nullopt, unfold(t), std::nullopt});
    return out;
  }
  prefix_steps(t, out);
  return out;
}

std::vector<EnvStep> env_transitions(const TypeEnv& d) {
  std::vector<EnvStep> out;
  std::map<Participant, std::vector<TypeStep>, std::less<>> steps;
  for (const auto& [p, t] : d) {
    if (t.is_mu()) out.push_back({Action::tau(p), d.with(p, unfold(t))});
    steps.emplace(p, type_transitions(t));
  }
  for (const auto& [p, tp] : d) {
    for (const auto& [q, tq] : d) {
      if (p == q) continue;
      for (const auto& in : steps.at(p)) {
        if (!in.prefix || in.prefix->direction != Polarity::Receive || in.prefix->peer != q) continue;
        for (const auto& o : steps.at(q)) {
          if (!o.prefix || o.prefix->direction != Polarity::Send || o.prefix->peer != p) continue;
          if (o.prefix->label != in.prefix->label || o.prefix->sort != in.prefix->sort) continue;
          out.push_back({Action::sync(in.prefix->label, p, q), d.with(p, in.next).with(q, o.next)});
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

std::string to_string(const OracleReply& r) {
  switch (r.kind) {
    case OracleReply::Kind::Ret0: return "Ret0";
    case OracleReply::Kind::Ret1: return "Ret1(" + r.p + ")";
    case OracleReply::Kind::Ret2: return "Ret2(" + r.p + "," + r.q + ")";
  }
  return "?";
}

namespace {

bool mutual_top(const TypeEnv& d, const Participant& p, const Participant& q) {
  if (p == q) return false;
  const SessionType* tp = d.find(p);
  const SessionType* tq = d.find(q);
  if (!tp || !tq) return false;
  auto a = top(*tp);
  auto b = top(*tq);
  return a && b && *a == q && *b == p;
}

OracleReply scan(const TypeEnv& d, const std::vector<Participant>& order) {
  for (const auto& p : order) {
    if (d.at(p).is_mu()) return OracleReply::unfold(p);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (mutual_top(d, order[i], order[j])) return OracleReply::pair(order[i], order[j]);
    }
  }
  return OracleReply::none();
}

}  // namespace

Oracle default_oracle() {
  return [](const TypeEnv& d) { return scan(d, d.domain()); };
}

Oracle alt_oracle() {
  return [](const TypeEnv& d) {
    auto order = d.domain();
    std::reverse(order.begin(), order.end());
    return scan(d, order);
  };
}

bool is_fair_reply(const TypeEnv& d, const OracleReply& reply) {
  switch (reply.kind) {
    case OracleReply::Kind::Ret2: return mutual_top(d, reply.p, reply.q);
    case OracleReply::Kind::Ret1: {
      const SessionType* t = d.find(reply.p);
      return t && t->is_mu();
    }
    case OracleReply::Kind::Ret0: {
      for (const auto& [p, t] : d) {
        if (t.is_mu()) return false;
        if (auto q = top(t); q && mutual_top(d, p, *q)) return false;
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Deterministic step

MismatchDetected::MismatchDetected(TypeEnv env, Participant p, Participant q)
    : std::runtime_error("communication mismatch between " + p + " and " + q),
      env_(std::move(env)),
      p_(std::move(p)),
      q_(std::move(q)) {}

bool mismatch2(const SessionType& t1, const SessionType& t2) {
  auto p1 = polarity(t1);
  auto p2 = polarity(t2);
  if (p1 && p2 && *p1 == *p2) return true;
  auto l1 = tagged_labels(t1);
  auto l2 = tagged_labels(t2);
  return std::none_of(l1.begin(), l1.end(), [&](const TaggedLabel& l) { return l2.count(l) > 0; });
}

namespace {

void occurrence_order(const SessionType& t, std::vector<TaggedLabel>& out) {
  if (t.is_prefix()) {
    out.push_back({t.label(), t.payload()});
  } else if (t.is_sum()) {
    occurrence_order(t.left(), out);
    occurrence_order(t.right(), out);
  }
}

}  // namespace

std::vector<TaggedLabel> common_labels(const SessionType& t1, const SessionType& t2,
                                       LabelOrder order, const SessionType& order_source) {
  auto l1 = tagged_labels(t1);
  auto l2 = tagged_labels(t2);
  std::vector<TaggedLabel> out;
  if (order == LabelOrder::Lex) {
    std::set_intersection(l1.begin(), l1.end(), l2.begin(), l2.end(), std::back_inserter(out));
    return out;
  }
  std::vector<TaggedLabel> seq;
  occurrence_order(order_source, seq);
  for (const auto& l : seq) {
    if (l1.count(l) && l2.count(l) && std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
  return out;
}

std::optional<DetStep> det_step(const Oracle& omega, const TypeEnv& d, LabelOrder order) {
  OracleReply reply = omega(d);
  if (!is_fair_reply(d, reply)) throw OracleNotFair("oracle reply " + to_string(reply) + " is not fair");
  switch (reply.kind) {
    case OracleReply::Kind::Ret0: return std::nullopt;
    case OracleReply::Kind::Ret1:
      return DetStep{Action::tau(reply.p), d.with(reply.p, unfold(d.at(reply.p))), std::nullopt};
    case OracleReply::Kind::Ret2: break;
  }
  const SessionType& tp = d.at(reply.p);
  const SessionType& tq = d.at(reply.q);
  if (mismatch2(tp, tq)) throw MismatchDetected(d, reply.p, reply.q);

  const bool p_receives = polarity(tp) == Polarity::Receive;
  const Participant& recv = p_receives ? reply.p : reply.q;
  const Participant& send = p_receives ? reply.q : reply.p;
  const SessionType& trecv = d.at(recv);
  const SessionType& tsend = d.at(send);

  TaggedLabel chosen = common_labels(tp, tq, order, tp).front();
  auto pick = [&](const SessionType& t, Polarity dir, const Participant& peer) -> TypeStep {
    for (auto& s : type_transitions(t)) {
      if (s.prefix && s.prefix->direction == dir && s.prefix->peer == peer &&
          s.prefix->label == chosen.label && s.prefix->sort == chosen.sort) {
        return s;
      }
    }
    throw std::logic_error("det_step: scheduled label has no matching branch");
  };
  TypeStep in = pick(trecv, Polarity::Receive, send);
  TypeStep out = pick(tsend, Polarity::Send, recv);

  DetStep step{Action::sync(chosen.label, recv, send), d.with(recv, in.next).with(send, out.next),
               std::nullopt};
  if (in.remnant && out.remnant) step.continuation = d.with(recv, *in.remnant).with(send, *out.remnant);
  return step;
}

// ---------------------------------------------------------------------------
// Minimal partition

namespace {

struct UnionFind {
  std::map<std::string, std::string> parent;

  std::string find(const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent.emplace(x, x);
      return x;
    }
    if (it->second == x) return x;
    std::string root = find(it->second);
    parent[x] = root;
    return root;
  }

  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
};

std::vector<std::vector<Participant>> live_components(const TypeEnv& d) {
  UnionFind uf;
  std::vector<Participant> live;
  for (const auto& [p, t] : d) {
    if (t.is_end()) continue;
    live.push_back(p);
    uf.find(p);
    for (const auto& x : parties(t)) uf.unite(p, x);
  }
  std::map<std::string, std::vector<Participant>> groups;
  for (const auto& p : live) groups[uf.find(p)].push_back(p);
  std::vector<std::vector<Participant>> out;
  for (auto& [_, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace

std::vector<TypeEnv> minimal_partition(const TypeEnv& d) {
  if (d.empty()) throw EmptyEnvironment("minimal_partition: empty environment");
  auto comps = live_components(d);
  std::vector<TypeEnv::Map> blocks(std::max<std::size_t>(comps.size(), 1));
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (const auto& p : comps[i]) blocks[i].emplace(p, d.at(p));
  }
  for (const auto& [p, t] : d) {
    if (t.is_end()) blocks.front().emplace(p, t);
  }
  std::vector<TypeEnv> out;
  out.reserve(blocks.size());
  for (auto& b : blocks) out.emplace_back(std::move(b));
  return out;
}

bool is_minimal(const TypeEnv& d) { return live_components(d).size() <= 1; }

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\l";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_dot(const std::vector<TypeEnv>& nodes, const std::vector<EnvEdge>& edges) {
  std::string out = "digraph env {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out += "  n" + std::to_string(i) + " [label=\"" + dot_escape(print_env(nodes[i])) + "\\l\"];\n";
  }
  for (const auto& e : edges) {
    out += "  n" + std::to_string(e.from) + " -> n" + std::to_string(e.to) + " [label=\"" +
           dot_escape(to_string(e.action)) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace mpst
