// mpst: command-line front end.

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpst/brute.hpp"
#include "mpst/compliance.hpp"
#include "mpst/semantics.hpp"
#include "mpst/surface.hpp"
#include "mpst/typing.hpp"

namespace {

using nlohmann::json;
using namespace mpst;

enum Exit : int { kAccept = 0, kReject = 1, kUsage = 2, kCap = 3 };

struct Config {
  std::string input;
  std::string oracle = "lex";
  std::string label_order = "lex";
  std::size_t universe_cap = 10000;
  bool json = false;
  bool paper_exceptions = false;
  std::string dot_path;
  std::uint64_t seed = 0;
  std::size_t max_steps = 100;
  bool trace = false;
  std::size_t reach_cap = 50000;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool use_color() {
  const char* v = std::getenv("MPS_COLOR");
  std::string mode = v ? v : "auto";
  if (mode == "always") return true;
  if (mode == "never") return false;
  return ::isatty(STDOUT_FILENO) != 0;
}

std::string paint(const std::string& s, bool good) {
  if (!use_color()) return s;
  return std::string(good ? "\x1b[32m" : "\x1b[31m") + s + "\x1b[0m";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Oracle make_oracle(const Config& c) { return c.oracle == "revlex" ? alt_oracle() : default_oracle(); }

ClosureOptions closure_options(const Config& c) {
  ClosureOptions o;
  o.label_order = c.label_order == "syntactic" ? LabelOrder::Syntactic : LabelOrder::Lex;
  o.universe_cap = c.universe_cap;
  o.paper_exceptions = c.paper_exceptions;
  return o;
}

std::string indent(const std::string& text, const std::string& pad) {
  std::string out = pad;
  for (char ch : text) {
    out += ch;
    if (ch == '\n') out += pad;
  }
  return out;
}

void print_leaf(std::ostream& os, const ClosureLeaf& l) {
  os << "  " << to_string(l.kind);
  if (l.pair) os << " (" << l.pair->first << ", " << l.pair->second << ")";
  if (l.kind == ClosureLeaf::Kind::FixpointLoop) os << (l.sound ? " sound" : " unsound");
  os << "\n" << indent(print_env(l.env), "    ") << "\n";
  if (!l.steps.empty()) {
    os << "    via";
    for (const auto& s : l.steps) os << " " << s;
    os << "\n";
  }
}

int cmd_check(const Config& c) {
  SourceFile f = parse_file(read_file(c.input));
  SessionCheckOptions opts;
  opts.closure = closure_options(c);
  TypingVerdict v = check_session(f.to_session(), f.declared_env(), make_oracle(c), opts);
  if (c.json) {
    json j = to_json(v);
    j["command"] = "check";
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& t : v.threads) {
      std::cout << t.participant << ": " << (t.ok ? "typed" : "untyped") << "\n";
    }
    for (std::size_t i = 0; i < v.blocks.size(); ++i) {
      std::cout << "block " << i << ": " << (v.blocks[i].report.verdict ? "compliant" : "not compliant") << " ("
                << v.blocks[i].report.explored << " configurations)\n";
    }
    for (const auto& fl : v.failures) std::cerr << fl.to_string() << "\n";
    std::cout << paint(v.ok ? "accepted" : "rejected", v.ok) << "\n";
  }
  return v.ok ? kAccept : kReject;
}

int cmd_compliance(const Config& c) {
  TypeEnv d = parse_env(read_file(c.input));
  bool ok = true;
  json blocks = json::array();
  std::ostringstream text;
  std::size_t i = 0;
  for (const auto& block : minimal_partition(d)) {
    ClosureReport r = compliance(make_oracle(c), block, closure_options(c));
    ok = ok && r.verdict;
    json bj = to_json(r);
    bj["env"] = print_env(block);
    blocks.push_back(bj);
    text << "block " << i++ << ": " << paint(r.verdict ? "compliant" : "not compliant", r.verdict) << " ("
         << r.explored << " configurations)\n"
         << indent(print_env(block), "    ") << "\n";
    if (const ClosureLeaf* w = r.witness()) {
      text << "  witness:\n";
      print_leaf(text, *w);
    }
  }
  if (c.json) {
    std::cout << json{{"command", "compliance"}, {"verdict", ok}, {"blocks", blocks}}.dump(2) << "\n";
  } else {
    std::cout << text.str();
  }
  return ok ? kAccept : kReject;
}

int cmd_closure(const Config& c) {
  TypeEnv d = parse_env(read_file(c.input));
  ClosureReport r = closure(make_oracle(c), d, closure_options(c));
  if (!c.dot_path.empty()) {
    ReachSet rs = reachable_envs(d, c.reach_cap);
    std::ofstream out(c.dot_path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + c.dot_path);
    out << render_dot(rs.nodes, rs.edges);
  }
  if (c.json) {
    json j = to_json(r);
    j["command"] = "closure";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << r.leaves.size() << " leaves, " << r.explored << " configurations\n";
    for (const auto& l : r.leaves) print_leaf(std::cout, l);
    std::cout << paint(r.verdict ? "compliant" : "not compliant", r.verdict) << "\n";
  }
  return r.verdict ? kAccept : kReject;
}

int cmd_simulate(const Config& c) {
  SourceFile f = parse_file(read_file(c.input));
  Session m = f.to_session();
  Trace t = simulate(m, c.seed, c.max_steps);
  const Session& last = t.steps.empty() ? m : t.steps.back().next;
  if (c.json) {
    json steps = json::array();
    for (const auto& s : t.steps) steps.push_back({{"action", to_string(s.action)}, {"session", print_session(s.next)}});
    std::cout << json{{"command", "simulate"},
                      {"seed", c.seed},
                      {"steps", steps},
                      {"stopped_early", t.stopped_early},
                      {"ended", is_ended(last)}}
                     .dump(2)
              << "\n";
  } else {
    if (c.trace) std::cout << format_trace(t);
    std::cout << t.steps.size() << " steps; " << (is_ended(last) ? "ended" : t.stopped_early ? "stuck" : "running")
              << "\n";
  }
  return kAccept;
}

int cmd_parse(const Config& c) {
  std::string text = read_file(c.input);
  std::string kind, pretty;
  if (ends_with(c.input, ".env")) {
    kind = "env";
    pretty = print_env(parse_env(text));
  } else {
    kind = "session";
    pretty = print_file(parse_file(text));
  }
  if (c.json) {
    std::cout << json{{"command", "parse"}, {"kind", kind}, {"text", pretty}}.dump(2) << "\n";
  } else {
    std::cout << pretty;
    if (pretty.empty() || pretty.back() != '\n') std::cout << "\n";
  }
  return kAccept;
}

int cmd_reach(const Config& c) {
  TypeEnv d = parse_env(read_file(c.input));
  ReachSet rs = reachable_envs(d, c.reach_cap);
  bool v = reference_verdict(d, c.reach_cap);
  if (c.json) {
    std::cout << json{{"command", "debug-reach"},
                      {"visited", rs.visited.size()},
                      {"stuck", rs.stuck.size()},
                      {"edges", rs.edges.size()},
                      {"verdict", v}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << rs.visited.size() << " environments, " << rs.edges.size() << " edges, " << rs.stuck.size()
              << " stuck\n";
    for (const auto& e : rs.nodes) {
      if (rs.stuck.count(e)) std::cout << "  stuck" << (is_consumed(e) ? " (consumed)" : "") << "\n"
                                       << indent(print_env(e), "    ") << "\n";
    }
    std::cout << paint(v ? "compliant" : "not compliant", v) << "\n";
  }
  return v ? kAccept : kReject;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Multiparty session type checker"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--oracle", cfg.oracle, "Scheduling oracle")->check(CLI::IsMember({"lex", "revlex"}));
  app.add_option("--label-order", cfg.label_order, "Label choice at a communication")
      ->check(CLI::IsMember({"lex", "syntactic"}));
  app.add_option("--universe-cap", cfg.universe_cap, "Max redex types per participant");
  app.add_flag("--json", cfg.json, "Machine-readable output");
  app.add_flag("--paper-exceptions", cfg.paper_exceptions,
               "Explore sum continuations only after a mismatch or loop (diagnostic)");

  auto* check = app.add_subcommand("check", "Type-check a session file");
  check->add_option("file", cfg.input)->required();
  auto* comp = app.add_subcommand("compliance", "Compliance of each minimal block of an environment");
  comp->add_option("file", cfg.input)->required();
  auto* clo = app.add_subcommand("closure", "List the closure leaves of an environment");
  clo->add_option("file", cfg.input)->required();
  clo->add_option("--dot", cfg.dot_path, "Write the reachable environment graph");
  auto* sim = app.add_subcommand("simulate", "Random run of a session");
  sim->add_option("file", cfg.input)->required();
  sim->add_option("--seed", cfg.seed);
  sim->add_option("--max-steps", cfg.max_steps);
  sim->add_flag("--trace", cfg.trace);
  auto* parse = app.add_subcommand("parse", "Print a file in canonical form");
  parse->add_option("file", cfg.input)->required();
  auto* debug = app.add_subcommand("debug", "");
  debug->group("");
  debug->require_subcommand(1);
  auto* reach = debug->add_subcommand("reach", "Exhaustive environment reachability");
  reach->add_option("file", cfg.input)->required();
  reach->add_option("--cap", cfg.reach_cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (check->parsed()) return cmd_check(cfg);
    if (comp->parsed()) return cmd_compliance(cfg);
    if (clo->parsed()) return cmd_closure(cfg);
    if (sim->parsed()) return cmd_simulate(cfg);
    if (parse->parsed()) return cmd_parse(cfg);
    if (reach->parsed()) return cmd_reach(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << cfg.input << ":" << e.what() << "\n";
    return kUsage;
  } catch (const LoadError& e) {
    std::cerr << cfg.input << ":" << e.what() << "\n";
    return kReject;
  } catch (const ParticipantMismatch& e) {
    std::cerr << "T-Ses: " << e.what() << "\n";
    return kReject;
  } catch (const EmptyEnvironment& e) {
    std::cerr << "error: empty environment\n";
    return kReject;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  }
  return kUsage;
}
