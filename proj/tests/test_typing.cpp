#include <gtest/gtest.h>

#include <algorithm>

#include "corpus.hpp"
#include "mpst/typing.hpp"

using namespace mpst;
namespace mt = mpst::testing;
using mt::type_of;

TEST(Sorting, Literals) { EXPECT_EQ(sort_expr({}, parse_expr("true")), Sort::Bool); }

TEST(Sorting, EqualityOnStrings) {
  Context ctx = Context{}.with_sort("x", Sort::Str);
  EXPECT_EQ(sort_expr(ctx, parse_expr("x = \"miau\"")), Sort::Bool);
}

TEST(Sorting, Errors) {
  EXPECT_THROW(sort_expr({}, parse_expr("\"a\" < \"b\"")), SortError);
  EXPECT_THROW(sort_expr({}, parse_expr("1 < +1")), SortError);
  EXPECT_THROW(sort_expr({}, parse_expr("x")), SortError);
  EXPECT_THROW(sort_expr({}, parse_expr("not 1")), SortError);
  EXPECT_EQ(sort_expr({}, parse_expr("-1 < +2 && 1 < 2")), Sort::Bool);
}

TEST(Processes, InactionAgainstEnd) {
  auto r = check_process({}, Process(), SessionType::end());
  ASSERT_TRUE(r.ok);
  EXPECT_EQ(r.derivation->rule, "T-End");
}

TEST(Processes, VariableNeedsTheRecursiveTypeItself) {
  auto ta = type_of(mt::kTa);
  Context ctx = Context{}.with_proc("P", ta);
  auto r = check_process(ctx, Process::pvar("P"), unfold(ta));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failure->rule, "T-Var");
  EXPECT_TRUE(check_process(ctx, Process::pvar("P"), ta).ok);
  EXPECT_THROW(Context{}.with_proc("P", unfold(ta)), NotRecursive);
}

TEST(Processes, VariantServerDerivation) {
  auto f = mt::corpus_file("variant_server.mps");
  const auto& decl = *std::find_if(f.participants.begin(), f.participants.end(),
                                   [](const ParticipantDecl& d) { return d.name == "a"; });
  for (bool fast : {true, false}) {
    auto r = check_process({}, decl.body, decl.declared_type, CheckOptions{fast});
    ASSERT_TRUE(r.ok) << r.failure->to_string();
    std::vector<std::string> want{"T-Rec", "T-Sum", "T-Inp", "T-If", "T-Sum-L", "T-Out", "T-Var", "T-Sum-R",
                                  "T-Out", "T-End", "T-Sum", "T-Inp", "T-Out", "T-Var", "T-Inp", "T-End"};
    EXPECT_EQ(r.derivation->rules(), want);
  }
}

TEST(Processes, SelectionMayOfferFewerBranches) {
  auto t = type_of("q!a(unit) . end + q!b(nat) . end");
  EXPECT_TRUE(check_process({}, parse_process("q!b<3> . 0"), t).ok);
  auto r = check_process({}, parse_process("q!b<+3> . 0"), t);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failure->rule, "T-Out");
  EXPECT_NE(r.failure->message.find("sort"), std::string::npos);
}

TEST(Processes, InputBindsThePayloadSort) {
  auto t = type_of("p?n(int) . p!r(bool) . end");
  EXPECT_TRUE(check_process({}, parse_process("p?n(x) . p!r<x < +0> . 0"), t).ok);
  EXPECT_FALSE(check_process({}, parse_process("p?n(x) . p!r<x < 0> . 0"), t).ok);
}

TEST(Processes, WrongDirectionOrPeer) {
  EXPECT_FALSE(check_process({}, parse_process("q?a(x) . 0"), type_of("q!a(unit) . end")).ok);
  EXPECT_FALSE(check_process({}, parse_process("r!a<()> . 0"), type_of("q!a(unit) . end")).ok);
  EXPECT_FALSE(check_process({}, Process(), type_of("q!a(unit) . end")).ok);
  EXPECT_FALSE(check_process({}, parse_process("rec P . q!a<()> . P"), unfold(type_of("rec X . q!a(unit) . X"))).ok);
}

TEST(Sessions, AuthorisationAccepted) {
  auto f = mt::corpus_file("oauth.mps");
  auto v = check_session(f.to_session(), f.declared_env(), default_oracle());
  EXPECT_TRUE(v.ok);
  EXPECT_TRUE(v.failures.empty());
  ASSERT_EQ(v.blocks.size(), 1u);
  EXPECT_TRUE(v.blocks[0].report.verdict);
}

TEST(Sessions, SameProcessesAgainstTwoAttemptServer) {
  auto f = mt::corpus_file("oauth.mps");
  auto v = check_session(f.to_session(), mt::delta2(), default_oracle());
  EXPECT_FALSE(v.ok);
  ASSERT_EQ(v.blocks.size(), 1u);
  bool lock = false;
  for (const auto& l : v.blocks[0].report.leaves) lock = lock || l.env == mt::delta_lock();
  EXPECT_TRUE(lock);
}

TEST(Sessions, SingleEndedThread) {
  Session m({{"p", Process()}});
  EXPECT_TRUE(check_session(m, TypeEnv{{"p", SessionType::end()}}, default_oracle()).ok);
}

TEST(Sessions, ParticipantMismatch) {
  Session m({{"p", Process()}});
  EXPECT_THROW(check_session(m, TypeEnv{{"q", SessionType::end()}}, default_oracle()), ParticipantMismatch);
}

TEST(Sessions, ThreadOrderDoesNotMatter) {
  for (const auto& name : mt::corpus_names(".mps")) {
    auto f = mt::corpus_file(name);
    Session m = f.to_session();
    auto threads = m.threads();
    bool base = check_session(m, f.declared_env(), default_oracle()).ok;
    std::reverse(threads.begin(), threads.end());
    EXPECT_EQ(check_session(Session(threads), f.declared_env(), default_oracle()).ok, base) << name;
    std::rotate(threads.begin(), threads.begin() + 1, threads.end());
    EXPECT_EQ(check_session(Session(threads), f.declared_env(), default_oracle()).ok, base) << name;
  }
}

TEST(Sessions, FastPathAgreesWithBacktracking) {
  for (const auto& name : mt::corpus_names(".mps")) {
    auto f = mt::corpus_file(name);
    for (const auto& d : f.participants) {
      auto fast = check_process({}, d.body, d.declared_type, CheckOptions{true});
      auto slow = check_process({}, d.body, d.declared_type, CheckOptions{false});
      if (fast.ok) EXPECT_TRUE(slow.ok) << name << " " << d.name;
      EXPECT_EQ(fast.ok, slow.ok) << name << " " << d.name;
    }
  }
}

TEST(Sessions, JsonVerdict) {
  auto f = mt::corpus_file("oauth_two_attempts.mps");
  auto j = to_json(check_session(f.to_session(), f.declared_env(), default_oracle()));
  EXPECT_FALSE(j["ok"].get<bool>());
  ASSERT_FALSE(j["failures"].empty());
  EXPECT_EQ(j["failures"][0]["rule"], "T-Ses");
}
