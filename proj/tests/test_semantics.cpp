#include <gtest/gtest.h>

#include "corpus.hpp"
#include "mpst/brute.hpp"
#include "mpst/semantics.hpp"

using namespace mpst;
namespace mt = mpst::testing;

TEST(Eval, Basics) {
  EXPECT_EQ(eval_expr(parse_expr("1 < 2")), Value::boolean(true));
  EXPECT_EQ(eval_expr(parse_expr("-1 < +0")), Value::boolean(true));
  EXPECT_EQ(eval_expr(parse_expr("\"a\" = \"a\" && not false")), Value::boolean(true));
  EXPECT_EQ(eval_expr(parse_expr("false || 2 = 3")), Value::boolean(false));
  EXPECT_THROW(eval_expr(parse_expr("1 < +2")), EvalError);
  EXPECT_THROW(eval_expr(parse_expr("x")), EvalError);
  EXPECT_THROW(eval_expr(parse_expr("\"a\" < \"b\"")), EvalError);
}

TEST(ThreadSteps, BranchesLeftToRight) {
  Thread t{"c", parse_process("s?login(x) . 0 + s?cancel(x) . a!quit<()> . 0")};
  auto steps = thread_transitions(t);
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(steps[0].action.label, "login");
  EXPECT_EQ(steps[1].action.label, "cancel");
  EXPECT_EQ(steps[1].action.direction, Polarity::Receive);
}

TEST(ThreadSteps, ReceiveSubstitutes) {
  Thread t{"q", parse_process("p?n(x) . p!m<x> . 0")};
  auto steps = thread_transitions(t);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(steps[0].receive(Value::nat(7)), parse_process("p!m<7> . 0"));
}

TEST(SessionSteps, OAuthReachesM3) {
  Session m = mt::corpus_file("oauth.mps").to_session();
  Process ps = parse_process("rec P . (c!login<()> . a?auth(x) . P + c!cancel<()> . 0)");
  Process pc = parse_process("rec P . (s?login(x) . (a!pwd<\"fido\"> . P + a!ssh<()> . P) + s?cancel(x) . a!quit<()> . 0)");
  Session m3({{"s", Process::recv("a", "auth", "x", ps)},
              {"c", Process::sum(Process::send("a", "pwd", Expr::lit(Value::str("fido")), pc),
                                 Process::send("a", "ssh", Expr(), pc))},
              {"a", m[2].body}});
  bool found = false;
  for (const auto& st : explore_session(m, 3)) {
    if (congruent(st.session, m3)) {
      found = true;
      EXPECT_EQ(st.depth, 3u);
    }
  }
  EXPECT_TRUE(found);
}

TEST(SessionSteps, TauBeforeCommunication) {
  Session m = mt::corpus_file("oauth.mps").to_session();
  auto steps = session_transitions(m);
  ASSERT_FALSE(steps.empty());
  EXPECT_TRUE(steps[0].action.is_tau());
  EXPECT_EQ(steps[0].action.participant, "s");
}

TEST(SessionSteps, IfTakesTheRightBranch) {
  Session m({{"q", parse_process("if 1 < 2 then p!a<()> . 0 else 0")}, {"p", parse_process("q?a(x) . 0")}});
  auto steps = session_transitions(m);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(steps[0].next[0].body, parse_process("p!a<()> . 0"));
}

TEST(SessionSteps, NoStepOnSortlessOutput) {
  Session m({{"q", parse_process("p!a<x> . 0")}, {"p", parse_process("q?a(y) . 0")}});
  EXPECT_TRUE(session_transitions(m).empty());
}

TEST(Simulate, DeterministicPerSeed) {
  Session m = mt::corpus_file("oauth.mps").to_session();
  auto a = format_trace(simulate(m, 42, 50));
  auto b = format_trace(simulate(m, 42, 50));
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.empty());
  EXPECT_NE(a.find(" ; "), std::string::npos);
}

TEST(Simulate, AllInactionIsEnded) {
  Session m({{"p", Process()}, {"q", Process()}});
  EXPECT_TRUE(is_ended(m));
  auto t = simulate(m, 1, 10);
  EXPECT_TRUE(t.steps.empty());
  EXPECT_TRUE(t.stopped_early);
  auto states = explore_session(m, 5);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_EQ(states[0].tag, SessionState::Tag::Ended);
}
