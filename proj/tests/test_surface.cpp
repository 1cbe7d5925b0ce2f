#include <gtest/gtest.h>

#include "corpus.hpp"
#include "generators.hpp"
#include "mpst/surface.hpp"

using namespace mpst;
namespace mt = mpst::testing;

TEST(Parse, PrefixesSumsAndRecursion) {
  auto t = parse_type("rec X . (p!a(nat) . X + p!b(str) . end)");
  ASSERT_TRUE(t.is_mu());
  EXPECT_TRUE(t.body().is_sum());
  EXPECT_EQ(t.body().left().label(), "a");
  EXPECT_EQ(t.body().left().payload(), Sort::Nat);
}

TEST(Parse, SumIsRightAssociative) {
  auto t = parse_type("p?a(unit).end + p?b(unit).end + p?c(unit).end");
  ASSERT_TRUE(t.is_sum());
  EXPECT_TRUE(t.left().is_prefix());
  EXPECT_TRUE(t.right().is_sum());
}

TEST(Parse, RecExtendsOverTheWholeSum) {
  auto t = parse_type("rec X . p?a(unit) . X + p?b(unit) . end");
  ASSERT_TRUE(t.is_mu());
  EXPECT_TRUE(t.body().is_sum());
}

TEST(Parse, IntegerLiteralsNeedASign) {
  EXPECT_EQ(parse_expr("3").value(), Value::nat(3));
  EXPECT_EQ(parse_expr("+3").value(), Value::integer(3));
  EXPECT_EQ(parse_expr("-3").value(), Value::integer(-3));
  EXPECT_EQ(parse_expr("()").value(), Value::unit());
}

TEST(Parse, StringEscapes) {
  EXPECT_EQ(parse_expr(R"("a\"b\\c\nd")").value(), Value::str("a\"b\\c\nd"));
}

TEST(Parse, ExpressionPrecedence) {
  auto e = parse_expr("not x = 1 || y && true");
  ASSERT_EQ(e.kind(), Expr::Kind::Or);
  // `not` binds tighter than `=`.
  EXPECT_EQ(e.lhs().kind(), Expr::Kind::Eq);
  EXPECT_EQ(e.lhs().lhs().kind(), Expr::Kind::Not);
  EXPECT_EQ(e.rhs().kind(), Expr::Kind::And);
}

TEST(Parse, ProcessForms) {
  auto p = parse_process("rec P . (c?pwd(x) . if x = \"miau\" then s!auth<true> . P else s!fail<> . 0 + c?quit(x) . 0)");
  ASSERT_EQ(p.kind(), Process::Kind::Mu);
  ASSERT_EQ(p.body().kind(), Process::Kind::Sum);
  const auto& branch = p.body().left().cont();
  ASSERT_EQ(branch.kind(), Process::Kind::If);
  EXPECT_EQ(branch.else_branch().payload().value(), Value::unit());
}

TEST(Parse, CommentsAndWhitespace) {
  auto d = parse_env("# header\np : end   # trailing\n\nq : end\n");
  EXPECT_EQ(d.size(), 2u);
}

TEST(Parse, ErrorCarriesPosition) {
  try {
    parse_type("p!a(nat) .\n  )");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.col(), 3);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse_type("p!a(float) . end"), ParseError);
  EXPECT_THROW(parse_expr("99999999999999999999999999"), ParseError);
}

TEST(Load, IllFormedTypesAreLoadErrors) {
  EXPECT_THROW(parse_env("p : rec X . X"), LoadError);
  EXPECT_THROW(parse_env("p : q?a(unit) . X"), LoadError);
  EXPECT_THROW(parse_env("p : end\np : end"), LoadError);
  EXPECT_THROW(parse_file("participant p type end proc 0\nparticipant p type end proc 0"), LoadError);
}

TEST(Load, FileToSession) {
  auto f = mt::corpus_file("oauth.mps");
  Session m = f.to_session();
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0].participant, "s");
  EXPECT_EQ(f.declared_env(), mt::delta());
}

TEST(Load, CorpusEnvironmentsMatchHandBuilt) {
  EXPECT_EQ(mt::corpus_env("oauth.env"), mt::delta());
  EXPECT_EQ(mt::corpus_env("oauth_two_attempts.env"), mt::delta2());
  EXPECT_EQ(mt::corpus_env("lock.env"), mt::delta_lock());
  EXPECT_EQ(mt::corpus_env("ended.env"), mt::delta_end());
}

TEST(RoundTrip, RandomTypes) {
  mt::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    std::vector<TypeVar> bound;
    SessionType t = mt::random_type(rng, 8, bound);
    std::string text = print_type(t);
    SessionType back = parse_type(text);
    ASSERT_EQ(back, t) << text;
    ASSERT_EQ(print_type(back), text);
  }
}

TEST(RoundTrip, RandomProcesses) {
  mt::Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    std::vector<ProcVar> bound;
    Process p = mt::random_process(rng, 8, bound);
    std::string text = print_process(p);
    Process back = parse_process(text);
    ASSERT_EQ(back, p) << text;
    ASSERT_EQ(print_process(back), text);
  }
}

TEST(RoundTrip, RandomExpressions) {
  mt::Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    Expr e = mt::random_expr(rng, 5);
    std::string text = print_expr(e);
    ASSERT_EQ(parse_expr(text), e) << text;
  }
}

TEST(RoundTrip, CorpusFiles) {
  for (const auto& name : mt::corpus_names(".mps")) {
    auto f = mt::corpus_file(name);
    auto again = parse_file(print_file(f));
    EXPECT_EQ(again.to_session(), f.to_session()) << name;
    EXPECT_EQ(again.declared_env(), f.declared_env()) << name;
  }
  for (const auto& name : mt::corpus_names(".env")) {
    auto d = mt::corpus_env(name);
    EXPECT_EQ(parse_env(print_env(d)), d) << name;
  }
}

TEST(Fuzz, MalformedInputOnlyRaisesParseOrLoadErrors) {
  mt::Rng rng(4);
  int parse_errors = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string text = mt::random_garbage(rng, 40);
    try {
      parse_file(text);
    } catch (const ParseError&) {
      ++parse_errors;
    } catch (const LoadError&) {
    } catch (const std::exception& e) {
      FAIL() << "unexpected exception " << e.what() << " on input: " << text;
    }
  }
  EXPECT_GT(parse_errors, 900);
}
