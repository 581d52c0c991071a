/*
 lambdamu: joint allocation of stateless and stateful FaaS containers at the edge

 Licensed under the MIT License <http://opensource.org/licenses/MIT>
 Copyright (c) 2026 the lambdamu contributors

 Permission is hereby  granted, free of charge, to any  person obtaining a copy
 of this software and associated  documentation files (the "Software"), to deal
 in the Software  without restriction, including without  limitation the rights
 to  use, copy,  modify, merge,  publish, distribute,  sublicense, and/or  sell
 copies  of  the Software,  and  to  permit persons  to  whom  the Software  is
 furnished to do so, subject to the following conditions:

 The above copyright notice and this permission notice shall be included in all
 copies or substantial portions of the Software.

 THE SOFTWARE  IS PROVIDED "AS  IS", WITHOUT WARRANTY  OF ANY KIND,  EXPRESS OR
 IMPLIED,  INCLUDING BUT  NOT  LIMITED TO  THE  WARRANTIES OF  MERCHANTABILITY,
 FITNESS FOR  A PARTICULAR PURPOSE AND  NONINFRINGEMENT. IN NO EVENT  SHALL THE
 AUTHORS  OR COPYRIGHT  HOLDERS  BE  LIABLE FOR  ANY  CLAIM,  DAMAGES OR  OTHER
 LIABILITY, WHETHER IN AN ACTION OF  CONTRACT, TORT OR OTHERWISE, ARISING FROM,
 OUT OF OR IN CONNECTION WITH THE SOFTWARE  OR THE USE OR OTHER DEALINGS IN THE
 SOFTWARE.
*/

#include "lambdamu/policy.h"

#include "oracles.h"

#include "gtest/gtest.h"

#include <sstream>

namespace lambdamu {

namespace {

AppTrace periodic(const std::size_t aEvents, const TimeMs aGap, const Access aAccess) {
  AppTrace ret{"app", {}, 0, 0};
  for (std::size_t k = 0; k < aEvents; k++) {
    ret.theEvents.emplace_back(TraceEvent{static_cast<TimeMs>(k) * aGap, aAccess});
  }
  return ret;
}

PolicyParams scaled(const PolicyParams& aParams, const Money& aFactor) {
  PolicyParams ret = aParams;
  ret.theXiLambda *= aFactor;
  ret.theSigmaRead *= aFactor;
  ret.theSigmaWrite *= aFactor;
  ret.theOmegaMu *= aFactor;
  ret.theTauLambda *= aFactor;
  ret.theTauMu *= aFactor;
  return ret;
}

} // namespace

TEST(TestPolicy, test_cost_functions) {
  const PolicyParams p;
  EXPECT_EQ(Money(0), costStateful(0, p));
  EXPECT_EQ(Money(63, 10), costStateful(1'000'000, p));
  EXPECT_EQ(2 * costStateful(12'345, p), costStateful(24'690, p));
  EXPECT_THROW(costStateful(-1, p), DomainError);

  EXPECT_EQ(Money(0), costStateless(0, 0, p));
  EXPECT_EQ(Money(2058, 10), costStateless(77, 23, p));
  EXPECT_EQ(Money(1), costStateless(1, 0, p));
  EXPECT_THROW(costStateless(-1, 0, p), DomainError);

  EXPECT_EQ(Money(1), invocationCost(Access::Read, p));
  EXPECT_EQ(Money(28, 5), invocationCost(Access::Write, p));
  EXPECT_EQ(Money(3, 5), invocationCost(Access::None, p));
}

TEST(TestPolicy, test_params) {
  PolicyParams p;
  EXPECT_NO_THROW(p.validate());
  p.set("omega_mu", "1e-5");
  EXPECT_EQ(Money(1, 100'000), p.theOmegaMu);
  p.set("tau_lambda", "3/2");
  EXPECT_EQ(Money(3, 2), p.theTauLambda);
  EXPECT_THROW(p.set("gamma", "1"), std::invalid_argument);
  EXPECT_THROW(p.set("xi_lambda", "cheap"), std::invalid_argument);
  p.theSigmaWrite = Money(-1);
  EXPECT_THROW(p.validate(), DomainError);

  EXPECT_EQ(6u, PolicyParams().toMap().size());
  EXPECT_EQ("3/5", PolicyParams().toMap().at("xi_lambda"));

  PolicyParams       myLoaded;
  std::stringstream  myStream("# custom\nsigma_w = 4\n\ntau_mu=20 # slow\n");
  const auto         myKeys = loadParams(myStream, myLoaded);
  EXPECT_EQ(std::vector<std::string>({"sigma_w", "tau_mu"}), myKeys);
  EXPECT_EQ(Money(4), myLoaded.theSigmaWrite);
  EXPECT_EQ(Money(20), myLoaded.theTauMu);

  const auto myLine = [](const std::string& aText) -> std::size_t {
    PolicyParams      myParams;
    std::stringstream myIn(aText);
    try {
      loadParams(myIn, myParams);
    } catch (const ParseError& aErr) {
      return aErr.theLine;
    }
    return 0;
  };
  EXPECT_EQ(2u, myLine("xi_lambda=1\nwhat\n"));
  EXPECT_EQ(1u, myLine("phi=1\n"));
  EXPECT_EQ(3u, myLine("\n\ntau_mu=-1\n"));
}

TEST(TestPolicy, test_empty_trace) {
  const AppTrace myEmpty{"app", {}, 0, 0};
  EXPECT_THROW(optimalSchedule(myEmpty, PolicyParams()), DomainError);
  EXPECT_THROW(hybridSchedule(myEmpty, PolicyParams(), 50), DomainError);
  EXPECT_THROW(evaluatePolicies(myEmpty, PolicyParams(), 50), DomainError);
  EXPECT_THROW(hybridSchedule(periodic(3, 10, Access::Read), PolicyParams(), 0), DomainError);
}

TEST(TestPolicy, test_single_invocation) {
  const auto myTrace   = periodic(1, 0, Access::Write);
  const auto myOptimal = optimalSchedule(myTrace, PolicyParams());
  ASSERT_EQ(1u, myOptimal.theSegments.size());
  EXPECT_EQ(Mode::Lambda, myOptimal.theSegments[0].theMode);
  EXPECT_EQ(Money(28, 5), myOptimal.theTotalCost);
  EXPECT_EQ(myOptimal, hybridSchedule(myTrace, PolicyParams(), 50));
}

TEST(TestPolicy, test_sparse_trace_stays_lambda) {
  const auto myTrace  = periodic(40, 10'000'000, Access::Write);
  const auto myHybrid = hybridSchedule(myTrace, PolicyParams(), 50);
  EXPECT_EQ(0u, myHybrid.migrations());
  EXPECT_EQ(Mode::Lambda, myHybrid.theSegments[0].theMode);
  EXPECT_EQ(costStateless(0, 40, PolicyParams()), myHybrid.theTotalCost);
}

TEST(TestPolicy, test_dense_trace_stays_mu) {
  const auto myTrace  = periodic(5000, 1, Access::Read);
  const auto myHybrid = hybridSchedule(myTrace, PolicyParams(), 50);
  EXPECT_EQ(0u, myHybrid.migrations());
  EXPECT_EQ(Mode::Mu, myHybrid.theSegments[0].theMode);
  EXPECT_EQ(PolicyParams().theTauMu + costStateful(4999, PolicyParams()), myHybrid.theTotalCost);
  const auto myResult = evaluatePolicies(myTrace, PolicyParams(), 50);
  EXPECT_EQ(myResult.theMuOnly, myResult.theHybrid);
  EXPECT_EQ(myResult.theMuOnly, myResult.theOptimal);
}

TEST(TestPolicy, test_two_regimes) {
  AppTrace myTrace{"app", {}, 0, 0};
  for (const TimeMs myOffset : {TimeMs(0), TimeMs(50'000'000)}) {
    for (TimeMs k = 0; k < 200; k++) {
      myTrace.theEvents.emplace_back(TraceEvent{myOffset + k * 100, Access::Read});
    }
  }
  const auto myResult = evaluatePolicies(myTrace, PolicyParams(), 50);
  EXPECT_GE(myResult.theMigrations, 2u);
  EXPECT_LT(myResult.theHybrid, std::min(myResult.theLambdaOnly, myResult.theMuOnly));
  EXPECT_LE(myResult.theOptimal, myResult.theHybrid);
  EXPECT_GE(optimalSchedule(myTrace, PolicyParams()).migrations(), 2u);
}

TEST(TestPolicy, test_evaluate_constant_policies) {
  const auto myTrace  = periodic(100, 1000, Access::Read);
  const auto myResult = evaluatePolicies(myTrace, PolicyParams(), 50);
  EXPECT_EQ(Money(100), myResult.theLambdaOnly);
  EXPECT_EQ(PolicyParams().theTauMu + costStateful(99'000, PolicyParams()), myResult.theMuOnly);
  EXPECT_EQ(myResult.thePattern.migrations(), myResult.theMigrations);
  EXPECT_EQ(myResult.thePattern.theTotalCost, myResult.theHybrid);
}

TEST(TestPolicy, test_pattern_from_modes) {
  AppTrace myTrace{"app",
                   {{0, Access::Read}, {10, Access::Write}, {20, Access::Read}, {30, Access::Read}},
                   0,
                   0};
  const PolicyParams p;
  const auto         myPattern =
      patternFromModes(myTrace, {Mode::Lambda, Mode::Mu, Mode::Mu, Mode::Lambda}, p);
  ASSERT_EQ(3u, myPattern.theSegments.size());
  EXPECT_EQ((Segment{0, Mode::Lambda, 0}), myPattern.theSegments[0]);
  EXPECT_EQ((Segment{10, Mode::Mu, 1}), myPattern.theSegments[1]);
  EXPECT_EQ((Segment{20, Mode::Lambda, 3}), myPattern.theSegments[2]);
  EXPECT_EQ(Money(1) + p.theTauMu + p.theOmegaMu * 10 + p.theTauLambda + Money(1),
            myPattern.theTotalCost);
  EXPECT_EQ(2u, myPattern.migrations());
  EXPECT_THROW(patternFromModes(myTrace, {Mode::Mu}, p), std::invalid_argument);
}

TEST(TestPolicy, test_optimal_matches_enumeration) {
  std::mt19937_64 myRng(2026);
  for (int r = 0; r < 300; r++) {
    const auto   myTrace = test::randomTrace(myRng, 1 + uniformIndex(myRng, 12));
    PolicyParams p;
    if (r % 3 == 1) {
      p.theOmegaMu = Money(test::uniformInt(myRng, 1, 100), 100'000);
    } else if (r % 3 == 2) {
      p.theTauMu     = Money(test::uniformInt(myRng, 0, 30));
      p.theTauLambda = Money(test::uniformInt(myRng, 0, 30));
    }
    const auto myOptimal = optimalSchedule(myTrace, p);
    ASSERT_EQ(test::bruteOptimalCost(myTrace, p), myOptimal.theTotalCost) << "trace " << r;
    ASSERT_EQ(test::priceModes(myTrace, test::modesOf(myOptimal, myTrace.theEvents.size()), p),
              myOptimal.theTotalCost);
  }
}

TEST(TestPolicy, test_dominance_and_hybrid_soundness) {
  std::mt19937_64    myRng(7);
  const PolicyParams p;
  for (int r = 0; r < 300; r++) {
    const auto myTrace  = test::randomTrace(myRng, 1 + uniformIndex(myRng, 200));
    const auto myResult = evaluatePolicies(myTrace, p, 1 + uniformIndex(myRng, 60));
    ASSERT_LE(myResult.theOptimal, myResult.theLambdaOnly);
    ASSERT_LE(myResult.theOptimal, myResult.theMuOnly);
    ASSERT_LE(myResult.theOptimal, myResult.theHybrid);

    const auto n = myTrace.theEvents.size();
    ASSERT_EQ(test::priceModes(myTrace, std::vector<Mode>(n, Mode::Lambda), p),
              myResult.theLambdaOnly);
    ASSERT_EQ(test::priceModes(myTrace, std::vector<Mode>(n, Mode::Mu), p), myResult.theMuOnly);
    ASSERT_EQ(test::priceModes(myTrace, test::modesOf(myResult.thePattern, n), p),
              myResult.theHybrid);
  }
}

TEST(TestPolicy, test_pattern_invariants) {
  std::mt19937_64 myRng(8);
  for (int r = 0; r < 200; r++) {
    const auto myTrace = test::randomTrace(myRng, 1 + uniformIndex(myRng, 100));
    for (const auto& myPattern :
         {hybridSchedule(myTrace, PolicyParams(), 50), optimalSchedule(myTrace, PolicyParams())}) {
      ASSERT_FALSE(myPattern.theSegments.empty());
      EXPECT_LE(myPattern.theSegments.front().theStart, myTrace.theEvents.front().theTime);
      EXPECT_EQ(0u, myPattern.theSegments.front().theFirstEvent);
      for (std::size_t s = 1; s < myPattern.theSegments.size(); s++) {
        EXPECT_NE(myPattern.theSegments[s - 1].theMode, myPattern.theSegments[s].theMode);
        EXPECT_LT(myPattern.theSegments[s - 1].theFirstEvent,
                  myPattern.theSegments[s].theFirstEvent);
        EXPECT_LE(myPattern.theSegments[s - 1].theStart, myPattern.theSegments[s].theStart);
      }
    }
  }
}

TEST(TestPolicy, test_degenerate_regimes) {
  std::mt19937_64 myRng(9);
  std::size_t     myConstant = 0;
  for (int r = 0; r < 300; r++) {
    const auto myTrace   = test::randomTrace(myRng, 1 + uniformIndex(myRng, 40));
    const auto myOptimal = optimalSchedule(myTrace, PolicyParams());
    if (myOptimal.migrations() > 0) {
      continue;
    }
    myConstant++;
    const auto myHybrid = hybridSchedule(myTrace, PolicyParams(), myTrace.theEvents.size());
    EXPECT_EQ(0u, myHybrid.migrations()) << "trace " << r;
    EXPECT_EQ(myOptimal.theTotalCost, myHybrid.theTotalCost) << "trace " << r;
  }
  EXPECT_GT(myConstant, 20u);

  // constant mu
  const auto myDense = periodic(300, 50, Access::Write);
  ASSERT_EQ(0u, optimalSchedule(myDense, PolicyParams()).migrations());
  EXPECT_EQ(Mode::Mu, optimalSchedule(myDense, PolicyParams()).theSegments[0].theMode);
  EXPECT_EQ(0u, hybridSchedule(myDense, PolicyParams(), 300).migrations());
}

TEST(TestPolicy, test_scaling_argmin_invariance) {
  std::mt19937_64 myRng(10);
  for (int r = 0; r < 100; r++) {
    const auto         myTrace = test::randomTrace(myRng, 1 + uniformIndex(myRng, 80));
    const PolicyParams p;
    const Money        myFactor(test::uniformInt(myRng, 1, 50), test::uniformInt(myRng, 1, 7));
    const auto         q = scaled(p, myFactor);
    for (const auto myLookahead : {std::size_t(1), std::size_t(10), std::size_t(50)}) {
      const auto myHybridP = hybridSchedule(myTrace, p, myLookahead);
      const auto myHybridQ = hybridSchedule(myTrace, q, myLookahead);
      EXPECT_EQ(myHybridP.theSegments, myHybridQ.theSegments);
      EXPECT_EQ(myHybridP.theTotalCost * myFactor, myHybridQ.theTotalCost);
    }
    const auto myOptimalP = optimalSchedule(myTrace, p);
    const auto myOptimalQ = optimalSchedule(myTrace, q);
    EXPECT_EQ(myOptimalP.theSegments, myOptimalQ.theSegments);
    EXPECT_EQ(myOptimalP.theTotalCost * myFactor, myOptimalQ.theTotalCost);
  }
}

TEST(TestPolicy, test_none_access) {
  AppTrace myTrace{"app", {{0, Access::None}, {5, Access::None}}, 0, 0};
  EXPECT_EQ(Money(6, 5), evaluatePolicies(myTrace, PolicyParams(), 50).theLambdaOnly);
}

} // namespace lambdamu
