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

#include "lambdamu/allocation.h"
#include "lambdamu/instanceio.h"

#include "oracles.h"

#include "gtest/gtest.h"

#include <sstream>

namespace lambdamu {

namespace {

// one broker (id 1), one edge node (id 2)
std::shared_ptr<const EdgeNetwork> oneNode(const Rational&   aEdgeCost,
                                           const Rational&   aCloudCost,
                                           const std::size_t aContainers,
                                           const Rational&   aRate) {
  return std::make_shared<const EdgeNetwork>(
      CostMatrix({1}, {CLOUD, 2}, {aCloudCost, aEdgeCost}),
      std::vector<ComputeNode>{ComputeNode{2, aContainers, aRate}});
}

std::vector<App> apps(const std::size_t aMu, const std::vector<Rational>& aLambdaRates) {
  std::vector<App> ret;
  for (std::size_t k = 0; k < aMu; k++) {
    ret.emplace_back(App{static_cast<AppId>(k + 1), 1, Mode::Mu});
  }
  for (std::size_t k = 0; k < aLambdaRates.size(); k++) {
    ret.emplace_back(App{static_cast<AppId>(aMu + k + 1), 1, Mode::Lambda, aLambdaRates[k]});
  }
  return ret;
}

} // namespace

TEST(TestAllocation, test_broker_request_rate) {
  const auto               myNetwork = oneNode(Rational(1), Rational(2), 4, Rational(10));
  const AllocationInstance myInstance(
      myNetwork, apps(1, {Rational(1, 2), Rational(2), Rational(5, 4)}), Rational(1, 2), Rational(1, 2));
  EXPECT_EQ(Rational(15, 4), brokerRequestRate(myInstance, 1));
  EXPECT_THROW(brokerRequestRate(myInstance, 7), LookupError);
  const AllocationInstance myEmpty(myNetwork, apps(2, {}), Rational(1, 2), Rational(1, 2));
  EXPECT_EQ(Rational(0), brokerRequestRate(myEmpty, 1));
}

TEST(TestAllocation, test_available_service_rate) {
  const AllocationInstance myFar(
      oneNode(Rational(1), Rational(2), 4, Rational(10)), {}, Rational(1), Rational(1, 2));
  EXPECT_EQ(Rational(40), availableServiceRate(myFar, 2, MuAssignment()));

  const AllocationInstance myNear(
      oneNode(Rational(1), Rational(2), 8, Rational(20)), apps(3, {}), Rational(1), Rational(1, 2));
  MuAssignment myMu;
  myMu.theNodes = {{1, 2}, {2, 2}, {3, 2}};
  EXPECT_EQ(Rational(100), availableServiceRate(myNear, 2, myMu));

  const AllocationInstance myFull(
      oneNode(Rational(1), Rational(2), 3, Rational(20)), apps(4, {}), Rational(1), Rational(1, 2));
  EXPECT_EQ(Rational(0), availableServiceRate(myFull, 2, myMu));
  myMu.theNodes[4] = 2;
  EXPECT_THROW(availableServiceRate(myFull, 2, myMu), InconsistencyError);
  EXPECT_THROW(availableServiceRate(myFull, 9, myMu), LookupError);
}

TEST(TestAllocation, test_mu_single_app) {
  const AllocationInstance myInstance(
      oneNode(Rational(2), Rational(4), 4, Rational(10)), apps(1, {}), Rational(1, 4), Rational(1, 2));
  const auto mySolution = solveMuAssignment(myInstance);
  EXPECT_EQ(NodeId(2), mySolution.theAssignment.theNodes.at(1));
  EXPECT_EQ(Rational(2), mySolution.theCost);
}

TEST(TestAllocation, test_mu_alpha_zero) {
  std::mt19937_64 myRng(1);
  for (int r = 0; r < 20; r++) {
    const auto               myNetwork = test::randomNetwork(myRng, 3, 3, 8, 20);
    const AllocationInstance myInstance(
        myNetwork, test::randomApps(myRng, *myNetwork, 6, 3, 2), Rational(0), Rational(1, 2));
    const auto mySolution = solveMuAssignment(myInstance);
    Rational   myExpected(0);
    for (const auto& a : myInstance.apps()) {
      if (a.theMode == Mode::Mu) {
        EXPECT_EQ(CLOUD, mySolution.theAssignment.theNodes.at(a.theId));
        myExpected += myInstance.cost().cost(a.theBroker, CLOUD);
      }
    }
    EXPECT_EQ(myExpected, mySolution.theCost);
  }
}

TEST(TestAllocation, test_mu_tie_break) {
  // one app has to go to the cloud whatever the placement: lower node ids,
  // the cloud first, go to lower app ids
  const auto myNetwork = std::make_shared<const EdgeNetwork>(
      CostMatrix({1}, {CLOUD, 5, 6}, {Rational(9), Rational(2), Rational(2)}),
      std::vector<ComputeNode>{ComputeNode{5, 2, Rational(1)}, ComputeNode{6, 2, Rational(1)}});
  const AllocationInstance myInstance(myNetwork, apps(3, {}), Rational(1, 2), Rational(1, 2));
  const auto mySolution = solveMuAssignment(myInstance);
  EXPECT_EQ(NodeId(CLOUD), mySolution.theAssignment.theNodes.at(1));
  EXPECT_EQ(NodeId(5), mySolution.theAssignment.theNodes.at(2));
  EXPECT_EQ(NodeId(6), mySolution.theAssignment.theNodes.at(3));
  EXPECT_EQ(Rational(13), mySolution.theCost);
}

TEST(TestAllocation, test_lambda_single_cheap_node) {
  const AllocationInstance myInstance(
      oneNode(Rational(2), Rational(4), 4, Rational(10)), apps(0, {Rational(1)}), Rational(0), Rational(1, 2));
  const auto mySolution = solveLambdaTransportation(myInstance, MuAssignment());
  EXPECT_EQ(Rational(1), mySolution.theWeights(0, 1));
  EXPECT_EQ(Rational(0), mySolution.theWeights(0, 0));
  EXPECT_EQ(Rational(2), mySolution.theCost);
}

TEST(TestAllocation, test_lambda_capacity_split) {
  const AllocationInstance myInstance(
      oneNode(Rational(2), Rational(4), 4, Rational(10)), apps(0, {Rational(30)}), Rational(0), Rational(1, 2));
  const auto mySolution = solveLambdaTransportation(myInstance, MuAssignment());
  EXPECT_EQ(Rational(2, 3), mySolution.theWeights(0, 1));
  EXPECT_EQ(Rational(1, 3), mySolution.theWeights(0, 0));
  EXPECT_EQ(Rational(80), mySolution.theCost);
}

TEST(TestAllocation, test_joint_saturated_edge) {
  std::vector<Rational> myRates(45, Rational(1));
  const AllocationInstance myInstance(
      oneNode(Rational(1), Rational(2), 8, Rational(20)), apps(4, myRates), Rational(1, 2), Rational(1, 2));
  const auto mySolution = solveJoint(myInstance);
  EXPECT_EQ(4u, mySolution.theAssignment.occupancy(2));
  EXPECT_EQ(Rational(4), mySolution.theMuCost);
  EXPECT_EQ(Rational(40, 45), mySolution.theWeights(0, 1));
  EXPECT_EQ(Rational(5, 45), mySolution.theWeights(0, 0));
  EXPECT_EQ(Rational(40 + 5 * 2), mySolution.theLambdaCost);
  EXPECT_EQ(test::bruteLambdaCost(myInstance, mySolution.theAssignment),
            mySolution.theLambdaCost);
  EXPECT_TRUE(verify(myInstance, mySolution.theAssignment, mySolution.theWeights).empty());
}

TEST(TestAllocation, test_joint_degenerate_partitions) {
  std::mt19937_64 myRng(3);
  const auto      myNetwork = test::randomNetwork(myRng, 3, 3, 8, 20);

  const AllocationInstance myLambdaOnly(
      myNetwork, test::randomApps(myRng, *myNetwork, 0, 6, 3), Rational(1, 2), Rational(1, 2));
  const auto myJoint  = solveJoint(myLambdaOnly);
  const auto myLambda = solveLambdaTransportation(myLambdaOnly, MuAssignment());
  EXPECT_EQ(Rational(0), myJoint.theMuCost);
  EXPECT_EQ(myLambda.theWeights, myJoint.theWeights);
  EXPECT_EQ(myLambda.theCost, myJoint.theLambdaCost);

  const AllocationInstance myMuOnly(
      myNetwork, test::randomApps(myRng, *myNetwork, 5, 0, 3), Rational(1, 2), Rational(1, 2));
  const auto myMu = solveJoint(myMuOnly);
  EXPECT_EQ(Rational(0), myMu.theLambdaCost);
  EXPECT_EQ(LambdaWeights::zero(myNetwork->cost()), myMu.theWeights);
}

TEST(TestAllocation, test_exact_vs_brute_force) {
  std::mt19937_64 myRng(42);
  for (int r = 0; r < 100; r++) {
    const auto myNetwork = test::randomNetwork(
        myRng, 1 + uniformIndex(myRng, 4), 1 + uniformIndex(myRng, 3), 6, 6);
    const Rational myAlpha(static_cast<std::int64_t>(uniformIndex(myRng, 5)), 4);
    const Rational myBeta(1 + static_cast<std::int64_t>(uniformIndex(myRng, 3)), 4);
    const AllocationInstance myInstance(
        myNetwork,
        test::randomApps(myRng, *myNetwork, uniformIndex(myRng, 6), uniformIndex(myRng, 5), 2),
        myAlpha,
        myBeta);
    const auto mySolution = solveJoint(myInstance);
    ASSERT_EQ(test::bruteMuCost(myInstance), mySolution.theMuCost) << "replication " << r;
    ASSERT_EQ(test::bruteLambdaCost(myInstance, mySolution.theAssignment),
              mySolution.theLambdaCost)
        << "replication " << r;
    ASSERT_TRUE(verify(myInstance, mySolution.theAssignment, mySolution.theWeights).empty());
  }
}

TEST(TestAllocation, test_fractional_rates_and_capacities) {
  std::mt19937_64 myRng(5);
  for (int r = 0; r < 50; r++) {
    const auto myNetwork = test::randomNetwork(myRng, 2, 2, 3, 3);
    auto       myApps    = test::randomApps(myRng, *myNetwork, 2, 3, 1);
    for (auto& a : myApps) {
      a.theRequestRate = Rational(1 + static_cast<std::int64_t>(uniformIndex(myRng, 3)), 2);
    }
    const AllocationInstance myInstance(myNetwork, myApps, Rational(1, 2), Rational(7, 20));
    const auto               mySolution = solveJoint(myInstance);
    EXPECT_EQ(test::bruteLambdaCost(myInstance, mySolution.theAssignment),
              mySolution.theLambdaCost);
    EXPECT_TRUE(verify(myInstance, mySolution.theAssignment, mySolution.theWeights).empty());
  }
}

TEST(TestAllocation, test_mu_cost_monotone_in_alpha) {
  std::mt19937_64 myRng(11);
  for (int r = 0; r < 40; r++) {
    const auto myNetwork = test::randomNetwork(myRng, 3, 3, 8, 10);
    const auto myApps    = test::randomApps(myRng, *myNetwork, 8, 10, 2);
    Rational   myPrev(-1);
    for (std::int64_t a = 8; a >= 0; a--) {
      const AllocationInstance myInstance(myNetwork, myApps, Rational(a, 8), Rational(1, 2));
      const auto               myCost = solveMuAssignment(myInstance).theCost;
      EXPECT_GE(myCost, myPrev);
      myPrev = myCost;
    }
  }
}

// with several brokers, or with service rates differing across nodes, more
// room for mu-apps on a cheap node can leave more lambda capacity elsewhere
TEST(TestAllocation, test_lambda_cost_monotone_in_alpha_single_broker) {
  std::mt19937_64 myRng(12);
  for (int r = 0; r < 40; r++) {
    const auto               myRandom = test::randomNetwork(myRng, 1, 3, 8, 10);
    std::vector<ComputeNode> myEdges  = myRandom->edges();
    for (auto& n : myEdges) {
      n.theServiceRate = Rational(5);
    }
    const auto myNetwork = std::make_shared<const EdgeNetwork>(myRandom->cost(), myEdges);
    const auto myApps    = test::randomApps(myRng, *myNetwork, 6, 30, 2);
    Rational   myPrev(0);
    for (std::int64_t a = 0; a <= 8; a++) {
      const AllocationInstance myInstance(myNetwork, myApps, Rational(a, 8), Rational(1, 2));
      const auto               myCost = solveJoint(myInstance).theLambdaCost;
      EXPECT_GE(myCost, myPrev);
      myPrev = myCost;
    }
  }
}

TEST(TestAllocation, test_cloud_fallback) {
  std::vector<Rational>    myRates(50, Rational(1));
  const AllocationInstance myInstance(
      oneNode(Rational(1), Rational(3), 4, Rational(10)), apps(0, myRates), Rational(0), Rational(1, 2));
  const auto mySolution = solveJoint(myInstance);
  EXPECT_GT(mySolution.theWeights(0, 0), 0);
  EXPECT_EQ(Rational(30, 50), mySolution.theWeights(0, 0));
}

TEST(TestAllocation, test_omega_dominates) {
  std::vector<Rational>    myRates(3, Rational(1));
  const AllocationInstance myInstance(
      oneNode(Rational(1), Rational(3), 4, Rational(10)), apps(2, myRates), Rational(1), Rational(1, 2));
  const auto mySolution = solveJoint(myInstance);
  // 1 + sum R * max c / min c
  EXPECT_EQ(Rational(1 + 3 * 3), mySolution.theOmega);
  EXPECT_EQ(mySolution.theOmega * mySolution.theMuCost + mySolution.theLambdaCost,
            mySolution.theTotalCost);
}

TEST(TestAllocation, test_invalid_instances) {
  const auto myNetwork = oneNode(Rational(1), Rational(3), 4, Rational(10));
  EXPECT_THROW(AllocationInstance(myNetwork, {}, Rational(-1, 2), Rational(1, 2)),
               InvalidConfiguration);
  EXPECT_THROW(AllocationInstance(myNetwork, {}, Rational(3, 2), Rational(1, 2)),
               InvalidConfiguration);
  EXPECT_THROW(AllocationInstance(myNetwork, {}, Rational(1, 2), Rational(0)),
               InvalidConfiguration);
  EXPECT_THROW(AllocationInstance(myNetwork, {}, Rational(1, 2), Rational(1)),
               InvalidConfiguration);
  EXPECT_THROW(AllocationInstance(myNetwork,
                                  {App{1, 1, Mode::Mu}, App{1, 1, Mode::Lambda}},
                                  Rational(1, 2),
                                  Rational(1, 2)),
               InvalidConfiguration);
  EXPECT_THROW(AllocationInstance(
                   myNetwork, {App{1, 1, Mode::Lambda, Rational(0)}}, Rational(1, 2), Rational(1, 2)),
               InvalidConfiguration);
  const AllocationInstance myUnknown(
      myNetwork, {App{1, 9, Mode::Mu}}, Rational(1, 2), Rational(1, 2));
  EXPECT_THROW(solveMuAssignment(myUnknown), LookupError);
}

TEST(TestAllocation, test_verify_violations) {
  const AllocationInstance myInstance(
      oneNode(Rational(1), Rational(3), 4, Rational(10)), apps(2, {Rational(2)}), Rational(1, 4), Rational(1, 2));
  const auto mySolution = solveJoint(myInstance);
  ASSERT_TRUE(verify(myInstance, mySolution.theAssignment, mySolution.theWeights).empty());

  const auto myOnly = [&](const MuAssignment& aMu, const LambdaWeights& aW) {
    const auto myViolations = verify(myInstance, aMu, aW);
    return myViolations.size() == 1 ? std::optional(myViolations.front().theConstraint)
                                    : std::nullopt;
  };

  auto myMu = mySolution.theAssignment;
  myMu.theNodes[3] = CLOUD; // lambda-app with a container
  EXPECT_EQ(Violation::Constraint::LambdaNoContainer, myOnly(myMu, mySolution.theWeights));

  myMu = mySolution.theAssignment;
  myMu.theNodes.erase(1);
  EXPECT_EQ(Violation::Constraint::MuPlacement, myOnly(myMu, mySolution.theWeights));

  myMu = mySolution.theAssignment;
  myMu.theNodes[1] = 2;
  myMu.theNodes[2] = 2; // floor(4/4) = 1 slot only
  const auto myViolations = verify(myInstance, myMu, mySolution.theWeights);
  EXPECT_TRUE(std::any_of(myViolations.begin(), myViolations.end(), [](const auto& v) {
    return v.theConstraint == Violation::Constraint::MuCapacity;
  }));

  auto myW     = mySolution.theWeights;
  myW(0, 0)    = Rational(0);
  myW(0, 1)    = Rational(9, 10);
  EXPECT_EQ(Violation::Constraint::WeightNormalization, myOnly(mySolution.theAssignment, myW));

  myW       = mySolution.theWeights;
  myW(0, 0) = Rational(3, 2);
  myW(0, 1) = Rational(-1, 2);
  const auto myNegative = verify(myInstance, mySolution.theAssignment, myW);
  EXPECT_TRUE(std::any_of(myNegative.begin(), myNegative.end(), [](const auto& v) {
    return v.theConstraint == Violation::Constraint::WeightNonNegative;
  }));

  // 2 units on a node with beta S = 1/2 * 10 * (4 - 1) = 15 is fine, on a
  // tighter instance it is not
  const AllocationInstance myTight(
      oneNode(Rational(1), Rational(3), 1, Rational(1)), apps(0, {Rational(2)}), Rational(0), Rational(1, 2));
  auto myAllEdge = LambdaWeights::zero(myTight.cost());
  myAllEdge(0, 1) = Rational(1);
  EXPECT_EQ(Violation::Constraint::NodeStability, [&]() {
    const auto v = verify(myTight, MuAssignment(), myAllEdge);
    return v.size() == 1 ? std::optional(v.front().theConstraint) : std::nullopt;
  }());

  const AllocationInstance myBadBroker(
      oneNode(Rational(1), Rational(3), 4, Rational(10)), {App{1, 7, Mode::Mu}}, Rational(1, 2), Rational(1, 2));
  MuAssignment myCloud;
  myCloud.theNodes[1] = CLOUD;
  EXPECT_EQ(Violation::Constraint::BrokerBinding,
            [&]() {
              const auto v = verify(myBadBroker, myCloud, LambdaWeights::zero(myBadBroker.cost()));
              return v.size() == 1 ? std::optional(v.front().theConstraint) : std::nullopt;
            }());
}

TEST(TestAllocation, test_feasibility_large) {
  std::mt19937_64 myRng(99);
  for (int r = 0; r < 20; r++) {
    const auto               myNetwork = test::randomNetwork(myRng, 10, 20, 8, 20);
    const AllocationInstance myInstance(
        myNetwork, test::randomApps(myRng, *myNetwork, 50, 50, 3), Rational(1, 2), Rational(9, 10));
    const auto mySolution = solveJoint(myInstance);
    EXPECT_TRUE(verify(myInstance, mySolution.theAssignment, mySolution.theWeights).empty());
  }
}

TEST(TestInstanceIo, test_roundtrip) {
  std::mt19937_64          myRng(8);
  const auto               myNetwork = test::randomNetwork(myRng, 3, 4, 8, 20);
  const AllocationInstance myInstance(
      myNetwork, test::randomApps(myRng, *myNetwork, 4, 5, 3), Rational(3, 8), Rational(7, 10));
  std::stringstream myStream;
  saveInstance(myInstance, myStream);
  const auto myLoaded = loadInstance(myStream);
  EXPECT_EQ(myInstance.apps(), myLoaded.apps());
  EXPECT_EQ(myInstance.cost(), myLoaded.cost());
  EXPECT_EQ(myInstance.network().edges(), myLoaded.network().edges());
  EXPECT_EQ(myInstance.alpha(), myLoaded.alpha());
  EXPECT_EQ(myInstance.beta(), myLoaded.beta());

  const auto        mySolution = solveJoint(myInstance);
  std::stringstream myCsv;
  writeSolutionCsv(mySolution.theAssignment, mySolution.theWeights, myCsv);
  const auto [myMu, myW] = readSolutionCsv(myInstance.cost(), myCsv);
  EXPECT_EQ(mySolution.theAssignment, myMu);
  EXPECT_TRUE(verify(myInstance, myMu, myW).empty());
}

TEST(TestInstanceIo, test_errors) {
  const auto myLine = [](const std::string& aText) -> std::size_t {
    std::stringstream myStream(aText);
    try {
      loadInstance(myStream);
    } catch (const ParseError& aErr) {
      return aErr.theLine;
    }
    return 0;
  };
  const std::string myHead = "instance v1\nnode 2 far 4 10\ncost 1 cloud 3\ncost 1 2 1\n";
  EXPECT_EQ(0u, myLine(myHead + "app 1 1 mu 1\nparam alpha 1/2\nparam beta 0.5\n"));
  EXPECT_EQ(5u, myLine(myHead + "app 1 1 sideways 1\n"));
  EXPECT_EQ(5u, myLine(myHead + "frobnicate\n"));
  EXPECT_EQ(5u, myLine(myHead + "param alpha 1/2\n"));
  EXPECT_EQ(1u, myLine("instance v9\n"));
  // cost towards node 3 missing
  EXPECT_NE(0u, myLine("instance v1\nnode 2 far 4 10\nnode 3 far 4 10\ncost 1 cloud 3\n"
                       "cost 1 2 1\nparam alpha 1\nparam beta 1/2\n"));
}

} // namespace lambdamu
