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

#include "lambdamu/hungarian.h"
#include "lambdamu/mcfp.h"

#include <algorithm>
#include <set>

namespace lambdamu {

std::string toString(const Mode aMode) {
  return aMode == Mode::Lambda ? "lambda" : "mu";
}

Mode modeFromString(const std::string& aText) {
  if (aText == "lambda") {
    return Mode::Lambda;
  } else if (aText == "mu") {
    return Mode::Mu;
  }
  throw std::invalid_argument("invalid mode '" + aText + "'");
}

std::string toString(const Violation::Constraint aConstraint) {
  switch (aConstraint) {
    case Violation::Constraint::BrokerBinding:
      return "broker-binding";
    case Violation::Constraint::MuPlacement:
      return "mu-placement";
    case Violation::Constraint::LambdaNoContainer:
      return "lambda-no-container";
    case Violation::Constraint::MuCapacity:
      return "mu-capacity";
    case Violation::Constraint::WeightNonNegative:
      return "weight-non-negative";
    case Violation::Constraint::WeightNormalization:
      return "weight-normalization";
    case Violation::Constraint::NodeStability:
      return "node-stability";
  }
  throw std::logic_error("unknown constraint");
}

////////////////////////////////////////////////////////////////////////////////
// EdgeNetwork, AllocationInstance

EdgeNetwork::EdgeNetwork(CostMatrix aCost, std::vector<ComputeNode> aEdges)
    : theCost(std::move(aCost))
    , theEdges(std::move(aEdges)) {
  if (theEdges.size() + 1 != theCost.nodes().size()) {
    throw InvalidConfiguration("edge nodes do not match the cost matrix");
  }
  for (std::size_t j = 0; j < theEdges.size(); j++) {
    if (theEdges[j].theId != theCost.nodes()[j + 1]) {
      throw InvalidConfiguration("edge node " +
                                 std::to_string(theEdges[j].theId) +
                                 " out of cost matrix order");
    }
    if (theEdges[j].theServiceRate < 0) {
      throw InvalidConfiguration("negative service rate");
    }
  }
}

std::shared_ptr<const EdgeNetwork>
EdgeNetwork::fromTopology(const Topology& aTopology) {
  auto                     myCost = computeCostMatrix(aTopology);
  std::vector<ComputeNode> myEdges;
  for (const auto myId : aTopology.edgeNodes()) {
    const auto& myNode = aTopology.node(myId);
    myEdges.emplace_back(
        ComputeNode{myId, myNode.theContainers, myNode.theServiceRate});
  }
  return std::make_shared<const EdgeNetwork>(std::move(myCost),
                                             std::move(myEdges));
}

AllocationInstance::AllocationInstance(std::shared_ptr<const EdgeNetwork> aNetwork,
                                       std::vector<App>                   aApps,
                                       Rational                           aAlpha,
                                       Rational                           aBeta)
    : theNetwork(std::move(aNetwork))
    , theApps(std::move(aApps))
    , theAlpha(aAlpha)
    , theBeta(aBeta)
    , theNodes() {
  if (theNetwork == nullptr) {
    throw InvalidConfiguration("null network");
  }
  if (theAlpha < 0 or theAlpha > 1) {
    throw InvalidConfiguration("alpha must be in [0,1]: " + toString(theAlpha));
  }
  if (theBeta <= 0 or theBeta >= 1) {
    throw InvalidConfiguration("beta must be in (0,1): " + toString(theBeta));
  }
  std::sort(theApps.begin(), theApps.end(), [](const auto& lhs, const auto& rhs) {
    return lhs.theId < rhs.theId;
  });
  Rational myMaxRate(0);
  for (std::size_t k = 0; k < theApps.size(); k++) {
    if (k > 0 and theApps[k - 1].theId == theApps[k].theId) {
      throw InvalidConfiguration("duplicate app id " +
                                 std::to_string(theApps[k].theId));
    }
    if (theApps[k].theMode == Mode::Lambda) {
      if (theApps[k].theRequestRate <= 0) {
        throw InvalidConfiguration("non-positive request rate for app " +
                                   std::to_string(theApps[k].theId));
      }
      myMaxRate = std::max(myMaxRate, theApps[k].theRequestRate);
    }
  }

  // s_0 = max r_k / beta > max r_k, and beta s_0 (N_0 - m_0) >= sum r_k
  // because N_0 - m_0 is at least the number of lambda-apps
  theNodes.emplace_back(ComputeNode{
      CLOUD, theApps.size(), (myMaxRate > 0 ? myMaxRate : Rational(1)) / theBeta});
  const auto& myEdges = theNetwork->edges();
  theNodes.insert(theNodes.end(), myEdges.begin(), myEdges.end());
}

std::size_t AllocationInstance::muCapacity(const std::size_t aNode) const {
  const auto& myNode = theNodes.at(aNode);
  if (aNode == 0) {
    return myNode.theContainers;
  }
  return static_cast<std::size_t>(
      floorOf(theAlpha * static_cast<std::int64_t>(myNode.theContainers)));
}

const App& AllocationInstance::app(const AppId aId) const {
  const auto it = std::lower_bound(
      theApps.begin(), theApps.end(), aId, [](const App& aApp, AppId aValue) {
        return aApp.theId < aValue;
      });
  if (it == theApps.end() or it->theId != aId) {
    throw LookupError("unknown app " + std::to_string(aId));
  }
  return *it;
}

std::size_t MuAssignment::occupancy(const NodeId aNode) const {
  return static_cast<std::size_t>(
      std::count_if(theNodes.begin(), theNodes.end(), [aNode](const auto& elem) {
        return elem.second == aNode;
      }));
}

LambdaWeights LambdaWeights::zero(const CostMatrix& aCost) {
  LambdaWeights ret;
  ret.theBrokers = aCost.brokers();
  ret.theNodes   = aCost.nodes();
  ret.theWeights.assign(ret.theBrokers.size() * ret.theNodes.size(), Rational(0));
  ret.theBrokerRates.assign(ret.theBrokers.size(), Rational(0));
  return ret;
}

////////////////////////////////////////////////////////////////////////////////
// rates

Rational brokerRequestRate(const AllocationInstance& aInstance,
                           const NodeId              aBroker) {
  aInstance.cost().brokerIndex(aBroker); // throws if unknown
  Rational ret(0);
  for (const auto& myApp : aInstance.apps()) {
    if (myApp.theMode == Mode::Lambda and myApp.theBroker == aBroker) {
      ret += myApp.theRequestRate;
    }
  }
  return ret;
}

namespace {

std::vector<std::size_t> occupancyPerColumn(const AllocationInstance& aInstance,
                                            const MuAssignment&       aMu) {
  std::vector<std::size_t> ret(aInstance.nodes().size(), 0);
  for (const auto& [myApp, myNode] : aMu.theNodes) {
    ret[aInstance.cost().nodeIndex(myNode)]++;
  }
  return ret;
}

Rational availableServiceRate(const AllocationInstance& aInstance,
                              const std::size_t         aColumn,
                              const std::size_t         aOccupancy) {
  const auto& myNode = aInstance.nodes()[aColumn];
  if (aOccupancy > myNode.theContainers) {
    throw InconsistencyError(std::to_string(aOccupancy) +
                             " mu-apps on node " + std::to_string(myNode.theId) +
                             " with " + std::to_string(myNode.theContainers) +
                             " containers");
  }
  return myNode.theServiceRate *
         static_cast<std::int64_t>(myNode.theContainers - aOccupancy);
}

std::vector<Rational> brokerRates(const AllocationInstance& aInstance) {
  const auto&           myCost = aInstance.cost();
  std::vector<Rational> ret(myCost.brokers().size(), Rational(0));
  for (const auto& myApp : aInstance.apps()) {
    if (myApp.theMode == Mode::Lambda) {
      ret[myCost.brokerIndex(myApp.theBroker)] += myApp.theRequestRate;
    }
  }
  return ret;
}

} // namespace

Rational availableServiceRate(const AllocationInstance& aInstance,
                              const NodeId              aNode,
                              const MuAssignment&       aMu) {
  const auto myColumn = aInstance.cost().nodeIndex(aNode);
  return availableServiceRate(aInstance, myColumn, aMu.occupancy(aNode));
}

////////////////////////////////////////////////////////////////////////////////
// mu-apps

MuSolution solveMuAssignment(const AllocationInstance& aInstance) {
  const auto& myCost = aInstance.cost();
  const auto  J      = myCost.nodes().size();

  std::vector<const App*> myMuApps;
  for (const auto& myApp : aInstance.apps()) {
    if (myApp.theMode == Mode::Mu) {
      myMuApps.emplace_back(&myApp);
    }
  }
  MuSolution ret;
  if (myMuApps.empty()) {
    return ret;
  }
  const auto n = myMuApps.size();

  // slot expansion, slots of the same node are contiguous
  std::vector<std::size_t> mySlots;
  for (std::size_t j = 0; j < J; j++) {
    const auto myCapacity = j == 0 ? n : aInstance.muCapacity(j);
    mySlots.insert(mySlots.end(), myCapacity, j);
  }

  std::vector<std::size_t> myBrokers;
  for (const auto myApp : myMuApps) {
    myBrokers.emplace_back(myCost.brokerIndex(myApp->theBroker));
  }
  std::vector<Rational> myAllCosts;
  for (std::size_t i = 0; i < myCost.brokers().size(); i++) {
    for (std::size_t j = 0; j < J; j++) {
      myAllCosts.emplace_back(myCost(i, j));
    }
  }
  const auto myScale = commonDenominator(myAllCosts);

  // lexicographic objective: (path cost, sum (n - row) * column)
  const auto myTieSpan = checkedAdd(
      checkedMul(checkedMul(static_cast<std::int64_t>(n), static_cast<std::int64_t>(n)),
                 static_cast<std::int64_t>(J)),
      1);
  std::vector<std::int64_t> myMatrix;
  myMatrix.reserve(n * mySlots.size());
  for (std::size_t a = 0; a < n; a++) {
    for (const auto j : mySlots) {
      const auto myPath = scaleToInteger(myCost(myBrokers[a], j), myScale);
      myMatrix.emplace_back(checkedAdd(
          checkedMul(myPath, myTieSpan),
          static_cast<std::int64_t>((n - a) * j)));
    }
  }
  // the optimum must fit in an int64
  checkedMul(myMatrix.empty() ? 0 : *std::max_element(myMatrix.begin(), myMatrix.end()),
             static_cast<std::int64_t>(n));

  const auto myColumns = solveAssignment(myMatrix, n, mySlots.size());
  for (std::size_t a = 0; a < n; a++) {
    const auto j = mySlots[myColumns[a]];
    ret.theAssignment.theNodes.emplace(myMuApps[a]->theId, myCost.nodes()[j]);
    ret.theCost += myCost(myBrokers[a], j);
  }
  return ret;
}

////////////////////////////////////////////////////////////////////////////////
// lambda-apps

LambdaSolution solveLambdaTransportation(const AllocationInstance& aInstance,
                                         const MuAssignment&       aMu) {
  const auto& myCost = aInstance.cost();
  const auto  B      = myCost.brokers().size();
  const auto  J      = myCost.nodes().size();

  for (const auto& [myApp, myNode] : aMu.theNodes) {
    if (aInstance.app(myApp).theMode != Mode::Mu) {
      throw InconsistencyError("lambda-app " + std::to_string(myApp) +
                               " has a mu-container");
    }
  }
  const auto myOccupancy = occupancyPerColumn(aInstance, aMu);

  LambdaSolution ret;
  ret.theWeights                = LambdaWeights::zero(myCost);
  ret.theWeights.theBrokerRates = brokerRates(aInstance);
  const auto& myRates           = ret.theWeights.theBrokerRates;

  std::vector<Rational> myCapacities;
  for (std::size_t j = 0; j < J; j++) {
    myCapacities.emplace_back(aInstance.beta() *
                              availableServiceRate(aInstance, j, myOccupancy[j]));
  }

  Rational myDemand(0);
  for (const auto& r : myRates) {
    myDemand += r;
  }
  if (myDemand == Rational(0)) {
    return ret;
  }

  std::vector<Rational> myAmounts(myRates);
  myAmounts.insert(myAmounts.end(), myCapacities.begin(), myCapacities.end());
  const auto myFlowScale = commonDenominator(myAmounts);

  std::vector<Rational> myAllCosts;
  for (std::size_t i = 0; i < B; i++) {
    for (std::size_t j = 0; j < J; j++) {
      myAllCosts.emplace_back(myCost(i, j));
    }
  }
  const auto myCostScale = commonDenominator(myAllCosts);
  const auto myTotal     = scaleToInteger(myDemand, myFlowScale);
  // lexicographic objective: (path cost, sum flow * column)
  const auto myTieSpan =
      checkedAdd(checkedMul(myTotal, static_cast<std::int64_t>(J)), 1);

  // 0 = source, 1..B brokers, B+1..B+J nodes, B+J+1 sink
  const auto  mySource = std::size_t{0};
  const auto  mySink   = B + J + 1;
  MinCostFlow myFlow(B + J + 2);
  std::vector<std::size_t> myHandles(B * J, 0);
  std::int64_t             myMaxArcCost = 0;
  for (std::size_t i = 0; i < B; i++) {
    if (myRates[i] == Rational(0)) {
      continue;
    }
    const auto myRate = scaleToInteger(myRates[i], myFlowScale);
    myFlow.addArc(mySource, 1 + i, myRate, 0);
    for (std::size_t j = 0; j < J; j++) {
      const auto myArcCost =
          checkedAdd(checkedMul(scaleToInteger(myCost(i, j), myCostScale), myTieSpan),
                     static_cast<std::int64_t>(j));
      myMaxArcCost       = std::max(myMaxArcCost, myArcCost);
      myHandles[i * J + j] = myFlow.addArc(1 + i, 1 + B + j, myRate, myArcCost);
    }
  }
  for (std::size_t j = 0; j < J; j++) {
    myFlow.addArc(1 + B + j, mySink, floorOf(myCapacities[j] * myFlowScale), 0);
  }
  // potentials stay within (number of vertices) * max arc cost
  checkedMul(checkedMul(myMaxArcCost, static_cast<std::int64_t>(B + J + 2)),
             std::max<std::int64_t>(myTotal, 1));

  const auto myResult = myFlow.solve(mySource, mySink, myTotal);
  if (myResult.theFlow < myTotal) {
    throw InfeasibleError(Rational(myTotal - myResult.theFlow, myFlowScale));
  }

  for (std::size_t i = 0; i < B; i++) {
    if (myRates[i] == Rational(0)) {
      continue;
    }
    const auto myRate = scaleToInteger(myRates[i], myFlowScale);
    for (std::size_t j = 0; j < J; j++) {
      const auto f = myFlow.flow(myHandles[i * J + j]);
      if (f > 0) {
        ret.theWeights(i, j) = Rational(f, myRate);
        ret.theCost += myCost(i, j) * Rational(f, myFlowScale);
      }
    }
  }
  return ret;
}

JointSolution solveJoint(const AllocationInstance& aInstance) {
  auto myMu     = solveMuAssignment(aInstance);
  auto myLambda = solveLambdaTransportation(aInstance, myMu.theAssignment);

  JointSolution ret;
  ret.theAssignment = std::move(myMu.theAssignment);
  ret.theWeights    = std::move(myLambda.theWeights);
  ret.theMuCost     = myMu.theCost;
  ret.theLambdaCost = myLambda.theCost;

  // Omega = 1 + sum_i R_i max c / min c exceeds any lambda cost difference
  const auto& myCost = aInstance.cost();
  Rational    myMin  = myCost(0, 0);
  Rational    myMax  = myCost(0, 0);
  for (std::size_t i = 0; i < myCost.brokers().size(); i++) {
    for (std::size_t j = 0; j < myCost.nodes().size(); j++) {
      myMin = std::min(myMin, myCost(i, j));
      myMax = std::max(myMax, myCost(i, j));
    }
  }
  Rational myDemand(0);
  for (const auto& r : ret.theWeights.theBrokerRates) {
    myDemand += r;
  }
  ret.theOmega     = 1 + myDemand * myMax / myMin;
  ret.theTotalCost = ret.theOmega * ret.theMuCost + ret.theLambdaCost;
  return ret;
}

////////////////////////////////////////////////////////////////////////////////
// verifier

std::vector<Violation> verify(const AllocationInstance& aInstance,
                              const MuAssignment&       aMu,
                              const LambdaWeights&      aWeights) {
  using C = Violation::Constraint;
  std::vector<Violation> ret;
  const auto&            myCost = aInstance.cost();
  const auto             J      = myCost.nodes().size();

  const auto myKnownBroker = [&myCost](NodeId aBroker) {
    return std::binary_search(
        myCost.brokers().begin(), myCost.brokers().end(), aBroker);
  };

  std::vector<Rational> myRates(myCost.brokers().size(), Rational(0));
  for (const auto& myApp : aInstance.apps()) {
    if (not myKnownBroker(myApp.theBroker)) {
      ret.emplace_back(Violation{C::BrokerBinding,
                                 myApp.theId,
                                 "bound to unknown broker " +
                                     std::to_string(myApp.theBroker)});
      continue;
    }
    if (myApp.theMode == Mode::Lambda) {
      myRates[myCost.brokerIndex(myApp.theBroker)] += myApp.theRequestRate;
    }
    const auto it = aMu.theNodes.find(myApp.theId);
    if (myApp.theMode == Mode::Mu and it == aMu.theNodes.end()) {
      ret.emplace_back(Violation{C::MuPlacement, myApp.theId, "no container"});
    }
  }

  std::vector<std::size_t> myOccupancy(J, 0);
  for (const auto& [myAppId, myNode] : aMu.theNodes) {
    const App* myApp = nullptr;
    try {
      myApp = &aInstance.app(myAppId);
    } catch (const LookupError&) {
      ret.emplace_back(Violation{C::MuPlacement, myAppId, "unknown app"});
      continue;
    }
    if (myApp->theMode == Mode::Lambda) {
      ret.emplace_back(Violation{C::LambdaNoContainer,
                                 myAppId,
                                 "lambda-app assigned to node " +
                                     std::to_string(myNode)});
    }
    if (not std::binary_search(myCost.nodes().begin(), myCost.nodes().end(), myNode)) {
      ret.emplace_back(Violation{
          C::MuPlacement, myAppId, "unknown node " + std::to_string(myNode)});
      continue;
    }
    myOccupancy[myCost.nodeIndex(myNode)]++;
  }
  for (std::size_t j = 0; j < J; j++) {
    if (myOccupancy[j] > aInstance.muCapacity(j)) {
      ret.emplace_back(Violation{C::MuCapacity,
                                 myCost.nodes()[j],
                                 std::to_string(myOccupancy[j]) +
                                     " mu-containers, limit " +
                                     std::to_string(aInstance.muCapacity(j))});
    }
  }

  // weights, looked up by id so that a different layout is tolerated
  std::vector<Rational> myLoad(J, Rational(0));
  for (std::size_t i = 0; i < myCost.brokers().size(); i++) {
    const auto myBroker = myCost.brokers()[i];
    const auto myRow    = std::find(
        aWeights.theBrokers.begin(), aWeights.theBrokers.end(), myBroker);
    Rational mySum(0);
    if (myRow != aWeights.theBrokers.end()) {
      const auto r = static_cast<std::size_t>(myRow - aWeights.theBrokers.begin());
      for (std::size_t c = 0; c < aWeights.theNodes.size(); c++) {
        const auto& w = aWeights(r, c);
        if (w < 0) {
          ret.emplace_back(Violation{C::WeightNonNegative,
                                     myBroker,
                                     "negative weight " + toString(w) +
                                         " towards node " +
                                         std::to_string(aWeights.theNodes[c])});
        }
        if (w == Rational(0)) {
          continue;
        }
        const auto myColumn = std::find(
            myCost.nodes().begin(), myCost.nodes().end(), aWeights.theNodes[c]);
        if (myColumn == myCost.nodes().end()) {
          ret.emplace_back(Violation{
              C::WeightNormalization,
              myBroker,
              "weight towards unknown node " + std::to_string(aWeights.theNodes[c])});
          continue;
        }
        mySum += w;
        myLoad[static_cast<std::size_t>(myColumn - myCost.nodes().begin())] +=
            w * myRates[i];
      }
    }
    if (myRates[i] > 0 and mySum != Rational(1)) {
      ret.emplace_back(Violation{
          C::WeightNormalization, myBroker, "weights sum to " + toString(mySum)});
    }
  }
  for (std::size_t j = 0; j < J; j++) {
    const auto& myNode = aInstance.nodes()[j];
    const auto  myFree = myNode.theServiceRate *
                        (static_cast<std::int64_t>(myNode.theContainers) -
                         static_cast<std::int64_t>(myOccupancy[j]));
    if (myLoad[j] > aInstance.beta() * myFree) {
      ret.emplace_back(Violation{C::NodeStability,
                                 myNode.theId,
                                 "load " + toString(myLoad[j]) + " exceeds " +
                                     toString(aInstance.beta() * myFree)});
    }
  }
  return ret;
}

} // namespace lambdamu
