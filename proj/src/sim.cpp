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

#include "lambdamu/sim.h"

#include "lambdamu/random.h"
#include "lambdamu/trace.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace lambdamu {

Estimate estimate(const std::vector<double>& aSamples) {
  Estimate ret;
  ret.theCount = aSamples.size();
  if (aSamples.empty()) {
    ret.theMean = std::numeric_limits<double>::quiet_NaN();
    return ret;
  }
  double mySum = 0;
  for (const auto x : aSamples) {
    mySum += x;
  }
  ret.theMean = mySum / aSamples.size();
  if (aSamples.size() > 1) {
    double mySq = 0;
    for (const auto x : aSamples) {
      mySq += (x - ret.theMean) * (x - ret.theMean);
    }
    ret.theCi = 1.96 * std::sqrt(mySq / (aSamples.size() - 1)) /
                std::sqrt(static_cast<double>(aSamples.size()));
  }
  return ret;
}

std::size_t workerThreads() {
  if (const auto myEnv = std::getenv("LAMBDAMU_THREADS"); myEnv != nullptr) {
    try {
      const auto ret = std::stoll(myEnv);
      if (ret > 0) {
        return static_cast<std::size_t>(ret);
      }
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallelFor(const std::size_t aCount, const std::function<void(std::size_t)>& aTask) {
  const auto myThreads = std::min(workerThreads(), aCount);
  if (myThreads <= 1) {
    for (std::size_t i = 0; i < aCount; i++) {
      aTask(i);
    }
    return;
  }
  std::atomic<std::size_t> myNext{0};
  std::exception_ptr       myError;
  std::mutex               myMutex;
  std::vector<std::thread> myWorkers;
  for (std::size_t t = 0; t < myThreads; t++) {
    myWorkers.emplace_back([&]() {
      for (auto i = myNext++; i < aCount; i = myNext++) {
        try {
          aTask(i);
        } catch (...) {
          const std::lock_guard<std::mutex> myLock(myMutex);
          if (not myError) {
            myError = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& myWorker : myWorkers) {
    myWorker.join();
  }
  if (myError) {
    std::rethrow_exception(myError);
  }
}

////////////////////////////////////////////////////////////////////////////////
// snapshot

namespace {

void checkNetwork(const std::shared_ptr<const EdgeNetwork>& aNetwork,
                  const std::size_t                         aReplications) {
  if (aNetwork == nullptr or aNetwork->cost().brokers().empty()) {
    throw InvalidConfiguration("the network has no brokers");
  }
  if (aReplications == 0) {
    throw InvalidConfiguration("at least one replication is needed");
  }
}

SnapshotReplication snapshotReplication(const SnapshotConfig& aConfig,
                                        const std::size_t     aReplication) {
  SnapshotReplication ret;
  std::mt19937_64     myRng(deriveSeed(aConfig.theSeed, aReplication));
  const auto&         myBrokers = aConfig.theNetwork->cost().brokers();
  ret.theLambdaApps = poisson(myRng, aConfig.theMeanLambdaApps);
  ret.theMuApps     = poisson(myRng, aConfig.theMeanMuApps);
  std::vector<App> myApps;
  for (std::size_t k = 0; k < ret.theLambdaApps + ret.theMuApps; k++) {
    myApps.emplace_back(App{static_cast<AppId>(k + 1),
                            myBrokers[uniformIndex(myRng, myBrokers.size())],
                            k < ret.theLambdaApps ? Mode::Lambda : Mode::Mu});
  }
  try {
    const AllocationInstance myInstance(
        aConfig.theNetwork, std::move(myApps), aConfig.theAlpha, aConfig.theBeta);
    const auto mySolution = solveJoint(myInstance);
    if (not verify(myInstance, mySolution.theAssignment, mySolution.theWeights).empty()) {
      throw InconsistencyError("solution violates the allocation constraints");
    }
    if (ret.theLambdaApps > 0) {
      ret.theLambdaCost = toDouble(mySolution.theLambdaCost) / ret.theLambdaApps;
    }
    if (ret.theMuApps > 0) {
      double      myCost  = 0;
      std::size_t myCloud = 0;
      for (const auto& [myApp, myNode] : mySolution.theAssignment.theNodes) {
        myCost += toDouble(myInstance.cost().cost(myInstance.app(myApp).theBroker, myNode));
        myCloud += myNode == CLOUD ? 1 : 0;
      }
      ret.theMuCost          = myCost / ret.theMuApps;
      ret.theMuCloudFraction = static_cast<double>(myCloud) / ret.theMuApps;
    }
  } catch (const std::exception& aErr) {
    ret.theError = aErr.what();
  }
  return ret;
}

} // namespace

SnapshotMetrics runSnapshot(const SnapshotConfig& aConfig) {
  checkNetwork(aConfig.theNetwork, aConfig.theReplications);
  SnapshotMetrics ret;
  ret.theReplications.resize(aConfig.theReplications);
  parallelFor(aConfig.theReplications, [&](const std::size_t k) {
    ret.theReplications[k] = snapshotReplication(aConfig, k);
  });
  std::vector<double> myLambda, myMu, myCloud;
  for (const auto& r : ret.theReplications) {
    if (not r.theError.empty()) {
      ret.theFailures++;
      continue;
    }
    if (r.theLambdaCost) {
      myLambda.emplace_back(*r.theLambdaCost);
    }
    if (r.theMuCost) {
      myMu.emplace_back(*r.theMuCost);
      myCloud.emplace_back(*r.theMuCloudFraction);
    }
  }
  ret.theLambdaCost      = estimate(myLambda);
  ret.theMuCost          = estimate(myMu);
  ret.theMuCloudFraction = estimate(myCloud);
  return ret;
}

////////////////////////////////////////////////////////////////////////////////
// state

std::string toString(const EventType aType) {
  switch (aType) {
    case EventType::LambdaActivate:
      return "lambda-activate";
    case EventType::MuActivate:
      return "mu-activate";
    case EventType::LambdaDeactivate:
      return "lambda-deactivate";
    case EventType::MuDeactivate:
      return "mu-deactivate";
    case EventType::MuToLambda:
      return "mu-to-lambda";
    case EventType::LambdaToMu:
      return "lambda-to-mu";
  }
  throw std::logic_error("unknown event type");
}

SimState::SimState(std::shared_ptr<const EdgeNetwork> aNetwork,
                   Rational                           aAlpha,
                   Rational                           aBeta)
    : theNetwork(std::move(aNetwork))
    , theAlpha(aAlpha)
    , theBeta(aBeta)
    , theWeights(LambdaWeights::zero(theNetwork->cost()))
    , theOccupancy(theNetwork->cost().nodes().size(), 0)
    , theBrokerCost(theNetwork->cost().brokers().size(), 0) {
  // validates alpha and beta
  instance();
}

AllocationInstance SimState::instance() const {
  std::vector<App> myApps;
  for (const auto& [myId, myState] : theApps) {
    myApps.emplace_back(App{myId, myState.theBroker, myState.theMode});
  }
  return AllocationInstance(theNetwork, std::move(myApps), theAlpha, theBeta);
}

void SimState::place(const AppId aApp, AppState& aState) {
  const auto& myCost   = theNetwork->cost();
  const auto  myBroker = myCost.brokerIndex(aState.theBroker);
  std::size_t myBest   = 0;
  for (std::size_t j = 1; j < myCost.nodes().size(); j++) {
    const auto myCapacity =
        floorOf(theAlpha * static_cast<std::int64_t>(theNetwork->edges()[j - 1].theContainers));
    if (static_cast<std::int64_t>(theOccupancy[j]) < myCapacity and
        (myBest == 0 or myCost(myBroker, j) < myCost(myBroker, myBest))) {
      myBest = j;
    }
  }
  theOccupancy[myBest]++;
  aState.theNode            = myCost.nodes()[myBest];
  theAssignment.theNodes[aApp] = aState.theNode;
}

void SimState::release(AppState& aState) {
  theOccupancy[theNetwork->cost().nodeIndex(aState.theNode)]--;
}

void SimState::handleEvent(const SimEvent& aEvent) {
  const auto myId = std::to_string(aEvent.theApp);
  if (aEvent.theType == EventType::LambdaActivate or
      aEvent.theType == EventType::MuActivate) {
    if (theApps.count(aEvent.theApp) > 0) {
      throw StateError("app " + myId + " is already active");
    }
    theNetwork->cost().brokerIndex(aEvent.theBroker);
    const auto myMode =
        aEvent.theType == EventType::MuActivate ? Mode::Mu : Mode::Lambda;
    auto& myState = theApps.emplace(aEvent.theApp, AppState{aEvent.theBroker, myMode})
                        .first->second;
    if (myMode == Mode::Mu) {
      place(aEvent.theApp, myState);
    }
    return;
  }

  const auto it = theApps.find(aEvent.theApp);
  if (it == theApps.end()) {
    throw LookupError("unknown app " + myId);
  }
  auto&      myState    = it->second;
  const auto myExpected = aEvent.theType == EventType::LambdaDeactivate or
                                  aEvent.theType == EventType::LambdaToMu
                              ? Mode::Lambda
                              : Mode::Mu;
  if (myState.theMode != myExpected) {
    throw StateError("app " + myId + " is not in " + toString(myExpected) +
                     " mode for event " + toString(aEvent.theType));
  }
  switch (aEvent.theType) {
    case EventType::LambdaDeactivate:
      theApps.erase(it);
      break;
    case EventType::MuDeactivate:
      release(myState);
      theAssignment.theNodes.erase(aEvent.theApp);
      theApps.erase(it);
      break;
    case EventType::MuToLambda:
      release(myState);
      theAssignment.theNodes.erase(aEvent.theApp);
      myState.theMode      = Mode::Lambda;
      myState.theNode      = CLOUD;
      myState.theOptimized = false;
      break;
    case EventType::LambdaToMu:
      myState.theMode = Mode::Mu;
      place(aEvent.theApp, myState);
      break;
    default:
      throw std::logic_error("unreachable");
  }
}

std::size_t SimState::optimize() {
  const auto myInstance = instance();
  auto       mySolution = solveJoint(myInstance);
  const auto myViolations =
      verify(myInstance, mySolution.theAssignment, mySolution.theWeights);
  if (not myViolations.empty()) {
    throw InconsistencyError("epoch allocation violates " +
                             toString(myViolations.front().theConstraint) + ": " +
                             myViolations.front().theDetail);
  }
  const auto ret = countMigrations(theAssignment, mySolution.theAssignment);

  const auto& myCost = theNetwork->cost();
  theAssignment      = std::move(mySolution.theAssignment);
  theWeights         = std::move(mySolution.theWeights);
  std::fill(theOccupancy.begin(), theOccupancy.end(), 0);
  for (auto& [myApp, myState] : theApps) {
    if (myState.theMode == Mode::Mu) {
      myState.theNode = theAssignment.theNodes.at(myApp);
      theOccupancy[myCost.nodeIndex(myState.theNode)]++;
    } else {
      myState.theOptimized = true;
    }
  }
  for (std::size_t i = 0; i < myCost.brokers().size(); i++) {
    Rational myAverage(0);
    for (std::size_t j = 0; j < myCost.nodes().size(); j++) {
      myAverage += theWeights(i, j) * myCost(i, j);
    }
    theBrokerCost[i] = toDouble(myAverage);
  }
  return ret;
}

double SimState::lambdaCost(const AppId aApp) const {
  const auto it = theApps.find(aApp);
  if (it == theApps.end() or it->second.theMode != Mode::Lambda) {
    throw LookupError("no lambda-app " + std::to_string(aApp));
  }
  const auto i = theNetwork->cost().brokerIndex(it->second.theBroker);
  if (it->second.theOptimized and theBrokerCost[i] > 0) {
    return theBrokerCost[i];
  }
  return toDouble(theNetwork->cost()(i, 0));
}

double SimState::muCost(const AppId aApp) const {
  const auto it = theApps.find(aApp);
  if (it == theApps.end() or it->second.theMode != Mode::Mu) {
    throw LookupError("no mu-app " + std::to_string(aApp));
  }
  return toDouble(theNetwork->cost().cost(it->second.theBroker, it->second.theNode));
}

std::size_t countMigrations(const MuAssignment& aPrev, const MuAssignment& aNext) {
  std::size_t ret = 0;
  for (const auto& [myApp, myNode] : aPrev.theNodes) {
    const auto it = aNext.theNodes.find(myApp);
    if (it != aNext.theNodes.end() and it->second != myNode) {
      ret++;
    }
  }
  return ret;
}

////////////////////////////////////////////////////////////////////////////////
// dynamic

namespace {

struct TimedEvent {
  TimeMs   theTime;
  SimEvent theEvent;
};

//! Integrals over time of the quantities sampled per epoch.
struct Accumulator {
  double theLambdaCost = 0;
  double theLambdaTime = 0;
  double theMuCost     = 0;
  double theMuTime     = 0;
  double theCloudTime  = 0;

  void add(const SimState& aState, const double aDuration) {
    if (aDuration <= 0) {
      return;
    }
    for (const auto& [myApp, myState] : aState.apps()) {
      if (myState.theMode == Mode::Lambda) {
        theLambdaCost += aState.lambdaCost(myApp) * aDuration;
        theLambdaTime += aDuration;
      } else {
        theMuCost += aState.muCost(myApp) * aDuration;
        theMuTime += aDuration;
        theCloudTime += myState.theNode == CLOUD ? aDuration : 0;
      }
    }
  }
};

std::vector<TimedEvent> appEvents(const DynamicConfig& aConfig,
                                  const std::size_t    aReplication) {
  std::mt19937_64 myRng(deriveSeed(aConfig.theSeed, aReplication));
  const auto&     myBrokers = aConfig.theNetwork->cost().brokers();
  const auto      myApps    = poisson(myRng, aConfig.theMeanApps);
  std::vector<TimedEvent> ret;
  for (std::size_t k = 0; k < myApps; k++) {
    const AppId myApp    = static_cast<AppId>(k + 1);
    const auto  myBroker = myBrokers[uniformIndex(myRng, myBrokers.size())];
    const auto& myTrace =
        aConfig.theTraces[uniformIndex(myRng, aConfig.theTraces.size())];
    const auto myPeriod = myTrace.thePeriod > 0
                              ? myTrace.thePeriod
                              : (myTrace.theEvents.empty()
                                     ? 1
                                     : myTrace.theEvents.back().theTime -
                                           myTrace.theEvents.front().theTime + 1);
    const auto myWrapped = wrapOffset(
        myTrace,
        static_cast<TimeMs>(uniformIndex(myRng, static_cast<std::uint64_t>(myPeriod))),
        aConfig.theSimTime);

    std::vector<Segment> mySegments{Segment{0, Mode::Lambda, 0}};
    if (not myWrapped.theEvents.empty()) {
      mySegments = aConfig.thePattern == PatternSource::Optimal
                       ? optimalSchedule(myWrapped, aConfig.thePolicy).theSegments
                       : hybridSchedule(myWrapped, aConfig.thePolicy, aConfig.theLookahead)
                             .theSegments;
    }
    ret.emplace_back(TimedEvent{0,
                                {mySegments.front().theMode == Mode::Mu
                                     ? EventType::MuActivate
                                     : EventType::LambdaActivate,
                                 myApp,
                                 myBroker}});
    for (std::size_t s = 1; s < mySegments.size(); s++) {
      ret.emplace_back(TimedEvent{mySegments[s].theStart,
                                  {mySegments[s].theMode == Mode::Mu
                                       ? EventType::LambdaToMu
                                       : EventType::MuToLambda,
                                   myApp,
                                   myBroker}});
    }
  }
  std::stable_sort(ret.begin(), ret.end(), [](const auto& lhs, const auto& rhs) {
    return lhs.theTime < rhs.theTime;
  });
  return ret;
}

std::vector<EpochRow> dynamicReplication(const DynamicConfig& aConfig,
                                         const std::size_t    aReplication) {
  const auto myEvents = appEvents(aConfig, aReplication);
  SimState   myState(aConfig.theNetwork, aConfig.theAlpha, aConfig.theBeta);

  std::vector<EpochRow> ret;
  Accumulator           myAcc;
  TimeMs                myNow  = 0;
  std::size_t           myNext = 0;
  const auto            myClose = [&]() {
    auto& myRow = ret.back();
    myRow.theEnd = std::min(myRow.theStart + aConfig.theEpoch, aConfig.theSimTime);
    const double myDuration = static_cast<double>(myRow.theEnd - myRow.theStart);
    myRow.theLambdaApps     = myAcc.theLambdaTime / myDuration;
    myRow.theMuApps         = myAcc.theMuTime / myDuration;
    if (myAcc.theLambdaTime > 0) {
      myRow.theLambdaCost = myAcc.theLambdaCost / myAcc.theLambdaTime;
    }
    if (myAcc.theMuTime > 0) {
      myRow.theMuCost          = myAcc.theMuCost / myAcc.theMuTime;
      myRow.theMuCloudFraction = myAcc.theCloudTime / myAcc.theMuTime;
    }
    myAcc = Accumulator();
  };

  for (TimeMs myTick = 0; myTick < aConfig.theSimTime; myTick += aConfig.theEpoch) {
    // mode changes at the tick instant are seen by the optimization
    for (; myNext < myEvents.size() and myEvents[myNext].theTime <= myTick; myNext++) {
      myAcc.add(myState, static_cast<double>(myEvents[myNext].theTime - myNow));
      myNow = myEvents[myNext].theTime;
      myState.handleEvent(myEvents[myNext].theEvent);
    }
    myAcc.add(myState, static_cast<double>(myTick - myNow));
    myNow = myTick;
    if (not ret.empty()) {
      myClose();
    }
    EpochRow myRow;
    myRow.theReplication = aReplication;
    myRow.theEpoch       = ret.size();
    myRow.theStart       = myTick;
    myRow.theWarmup      = ret.empty();
    myRow.theMigrations  = myState.optimize();
    ret.emplace_back(myRow);
  }
  for (; myNext < myEvents.size() and myEvents[myNext].theTime < aConfig.theSimTime;
       myNext++) {
    myAcc.add(myState, static_cast<double>(myEvents[myNext].theTime - myNow));
    myNow = myEvents[myNext].theTime;
    myState.handleEvent(myEvents[myNext].theEvent);
  }
  myAcc.add(myState, static_cast<double>(aConfig.theSimTime - myNow));
  myClose();
  return ret;
}

} // namespace

DynamicMetrics runDynamic(const DynamicConfig& aConfig) {
  checkNetwork(aConfig.theNetwork, aConfig.theReplications);
  if (aConfig.theTraces.empty()) {
    throw InvalidConfiguration("no traces");
  }
  if (aConfig.theEpoch <= 0 or aConfig.theSimTime <= 0) {
    throw InvalidConfiguration("epoch and simulation time must be positive");
  }
  std::vector<std::vector<EpochRow>> myRows(aConfig.theReplications);
  std::vector<std::string>           myErrors(aConfig.theReplications);
  parallelFor(aConfig.theReplications, [&](const std::size_t k) {
    try {
      myRows[k] = dynamicReplication(aConfig, k);
    } catch (const InvalidConfiguration&) {
      throw;
    } catch (const std::exception& aErr) {
      myErrors[k] = aErr.what();
    }
  });

  DynamicMetrics      ret;
  std::vector<double> myLambda, myMu, myCloud, myMigrations;
  for (std::size_t k = 0; k < aConfig.theReplications; k++) {
    if (not myErrors[k].empty()) {
      ret.theFailures++;
      continue;
    }
    for (const auto& myRow : myRows[k]) {
      ret.theEpochs.emplace_back(myRow);
      if (myRow.theWarmup) {
        continue;
      }
      if (myRow.theLambdaCost) {
        myLambda.emplace_back(*myRow.theLambdaCost);
      }
      if (myRow.theMuCost) {
        myMu.emplace_back(*myRow.theMuCost);
        myCloud.emplace_back(*myRow.theMuCloudFraction);
      }
      myMigrations.emplace_back(myRow.theMigrations * 3'600'000.0 /
                                static_cast<double>(myRow.theEnd - myRow.theStart));
    }
  }
  ret.theLambdaCost        = estimate(myLambda);
  ret.theMuCost            = estimate(myMu);
  ret.theMuCloudFraction   = estimate(myCloud);
  ret.theMigrationsPerHour = estimate(myMigrations);
  return ret;
}

} // namespace lambdamu
