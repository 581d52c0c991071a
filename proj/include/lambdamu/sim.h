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

#pragma once

#include "lambdamu/allocation.h"
#include "lambdamu/policy.h"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lambdamu {

//! Mean and half-width of the 95% normal-approximation confidence interval.
struct Estimate {
  double      theMean  = 0;
  double      theCi    = 0;
  std::size_t theCount = 0;
};

//! Empty input gives a zero count and NaN mean.
Estimate estimate(const std::vector<double>& aSamples);

//! Number of worker threads: LAMBDAMU_THREADS if set and positive, otherwise
//! the hardware concurrency.
std::size_t workerThreads();

//! Run aTask(0), ..., aTask(aCount - 1) on workerThreads() threads.
void parallelFor(std::size_t aCount, const std::function<void(std::size_t)>& aTask);

////////////////////////////////////////////////////////////////////////////////
// snapshot

struct SnapshotConfig {
  std::shared_ptr<const EdgeNetwork> theNetwork;
  double                             theMeanLambdaApps = 20;
  double                             theMeanMuApps     = 20;
  Rational                           theAlpha{1, 2};
  Rational                           theBeta{1, 2};
  std::size_t                        theReplications = 100;
  std::uint64_t                      theSeed         = 1;
};

struct SnapshotReplication {
  std::size_t           theLambdaApps = 0;
  std::size_t           theMuApps     = 0;
  std::optional<double> theLambdaCost;      //!< unitary, if there are lambda-apps
  std::optional<double> theMuCost;          //!< unitary, if there are mu-apps
  std::optional<double> theMuCloudFraction; //!< if there are mu-apps
  std::string           theError;           //!< solver failure, if any
};

struct SnapshotMetrics {
  std::vector<SnapshotReplication> theReplications;
  Estimate                         theLambdaCost;
  Estimate                         theMuCost;
  Estimate                         theMuCloudFraction;
  std::size_t                      theFailures = 0;
};

/**
 * Independent replications: Poisson numbers of lambda- and mu-apps bound to
 * uniformly random brokers, solved once.
 *
 * Replication k draws from a stream that depends only on (seed, k), so
 * configurations differing in alpha or beta see the same populations.
 *
 * \throw InvalidConfiguration if replications is zero or the network has no
 *        brokers.
 */
SnapshotMetrics runSnapshot(const SnapshotConfig& aConfig);

////////////////////////////////////////////////////////////////////////////////
// dynamic

enum class EventType {
  LambdaActivate,
  MuActivate,
  LambdaDeactivate,
  MuDeactivate,
  MuToLambda,
  LambdaToMu,
};

std::string toString(EventType aType);

struct SimEvent {
  EventType theType;
  AppId     theApp;
  NodeId    theBroker; //!< activations only
};

//! Event inconsistent with the state of the app, eg. double activation.
struct StateError : public std::logic_error {
  explicit StateError(const std::string& aWhat)
      : std::logic_error(aWhat) {
  }
};

/**
 * Orchestrator state between epochs.
 *
 * A lambda-app is optimized if it was active as lambda at the last epoch and
 * has not changed since: its invocations follow the weights of its broker,
 * otherwise they go to the cloud.
 */
class SimState
{
 public:
  struct AppState {
    NodeId theBroker;
    Mode   theMode;
    NodeId theNode      = CLOUD; //!< mu-apps only
    bool   theOptimized = false; //!< lambda-apps only
  };

  //! \throw InvalidConfiguration on invalid alpha or beta.
  SimState(std::shared_ptr<const EdgeNetwork> aNetwork, Rational aAlpha, Rational aBeta);

  /**
   * Best-effort handling between epochs:
   * - a new lambda-app is served by the cloud until the next epoch;
   * - a new mu-app gets a container on the cheapest edge node with room
   *   within floor(alpha N), lower id on ties, otherwise in the cloud;
   * - a lambda-app leaving changes nothing else;
   * - a mu-app leaving frees its container;
   * - switching mode is leaving the old mode and entering the new one.
   *
   * \throw LookupError if the app is unknown (except for activations).
   * \throw StateError if the app is already active or in the other mode.
   */
  void handleEvent(const SimEvent& aEvent);

  /**
   * Full re-optimization of the active apps.
   *
   * \return the number of mu-apps whose node changed.
   * \throw InconsistencyError if the new allocation violates a constraint.
   */
  std::size_t optimize();

  const std::map<AppId, AppState>& apps() const noexcept {
    return theApps;
  }
  const MuAssignment& assignment() const noexcept {
    return theAssignment;
  }
  const LambdaWeights& weights() const noexcept {
    return theWeights;
  }
  const EdgeNetwork& network() const noexcept {
    return *theNetwork;
  }

  //! Cost per unit of request rate of the lambda-app aApp right now.
  double lambdaCost(AppId aApp) const;
  //! Path cost to the container of the mu-app aApp.
  double muCost(AppId aApp) const;

  //! Current instance seen by the orchestrator.
  AllocationInstance instance() const;

 private:
  void place(AppId aApp, AppState& aState);
  void release(AppState& aState);

  std::shared_ptr<const EdgeNetwork> theNetwork;
  Rational                           theAlpha;
  Rational                           theBeta;
  std::map<AppId, AppState>          theApps;
  MuAssignment                       theAssignment;
  LambdaWeights                      theWeights;
  std::vector<std::size_t>           theOccupancy;  //!< per cost matrix column
  std::vector<double>                theBrokerCost; //!< sum_j w_ij c_ij
};

//! Apps present in both assignments whose node differs.
std::size_t countMigrations(const MuAssignment& aPrev, const MuAssignment& aNext);

enum class PatternSource { Optimal, Heuristic };

struct DynamicConfig {
  std::shared_ptr<const EdgeNetwork> theNetwork;
  double                             theMeanApps = 20;
  TimeMs                             theEpoch    = 60'000;
  TimeMs                             theSimTime  = 3'600'000;
  std::vector<AppTrace>              theTraces;
  PolicyParams                       thePolicy;
  std::size_t                        theLookahead = 50;
  PatternSource                      thePattern   = PatternSource::Optimal;
  Rational                           theAlpha{1, 2};
  Rational                           theBeta{1, 2};
  std::size_t                        theReplications = 10;
  std::uint64_t                      theSeed         = 1;
};

//! Time averages over one epoch, costs are unitary.
struct EpochRow {
  std::size_t           theReplication = 0;
  std::size_t           theEpoch       = 0;
  TimeMs                theStart       = 0;
  TimeMs                theEnd         = 0;
  bool                  theWarmup      = false;
  std::size_t           theMigrations  = 0; //!< at the optimization opening the epoch
  double                theLambdaApps  = 0; //!< average number
  double                theMuApps      = 0; //!< average number
  std::optional<double> theLambdaCost;
  std::optional<double> theMuCost;
  std::optional<double> theMuCloudFraction;
};

struct DynamicMetrics {
  std::vector<EpochRow> theEpochs;
  Estimate              theLambdaCost;
  Estimate              theMuCost;
  Estimate              theMuCloudFraction;
  Estimate              theMigrationsPerHour;
  std::size_t           theFailures = 0;
};

/**
 * Per replication: a Poisson number of apps, each with a random broker and a
 * random trace rotated by a random offset over [0, sim time). Each app
 * follows the mode pattern of its trace from time zero, with mode changes
 * handled best-effort, and a full optimization runs at the start of every
 * epoch. Samples of the first epoch are discarded.
 *
 * Replication k draws from a stream that depends only on (seed, k).
 *
 * \throw InvalidConfiguration if there are no traces, no brokers, zero
 *        replications or a non-positive epoch or sim time.
 */
DynamicMetrics runDynamic(const DynamicConfig& aConfig);

} // namespace lambdamu
