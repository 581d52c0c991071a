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

#include "lambdamu/rational.h"
#include "lambdamu/topology.h"
#include "lambdamu/types.h"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lambdamu {

struct App {
  AppId    theId;
  NodeId   theBroker;
  Mode     theMode;
  Rational theRequestRate{1}; //!< only meaningful for lambda-apps

  bool operator==(const App&) const = default;
};

struct ComputeNode {
  NodeId      theId;
  std::size_t theContainers;
  Rational    theServiceRate;

  bool operator==(const ComputeNode&) const = default;
};

/**
 * What the orchestrator knows about the infrastructure: the path costs and
 * the edge compute nodes, aligned with the cost matrix columns 1, 2, ...
 *
 * Immutable, meant to be shared across instances and replications.
 */
class EdgeNetwork
{
 public:
  EdgeNetwork(CostMatrix aCost, std::vector<ComputeNode> aEdges);

  static std::shared_ptr<const EdgeNetwork> fromTopology(const Topology& aTopology);

  const CostMatrix& cost() const noexcept {
    return theCost;
  }
  //! Edge nodes only, theEdges[j - 1] is column j of the cost matrix.
  const std::vector<ComputeNode>& edges() const noexcept {
    return theEdges;
  }

  bool operator==(const EdgeNetwork&) const = default;

 private:
  CostMatrix               theCost;
  std::vector<ComputeNode> theEdges;
};

/**
 * Snapshot of the apps at a given time plus the network, ie. the input of
 * both allocation sub-problems.
 *
 * The cloud gets as many containers as apps and a service rate large enough
 * to absorb all the lambda traffic with the given beta.
 */
class AllocationInstance
{
 public:
  /**
   * \throw InvalidConfiguration if alpha is not in [0,1], beta not in (0,1),
   *        app ids are not unique or a lambda-app has a non-positive rate.
   *
   * Apps bound to unknown brokers are accepted here and reported by
   * verify(); the solvers reject them.
   */
  AllocationInstance(std::shared_ptr<const EdgeNetwork> aNetwork,
                     std::vector<App>                   aApps,
                     Rational                           aAlpha,
                     Rational                           aBeta);

  const EdgeNetwork& network() const noexcept {
    return *theNetwork;
  }
  const std::shared_ptr<const EdgeNetwork>& networkPtr() const noexcept {
    return theNetwork;
  }
  const CostMatrix& cost() const noexcept {
    return theNetwork->cost();
  }
  //! Apps sorted by id.
  const std::vector<App>& apps() const noexcept {
    return theApps;
  }
  const Rational& alpha() const noexcept {
    return theAlpha;
  }
  const Rational& beta() const noexcept {
    return theBeta;
  }

  //! All compute nodes, cloud first, aligned with the cost matrix columns.
  const std::vector<ComputeNode>& nodes() const noexcept {
    return theNodes;
  }

  //! Max number of mu-containers on column aNode: floor(alpha N) on edge
  //! nodes, N on the cloud.
  std::size_t muCapacity(std::size_t aNode) const;

  //! \throw LookupError
  const App& app(AppId aId) const;

 private:
  std::shared_ptr<const EdgeNetwork> theNetwork;
  std::vector<App>                   theApps;
  Rational                           theAlpha;
  Rational                           theBeta;
  std::vector<ComputeNode>           theNodes;
};

//! Sparse x_kj: compute node of every mu-app.
struct MuAssignment {
  std::map<AppId, NodeId> theNodes;

  //! Number of mu-apps on aNode.
  std::size_t occupancy(NodeId aNode) const;

  bool operator==(const MuAssignment&) const = default;
};

//! Dispatching weights of every broker towards every compute node.
struct LambdaWeights {
  std::vector<NodeId>   theBrokers;
  std::vector<NodeId>   theNodes; //!< cloud first
  std::vector<Rational> theWeights;
  std::vector<Rational> theBrokerRates;

  const Rational& operator()(std::size_t aBroker, std::size_t aNode) const {
    return theWeights[aBroker * theNodes.size() + aNode];
  }
  Rational& operator()(std::size_t aBroker, std::size_t aNode) {
    return theWeights[aBroker * theNodes.size() + aNode];
  }

  //! All-zero weights for the brokers and nodes of aCost.
  static LambdaWeights zero(const CostMatrix& aCost);

  bool operator==(const LambdaWeights&) const = default;
};

struct MuSolution {
  MuAssignment theAssignment;
  Rational     theCost{0};
};

struct LambdaSolution {
  LambdaWeights theWeights;
  Rational      theCost{0};
};

struct JointSolution {
  MuAssignment  theAssignment;
  LambdaWeights theWeights;
  Rational      theMuCost{0};
  Rational      theLambdaCost{0};
  //! Weight of the mu term in the combined objective, for reporting only.
  Rational theOmega{1};
  //! theOmega * theMuCost + theLambdaCost.
  Rational theTotalCost{0};
};

//! The lambda traffic cannot be accommodated.
struct InfeasibleError : public std::runtime_error {
  explicit InfeasibleError(const Rational& aResidual)
      : std::runtime_error("infeasible lambda allocation, residual demand " +
                           toString(aResidual))
      , theResidual(aResidual) {
  }
  Rational theResidual;
};

//! The inputs contradict each other, eg. more mu-apps than containers.
struct InconsistencyError : public std::logic_error {
  explicit InconsistencyError(const std::string& aWhat)
      : std::logic_error("internal inconsistency: " + aWhat) {
  }
};

struct Violation {
  enum class Constraint {
    BrokerBinding,       //!< each app is bound to exactly one known broker
    MuPlacement,         //!< each mu-app has exactly one container
    LambdaNoContainer,   //!< lambda-apps have no dedicated container
    MuCapacity,          //!< at most floor(alpha N_j) mu-containers per edge node
    WeightNonNegative,   //!< w_ij >= 0
    WeightNormalization, //!< sum_j w_ij = 1 for brokers with traffic
    NodeStability,       //!< sum_i w_ij R_i <= beta S_j
  };

  Constraint   theConstraint;
  std::int64_t theSubject; //!< app, broker or node id depending on the constraint
  std::string  theDetail;
};

std::string toString(Violation::Constraint aConstraint);

//! Total request rate of the lambda-apps bound to aBroker. \throw LookupError
Rational brokerRequestRate(const AllocationInstance& aInstance, NodeId aBroker);

/**
 * Service rate of the containers of aNode not used by mu-apps.
 *
 * \throw LookupError if aNode is unknown.
 * \throw InconsistencyError if aMu puts more mu-apps than containers on aNode.
 */
Rational availableServiceRate(const AllocationInstance& aInstance,
                              NodeId                    aNode,
                              const MuAssignment&       aMu);

/**
 * Place the mu-apps on compute nodes at minimum total path cost.
 *
 * Edge node j offers floor(alpha N_j) identical slots, the cloud one slot per
 * mu-app; the resulting assignment problem is solved exactly with the
 * Hungarian method. Among optima, lower node ids are preferred and go to
 * lower app ids.
 *
 * \throw LookupError if a mu-app is bound to an unknown broker.
 */
MuSolution solveMuAssignment(const AllocationInstance& aInstance);

/**
 * Distribute the lambda traffic of every broker over the compute nodes at
 * minimum cost, with node j accepting at most beta S_j.
 *
 * Rates and capacities are scaled to integers by the least common multiple
 * of their denominators, then the transportation problem is solved as a min
 * cost flow source -> brokers -> nodes -> sink. Weights are exact. Brokers
 * without traffic get an all-zero row.
 *
 * \throw InfeasibleError if the demand does not fit.
 */
LambdaSolution solveLambdaTransportation(const AllocationInstance& aInstance,
                                         const MuAssignment&       aMu);

//! Mu-apps first, then lambda-apps on the remaining capacity.
JointSolution solveJoint(const AllocationInstance& aInstance);

//! Empty iff every allocation constraint holds, in exact arithmetic.
std::vector<Violation> verify(const AllocationInstance& aInstance,
                              const MuAssignment&       aMu,
                              const LambdaWeights&      aWeights);

} // namespace lambdamu
