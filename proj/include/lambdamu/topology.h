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
#include "lambdamu/types.h"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lambdamu {

enum class NodeKind {
  Broker,
  FarEdge,
  NearEdge,
  Device, //!< pass-through network device, no compute
  Cloud,
};

std::string toString(NodeKind aKind);

struct Node {
  NodeId      theId;
  NodeKind    theKind;
  std::size_t theContainers = 0;
  Rational    theServiceRate{0};

  bool isEdge() const noexcept {
    return theKind == NodeKind::FarEdge or theKind == NodeKind::NearEdge;
  }

  bool operator==(const Node&) const = default;
};

//! Containers and per-container service rate of an edge node class.
struct NodeCaps {
  std::size_t theContainers;
  Rational    theServiceRate;
};

/**
 * Undirected graph of brokers, edge nodes and network devices.
 *
 * The cloud node is never part of the graph: it is implicit and reached at a
 * cost derived from the edge distances, see computeCostMatrix().
 *
 * Nodes are kept sorted by id and links are normalized (smaller id first) and
 * sorted, so that two topologies with the same content compare equal.
 */
class Topology
{
 public:
  using Link = std::pair<NodeId, NodeId>;

  /**
   * \throw InvalidConfiguration on duplicate or non-positive ids, brokers or
   *        devices with compute resources, self-loops, or links with
   *        unknown endpoints.
   */
  Topology(std::vector<Node> aNodes, std::vector<Link> aLinks);

  const std::vector<Node>& nodes() const noexcept {
    return theNodes;
  }
  const std::vector<Link>& links() const noexcept {
    return theLinks;
  }

  std::vector<NodeId> brokers() const;
  //! Far and near edge nodes, sorted by id.
  std::vector<NodeId> edgeNodes() const;
  std::vector<NodeId> devices() const;

  //! \throw LookupError if there is no such node.
  const Node& node(NodeId aId) const;

  //! Index of aId in nodes(), or nodes().size() if absent.
  std::size_t index(NodeId aId) const noexcept;

  bool operator==(const Topology&) const = default;

 private:
  std::vector<Node> theNodes;
  std::vector<Link> theLinks;
};

/**
 * Path cost from every broker to every compute node, including the cloud.
 *
 * Column 0 is always the cloud, the other columns follow the edge node ids
 * in increasing order.
 */
class CostMatrix
{
 public:
  CostMatrix(std::vector<NodeId>   aBrokers,
             std::vector<NodeId>   aNodes,
             std::vector<Rational> aCosts);

  const std::vector<NodeId>& brokers() const noexcept {
    return theBrokers;
  }
  //! Compute node ids, cloud first.
  const std::vector<NodeId>& nodes() const noexcept {
    return theNodes;
  }

  const Rational& operator()(std::size_t aBroker, std::size_t aNode) const {
    return theCosts[aBroker * theNodes.size() + aNode];
  }

  //! Cost by broker and node id. \throw LookupError
  const Rational& cost(NodeId aBroker, NodeId aNode) const;

  //! \throw LookupError
  std::size_t brokerIndex(NodeId aBroker) const;
  //! \throw LookupError
  std::size_t nodeIndex(NodeId aNode) const;

  bool operator==(const CostMatrix&) const = default;

 private:
  std::vector<NodeId>   theBrokers;
  std::vector<NodeId>   theNodes;
  std::vector<Rational> theCosts;
};

//! Some (broker, edge node) pairs are not connected.
struct ConnectivityError : public std::runtime_error {
  explicit ConnectivityError(std::vector<std::pair<NodeId, NodeId>> aPairs);
  std::vector<std::pair<NodeId, NodeId>> theUnreachable;
};

/**
 * Random hierarchical topology.
 *
 * Near-edge nodes hang off a core of network devices connected in a ring;
 * every far-edge node reaches a random near-edge node through an aggregation
 * device; every broker reaches a random far-edge node through one or two
 * access devices. Deterministic for a given seed.
 *
 * Ids: brokers first, then far-edge, near-edge and finally devices, starting
 * from 1.
 *
 * \throw InvalidConfiguration if any count is zero.
 */
Topology generateTopology(std::uint64_t   aSeed,
                          std::size_t     aBrokers,
                          std::size_t     aFarEdges,
                          std::size_t     aNearEdges,
                          const NodeCaps& aFarCaps,
                          const NodeCaps& aNearCaps);

//! Parse the "topology v1" text format. \throw ParseError
Topology loadTopology(std::istream& aStream);
void     saveTopology(const Topology& aTopology, std::ostream& aStream);

/**
 * Hop count from every broker to every edge node, with devices counting as
 * regular hops; the cloud costs twice the maximum over all pairs.
 *
 * \throw ConnectivityError listing all the unreachable (broker, node) pairs.
 * \throw InvalidConfiguration if there are no brokers or no edge nodes.
 */
CostMatrix computeCostMatrix(const Topology& aTopology);

std::string toString(const CostMatrix& aMatrix);

} // namespace lambdamu
