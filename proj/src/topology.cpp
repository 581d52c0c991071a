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

#include "lambdamu/topology.h"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

namespace lambdamu {

std::string toString(const NodeKind aKind) {
  switch (aKind) {
    case NodeKind::Broker:
      return "broker";
    case NodeKind::FarEdge:
      return "far";
    case NodeKind::NearEdge:
      return "near";
    case NodeKind::Device:
      return "device";
    case NodeKind::Cloud:
      return "cloud";
  }
  throw std::logic_error("unknown node kind");
}

////////////////////////////////////////////////////////////////////////////////
// Topology

Topology::Topology(std::vector<Node> aNodes, std::vector<Link> aLinks)
    : theNodes(std::move(aNodes))
    , theLinks() {
  std::sort(theNodes.begin(), theNodes.end(), [](const auto& lhs, const auto& rhs) {
    return lhs.theId < rhs.theId;
  });
  for (std::size_t i = 0; i < theNodes.size(); i++) {
    const auto& myNode = theNodes[i];
    if (myNode.theId <= 0) {
      throw InvalidConfiguration("node id must be positive: " +
                                 std::to_string(myNode.theId));
    }
    if (i > 0 and theNodes[i - 1].theId == myNode.theId) {
      throw InvalidConfiguration("duplicate node id " +
                                 std::to_string(myNode.theId));
    }
    if (myNode.theKind == NodeKind::Cloud) {
      throw InvalidConfiguration("the cloud node is implicit, found id " +
                                 std::to_string(myNode.theId));
    }
    if (not myNode.isEdge() and
        (myNode.theContainers != 0 or myNode.theServiceRate != Rational(0))) {
      throw InvalidConfiguration("node " + std::to_string(myNode.theId) +
                                 " cannot have compute resources");
    }
    if (myNode.theServiceRate < 0) {
      throw InvalidConfiguration("negative service rate on node " +
                                 std::to_string(myNode.theId));
    }
  }

  std::set<Link> myLinks;
  for (const auto& [u, v] : aLinks) {
    if (u == v) {
      throw InvalidConfiguration("self-loop on node " + std::to_string(u));
    }
    for (const auto myEnd : {u, v}) {
      if (index(myEnd) == theNodes.size()) {
        throw InvalidConfiguration("link endpoint " + std::to_string(myEnd) +
                                   " is not a node");
      }
    }
    myLinks.emplace(std::min(u, v), std::max(u, v));
  }
  theLinks.assign(myLinks.begin(), myLinks.end());
}

std::size_t Topology::index(const NodeId aId) const noexcept {
  const auto it = std::lower_bound(
      theNodes.begin(), theNodes.end(), aId, [](const auto& aNode, NodeId aValue) {
        return aNode.theId < aValue;
      });
  if (it == theNodes.end() or it->theId != aId) {
    return theNodes.size();
  }
  return static_cast<std::size_t>(it - theNodes.begin());
}

const Node& Topology::node(const NodeId aId) const {
  const auto myIndex = index(aId);
  if (myIndex == theNodes.size()) {
    throw LookupError("unknown node " + std::to_string(aId));
  }
  return theNodes[myIndex];
}

std::vector<NodeId> Topology::brokers() const {
  std::vector<NodeId> ret;
  for (const auto& myNode : theNodes) {
    if (myNode.theKind == NodeKind::Broker) {
      ret.emplace_back(myNode.theId);
    }
  }
  return ret;
}

std::vector<NodeId> Topology::edgeNodes() const {
  std::vector<NodeId> ret;
  for (const auto& myNode : theNodes) {
    if (myNode.isEdge()) {
      ret.emplace_back(myNode.theId);
    }
  }
  return ret;
}

std::vector<NodeId> Topology::devices() const {
  std::vector<NodeId> ret;
  for (const auto& myNode : theNodes) {
    if (myNode.theKind == NodeKind::Device) {
      ret.emplace_back(myNode.theId);
    }
  }
  return ret;
}

////////////////////////////////////////////////////////////////////////////////
// CostMatrix

CostMatrix::CostMatrix(std::vector<NodeId>   aBrokers,
                       std::vector<NodeId>   aNodes,
                       std::vector<Rational> aCosts)
    : theBrokers(std::move(aBrokers))
    , theNodes(std::move(aNodes))
    , theCosts(std::move(aCosts)) {
  if (theCosts.size() != theBrokers.size() * theNodes.size()) {
    throw InvalidConfiguration("cost matrix size mismatch");
  }
  if (theNodes.empty() or theNodes[0] != CLOUD) {
    throw InvalidConfiguration("the first cost column must be the cloud");
  }
  if (not std::is_sorted(theBrokers.begin(), theBrokers.end()) or
      not std::is_sorted(theNodes.begin(), theNodes.end())) {
    throw InvalidConfiguration("cost matrix ids must be sorted");
  }
  for (std::size_t i = 0; i < theBrokers.size(); i++) {
    Rational myMaxEdge(0);
    for (std::size_t j = 0; j < theNodes.size(); j++) {
      const auto& c = (*this)(i, j);
      if (c <= 0) {
        throw InvalidConfiguration("non-positive cost from broker " +
                                   std::to_string(theBrokers[i]));
      }
      if (j > 0) {
        myMaxEdge = std::max(myMaxEdge, c);
      }
    }
    if ((*this)(i, 0) <= myMaxEdge) {
      throw InvalidConfiguration(
          "cloud must be more expensive than any edge node from broker " +
          std::to_string(theBrokers[i]));
    }
  }
}

std::size_t CostMatrix::brokerIndex(const NodeId aBroker) const {
  const auto it = std::lower_bound(theBrokers.begin(), theBrokers.end(), aBroker);
  if (it == theBrokers.end() or *it != aBroker) {
    throw LookupError("unknown broker " + std::to_string(aBroker));
  }
  return static_cast<std::size_t>(it - theBrokers.begin());
}

std::size_t CostMatrix::nodeIndex(const NodeId aNode) const {
  const auto it = std::lower_bound(theNodes.begin(), theNodes.end(), aNode);
  if (it == theNodes.end() or *it != aNode) {
    throw LookupError("unknown compute node " + std::to_string(aNode));
  }
  return static_cast<std::size_t>(it - theNodes.begin());
}

const Rational& CostMatrix::cost(const NodeId aBroker, const NodeId aNode) const {
  return (*this)(brokerIndex(aBroker), nodeIndex(aNode));
}

ConnectivityError::ConnectivityError(std::vector<std::pair<NodeId, NodeId>> aPairs)
    : std::runtime_error([&aPairs]() {
      std::string ret = "unreachable (broker, edge node) pairs:";
      for (const auto& [b, e] : aPairs) {
        ret += " (" + std::to_string(b) + "," + std::to_string(e) + ")";
      }
      return ret;
    }())
    , theUnreachable(std::move(aPairs)) {
}

////////////////////////////////////////////////////////////////////////////////
// generator

Topology generateTopology(const std::uint64_t aSeed,
                          const std::size_t   aBrokers,
                          const std::size_t   aFarEdges,
                          const std::size_t   aNearEdges,
                          const NodeCaps&     aFarCaps,
                          const NodeCaps&     aNearCaps) {
  if (aBrokers == 0 or aFarEdges == 0 or aNearEdges == 0) {
    throw InvalidConfiguration(
        "the generator needs at least one broker, far and near edge node");
  }

  std::mt19937_64                 myRng(aSeed);
  const auto                      myPick = [&myRng](std::size_t aSize) {
    return std::uniform_int_distribution<std::size_t>(0, aSize - 1)(myRng);
  };
  std::vector<Node>               myNodes;
  std::vector<Topology::Link>     myLinks;
  NodeId                          myNextId = 1;

  std::vector<NodeId> myBrokers, myFar, myNear;
  for (std::size_t i = 0; i < aBrokers; i++) {
    myBrokers.emplace_back(myNextId);
    myNodes.emplace_back(Node{myNextId++, NodeKind::Broker, 0, 0});
  }
  for (std::size_t i = 0; i < aFarEdges; i++) {
    myFar.emplace_back(myNextId);
    myNodes.emplace_back(Node{myNextId++,
                              NodeKind::FarEdge,
                              aFarCaps.theContainers,
                              aFarCaps.theServiceRate});
  }
  for (std::size_t i = 0; i < aNearEdges; i++) {
    myNear.emplace_back(myNextId);
    myNodes.emplace_back(Node{myNextId++,
                              NodeKind::NearEdge,
                              aNearCaps.theContainers,
                              aNearCaps.theServiceRate});
  }
  const auto myNewDevice = [&]() {
    myNodes.emplace_back(Node{myNextId, NodeKind::Device, 0, 0});
    return myNextId++;
  };

  // core ring, one device per near-edge node
  std::vector<NodeId> myCore;
  for (std::size_t i = 0; i < aNearEdges; i++) {
    myCore.emplace_back(myNewDevice());
    myLinks.emplace_back(myCore.back(), myNear[i]);
  }
  for (std::size_t i = 1; i < myCore.size(); i++) {
    myLinks.emplace_back(myCore[i - 1], myCore[i]);
  }
  if (myCore.size() > 2) {
    myLinks.emplace_back(myCore.back(), myCore.front());
  }

  // aggregation: far-edge nodes hang off a random core device
  std::vector<NodeId> myAggregation;
  for (std::size_t i = 0; i < aFarEdges; i++) {
    myAggregation.emplace_back(myNewDevice());
    myLinks.emplace_back(myAggregation.back(), myCore[myPick(myCore.size())]);
    myLinks.emplace_back(myAggregation.back(), myFar[i]);
  }

  // access: brokers reach an aggregation device via one or two hops
  for (std::size_t i = 0; i < aBrokers; i++) {
    auto myLast = myNewDevice();
    myLinks.emplace_back(myBrokers[i], myLast);
    if (myPick(2) == 1) {
      const auto myNext = myNewDevice();
      myLinks.emplace_back(myLast, myNext);
      myLast = myNext;
    }
    myLinks.emplace_back(myLast, myAggregation[myPick(myAggregation.size())]);
  }

  return Topology(std::move(myNodes), std::move(myLinks));
}

////////////////////////////////////////////////////////////////////////////////
// file format

namespace {

NodeKind kindFromString(const std::string& aText, const std::size_t aLine) {
  if (aText == "broker") {
    return NodeKind::Broker;
  } else if (aText == "far") {
    return NodeKind::FarEdge;
  } else if (aText == "near") {
    return NodeKind::NearEdge;
  } else if (aText == "device") {
    return NodeKind::Device;
  }
  throw ParseError(aLine, "unknown node kind '" + aText + "'");
}

std::vector<std::string> tokenize(const std::string& aLine) {
  std::vector<std::string> ret;
  std::istringstream       myStream(aLine.substr(0, aLine.find('#')));
  std::string              myToken;
  while (myStream >> myToken) {
    ret.emplace_back(myToken);
  }
  return ret;
}

std::int64_t parseId(const std::string& aText, const std::size_t aLine) {
  try {
    std::size_t myUsed = 0;
    const auto  ret    = std::stoll(aText, &myUsed);
    if (myUsed == aText.size()) {
      return ret;
    }
  } catch (const std::exception&) {
  }
  throw ParseError(aLine, "invalid integer '" + aText + "'");
}

} // namespace

Topology loadTopology(std::istream& aStream) {
  std::string                 myLine;
  std::size_t                 myLineNo    = 0;
  bool                        myHeader    = false;
  std::vector<Node>           myNodes;
  std::vector<Topology::Link> myLinks;
  std::vector<std::size_t>    myLinkLines;
  std::map<NodeId, std::size_t> myDeclared;

  while (std::getline(aStream, myLine)) {
    myLineNo++;
    const auto myTokens = tokenize(myLine);
    if (myTokens.empty()) {
      continue;
    }
    if (not myHeader) {
      if (myTokens != std::vector<std::string>{"topology", "v1"}) {
        throw ParseError(myLineNo, "expected header 'topology v1'");
      }
      myHeader = true;
      continue;
    }
    if (myTokens[0] == "node") {
      if (myTokens.size() < 3 or myTokens.size() > 5) {
        throw ParseError(myLineNo,
                         "expected: node <id> <kind> [containers] [rate]");
      }
      Node myNode{parseId(myTokens[1], myLineNo),
                  kindFromString(myTokens[2], myLineNo),
                  0,
                  0};
      if (myNode.theId <= 0) {
        throw ParseError(myLineNo, "node ids must be positive");
      }
      if (myNode.isEdge()) {
        // evaluation defaults: 4 containers at rate 10 far, 8 at 20 near
        const auto myFar     = myNode.theKind == NodeKind::FarEdge;
        myNode.theContainers = myFar ? 4 : 8;
        myNode.theServiceRate = myFar ? 10 : 20;
      }
      if (myTokens.size() >= 4) {
        const auto myContainers = parseId(myTokens[3], myLineNo);
        if (myContainers < 0) {
          throw ParseError(myLineNo, "negative container count");
        }
        myNode.theContainers = static_cast<std::size_t>(myContainers);
      }
      if (myTokens.size() == 5) {
        try {
          myNode.theServiceRate = parseRational(myTokens[4]);
        } catch (const std::invalid_argument& aErr) {
          throw ParseError(myLineNo, aErr.what());
        }
      }
      if (not myNode.isEdge() and
          (myNode.theContainers != 0 or myNode.theServiceRate != Rational(0))) {
        throw ParseError(myLineNo, "only edge nodes have compute resources");
      }
      if (not myDeclared.emplace(myNode.theId, myLineNo).second) {
        throw ParseError(myLineNo,
                         "duplicate node id " + std::to_string(myNode.theId));
      }
      myNodes.emplace_back(myNode);
    } else if (myTokens[0] == "edge") {
      if (myTokens.size() != 3) {
        throw ParseError(myLineNo, "expected: edge <id> <id>");
      }
      myLinks.emplace_back(parseId(myTokens[1], myLineNo),
                           parseId(myTokens[2], myLineNo));
      myLinkLines.emplace_back(myLineNo);
      if (myLinks.back().first == myLinks.back().second) {
        throw ParseError(myLineNo, "self-loop");
      }
    } else {
      throw ParseError(myLineNo, "unknown directive '" + myTokens[0] + "'");
    }
  }
  if (not myHeader) {
    throw ParseError(myLineNo, "missing header 'topology v1'");
  }
  for (std::size_t i = 0; i < myLinks.size(); i++) {
    for (const auto myEnd : {myLinks[i].first, myLinks[i].second}) {
      if (myDeclared.count(myEnd) == 0) {
        throw ParseError(myLinkLines[i],
                         "undeclared node id " + std::to_string(myEnd));
      }
    }
  }
  return Topology(std::move(myNodes), std::move(myLinks));
}

void saveTopology(const Topology& aTopology, std::ostream& aStream) {
  aStream << "topology v1\n";
  for (const auto& myNode : aTopology.nodes()) {
    aStream << "node " << myNode.theId << ' ' << toString(myNode.theKind);
    if (myNode.isEdge()) {
      aStream << ' ' << myNode.theContainers << ' '
              << toString(myNode.theServiceRate);
    }
    aStream << '\n';
  }
  for (const auto& [u, v] : aTopology.links()) {
    aStream << "edge " << u << ' ' << v << '\n';
  }
}

////////////////////////////////////////////////////////////////////////////////
// cost matrix

CostMatrix computeCostMatrix(const Topology& aTopology) {
  const auto myBrokers = aTopology.brokers();
  const auto myEdges   = aTopology.edgeNodes();
  if (myBrokers.empty()) {
    throw InvalidConfiguration("topology without brokers");
  }
  if (myEdges.empty()) {
    throw InvalidConfiguration("topology without edge nodes");
  }

  const auto&                           myNodes = aTopology.nodes();
  std::vector<std::vector<std::size_t>> myAdjacency(myNodes.size());
  for (const auto& [u, v] : aTopology.links()) {
    myAdjacency[aTopology.index(u)].emplace_back(aTopology.index(v));
    myAdjacency[aTopology.index(v)].emplace_back(aTopology.index(u));
  }

  constexpr auto myInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::vector<std::int64_t>> myHops;
  std::vector<std::pair<NodeId, NodeId>> myUnreachable;
  std::int64_t                           myMax = 0;
  for (const auto myBroker : myBrokers) {
    std::vector<std::int64_t> myDist(myNodes.size(), myInf);
    std::queue<std::size_t>   myQueue;
    myDist[aTopology.index(myBroker)] = 0;
    myQueue.push(aTopology.index(myBroker));
    while (not myQueue.empty()) {
      const auto u = myQueue.front();
      myQueue.pop();
      for (const auto v : myAdjacency[u]) {
        if (myDist[v] == myInf) {
          myDist[v] = myDist[u] + 1;
          myQueue.push(v);
        }
      }
    }
    myHops.emplace_back();
    for (const auto myEdge : myEdges) {
      const auto d = myDist[aTopology.index(myEdge)];
      if (d == myInf) {
        myUnreachable.emplace_back(myBroker, myEdge);
      } else {
        myMax = std::max(myMax, d);
      }
      myHops.back().emplace_back(d);
    }
  }
  if (not myUnreachable.empty()) {
    throw ConnectivityError(std::move(myUnreachable));
  }

  std::vector<NodeId> myColumns{CLOUD};
  myColumns.insert(myColumns.end(), myEdges.begin(), myEdges.end());
  std::vector<Rational> myCosts;
  for (const auto& myRow : myHops) {
    myCosts.emplace_back(2 * myMax);
    for (const auto d : myRow) {
      myCosts.emplace_back(d);
    }
  }
  return CostMatrix(myBrokers, std::move(myColumns), std::move(myCosts));
}

std::string toString(const CostMatrix& aMatrix) {
  std::ostringstream ret;
  ret << "broker";
  for (const auto myNode : aMatrix.nodes()) {
    ret << ' ' << (myNode == CLOUD ? std::string("cloud") : std::to_string(myNode));
  }
  ret << '\n';
  for (std::size_t i = 0; i < aMatrix.brokers().size(); i++) {
    ret << aMatrix.brokers()[i];
    for (std::size_t j = 0; j < aMatrix.nodes().size(); j++) {
      ret << ' ' << toString(aMatrix(i, j));
    }
    ret << '\n';
  }
  return ret.str();
}

} // namespace lambdamu
