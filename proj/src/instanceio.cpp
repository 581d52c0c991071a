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

#include "lambdamu/instanceio.h"

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace lambdamu {

namespace {

std::vector<std::string> split(const std::string& aLine, const char aSep) {
  std::vector<std::string> ret;
  std::string              myToken;
  std::istringstream       myStream(aLine);
  if (aSep == ' ') {
    while (myStream >> myToken) {
      ret.emplace_back(myToken);
    }
  } else {
    while (std::getline(myStream, myToken, aSep)) {
      ret.emplace_back(myToken);
    }
  }
  return ret;
}

std::int64_t toInteger(const std::string& aText, const std::size_t aLine) {
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

Rational toRational(const std::string& aText, const std::size_t aLine) {
  try {
    return parseRational(aText);
  } catch (const std::exception& aErr) {
    throw ParseError(aLine, aErr.what());
  }
}

NodeId toNode(const std::string& aText, const std::size_t aLine) {
  return aText == "cloud" ? CLOUD : toInteger(aText, aLine);
}

} // namespace

AllocationInstance loadInstance(std::istream& aStream) {
  std::string                             myLine;
  std::size_t                             myLineNo = 0;
  bool                                    myHeader = false;
  std::map<NodeId, ComputeNode>           myEdges;
  std::map<std::pair<NodeId, NodeId>, Rational> myCosts;
  std::set<NodeId>                        myBrokers;
  std::vector<App>                        myApps;
  std::optional<Rational>                 myAlpha, myBeta;

  while (std::getline(aStream, myLine)) {
    myLineNo++;
    const auto t = split(myLine.substr(0, myLine.find('#')), ' ');
    if (t.empty()) {
      continue;
    }
    if (not myHeader) {
      if (t != std::vector<std::string>{"instance", "v1"}) {
        throw ParseError(myLineNo, "expected header 'instance v1'");
      }
      myHeader = true;
    } else if (t[0] == "node") {
      if (t.size() != 5 or (t[2] != "far" and t[2] != "near")) {
        throw ParseError(myLineNo,
                         "expected: node <id> <far|near> <containers> <rate>");
      }
      const auto myId         = toInteger(t[1], myLineNo);
      const auto myContainers = toInteger(t[3], myLineNo);
      if (myId <= 0 or myContainers < 0) {
        throw ParseError(myLineNo, "invalid node id or container count");
      }
      if (not myEdges
                  .emplace(myId,
                           ComputeNode{myId,
                                       static_cast<std::size_t>(myContainers),
                                       toRational(t[4], myLineNo)})
                  .second) {
        throw ParseError(myLineNo, "duplicate node " + t[1]);
      }
    } else if (t[0] == "cost") {
      if (t.size() != 4) {
        throw ParseError(myLineNo, "expected: cost <broker> <node> <q>");
      }
      const auto myBroker = toInteger(t[1], myLineNo);
      myBrokers.emplace(myBroker);
      if (not myCosts
                  .emplace(std::make_pair(myBroker, toNode(t[2], myLineNo)),
                           toRational(t[3], myLineNo))
                  .second) {
        throw ParseError(myLineNo, "duplicate cost entry");
      }
    } else if (t[0] == "app") {
      if (t.size() != 5) {
        throw ParseError(myLineNo, "expected: app <id> <broker> <mode> <rate>");
      }
      try {
        myApps.emplace_back(App{toInteger(t[1], myLineNo),
                                toInteger(t[2], myLineNo),
                                modeFromString(t[3]),
                                toRational(t[4], myLineNo)});
      } catch (const std::invalid_argument& aErr) {
        throw ParseError(myLineNo, aErr.what());
      }
    } else if (t[0] == "param" and t.size() == 3 and t[1] == "alpha") {
      myAlpha = toRational(t[2], myLineNo);
    } else if (t[0] == "param" and t.size() == 3 and t[1] == "beta") {
      myBeta = toRational(t[2], myLineNo);
    } else {
      throw ParseError(myLineNo, "unknown directive '" + t[0] + "'");
    }
  }
  if (not myHeader) {
    throw ParseError(myLineNo, "missing header 'instance v1'");
  }
  if (not myAlpha or not myBeta) {
    throw ParseError(myLineNo, "missing 'param alpha' or 'param beta'");
  }

  std::vector<NodeId>      myColumns{CLOUD};
  std::vector<ComputeNode> myComputeNodes;
  for (const auto& [myId, myNode] : myEdges) {
    myColumns.emplace_back(myId);
    myComputeNodes.emplace_back(myNode);
  }
  std::vector<Rational> myMatrix;
  for (const auto myBroker : myBrokers) {
    for (const auto myNode : myColumns) {
      const auto it = myCosts.find({myBroker, myNode});
      if (it == myCosts.end()) {
        throw ParseError(myLineNo,
                         "missing cost from broker " + std::to_string(myBroker) +
                             " to node " + std::to_string(myNode));
      }
      myMatrix.emplace_back(it->second);
    }
  }
  if (myCosts.size() != myMatrix.size()) {
    throw ParseError(myLineNo, "cost entries towards undeclared nodes");
  }
  try {
    auto myNetwork = std::make_shared<const EdgeNetwork>(
        CostMatrix({myBrokers.begin(), myBrokers.end()}, myColumns, myMatrix),
        myComputeNodes);
    return AllocationInstance(myNetwork, std::move(myApps), *myAlpha, *myBeta);
  } catch (const InvalidConfiguration& aErr) {
    throw ParseError(myLineNo, aErr.what());
  }
}

void saveInstance(const AllocationInstance& aInstance, std::ostream& aStream) {
  const auto& myCost = aInstance.cost();
  aStream << "instance v1\n";
  for (const auto& myNode : aInstance.network().edges()) {
    // the kind is informative only, solvers use containers and rates
    aStream << "node " << myNode.theId << " far " << myNode.theContainers << ' '
            << toString(myNode.theServiceRate) << '\n';
  }
  for (std::size_t i = 0; i < myCost.brokers().size(); i++) {
    for (std::size_t j = 0; j < myCost.nodes().size(); j++) {
      aStream << "cost " << myCost.brokers()[i] << ' '
              << (j == 0 ? std::string("cloud") : std::to_string(myCost.nodes()[j]))
              << ' ' << toString(myCost(i, j)) << '\n';
    }
  }
  for (const auto& myApp : aInstance.apps()) {
    aStream << "app " << myApp.theId << ' ' << myApp.theBroker << ' '
            << toString(myApp.theMode) << ' ' << toString(myApp.theRequestRate)
            << '\n';
  }
  aStream << "param alpha " << toString(aInstance.alpha()) << '\n'
          << "param beta " << toString(aInstance.beta()) << '\n';
}

void writeSolutionCsv(const MuAssignment&  aMu,
                      const LambdaWeights& aWeights,
                      std::ostream&        aStream) {
  for (const auto& [myApp, myNode] : aMu.theNodes) {
    aStream << "x," << myApp << ',' << myNode << '\n';
  }
  for (std::size_t i = 0; i < aWeights.theBrokers.size(); i++) {
    for (std::size_t j = 0; j < aWeights.theNodes.size(); j++) {
      if (aWeights(i, j) != Rational(0)) {
        aStream << "w," << aWeights.theBrokers[i] << ',' << aWeights.theNodes[j]
                << ',' << toString(aWeights(i, j)) << '\n';
      }
    }
  }
}

std::pair<MuAssignment, LambdaWeights> readSolutionCsv(const CostMatrix& aCost,
                                                       std::istream&     aStream) {
  std::pair<MuAssignment, LambdaWeights> ret;
  ret.second = LambdaWeights::zero(aCost);
  std::string myLine;
  std::size_t myLineNo = 0;
  while (std::getline(aStream, myLine)) {
    myLineNo++;
    if (myLine.empty()) {
      continue;
    }
    const auto t = split(myLine, ',');
    if (t.size() == 3 and t[0] == "x") {
      ret.first.theNodes[toInteger(t[1], myLineNo)] = toInteger(t[2], myLineNo);
    } else if (t.size() == 4 and t[0] == "w") {
      try {
        ret.second(aCost.brokerIndex(toInteger(t[1], myLineNo)),
                   aCost.nodeIndex(toInteger(t[2], myLineNo))) =
            toRational(t[3], myLineNo);
      } catch (const LookupError& aErr) {
        throw ParseError(myLineNo, aErr.what());
      }
    } else {
      throw ParseError(myLineNo, "expected an x or w row");
    }
  }
  return ret;
}

} // namespace lambdamu
