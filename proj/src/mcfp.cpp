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

#include "lambdamu/mcfp.h"

#include "lambdamu/rational.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace lambdamu {

MinCostFlow::MinCostFlow(const std::size_t aVertices)
    : theGraph(aVertices)
    , theHandles()
    , theInitialCapacity() {
}

std::size_t MinCostFlow::addArc(const std::size_t  aFrom,
                                const std::size_t  aTo,
                                const std::int64_t aCapacity,
                                const std::int64_t aCost) {
  if (aFrom >= theGraph.size() or aTo >= theGraph.size()) {
    throw std::out_of_range("arc endpoint out of range");
  }
  if (aCapacity < 0 or aCost < 0) {
    throw std::invalid_argument("arc capacity and cost must be non-negative");
  }
  theGraph[aFrom].emplace_back(Arc{aTo, aCapacity, aCost, theGraph[aTo].size()});
  theGraph[aTo].emplace_back(Arc{aFrom, 0, -aCost, theGraph[aFrom].size() - 1});
  theHandles.emplace_back(aFrom, theGraph[aFrom].size() - 1);
  theInitialCapacity.emplace_back(aCapacity);
  return theHandles.size() - 1;
}

std::int64_t MinCostFlow::flow(const std::size_t aHandle) const {
  const auto& [u, k] = theHandles.at(aHandle);
  return theInitialCapacity[aHandle] - theGraph[u][k].theCapacity;
}

MinCostFlow::Result MinCostFlow::solve(const std::size_t  aSource,
                                       const std::size_t  aSink,
                                       const std::int64_t aLimit) {
  constexpr auto INF = std::numeric_limits<std::int64_t>::max();
  const auto     n   = theGraph.size();
  Result         ret;

  // initial costs are non-negative so zero potentials are valid
  std::vector<std::int64_t> myPotential(n, 0);
  std::vector<std::int64_t> myDist(n);
  std::vector<std::size_t>  myPrevNode(n), myPrevArc(n);

  using Item = std::pair<std::int64_t, std::size_t>;
  while (ret.theFlow < aLimit) {
    std::fill(myDist.begin(), myDist.end(), INF);
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> myQueue;
    myDist[aSource] = 0;
    myQueue.emplace(0, aSource);
    while (not myQueue.empty()) {
      const auto [d, u] = myQueue.top();
      myQueue.pop();
      if (d > myDist[u]) {
        continue;
      }
      for (std::size_t k = 0; k < theGraph[u].size(); k++) {
        const auto& myArc = theGraph[u][k];
        if (myArc.theCapacity <= 0) {
          continue;
        }
        const auto myReduced =
            myArc.theCost + myPotential[u] - myPotential[myArc.theTo];
        const auto myCandidate = checkedAdd(d, myReduced);
        if (myCandidate < myDist[myArc.theTo]) {
          myDist[myArc.theTo]     = myCandidate;
          myPrevNode[myArc.theTo] = u;
          myPrevArc[myArc.theTo]  = k;
          myQueue.emplace(myCandidate, myArc.theTo);
        }
      }
    }
    if (myDist[aSink] == INF) {
      break;
    }
    for (std::size_t v = 0; v < n; v++) {
      if (myDist[v] != INF) {
        myPotential[v] += myDist[v];
      }
    }

    auto myPush = aLimit - ret.theFlow;
    for (auto v = aSink; v != aSource; v = myPrevNode[v]) {
      myPush = std::min(myPush, theGraph[myPrevNode[v]][myPrevArc[v]].theCapacity);
    }
    for (auto v = aSink; v != aSource; v = myPrevNode[v]) {
      auto& myArc = theGraph[myPrevNode[v]][myPrevArc[v]];
      myArc.theCapacity -= myPush;
      theGraph[v][myArc.theReverse].theCapacity += myPush;
      ret.theCost = checkedAdd(ret.theCost, checkedMul(myPush, myArc.theCost));
    }
    ret.theFlow += myPush;
  }
  return ret;
}

} // namespace lambdamu
