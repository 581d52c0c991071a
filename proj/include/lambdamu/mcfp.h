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

#include <cstdint>
#include <vector>

namespace lambdamu {

/**
 * Minimum cost flow with successive shortest paths.
 *
 * Integral capacities and non-negative integral costs. Every iteration runs
 * Dijkstra on reduced costs (Johnson potentials) and pushes the bottleneck
 * capacity along the shortest path, so termination is bounded by the total
 * flow value. Equal-distance vertices are settled in index order.
 */
class MinCostFlow
{
 public:
  struct Arc {
    std::size_t  theTo;
    std::int64_t theCapacity;
    std::int64_t theCost;
    std::size_t  theReverse;
  };

  struct Result {
    std::int64_t theFlow = 0;
    std::int64_t theCost = 0;
  };

  explicit MinCostFlow(std::size_t aVertices);

  //! \return an arc handle, used by flow().
  std::size_t addArc(std::size_t  aFrom,
                     std::size_t  aTo,
                     std::int64_t aCapacity,
                     std::int64_t aCost);

  //! Push up to aLimit units from aSource to aSink at minimum cost.
  Result solve(std::size_t aSource, std::size_t aSink, std::int64_t aLimit);

  //! Flow on the arc returned by addArc().
  std::int64_t flow(std::size_t aHandle) const;

 private:
  std::vector<std::vector<Arc>>                  theGraph;
  std::vector<std::pair<std::size_t, std::size_t>> theHandles;
  std::vector<std::int64_t>                      theInitialCapacity;
};

} // namespace lambdamu
