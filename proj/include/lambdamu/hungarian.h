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
#include <limits>
#include <stdexcept>
#include <vector>

namespace lambdamu {

/**
 * Hungarian method for the rectangular assignment problem.
 *
 * Assigns every one of the n rows to a distinct column out of m >= n,
 * minimizing the total cost, in O(n^2 m) with the shortest augmenting path
 * formulation based on row/column potentials. A square n x n problem with
 * extra zero-cost dummy rows would give the same optimum.
 *
 * aCosts is row-major, n x m. Costs must be integers small enough that the
 * sum of n of them fits in an int64.
 *
 * Returns the column assigned to each row.
 */
inline std::vector<std::size_t>
solveAssignment(const std::vector<std::int64_t>& aCosts,
                const std::size_t                aRows,
                const std::size_t                aColumns) {
  if (aRows > aColumns) {
    throw std::invalid_argument("assignment needs at least as many columns as rows");
  }
  if (aCosts.size() != aRows * aColumns) {
    throw std::invalid_argument("assignment cost matrix size mismatch");
  }
  if (aRows == 0) {
    return {};
  }

  constexpr auto INF = std::numeric_limits<std::int64_t>::max() / 4;
  const auto     n   = aRows;
  const auto     m   = aColumns;
  const auto     a   = [&](std::size_t i, std::size_t j) {
    return aCosts[(i - 1) * m + (j - 1)];
  };

  // 1-based, index 0 is a virtual column used as the augmentation root
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<std::size_t>  p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; i++) {
    p[0]                         = i;
    std::size_t               j0 = 0;
    std::vector<std::int64_t> myMin(m + 1, INF);
    std::vector<char>         myUsed(m + 1, false);
    do {
      myUsed[j0]        = true;
      const auto   i0   = p[j0];
      std::int64_t delta = INF;
      std::size_t  j1    = 0;
      for (std::size_t j = 1; j <= m; j++) {
        if (not myUsed[j]) {
          const auto cur = a(i0, j) - u[i0] - v[j];
          if (cur < myMin[j]) {
            myMin[j] = cur;
            way[j]   = j0;
          }
          if (myMin[j] < delta) {
            delta = myMin[j];
            j1    = j;
          }
        }
      }
      for (std::size_t j = 0; j <= m; j++) {
        if (myUsed[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          myMin[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const auto j1 = way[j0];
      p[j0]         = p[j1];
      j0            = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> ret(n, 0);
  for (std::size_t j = 1; j <= m; j++) {
    if (p[j] != 0) {
      ret[p[j] - 1] = j - 1;
    }
  }
  return ret;
}

} // namespace lambdamu
