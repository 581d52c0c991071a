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

#include <iosfwd>

namespace lambdamu {

/**
 * Line-oriented instance format:
 *
 *   instance v1
 *   node <id> <far|near> <containers> <service_rate>
 *   cost <broker> <node id or "cloud"> <q>
 *   app <id> <broker> <lambda|mu> <rate>
 *   param alpha <q>
 *   param beta <q>
 *
 * Numbers <q> are exact rationals (integers, decimals or p/q). The cost
 * matrix must be complete. Comments start with '#'.
 */
AllocationInstance loadInstance(std::istream& aStream);
void               saveInstance(const AllocationInstance& aInstance,
                                std::ostream&             aStream);

//! Rows "x,<app>,<node>" followed by "w,<broker>,<node>,<weight>" (non-zero
//! weights only, exact rationals).
void writeSolutionCsv(const MuAssignment&  aMu,
                      const LambdaWeights& aWeights,
                      std::ostream&        aStream);

//! Inverse of writeSolutionCsv(), weights laid out as in aCost.
std::pair<MuAssignment, LambdaWeights> readSolutionCsv(const CostMatrix& aCost,
                                                       std::istream&     aStream);

} // namespace lambdamu
