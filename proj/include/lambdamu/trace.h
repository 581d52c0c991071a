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

#include "lambdamu/policy.h"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace lambdamu {

struct TraceRecord {
  TimeMs      theTime;
  std::string theUser;
  std::string theApp;
  Access      theAccess; //!< Read or Write

  bool operator==(const TraceRecord&) const = default;
};

/**
 * Invocation records sorted by time (ties keep the input order), observed in
 * the window [start, start + period).
 */
class TraceSet
{
 public:
  /**
   * Without an explicit window the records span [first, last + 1).
   *
   * \throw DomainError if a record has access None.
   */
  explicit TraceSet(std::vector<TraceRecord> aRecords);
  TraceSet(std::vector<TraceRecord> aRecords, TimeMs aStart, TimeMs aPeriod);

  const std::vector<TraceRecord>& records() const noexcept {
    return theRecords;
  }
  //! Per-app traces sharing the window of the set.
  const std::map<std::string, AppTrace>& perApp() const noexcept {
    return thePerApp;
  }
  TimeMs start() const noexcept {
    return theStart;
  }
  TimeMs period() const noexcept {
    return thePeriod;
  }

  //! Fraction of Read records, 0 if empty.
  double readShare() const noexcept;

 private:
  std::vector<TraceRecord>        theRecords;
  TimeMs                          theStart  = 0;
  TimeMs                          thePeriod = 0;
  std::map<std::string, AppTrace> thePerApp;
};

enum class DatasetFormat {
  Canonical, //!< timestamp_ms,user,app,access with access R or W
  Azure2020, //!< Timestamp (s),AnonUserId,AnonAppName,...,Read,Write
};

//! \throw std::invalid_argument
DatasetFormat datasetFormatFromString(const std::string& aName);

/**
 * Columns are looked up by header name, extra columns are ignored. Azure
 * timestamps are seconds with a fractional part, truncated to milliseconds;
 * an invocation flagged both Read and Write counts as a write.
 *
 * \throw ParseError
 */
TraceSet parseTrace(std::istream& aStream, DatasetFormat aFormat);

//! Canonical format.
void writeTrace(const TraceSet& aTrace, std::ostream& aStream);

//! Two-state workload generator, rates in invocations per minute and
//! durations in minutes.
struct SynthParams {
  double theBurstRate         = 6;
  double theIdleRatio         = 100; //!< burst rate / idle rate
  double theMeanBurstMinutes  = 20;
  double theMeanIdleMinutes   = 40;
  double theRateSpreadDecades = 1; //!< per-app rate multiplier 10^U(-d/2, d/2)
  double theReadProbability   = 0.77;

  //! \throw DomainError
  void validate() const;
};

/**
 * Apps "app0001", ... used by "user0001", ..., each alternating exponential
 * burst and idle periods, with Poisson invocations in each, over
 * [0, aHorizon). The first period is a burst with probability
 * burst / (burst + idle) mean duration.
 *
 * \throw DomainError if aApps is zero, aHorizon non-positive or the
 *        parameters are invalid.
 */
TraceSet synthTrace(std::uint64_t      aSeed,
                    std::size_t        aApps,
                    TimeMs             aHorizon,
                    const SynthParams& aParams = SynthParams());

/**
 * Rotate the trace by aOffset within its window, then tile the window over
 * [0, aHorizon). A trace without a window uses [first event, last event + 1).
 *
 * An empty trace or non-positive horizon yields an empty trace.
 */
AppTrace wrapOffset(const AppTrace& aTrace, TimeMs aOffset, TimeMs aHorizon);

} // namespace lambdamu
