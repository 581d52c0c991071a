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

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace lambdamu {

//! Monetary amount, in the same unit as the cost parameters.
using Money = Rational;

enum class Access { Read, Write, None };

struct TraceEvent {
  TimeMs theTime;
  Access theAccess;

  bool operator==(const TraceEvent&) const = default;
};

//! Invocations of one app, sorted by time, observed in [theStart, theStart +
//! thePeriod).
struct AppTrace {
  std::string             theApp;
  std::vector<TraceEvent> theEvents;
  TimeMs                  theStart  = 0;
  TimeMs                  thePeriod = 0;

  bool operator==(const AppTrace&) const = default;
};

/**
 * Cost coefficients of the two operation modes.
 *
 * The defaults are cost-per-invocation 0.6, 0.4 per read, 5 per write,
 * 6.3e-6 per millisecond of dedicated container and 12 per migration in
 * either direction (twice invocation + read + write), all in 1e-6 $.
 */
struct PolicyParams {
  Money theXiLambda{3, 5};
  Money theSigmaRead{2, 5};
  Money theSigmaWrite{5};
  Money theOmegaMu{63, 10'000'000};
  Money theTauLambda{12}; //!< mu -> lambda
  Money theTauMu{12};     //!< lambda -> mu

  //! \throw DomainError if any coefficient is negative.
  void validate() const;

  /**
   * Set one coefficient by name: xi_lambda, sigma_r, sigma_w, omega_mu,
   * tau_lambda, tau_mu.
   *
   * \throw std::invalid_argument on unknown keys or invalid numbers.
   */
  void set(const std::string& aKey, const std::string& aValue);

  //! All coefficients as key=value, in a fixed order.
  std::map<std::string, std::string> toMap() const;

  bool operator==(const PolicyParams&) const = default;
};

/**
 * Read "key=value" lines into aParams, '#' starts a comment.
 *
 * \return the keys overridden, in file order.
 * \throw ParseError
 */
std::vector<std::string> loadParams(std::istream& aStream, PolicyParams& aParams);

struct Segment {
  TimeMs      theStart;
  Mode        theMode;
  std::size_t theFirstEvent; //!< index of the first invocation served

  bool operator==(const Segment&) const = default;
};

/**
 * Mode schedule of an app.
 *
 * Apps are born stateless: a pattern whose first segment is Mu pays tau_mu
 * to provision the container, but that is not a migration. A switch to Mu
 * happens at the instant of an invocation, a switch to Lambda right after
 * one, ie. the Lambda segment starts at the time of the last invocation
 * served in Mu.
 */
struct ModePattern {
  std::vector<Segment> theSegments;
  Money                theTotalCost{0};

  std::size_t migrations() const noexcept {
    return theSegments.empty() ? 0 : theSegments.size() - 1;
  }

  bool operator==(const ModePattern&) const = default;
};

struct PolicyResult {
  Money       theLambdaOnly{0};
  Money       theMuOnly{0};
  Money       theHybrid{0};
  Money       theOptimal{0};
  std::size_t theMigrations = 0; //!< of the hybrid pattern
  ModePattern thePattern;        //!< hybrid
};

//! omega_mu * duration. \throw DomainError if aDuration < 0
Money costStateful(TimeMs aDuration, const PolicyParams& aParams);

//! xi (reads + writes) + sigma_r reads + sigma_w writes. \throw DomainError
//! on negative counts.
Money costStateless(std::int64_t        aReads,
                    std::int64_t        aWrites,
                    const PolicyParams& aParams);

//! Cost of serving one invocation in stateless mode.
Money invocationCost(Access aAccess, const PolicyParams& aParams);

/**
 * Segments and total cost of serving invocation k in mode aModes[k].
 *
 * \throw std::invalid_argument if the sizes differ.
 */
ModePattern patternFromModes(const AppTrace&          aTrace,
                             const std::vector<Mode>& aModes,
                             const PolicyParams&      aParams);

/**
 * Prophetic hybrid policy.
 *
 * Stateless at invocation k: simulate the next aLookahead invocations and
 * migrate to stateful now if, at some point of the window, the stateful
 * branch (tau_mu, container time and the cost of coming back, unless the
 * window reaches the end of the trace) is strictly cheaper than staying
 * stateless.
 *
 * Stateful after invocation k: find the invocation r where the rule above
 * would migrate back; release the container now if keeping it until r costs
 * more than tau_lambda + the stateless invocations before r + tau_mu.
 *
 * \throw DomainError if the trace is empty or aLookahead is zero.
 */
ModePattern hybridSchedule(const AppTrace&     aTrace,
                           const PolicyParams& aParams,
                           std::size_t         aLookahead);

/**
 * Minimum cost schedule, by dynamic programming on the mode serving each
 * invocation. Ties prefer not migrating and then Lambda.
 *
 * \throw DomainError if the trace is empty.
 */
ModePattern optimalSchedule(const AppTrace& aTrace, const PolicyParams& aParams);

//! Lambda-only, mu-only (tau_mu + container over the active span), hybrid
//! and optimal costs. \throw DomainError if the trace is empty.
PolicyResult evaluatePolicies(const AppTrace&     aTrace,
                              const PolicyParams& aParams,
                              std::size_t         aLookahead);

} // namespace lambdamu
