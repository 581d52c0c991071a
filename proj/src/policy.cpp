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

#include "lambdamu/policy.h"

#include <array>
#include <istream>

namespace lambdamu {

void PolicyParams::validate() const {
  for (const auto& [myKey, myValue] :
       std::map<std::string, Money>{{"xi_lambda", theXiLambda},
                                    {"sigma_r", theSigmaRead},
                                    {"sigma_w", theSigmaWrite},
                                    {"omega_mu", theOmegaMu},
                                    {"tau_lambda", theTauLambda},
                                    {"tau_mu", theTauMu}}) {
    if (myValue < 0) {
      throw DomainError("negative cost parameter " + myKey);
    }
  }
}

void PolicyParams::set(const std::string& aKey, const std::string& aValue) {
  Money* myField = nullptr;
  if (aKey == "xi_lambda") {
    myField = &theXiLambda;
  } else if (aKey == "sigma_r") {
    myField = &theSigmaRead;
  } else if (aKey == "sigma_w") {
    myField = &theSigmaWrite;
  } else if (aKey == "omega_mu") {
    myField = &theOmegaMu;
  } else if (aKey == "tau_lambda") {
    myField = &theTauLambda;
  } else if (aKey == "tau_mu") {
    myField = &theTauMu;
  } else {
    throw std::invalid_argument("unknown cost parameter '" + aKey + "'");
  }
  const auto myValue = parseRational(aValue);
  if (myValue < 0) {
    throw std::invalid_argument("negative cost parameter " + aKey);
  }
  *myField = myValue;
}

std::map<std::string, std::string> PolicyParams::toMap() const {
  return {{"xi_lambda", toString(theXiLambda)},
          {"sigma_r", toString(theSigmaRead)},
          {"sigma_w", toString(theSigmaWrite)},
          {"omega_mu", toString(theOmegaMu)},
          {"tau_lambda", toString(theTauLambda)},
          {"tau_mu", toString(theTauMu)}};
}

std::vector<std::string> loadParams(std::istream& aStream, PolicyParams& aParams) {
  std::vector<std::string> ret;
  std::string              myLine;
  std::size_t              myLineNo = 0;
  const auto               myTrim   = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(aStream, myLine)) {
    myLineNo++;
    myLine = myTrim(myLine.substr(0, myLine.find('#')));
    if (myLine.empty()) {
      continue;
    }
    const auto myEq = myLine.find('=');
    if (myEq == std::string::npos) {
      throw ParseError(myLineNo, "expected key=value");
    }
    const auto myKey = myTrim(myLine.substr(0, myEq));
    try {
      aParams.set(myKey, myTrim(myLine.substr(myEq + 1)));
    } catch (const std::invalid_argument& aErr) {
      throw ParseError(myLineNo, aErr.what());
    }
    ret.emplace_back(myKey);
  }
  return ret;
}

////////////////////////////////////////////////////////////////////////////////
// cost model

Money costStateful(const TimeMs aDuration, const PolicyParams& aParams) {
  if (aDuration < 0) {
    throw DomainError("negative duration " + std::to_string(aDuration));
  }
  return aParams.theOmegaMu * aDuration;
}

Money costStateless(const std::int64_t  aReads,
                    const std::int64_t  aWrites,
                    const PolicyParams& aParams) {
  if (aReads < 0 or aWrites < 0) {
    throw DomainError("negative invocation count");
  }
  return aParams.theXiLambda * (aReads + aWrites) + aParams.theSigmaRead * aReads +
         aParams.theSigmaWrite * aWrites;
}

Money invocationCost(const Access aAccess, const PolicyParams& aParams) {
  switch (aAccess) {
    case Access::Read:
      return aParams.theXiLambda + aParams.theSigmaRead;
    case Access::Write:
      return aParams.theXiLambda + aParams.theSigmaWrite;
    case Access::None:
      return aParams.theXiLambda;
  }
  throw std::logic_error("unknown access type");
}

ModePattern patternFromModes(const AppTrace&          aTrace,
                             const std::vector<Mode>& aModes,
                             const PolicyParams&      aParams) {
  const auto& e = aTrace.theEvents;
  if (aModes.size() != e.size()) {
    throw std::invalid_argument("one mode per invocation expected");
  }
  ModePattern ret;
  for (std::size_t k = 0; k < e.size(); k++) {
    const auto myMode = aModes[k];
    if (k == 0) {
      ret.theSegments.emplace_back(Segment{e[k].theTime, myMode, k});
      if (myMode == Mode::Mu) {
        ret.theTotalCost += aParams.theTauMu;
      }
    } else if (myMode != aModes[k - 1]) {
      if (myMode == Mode::Mu) {
        ret.theSegments.emplace_back(Segment{e[k].theTime, myMode, k});
        ret.theTotalCost += aParams.theTauMu;
      } else {
        ret.theSegments.emplace_back(Segment{e[k - 1].theTime, myMode, k});
        ret.theTotalCost += aParams.theTauLambda;
      }
    } else if (myMode == Mode::Mu) {
      ret.theTotalCost += costStateful(e[k].theTime - e[k - 1].theTime, aParams);
    }
    if (myMode == Mode::Lambda) {
      ret.theTotalCost += invocationCost(e[k].theAccess, aParams);
    }
  }
  return ret;
}

////////////////////////////////////////////////////////////////////////////////
// hybrid

namespace {

void checkTrace(const AppTrace& aTrace) {
  if (aTrace.theEvents.empty()) {
    throw DomainError("empty trace for app '" + aTrace.theApp + "'");
  }
}

} // namespace

ModePattern hybridSchedule(const AppTrace&     aTrace,
                           const PolicyParams& aParams,
                           const std::size_t   aLookahead) {
  checkTrace(aTrace);
  if (aLookahead == 0) {
    throw DomainError("the look-ahead window must contain one invocation at least");
  }
  const auto& e = aTrace.theEvents;
  const auto  n = e.size();

  // myPrefix[k]: stateless cost of invocations [0, k)
  std::vector<Money> myPrefix(n + 1, Money(0));
  for (std::size_t k = 0; k < n; k++) {
    myPrefix[k + 1] = myPrefix[k] + invocationCost(e[k].theAccess, aParams);
  }

  // myMigrate[k]: the stateless rule migrates to stateful at invocation k
  std::vector<char> myMigrate(n, false);
  for (std::size_t k = 0; k < n; k++) {
    for (std::size_t m = k; m < std::min(n, k + aLookahead); m++) {
      auto myMu = aParams.theTauMu + costStateful(e[m].theTime - e[k].theTime, aParams);
      if (m + 1 < n) {
        myMu += aParams.theTauLambda;
      }
      if (myMu < myPrefix[m + 1] - myPrefix[k]) {
        myMigrate[k] = true;
        break;
      }
    }
  }
  std::vector<std::size_t> myNextMigrate(n + 1, n);
  for (std::size_t k = n; k-- > 0;) {
    myNextMigrate[k] = myMigrate[k] ? k : myNextMigrate[k + 1];
  }

  std::vector<Mode> myModes(n, Mode::Lambda);
  auto              myMode = Mode::Lambda;
  for (std::size_t k = 0; k < n; k++) {
    if (myMode == Mode::Lambda and myMigrate[k]) {
      myMode = Mode::Mu;
    }
    myModes[k] = myMode;
    if (myMode == Mode::Mu and k + 1 < n) {
      const auto r = myNextMigrate[k + 1];
      Money      myStay, myLeave;
      if (r < n) {
        myStay  = costStateful(e[r].theTime - e[k].theTime, aParams);
        myLeave = aParams.theTauLambda + (myPrefix[r] - myPrefix[k + 1]) +
                  aParams.theTauMu;
      } else {
        myStay  = costStateful(e[n - 1].theTime - e[k].theTime, aParams);
        myLeave = aParams.theTauLambda + (myPrefix[n] - myPrefix[k + 1]);
      }
      if (myStay > myLeave) {
        myMode = Mode::Lambda;
      }
    }
  }
  return patternFromModes(aTrace, myModes, aParams);
}

////////////////////////////////////////////////////////////////////////////////
// optimal

ModePattern optimalSchedule(const AppTrace& aTrace, const PolicyParams& aParams) {
  checkTrace(aTrace);
  const auto& e = aTrace.theEvents;
  const auto  n = e.size();
  constexpr auto L = static_cast<std::size_t>(Mode::Lambda);
  constexpr auto M = static_cast<std::size_t>(Mode::Mu);

  // myFrom[k][s]: mode of invocation k-1 on the best path serving k in s
  std::vector<std::array<Mode, 2>> myFrom(n);
  std::array<Money, 2>             myBest{invocationCost(e[0].theAccess, aParams),
                              aParams.theTauMu};
  for (std::size_t k = 1; k < n; k++) {
    const auto myGap = costStateful(e[k].theTime - e[k - 1].theTime, aParams);
    std::array<Money, 2> myNext;

    const auto myStayLambda = myBest[L];
    const auto myToLambda   = myBest[M] + aParams.theTauLambda;
    if (myStayLambda <= myToLambda) {
      myNext[L]    = myStayLambda;
      myFrom[k][L] = Mode::Lambda;
    } else {
      myNext[L]    = myToLambda;
      myFrom[k][L] = Mode::Mu;
    }
    myNext[L] += invocationCost(e[k].theAccess, aParams);

    const auto myStayMu = myBest[M] + myGap;
    const auto myToMu   = myBest[L] + aParams.theTauMu;
    if (myStayMu <= myToMu) {
      myNext[M]    = myStayMu;
      myFrom[k][M] = Mode::Mu;
    } else {
      myNext[M]    = myToMu;
      myFrom[k][M] = Mode::Lambda;
    }
    myBest = myNext;
  }

  std::vector<Mode> myModes(n);
  myModes[n - 1] = myBest[L] <= myBest[M] ? Mode::Lambda : Mode::Mu;
  for (std::size_t k = n - 1; k > 0; k--) {
    myModes[k - 1] = myFrom[k][static_cast<std::size_t>(myModes[k])];
  }
  auto ret = patternFromModes(aTrace, myModes, aParams);
  if (ret.theTotalCost != std::min(myBest[L], myBest[M])) {
    throw std::logic_error("inconsistent optimal schedule cost");
  }
  return ret;
}

PolicyResult evaluatePolicies(const AppTrace&     aTrace,
                              const PolicyParams& aParams,
                              const std::size_t   aLookahead) {
  checkTrace(aTrace);
  const auto&  e = aTrace.theEvents;
  PolicyResult ret;
  std::int64_t myReads = 0, myWrites = 0, myNone = 0;
  for (const auto& myEvent : e) {
    switch (myEvent.theAccess) {
      case Access::Read:
        myReads++;
        break;
      case Access::Write:
        myWrites++;
        break;
      case Access::None:
        myNone++;
        break;
    }
  }
  ret.theLambdaOnly = costStateless(myReads, myWrites, aParams) +
                      aParams.theXiLambda * myNone;
  ret.theMuOnly =
      aParams.theTauMu + costStateful(e.back().theTime - e.front().theTime, aParams);
  ret.thePattern    = hybridSchedule(aTrace, aParams, aLookahead);
  ret.theHybrid     = ret.thePattern.theTotalCost;
  ret.theMigrations = ret.thePattern.migrations();
  ret.theOptimal    = optimalSchedule(aTrace, aParams).theTotalCost;
  return ret;
}

} // namespace lambdamu
