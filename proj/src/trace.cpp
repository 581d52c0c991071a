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

#include "lambdamu/trace.h"

#include "lambdamu/random.h"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace lambdamu {

TraceSet::TraceSet(std::vector<TraceRecord> aRecords)
    : TraceSet(std::move(aRecords), 0, 0) {
  if (not theRecords.empty()) {
    theStart  = theRecords.front().theTime;
    thePeriod = theRecords.back().theTime - theStart + 1;
    for (auto& [myName, myTrace] : thePerApp) {
      myTrace.theStart  = theStart;
      myTrace.thePeriod = thePeriod;
    }
  }
}

TraceSet::TraceSet(std::vector<TraceRecord> aRecords,
                   const TimeMs             aStart,
                   const TimeMs             aPeriod)
    : theRecords(std::move(aRecords))
    , theStart(aStart)
    , thePeriod(aPeriod) {
  std::stable_sort(theRecords.begin(),
                   theRecords.end(),
                   [](const auto& lhs, const auto& rhs) { return lhs.theTime < rhs.theTime; });
  for (const auto& myRecord : theRecords) {
    if (myRecord.theAccess == Access::None) {
      throw DomainError("trace records must be either read or write");
    }
    auto& myTrace = thePerApp[myRecord.theApp];
    myTrace.theApp = myRecord.theApp;
    myTrace.theEvents.emplace_back(TraceEvent{myRecord.theTime, myRecord.theAccess});
  }
  for (auto& [myName, myTrace] : thePerApp) {
    myTrace.theStart  = theStart;
    myTrace.thePeriod = thePeriod;
  }
}

double TraceSet::readShare() const noexcept {
  if (theRecords.empty()) {
    return 0;
  }
  const auto myReads =
      std::count_if(theRecords.begin(), theRecords.end(), [](const auto& r) {
        return r.theAccess == Access::Read;
      });
  return static_cast<double>(myReads) / theRecords.size();
}

DatasetFormat datasetFormatFromString(const std::string& aName) {
  if (aName == "canonical") {
    return DatasetFormat::Canonical;
  } else if (aName == "azure2020") {
    return DatasetFormat::Azure2020;
  }
  throw std::invalid_argument("unknown dataset format '" + aName + "'");
}

namespace {

std::vector<std::string> splitCsv(const std::string& aLine) {
  std::vector<std::string> ret;
  std::string              myToken;
  std::istringstream       myStream(aLine);
  while (std::getline(myStream, myToken, ',')) {
    ret.emplace_back(myToken);
  }
  if (not aLine.empty() and aLine.back() == ',') {
    ret.emplace_back();
  }
  return ret;
}

std::size_t column(const std::vector<std::string>& aHeader,
                   const std::string&              aName) {
  const auto it = std::find(aHeader.begin(), aHeader.end(), aName);
  if (it == aHeader.end()) {
    throw ParseError(1, "missing column '" + aName + "'");
  }
  return static_cast<std::size_t>(it - aHeader.begin());
}

std::int64_t parseMillis(const std::string& aText) {
  std::size_t myUsed = 0;
  const auto  ret    = std::stoll(aText, &myUsed);
  if (myUsed != aText.size()) {
    throw std::invalid_argument("trailing characters");
  }
  return ret;
}

//! "1606348800.0137" -> 1606348800013
std::int64_t parseSeconds(const std::string& aText) {
  const auto myDot     = aText.find('.');
  const auto myInteger = aText.substr(0, myDot);
  auto myFraction = myDot == std::string::npos ? std::string() : aText.substr(myDot + 1);
  if (myInteger.empty() or myInteger[0] == '-' or myInteger[0] == '+' or
      not std::all_of(myFraction.begin(), myFraction.end(), ::isdigit)) {
    throw std::invalid_argument("invalid timestamp");
  }
  myFraction = (myFraction + "000").substr(0, 3);
  return checkedAdd(checkedMul(parseMillis(myInteger), 1000), std::stoll(myFraction));
}

bool parseFlag(const std::string& aText) {
  if (aText == "True" or aText == "true" or aText == "1") {
    return true;
  } else if (aText == "False" or aText == "false" or aText == "0") {
    return false;
  }
  throw std::invalid_argument("invalid flag '" + aText + "'");
}

} // namespace

TraceSet parseTrace(std::istream& aStream, const DatasetFormat aFormat) {
  std::string myLine;
  if (not std::getline(aStream, myLine)) {
    throw ParseError(1, "missing header");
  }
  if (not myLine.empty() and myLine.back() == '\r') {
    myLine.pop_back();
  }
  const auto myHeader = splitCsv(myLine);
  const bool myAzure  = aFormat == DatasetFormat::Azure2020;
  const auto myTime   = column(myHeader, myAzure ? "Timestamp" : "timestamp_ms");
  const auto myUser   = column(myHeader, myAzure ? "AnonUserId" : "user");
  const auto myApp    = column(myHeader, myAzure ? "AnonAppName" : "app");
  std::size_t myRead = 0, myWrite = 0, myAccess = 0;
  if (myAzure) {
    myRead  = column(myHeader, "Read");
    myWrite = column(myHeader, "Write");
  } else {
    myAccess = column(myHeader, "access");
  }

  std::vector<TraceRecord> myRecords;
  std::size_t              myLineNo = 1;
  while (std::getline(aStream, myLine)) {
    myLineNo++;
    if (not myLine.empty() and myLine.back() == '\r') {
      myLine.pop_back();
    }
    if (myLine.empty()) {
      continue;
    }
    const auto t = splitCsv(myLine);
    if (t.size() != myHeader.size()) {
      throw ParseError(myLineNo,
                       fmt::format("expected {} fields, found {}", myHeader.size(), t.size()));
    }
    TraceRecord myRecord{0, t[myUser], t[myApp], Access::None};
    try {
      if (myAzure) {
        myRecord.theTime = parseSeconds(t[myTime]);
        if (parseFlag(t[myWrite])) {
          myRecord.theAccess = Access::Write;
        } else if (parseFlag(t[myRead])) {
          myRecord.theAccess = Access::Read;
        }
      } else {
        myRecord.theTime = parseMillis(t[myTime]);
        if (t[myAccess] == "R") {
          myRecord.theAccess = Access::Read;
        } else if (t[myAccess] == "W") {
          myRecord.theAccess = Access::Write;
        }
      }
    } catch (const std::exception&) {
      throw ParseError(myLineNo, "invalid timestamp or access flag");
    }
    if (myRecord.theAccess == Access::None) {
      throw ParseError(myLineNo, "unknown access flag");
    }
    myRecords.emplace_back(std::move(myRecord));
  }
  return TraceSet(std::move(myRecords));
}

void writeTrace(const TraceSet& aTrace, std::ostream& aStream) {
  aStream << "timestamp_ms,user,app,access\n";
  for (const auto& r : aTrace.records()) {
    aStream << r.theTime << ',' << r.theUser << ',' << r.theApp << ','
            << (r.theAccess == Access::Read ? 'R' : 'W') << '\n';
  }
}

void SynthParams::validate() const {
  if (not(theBurstRate > 0) or not(theIdleRatio >= 1) or
      not(theMeanBurstMinutes > 0) or not(theMeanIdleMinutes > 0) or
      not(theRateSpreadDecades >= 0) or not(theReadProbability >= 0) or
      not(theReadProbability <= 1)) {
    throw DomainError("invalid synthetic trace parameters");
  }
}

TraceSet synthTrace(const std::uint64_t aSeed,
                    const std::size_t   aApps,
                    const TimeMs        aHorizon,
                    const SynthParams&  aParams) {
  aParams.validate();
  if (aApps == 0 or aHorizon <= 0) {
    throw DomainError("synthetic trace needs one app and a positive horizon");
  }
  constexpr double         MINUTE = 60'000;
  std::vector<TraceRecord> myRecords;
  for (std::size_t a = 0; a < aApps; a++) {
    std::mt19937_64 myRng(deriveSeed(aSeed, a));
    const auto      myName = fmt::format("{:04}", a + 1);
    const auto      myScale =
        std::pow(10.0, (uniform01(myRng) - 0.5) * aParams.theRateSpreadDecades);
    const double myMean[2] = {
        MINUTE / (aParams.theBurstRate * myScale / aParams.theIdleRatio),
        MINUTE / (aParams.theBurstRate * myScale)};
    const double myDuration[2] = {aParams.theMeanIdleMinutes * MINUTE,
                                  aParams.theMeanBurstMinutes * MINUTE};
    auto myState = uniform01(myRng) < aParams.theMeanBurstMinutes /
                                          (aParams.theMeanBurstMinutes +
                                           aParams.theMeanIdleMinutes)
                       ? 1
                       : 0;
    double myNow = 0;
    while (myNow < aHorizon) {
      const auto myEnd = myNow + exponential(myRng, myDuration[myState]);
      for (auto t = myNow + exponential(myRng, myMean[myState]);
           t < myEnd and t < aHorizon;
           t += exponential(myRng, myMean[myState])) {
        myRecords.emplace_back(TraceRecord{
            static_cast<TimeMs>(t),
            "user" + myName,
            "app" + myName,
            uniform01(myRng) < aParams.theReadProbability ? Access::Read
                                                          : Access::Write});
      }
      myNow   = myEnd;
      myState = 1 - myState;
    }
  }
  return TraceSet(std::move(myRecords), 0, aHorizon);
}

AppTrace wrapOffset(const AppTrace& aTrace, const TimeMs aOffset, const TimeMs aHorizon) {
  AppTrace ret{aTrace.theApp, {}, 0, std::max<TimeMs>(aHorizon, 0)};
  if (aTrace.theEvents.empty() or aHorizon <= 0) {
    return ret;
  }
  auto myStart  = aTrace.theStart;
  auto myPeriod = aTrace.thePeriod;
  if (myPeriod <= 0) {
    myStart  = aTrace.theEvents.front().theTime;
    myPeriod = aTrace.theEvents.back().theTime - myStart + 1;
  }
  const auto myShift = ((aOffset % myPeriod) + myPeriod) % myPeriod;
  for (const auto& e : aTrace.theEvents) {
    const auto myRel = e.theTime - myStart;
    if (myRel < 0 or myRel >= myPeriod) {
      continue;
    }
    for (auto t = (myRel + myShift) % myPeriod; t < aHorizon; t += myPeriod) {
      ret.theEvents.emplace_back(TraceEvent{t, e.theAccess});
    }
  }
  std::stable_sort(ret.theEvents.begin(),
                   ret.theEvents.end(),
                   [](const auto& lhs, const auto& rhs) { return lhs.theTime < rhs.theTime; });
  return ret;
}

} // namespace lambdamu
