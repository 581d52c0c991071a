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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "lambdamu/cli.h"
#include "lambdamu/sim.h"
#include "lambdamu/trace.h"

#include "oracles.h"

#include <fmt/core.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace lambdamu {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool        thePass = true;
  std::string theDetail;
};

double seconds(const Clock::time_point aStart) {
  return std::chrono::duration<double>(Clock::now() - aStart).count();
}

std::string fmtEstimate(const Estimate& aEstimate) {
  return fmt::format("{:.4f}+-{:.4f}", aEstimate.theMean, aEstimate.theCi);
}

//! aNext is not below aPrev beyond the two confidence intervals.
bool notBelow(const Estimate& aPrev, const Estimate& aNext) {
  return aNext.theMean + aNext.theCi >= aPrev.theMean - aPrev.theCi;
}

Outcome solverExactness() {
  std::mt19937_64 myRng(20260101);
  std::size_t     myMismatches = 0;
  for (int r = 0; r < 200; r++) {
    const auto myRandom = test::randomNetwork(myRng,
                                              1 + uniformIndex(myRng, 4),
                                              1 + uniformIndex(myRng, 3),
                                              8,
                                              10);
    // service rates multiple of 10 keep beta S integer, hence the enumeration
    // of the oracle small
    auto myEdges = myRandom->edges();
    for (auto& n : myEdges) {
      n.theServiceRate = Rational(10 * test::uniformInt(myRng, 1, 3));
    }
    const auto myNetwork = std::make_shared<const EdgeNetwork>(myRandom->cost(), myEdges);
    const Rational           myAlpha(test::uniformInt(myRng, 0, 8), 8);
    const Rational           myBeta(test::uniformInt(myRng, 1, 9), 10);
    const AllocationInstance myInstance(
        myNetwork,
        test::randomApps(myRng, *myNetwork, uniformIndex(myRng, 6), uniformIndex(myRng, 7), 4),
        myAlpha,
        myBeta);
    const auto mySolution = solveJoint(myInstance);
    if (mySolution.theMuCost != test::bruteMuCost(myInstance) or
        mySolution.theLambdaCost != test::bruteLambdaCost(myInstance, mySolution.theAssignment)) {
      myMismatches++;
    }
  }
  return {myMismatches == 0, fmt::format("{} mismatches on 200 instances", myMismatches)};
}

Outcome feasibility() {
  std::mt19937_64 myRng(20260102);
  std::size_t     myFailures = 0, myApps = 0;
  for (int r = 0; r < 1000; r++) {
    const auto myEdges   = 1 + uniformIndex(myRng, 20);
    const auto myNetwork = test::randomNetwork(myRng, 1 + uniformIndex(myRng, 10), myEdges, 16, 30);
    const auto myTotal   = uniformIndex(myRng, 101);
    const auto myMu      = uniformIndex(myRng, myTotal + 1);
    const AllocationInstance myInstance(
        myNetwork,
        test::randomApps(myRng, *myNetwork, myMu, myTotal - myMu, 5),
        Rational(test::uniformInt(myRng, 0, 8), 8),
        Rational(test::uniformInt(myRng, 1, 19), 20));
    myApps += myTotal;
    try {
      const auto mySolution = solveJoint(myInstance);
      if (not verify(myInstance, mySolution.theAssignment, mySolution.theWeights).empty()) {
        myFailures++;
      }
    } catch (const std::exception&) {
      myFailures++;
    }
  }
  return {myFailures == 0,
          fmt::format("{} infeasible of 1000 instances ({} apps in total)", myFailures, myApps)};
}

Outcome policyDominance() {
  std::mt19937_64    myRng(20260103);
  const PolicyParams p;
  std::size_t        myViolations = 0, myEnumerated = 0, myEnumerationMismatches = 0;
  for (int r = 0; r < 1000; r++) {
    const auto myTrace  = test::randomTrace(myRng, 1 + uniformIndex(myRng, 300));
    const auto myResult = evaluatePolicies(myTrace, p, 50);
    if (myResult.theOptimal > myResult.theLambdaOnly or
        myResult.theOptimal > myResult.theMuOnly or myResult.theOptimal > myResult.theHybrid) {
      myViolations++;
    }
  }
  for (int r = 0; r < 1000; r++) {
    const auto myTrace = test::randomTrace(myRng, 1 + uniformIndex(myRng, 12));
    myEnumerated++;
    if (optimalSchedule(myTrace, p).theTotalCost != test::bruteOptimalCost(myTrace, p)) {
      myEnumerationMismatches++;
    }
  }
  return {myViolations == 0 and myEnumerationMismatches == 0,
          fmt::format("{} dominance violations on 1000 traces, {} of {} short traces differ "
                      "from enumeration",
                      myViolations,
                      myEnumerationMismatches,
                      myEnumerated)};
}

Outcome hybridBenefit() {
  const auto   myTraces = synthTrace(42, 200, 24 * 3'600'000);
  PolicyParams p;
  p.theXiLambda   = Money(3, 5);
  p.theSigmaRead  = Money(2, 5);
  p.theSigmaWrite = Money(5);
  p.theTauLambda  = Money(12);
  p.theTauMu      = Money(12);
  p.theOmegaMu    = Money(63, 10'000'000);

  std::vector<std::pair<const AppTrace*, PolicyResult>> myResults;
  for (const auto& [myName, myTrace] : myTraces.perApp()) {
    myResults.emplace_back(&myTrace, PolicyResult());
  }
  parallelFor(myResults.size(), [&](const std::size_t k) {
    myResults[k].second = evaluatePolicies(*myResults[k].first, p, 50);
  });
  std::size_t myBoth = 0, myDominated = 0;
  for (const auto& [myTrace, r] : myResults) {
    myBoth += r.theLambdaOnly >= r.theHybrid and r.theMuOnly >= r.theHybrid ? 1 : 0;
    myDominated += r.theOptimal > r.theLambdaOnly or r.theOptimal > r.theMuOnly ? 1 : 0;
  }
  const double myShare = static_cast<double>(myBoth) / static_cast<double>(myResults.size());
  return {myResults.size() == 200 and myShare >= 0.8 and myDominated == 0,
          fmt::format("{} apps, both ratios >= 1 for {:.1f}%, optimal above a constant policy "
                      "for {} apps, read share {:.3f}",
                      myResults.size(),
                      100 * myShare,
                      myDominated,
                      myTraces.readShare())};
}

std::shared_ptr<const EdgeNetwork> deskNetwork() {
  return EdgeNetwork::fromTopology(
      generateTopology(1, 8, 6, 2, NodeCaps{4, Rational(10)}, NodeCaps{8, Rational(20)}));
}

Outcome snapshotTrends() {
  const std::vector<Rational> myAlphas{Rational(0), Rational(2, 8), Rational(4, 8), Rational(6, 8)};
  const std::vector<Rational> myBetas{
      Rational(3, 10), Rational(5, 10), Rational(7, 10), Rational(9, 10)};
  SnapshotConfig myConfig;
  myConfig.theNetwork        = deskNetwork();
  myConfig.theMeanLambdaApps = 20;
  myConfig.theReplications   = 500;
  myConfig.theSeed           = 2026;

  bool                     myPass = true;
  std::vector<std::string> myIssues;
  std::string              myTable;
  for (const double myMu : {10.0, 20.0}) {
    myConfig.theMeanMuApps = myMu;
    for (const auto& myBeta : myBetas) {
      myConfig.theBeta = myBeta;
      std::vector<SnapshotMetrics> myRow;
      for (const auto& myAlpha : myAlphas) {
        myConfig.theAlpha = myAlpha;
        myRow.emplace_back(runSnapshot(myConfig));
        if (myRow.back().theFailures > 0) {
          myPass = false;
          myIssues.emplace_back(fmt::format("failures at mu={} beta={} alpha={}",
                                            myMu,
                                            toString(myBeta),
                                            toString(myAlpha)));
        }
      }
      // exactly 1 at alpha = 0, replication by replication
      for (const auto& r : myRow.front().theReplications) {
        if (r.theMuCloudFraction and *r.theMuCloudFraction != 1.0) {
          myPass = false;
          myIssues.emplace_back("cloud fraction below 1 at alpha 0");
          break;
        }
      }
      if (myRow.front().theMuCloudFraction.theMean != 1.0) {
        myPass = false;
        myIssues.emplace_back(fmt::format("mean cloud fraction {} at alpha 0",
                                          myRow.front().theMuCloudFraction.theMean));
      }
      for (std::size_t a = 1; a < myRow.size(); a++) {
        if (not notBelow(myRow[a - 1].theLambdaCost, myRow[a].theLambdaCost)) {
          myPass = false;
          myIssues.emplace_back(fmt::format("lambda cost decreases at mu={} beta={} alpha={}",
                                            myMu,
                                            toString(myBeta),
                                            toString(myAlphas[a])));
        }
        if (not notBelow(myRow[a].theMuCloudFraction, myRow[a - 1].theMuCloudFraction)) {
          myPass = false;
          myIssues.emplace_back(fmt::format("cloud fraction increases at mu={} beta={} alpha={}",
                                            myMu,
                                            toString(myBeta),
                                            toString(myAlphas[a])));
        }
      }
      myTable += fmt::format("\n    mu={:>2} beta={:<5} lambda", myMu, toString(myBeta));
      for (const auto& m : myRow) {
        myTable += " " + fmtEstimate(m.theLambdaCost);
      }
      myTable += " | cloud";
      for (const auto& m : myRow) {
        myTable += fmt::format(" {:.3f}", m.theMuCloudFraction.theMean);
      }
    }
  }
  std::string myDetail = myIssues.empty() ? "32 grid points, trends hold" : myIssues.front();
  if (myIssues.size() > 1) {
    myDetail += fmt::format(" (and {} more)", myIssues.size() - 1);
  }
  return {myPass, myDetail + myTable};
}

Outcome dynamicTrends() {
  std::vector<AppTrace> myTraces;
  const auto            mySet = synthTrace(7, 200, 24 * 3'600'000);
  for (const auto& [myName, myTrace] : mySet.perApp()) {
    myTraces.emplace_back(myTrace);
  }
  DynamicConfig myConfig;
  myConfig.theNetwork      = deskNetwork();
  myConfig.theSimTime      = 2 * 3'600'000;
  myConfig.theTraces       = myTraces;
  myConfig.theReplications = 200;
  myConfig.theSeed         = 2026;

  bool                     myPass = true;
  std::vector<std::string> myIssues;
  std::string              myTable;
  for (const double myApps : {20.0, 40.0}) {
    myConfig.theMeanApps = myApps;
    std::vector<DynamicMetrics> myRow;
    for (const TimeMs myMinutes : {1, 5, 15, 30}) {
      myConfig.theEpoch = myMinutes * 60'000;
      myRow.emplace_back(runDynamic(myConfig));
      if (myRow.back().theFailures > 0) {
        myPass = false;
        myIssues.emplace_back(fmt::format("failures at apps={} epoch={}", myApps, myMinutes));
      }
    }
    const std::vector<TimeMs> myMinutes{1, 5, 15, 30};
    for (std::size_t e = 1; e < myRow.size(); e++) {
      if (not notBelow(myRow[e - 1].theLambdaCost, myRow[e].theLambdaCost)) {
        myPass = false;
        myIssues.emplace_back(
            fmt::format("lambda cost decreases at apps={} epoch={}", myApps, myMinutes[e]));
      }
      if (not notBelow(myRow[e].theMigrationsPerHour, myRow[e - 1].theMigrationsPerHour)) {
        myPass = false;
        myIssues.emplace_back(
            fmt::format("migrations/hour increase at apps={} epoch={}", myApps, myMinutes[e]));
      }
      if (not notBelow(myRow[e - 1].theMuCost, myRow[e].theMuCost)) {
        myPass = false;
        myIssues.emplace_back(
            fmt::format("mu cost decreases at apps={} epoch={}", myApps, myMinutes[e]));
      }
    }
    myTable += fmt::format("\n    apps={:>2} lambda", myApps);
    for (const auto& m : myRow) {
      myTable += " " + fmtEstimate(m.theLambdaCost);
    }
    myTable += " | mu";
    for (const auto& m : myRow) {
      myTable += " " + fmtEstimate(m.theMuCost);
    }
    myTable += " | migrations/h";
    for (const auto& m : myRow) {
      myTable += " " + fmtEstimate(m.theMigrationsPerHour);
    }
  }
  std::string myDetail = myIssues.empty() ? "8 sweep points, trends hold" : myIssues.front();
  if (myIssues.size() > 1) {
    myDetail += fmt::format(" (and {} more)", myIssues.size() - 1);
  }
  return {myPass, myDetail + myTable};
}

Outcome determinism() {
  namespace fs   = std::filesystem;
  const auto myRoot = fs::temp_directory_path() / "lambdamu_acceptance";
  fs::remove_all(myRoot);
  fs::create_directories(myRoot);
  const auto myPath = [&](const std::string& aName) { return (myRoot / aName).string(); };
  const auto mySlurp = [](const fs::path& aPath) {
    std::ifstream     myStream(aPath);
    std::stringstream ret;
    ret << myStream.rdbuf();
    return ret.str();
  };
  const auto myRun = [](std::vector<std::string> aArgs) {
    aArgs.insert(aArgs.begin(), "lambdamu");
    std::stringstream myOut, myErr;
    return runCli(aArgs, myOut, myErr);
  };

  std::vector<std::vector<std::string>> myCommands{
      {"trace", "gen", "--seed", "3", "--apps", "15", "--hours", "2", "--out", "@/trace.csv"},
      {"topology", "gen", "--seed", "3", "--out", "@/topology.txt"},
      {"policy", "--trace", "#trace.csv", "--out", "@"},
      {"snapshot", "--topology", "#topology.txt", "--alpha", "0", "1/2", "--mu-apps", "10", "20",
       "--replications", "30", "--out", "@"},
      {"dynamic", "--topology", "#topology.txt", "--trace", "#trace.csv", "--apps", "10",
       "--epoch-mins", "5", "30", "--replications", "5", "--out", "@"},
  };
  std::size_t myFiles = 0;
  for (const auto& myCommand : myCommands) {
    std::vector<std::string> myDirs;
    for (const std::string myCopy : {"first", "second"}) {
      const auto myDir = myRoot / (myCommand[0] + "_" + myCopy);
      fs::create_directories(myDir);
      auto myArgs = myCommand;
      for (auto& myArg : myArgs) {
        if (myArg.rfind("@", 0) == 0) {
          myArg = myDir.string() + myArg.substr(1);
        } else if (myArg.rfind("#", 0) == 0) {
          // inputs come from the first run of the generators
          myArg = myPath(myArg == "#trace.csv" ? "trace_first/trace.csv"
                                               : "topology_first/topology.txt");
        }
      }
      if (myRun(myArgs) != 0) {
        return {false, fmt::format("'{}' failed", myCommand[0])};
      }
      myDirs.emplace_back(myDir.string());
    }
    for (const auto& myEntry : fs::directory_iterator(myDirs[0])) {
      const auto myName = myEntry.path().filename().string();
      if (myName == "manifest.json") {
        continue; // records the output directory
      }
      myFiles++;
      if (mySlurp(myEntry.path()) != mySlurp(fs::path(myDirs[1]) / myName)) {
        return {false, fmt::format("{} differs between reruns of '{}'", myName, myCommand[0])};
      }
    }
  }
  fs::remove_all(myRoot);
  return {true, fmt::format("{} output files byte-identical across 5 subcommands", myFiles)};
}

} // namespace
} // namespace lambdamu

int main() {
  using namespace lambdamu;
  struct Criterion {
    std::string              theName;
    double                   theLimit; //!< seconds, 0 for none
    std::function<Outcome()> theCheck;
  };
  const std::vector<Criterion> myCriteria{
      {"1 solver exactness vs brute force", 60, solverExactness},
      {"2 constraint feasibility", 120, feasibility},
      {"3 policy oracle dominance", 60, policyDominance},
      {"4 hybrid benefit on synthetic traces", 0, hybridBenefit},
      {"5 snapshot trends", 300, snapshotTrends},
      {"6 dynamic trends", 600, dynamicTrends},
      {"7 determinism of reruns", 0, determinism},
  };
  std::cout << "worker threads: " << workerThreads() << std::endl;
  int ret = 0;
  for (const auto& c : myCriteria) {
    const auto myStart = Clock::now();
    Outcome    myOutcome;
    try {
      myOutcome = c.theCheck();
    } catch (const std::exception& aErr) {
      myOutcome = {false, std::string("exception: ") + aErr.what()};
    }
    const auto myElapsed = seconds(myStart);
    if (c.theLimit > 0 and myElapsed > c.theLimit) {
      myOutcome.thePass = false;
      myOutcome.theDetail += fmt::format(" (over the {:.0f} s limit)", c.theLimit);
    }
    std::cout << fmt::format("{} criterion {} [{:.1f} s]: {}",
                             myOutcome.thePass ? "PASS" : "FAIL",
                             c.theName,
                             myElapsed,
                             myOutcome.theDetail)
              << std::endl;
    ret |= myOutcome.thePass ? 0 : 1;
  }
  return ret;
}
