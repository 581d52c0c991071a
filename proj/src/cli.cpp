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

#include "lambdamu/cli.h"

#include "lambdamu/allocation.h"
#include "lambdamu/instanceio.h"
#include "lambdamu/policy.h"
#include "lambdamu/sim.h"
#include "lambdamu/topology.h"
#include "lambdamu/trace.h"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace lambdamu {

namespace {

using Json = nlohmann::ordered_json;

//! Bad flags or inputs, exit status 2.
struct UsageError : public std::runtime_error {
  explicit UsageError(const std::string& aWhat)
      : std::runtime_error(aWhat) {
  }
};

//! Some replication failed, exit status 1.
struct SolverFailure : public std::runtime_error {
  explicit SolverFailure(const std::string& aWhat)
      : std::runtime_error(aWhat) {
  }
};

std::string num(const double aValue) {
  return std::isfinite(aValue) ? fmt::format("{}", aValue) : std::string();
}

std::string num(const std::optional<double>& aValue) {
  return aValue ? num(*aValue) : std::string();
}

std::string num(const Rational& aValue) {
  return num(toDouble(aValue));
}

std::vector<Rational> rationals(const std::vector<std::string>& aValues,
                                const std::string&              aFlag) {
  std::vector<Rational> ret;
  for (const auto& myValue : aValues) {
    try {
      ret.emplace_back(parseRational(myValue));
    } catch (const std::exception&) {
      throw UsageError("invalid value '" + myValue + "' for " + aFlag);
    }
  }
  if (ret.empty()) {
    throw UsageError("empty list for " + aFlag);
  }
  return ret;
}

std::vector<double> reals(const std::vector<std::string>& aValues,
                          const std::string&              aFlag) {
  std::vector<double> ret;
  for (const auto& myValue : rationals(aValues, aFlag)) {
    if (myValue < 0) {
      throw UsageError("negative value in " + aFlag);
    }
    ret.emplace_back(toDouble(myValue));
  }
  return ret;
}

std::ifstream openInput(const std::string& aPath) {
  std::ifstream ret(aPath);
  if (not ret) {
    throw UsageError("cannot read '" + aPath + "'");
  }
  return ret;
}

std::ofstream openOutput(const std::filesystem::path& aPath) {
  std::ofstream ret(aPath);
  if (not ret) {
    throw UsageError("cannot write '" + aPath.string() + "'");
  }
  return ret;
}

std::filesystem::path outputDir(const std::string& aDir) {
  std::error_code myErr;
  std::filesystem::create_directories(aDir, myErr);
  if (myErr) {
    throw UsageError("cannot create '" + aDir + "': " + myErr.message());
  }
  return aDir;
}

struct NetworkFlags {
  std::string theTopology;
  std::string theGen;

  void add(CLI::App& aApp) {
    auto myFile = aApp.add_option("--topology", theTopology, "Topology file");
    aApp.add_option("--gen", theGen, "Generate a topology: seed,brokers,far,near")
        ->excludes(myFile);
  }

  Topology topology() const {
    if (not theTopology.empty()) {
      auto myStream = openInput(theTopology);
      return loadTopology(myStream);
    }
    if (theGen.empty()) {
      throw UsageError("one of --topology or --gen is required");
    }
    std::vector<std::int64_t> myValues;
    std::stringstream         myStream(theGen);
    std::string               myToken;
    while (std::getline(myStream, myToken, ',')) {
      try {
        myValues.emplace_back(std::stoll(myToken));
      } catch (const std::exception&) {
        throw UsageError("invalid --gen value '" + theGen + "'");
      }
    }
    if (myValues.size() != 4 or myValues[1] <= 0 or myValues[2] <= 0 or
        myValues[3] <= 0) {
      throw UsageError("--gen expects seed,brokers,far,near with positive counts");
    }
    return generateTopology(static_cast<std::uint64_t>(myValues[0]),
                            static_cast<std::size_t>(myValues[1]),
                            static_cast<std::size_t>(myValues[2]),
                            static_cast<std::size_t>(myValues[3]),
                            NodeCaps{4, Rational(10)},
                            NodeCaps{8, Rational(20)});
  }

  void describe(Json& aManifest) const {
    if (not theTopology.empty()) {
      aManifest["inputs"].push_back(theTopology);
      aManifest["parameters"]["topology"] = theTopology;
    } else {
      aManifest["parameters"]["gen"] = theGen;
    }
  }
};

struct TraceFlags {
  std::string theTrace;
  std::string theFormat = "canonical";

  void add(CLI::App& aApp) {
    aApp.add_option("--trace", theTrace, "Invocation trace (CSV)");
    aApp.add_option("--dataset-format",
                    theFormat,
                    "canonical (timestamp_ms,user,app,access) or azure2020")
        ->capture_default_str();
  }

  TraceSet load() const {
    if (theTrace.empty()) {
      throw UsageError("--trace is required");
    }
    DatasetFormat myFormat;
    try {
      myFormat = datasetFormatFromString(theFormat);
    } catch (const std::invalid_argument& aErr) {
      throw UsageError(aErr.what());
    }
    auto myStream = openInput(theTrace);
    return parseTrace(myStream, myFormat);
  }

  void describe(Json& aManifest) const {
    aManifest["inputs"].push_back(theTrace);
    aManifest["parameters"]["trace"]          = theTrace;
    aManifest["parameters"]["dataset_format"] = theFormat;
  }
};

struct PolicyFlags {
  std::string theParams;
  std::size_t theLookahead = 50;

  void add(CLI::App& aApp) {
    aApp.add_option("--params", theParams, "Cost parameters file (key=value)");
    aApp.add_option("--lookahead", theLookahead, "Look-ahead window in invocations")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  PolicyParams load(Json& aManifest) const {
    PolicyParams ret;
    aManifest["parameters"]["policy_overrides"] = Json::array();
    if (not theParams.empty()) {
      auto myStream = openInput(theParams);
      for (const auto& myKey : loadParams(myStream, ret)) {
        aManifest["parameters"]["policy_overrides"].push_back(myKey);
      }
      aManifest["inputs"].push_back(theParams);
    }
    for (const auto& [myKey, myValue] : ret.toMap()) {
      aManifest["parameters"]["policy"][myKey] = myValue;
    }
    aManifest["parameters"]["lookahead"] = theLookahead;
    return ret;
  }
};

void writeManifest(const std::filesystem::path& aDir, const Json& aManifest) {
  auto myStream = openOutput(aDir / "manifest.json");
  myStream << aManifest.dump(2) << '\n';
}

////////////////////////////////////////////////////////////////////////////////
// subcommands

void policyCommand(const TraceFlags&  aTrace,
                   const PolicyFlags& aPolicy,
                   const std::string& aOut,
                   Json&              aManifest,
                   std::ostream&      aStdout) {
  aTrace.describe(aManifest);
  const auto myParams = aPolicy.load(aManifest);
  const auto myTraces = aTrace.load();
  if (myTraces.perApp().empty()) {
    throw UsageError("empty trace set");
  }
  const auto myDir = outputDir(aOut);

  std::vector<std::pair<std::string, PolicyResult>> myResults;
  for (const auto& [myName, myTrace] : myTraces.perApp()) {
    myResults.emplace_back(myName, PolicyResult());
  }
  parallelFor(myResults.size(), [&](const std::size_t k) {
    myResults[k].second = evaluatePolicies(
        myTraces.perApp().at(myResults[k].first), myParams, aPolicy.theLookahead);
  });

  auto myApps   = openOutput(myDir / "policy_apps.csv");
  auto myRatios = openOutput(myDir / "policy_ratios.csv");
  myApps << "app,cost_lambda,cost_mu,cost_hybrid,cost_optimal,migrations\n";
  myRatios << "app,ratio_lambda,ratio_mu\n";
  std::size_t myLambdaAbove = 0, myMuAbove = 0, myBoth = 0;
  for (const auto& [myName, r] : myResults) {
    myApps << myName << ',' << num(r.theLambdaOnly) << ',' << num(r.theMuOnly) << ','
           << num(r.theHybrid) << ',' << num(r.theOptimal) << ',' << r.theMigrations
           << '\n';
    const auto myRatio = [&](const Rational& aCost) -> std::optional<double> {
      if (r.theHybrid == Rational(0)) {
        return std::nullopt;
      }
      return toDouble(aCost / r.theHybrid);
    };
    myRatios << myName << ',' << num(myRatio(r.theLambdaOnly)) << ','
             << num(myRatio(r.theMuOnly)) << '\n';
    myLambdaAbove += r.theLambdaOnly >= r.theHybrid ? 1 : 0;
    myMuAbove += r.theMuOnly >= r.theHybrid ? 1 : 0;
    myBoth += r.theLambdaOnly >= r.theHybrid and r.theMuOnly >= r.theHybrid ? 1 : 0;
  }
  const double n        = static_cast<double>(myResults.size());
  auto         mySummary = openOutput(myDir / "policy_summary.csv");
  mySummary << "metric,value\n"
            << "apps," << myResults.size() << '\n'
            << "invocations," << myTraces.records().size() << '\n'
            << "read_share," << num(myTraces.readShare()) << '\n'
            << "fraction_ratio_lambda_ge_1," << num(myLambdaAbove / n) << '\n'
            << "fraction_ratio_mu_ge_1," << num(myMuAbove / n) << '\n'
            << "fraction_both_ratios_ge_1," << num(myBoth / n) << '\n';
  writeManifest(myDir, aManifest);
  aStdout << fmt::format("{} apps, {} invocations, both ratios >= 1 for {} apps\n",
                         myResults.size(),
                         myTraces.records().size(),
                         myBoth);
}

struct SweepFlags {
  std::vector<std::string> theAlpha{"1/2"};
  std::vector<std::string> theBeta{"1/2"};
  std::size_t              theReplications = 100;
  std::uint64_t            theSeed         = 1;

  void add(CLI::App& aApp) {
    aApp.add_option("--alpha", theAlpha, "Fractions of containers usable by mu-apps")
        ->delimiter(',')
        ->capture_default_str();
    aApp.add_option("--beta", theBeta, "Over-provisioning factors")
        ->delimiter(',')
        ->capture_default_str();
    aApp.add_option("--replications", theReplications, "Replications per point")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    aApp.add_option("--seed", theSeed, "Random seed")->capture_default_str();
  }

  void describe(Json& aManifest) const {
    aManifest["seed"]                        = theSeed;
    aManifest["parameters"]["alpha"]         = theAlpha;
    aManifest["parameters"]["beta"]          = theBeta;
    aManifest["parameters"]["replications"]  = theReplications;
  }
};

void snapshotCommand(const NetworkFlags&             aNetwork,
                     const SweepFlags&               aSweep,
                     const std::vector<std::string>& aLambdaApps,
                     const std::vector<std::string>& aMuApps,
                     const std::string&              aOut,
                     Json&                           aManifest,
                     std::ostream&                   aStdout) {
  aNetwork.describe(aManifest);
  aSweep.describe(aManifest);
  aManifest["parameters"]["lambda_apps"] = aLambdaApps;
  aManifest["parameters"]["mu_apps"]     = aMuApps;
  const auto myAlphas  = rationals(aSweep.theAlpha, "--alpha");
  const auto myBetas   = rationals(aSweep.theBeta, "--beta");
  const auto myLambdas = reals(aLambdaApps, "--lambda-apps");
  const auto myMus     = reals(aMuApps, "--mu-apps");
  for (const auto& a : myAlphas) {
    if (a < 0 or a > 1) {
      throw UsageError("alpha must be in [0,1]");
    }
  }
  for (const auto& b : myBetas) {
    if (b <= 0 or b >= 1) {
      throw UsageError("beta must be in (0,1)");
    }
  }
  const auto myNetwork = EdgeNetwork::fromTopology(aNetwork.topology());
  const auto myDir     = outputDir(aOut);

  auto myReps    = openOutput(myDir / "snapshot_replications.csv");
  auto mySummary = openOutput(myDir / "snapshot_summary.csv");
  myReps << "lambda_apps_mean,mu_apps_mean,alpha,beta,replication,lambda_apps,mu_apps,"
            "lambda_cost,mu_cost,mu_cloud_fraction,error\n";
  mySummary << "lambda_apps_mean,mu_apps_mean,alpha,beta,lambda_cost,lambda_cost_ci,"
               "lambda_cost_samples,mu_cost,mu_cost_ci,mu_cloud_fraction,"
               "mu_cloud_fraction_ci,mu_samples,failures\n";
  std::size_t myFailures = 0;
  for (const auto myLambda : myLambdas) {
    for (const auto myMu : myMus) {
      for (const auto& myAlpha : myAlphas) {
        for (const auto& myBeta : myBetas) {
          SnapshotConfig myConfig{myNetwork,
                                  myLambda,
                                  myMu,
                                  myAlpha,
                                  myBeta,
                                  aSweep.theReplications,
                                  aSweep.theSeed};
          const auto m = runSnapshot(myConfig);
          const auto myKey =
              fmt::format("{},{},{},{}", num(myLambda), num(myMu), toString(myAlpha),
                          toString(myBeta));
          for (std::size_t k = 0; k < m.theReplications.size(); k++) {
            const auto& r = m.theReplications[k];
            myReps << myKey << ',' << k << ',' << r.theLambdaApps << ',' << r.theMuApps
                   << ',' << num(r.theLambdaCost) << ',' << num(r.theMuCost) << ','
                   << num(r.theMuCloudFraction) << ',' << (r.theError.empty() ? "" : "1")
                   << '\n';
          }
          mySummary << myKey << ',' << num(m.theLambdaCost.theMean) << ','
                    << num(m.theLambdaCost.theCi) << ',' << m.theLambdaCost.theCount
                    << ',' << num(m.theMuCost.theMean) << ',' << num(m.theMuCost.theCi)
                    << ',' << num(m.theMuCloudFraction.theMean) << ','
                    << num(m.theMuCloudFraction.theCi) << ','
                    << m.theMuCloudFraction.theCount << ',' << m.theFailures << '\n';
          myFailures += m.theFailures;
        }
      }
    }
  }
  writeManifest(myDir, aManifest);
  if (myFailures > 0) {
    throw SolverFailure(fmt::format("{} replications failed", myFailures));
  }
  aStdout << "snapshot sweep completed\n";
}

void dynamicCommand(const NetworkFlags&             aNetwork,
                    const TraceFlags&               aTrace,
                    const PolicyFlags&              aPolicy,
                    const SweepFlags&               aSweep,
                    const std::vector<std::string>& aApps,
                    const std::vector<std::string>& aEpochs,
                    const double                    aHours,
                    const std::string&              aPattern,
                    const std::string&              aOut,
                    Json&                           aManifest,
                    std::ostream&                   aStdout) {
  aNetwork.describe(aManifest);
  aTrace.describe(aManifest);
  aSweep.describe(aManifest);
  aManifest["parameters"]["apps"]       = aApps;
  aManifest["parameters"]["epoch_mins"] = aEpochs;
  aManifest["parameters"]["sim_hours"]  = aHours;
  aManifest["parameters"]["pattern"]    = aPattern;
  const auto myParams = aPolicy.load(aManifest);
  const auto myAlphas = rationals(aSweep.theAlpha, "--alpha");
  const auto myBetas  = rationals(aSweep.theBeta, "--beta");
  const auto myApps   = reals(aApps, "--apps");
  const auto myEpochs = reals(aEpochs, "--epoch-mins");
  const auto mySim    = static_cast<TimeMs>(std::llround(aHours * 3'600'000));
  if (mySim <= 0) {
    throw UsageError("--sim-hours must be positive");
  }
  for (const auto e : myEpochs) {
    if (std::llround(e * 60'000) <= 0) {
      throw UsageError("epoch durations must be positive");
    }
  }
  if (aPattern != "dp" and aPattern != "heuristic") {
    throw UsageError("--pattern must be dp or heuristic");
  }
  const auto myTraceSet = aTrace.load();
  if (myTraceSet.perApp().empty()) {
    throw UsageError("empty trace set");
  }
  std::vector<AppTrace> myTraces;
  for (const auto& [myName, myTrace] : myTraceSet.perApp()) {
    myTraces.emplace_back(myTrace);
  }
  const auto myNetwork = EdgeNetwork::fromTopology(aNetwork.topology());
  const auto myDir     = outputDir(aOut);

  auto myRows    = openOutput(myDir / "dynamic_epochs.csv");
  auto mySummary = openOutput(myDir / "dynamic_summary.csv");
  myRows << "apps_mean,epoch_min,alpha,beta,replication,epoch,start_ms,end_ms,warmup,"
            "lambda_apps,mu_apps,lambda_cost,mu_cost,mu_cloud_fraction,migrations\n";
  mySummary << "apps_mean,epoch_min,alpha,beta,lambda_cost,lambda_cost_ci,mu_cost,"
               "mu_cost_ci,mu_cloud_fraction,mu_cloud_fraction_ci,migrations_per_hour,"
               "migrations_per_hour_ci,samples,failures\n";
  std::size_t myFailures = 0;
  for (const auto myMean : myApps) {
    for (const auto myEpoch : myEpochs) {
      for (const auto& myAlpha : myAlphas) {
        for (const auto& myBeta : myBetas) {
          DynamicConfig myConfig;
          myConfig.theNetwork      = myNetwork;
          myConfig.theMeanApps     = myMean;
          myConfig.theEpoch        = std::llround(myEpoch * 60'000);
          myConfig.theSimTime      = mySim;
          myConfig.theTraces       = myTraces;
          myConfig.thePolicy       = myParams;
          myConfig.theLookahead    = aPolicy.theLookahead;
          myConfig.thePattern      = aPattern == "dp" ? PatternSource::Optimal
                                                      : PatternSource::Heuristic;
          myConfig.theAlpha        = myAlpha;
          myConfig.theBeta         = myBeta;
          myConfig.theReplications = aSweep.theReplications;
          myConfig.theSeed         = aSweep.theSeed;
          const auto m             = runDynamic(myConfig);
          const auto myKey         = fmt::format(
              "{},{},{},{}", num(myMean), num(myEpoch), toString(myAlpha), toString(myBeta));
          for (const auto& r : m.theEpochs) {
            myRows << myKey << ',' << r.theReplication << ',' << r.theEpoch << ','
                   << r.theStart << ',' << r.theEnd << ',' << (r.theWarmup ? 1 : 0) << ','
                   << num(r.theLambdaApps) << ',' << num(r.theMuApps) << ','
                   << num(r.theLambdaCost) << ',' << num(r.theMuCost) << ','
                   << num(r.theMuCloudFraction) << ',' << r.theMigrations << '\n';
          }
          mySummary << myKey << ',' << num(m.theLambdaCost.theMean) << ','
                    << num(m.theLambdaCost.theCi) << ',' << num(m.theMuCost.theMean)
                    << ',' << num(m.theMuCost.theCi) << ','
                    << num(m.theMuCloudFraction.theMean) << ','
                    << num(m.theMuCloudFraction.theCi) << ','
                    << num(m.theMigrationsPerHour.theMean) << ','
                    << num(m.theMigrationsPerHour.theCi) << ','
                    << m.theMigrationsPerHour.theCount << ',' << m.theFailures << '\n';
          myFailures += m.theFailures;
        }
      }
    }
  }
  writeManifest(myDir, aManifest);
  if (myFailures > 0) {
    throw SolverFailure(fmt::format("{} replications failed", myFailures));
  }
  aStdout << "dynamic sweep completed\n";
}

void inspectCommand(const std::string& aFile, std::ostream& aStdout) {
  auto       myStream   = openInput(aFile);
  const auto myTopology = loadTopology(myStream);
  try {
    const auto myCost = computeCostMatrix(myTopology);
    aStdout << fmt::format("{} brokers, {} edge nodes, {} devices\n",
                           myTopology.brokers().size(),
                           myTopology.edgeNodes().size(),
                           myTopology.devices().size())
            << toString(myCost);
  } catch (const ConnectivityError& aErr) {
    std::string myPairs;
    for (const auto& [myBroker, myNode] : aErr.theUnreachable) {
      myPairs += fmt::format(" {}->{}", myBroker, myNode);
    }
    throw UsageError("disconnected topology, unreachable broker->node pairs:" + myPairs);
  }
}

} // namespace

int runCli(const std::vector<std::string>& aArgs, std::ostream& aStdout, std::ostream& aStderr) {
  CLI::App myApp("Joint allocation of stateless and stateful FaaS containers at the edge. "
                 "LAMBDAMU_THREADS sets the number of worker threads.",
                 "lambdamu");
  myApp.set_version_flag("--version", VERSION);
  myApp.require_subcommand(1);

  std::string myOut = "out";

  // policy
  auto        myPolicyCmd = myApp.add_subcommand("policy", "Cost of the mode selection policies per app");
  TraceFlags  myPolicyTrace;
  PolicyFlags myPolicyFlags;
  myPolicyTrace.add(*myPolicyCmd);
  myPolicyFlags.add(*myPolicyCmd);
  myPolicyCmd->add_option("--out", myOut, "Output directory")->capture_default_str();

  // snapshot
  auto                     mySnapshotCmd = myApp.add_subcommand("snapshot", "Monte Carlo snapshot sweep");
  NetworkFlags             mySnapshotNet;
  SweepFlags               mySnapshotSweep;
  std::vector<std::string> myLambdaApps{"20"}, myMuApps{"20"};
  mySnapshotNet.add(*mySnapshotCmd);
  mySnapshotSweep.add(*mySnapshotCmd);
  mySnapshotCmd->add_option("--lambda-apps", myLambdaApps, "Mean numbers of lambda-apps")
      ->delimiter(',')
      ->capture_default_str();
  mySnapshotCmd->add_option("--mu-apps", myMuApps, "Mean numbers of mu-apps")
      ->delimiter(',')
      ->capture_default_str();
  mySnapshotCmd->add_option("--out", myOut, "Output directory")->capture_default_str();

  // dynamic
  auto                     myDynamicCmd = myApp.add_subcommand("dynamic", "Trace-driven simulation with epochs");
  NetworkFlags             myDynamicNet;
  TraceFlags               myDynamicTrace;
  PolicyFlags              myDynamicPolicy;
  SweepFlags               myDynamicSweep;
  std::vector<std::string> myApps{"20"}, myEpochs{"1"};
  double                   myHours   = 2;
  std::string              myPattern = "dp";
  myDynamicSweep.theReplications     = 10;
  myDynamicNet.add(*myDynamicCmd);
  myDynamicTrace.add(*myDynamicCmd);
  myDynamicPolicy.add(*myDynamicCmd);
  myDynamicSweep.add(*myDynamicCmd);
  myDynamicCmd->add_option("--apps", myApps, "Mean numbers of apps")
      ->delimiter(',')
      ->capture_default_str();
  myDynamicCmd->add_option("--epoch-mins", myEpochs, "Epoch durations in minutes")
      ->delimiter(',')
      ->capture_default_str();
  myDynamicCmd->add_option("--sim-hours", myHours, "Simulated time per replication")
      ->capture_default_str();
  myDynamicCmd->add_option("--pattern", myPattern, "Mode patterns: dp or heuristic")
      ->capture_default_str();
  myDynamicCmd->add_option("--out", myOut, "Output directory")->capture_default_str();

  // topology
  auto myTopologyCmd = myApp.add_subcommand("topology", "Generate or inspect topologies");
  myTopologyCmd->require_subcommand(1);
  auto          myGenCmd = myTopologyCmd->add_subcommand("gen", "Generate a random topology");
  std::uint64_t myTopoSeed = 1;
  std::size_t   myBrokers = 8, myFar = 6, myNear = 2;
  std::string   myTopoOut;
  myGenCmd->add_option("--seed", myTopoSeed, "Random seed")->capture_default_str();
  myGenCmd->add_option("--brokers", myBrokers, "Brokers")->capture_default_str()->check(CLI::PositiveNumber);
  myGenCmd->add_option("--far", myFar, "Far-edge nodes")->capture_default_str()->check(CLI::PositiveNumber);
  myGenCmd->add_option("--near", myNear, "Near-edge nodes")->capture_default_str()->check(CLI::PositiveNumber);
  myGenCmd->add_option("--out", myTopoOut, "Output file, standard output if omitted");
  auto        myInspectCmd = myTopologyCmd->add_subcommand("inspect", "Validate a topology and print its cost matrix");
  std::string myInspectFile;
  myInspectCmd->add_option("file", myInspectFile, "Topology file")->required();

  // trace
  auto myTraceCmd = myApp.add_subcommand("trace", "Synthetic traces");
  myTraceCmd->require_subcommand(1);
  auto          myTraceGenCmd = myTraceCmd->add_subcommand("gen", "Generate a bursty/idle synthetic trace");
  std::uint64_t myTraceSeed   = 1;
  std::size_t   myTraceApps   = 10;
  double        myTraceHours  = 24;
  SynthParams   mySynth;
  std::string   myTraceOut;
  myTraceGenCmd->add_option("--seed", myTraceSeed, "Random seed")->capture_default_str();
  myTraceGenCmd->add_option("--apps", myTraceApps, "Apps")->capture_default_str()->check(CLI::PositiveNumber);
  myTraceGenCmd->add_option("--hours", myTraceHours, "Horizon")->capture_default_str();
  myTraceGenCmd->add_option("--burst-rate", mySynth.theBurstRate, "Invocations per minute in bursts")->capture_default_str();
  myTraceGenCmd->add_option("--idle-ratio", mySynth.theIdleRatio, "Burst rate over idle rate")->capture_default_str();
  myTraceGenCmd->add_option("--burst-mins", mySynth.theMeanBurstMinutes, "Mean burst duration")->capture_default_str();
  myTraceGenCmd->add_option("--idle-mins", mySynth.theMeanIdleMinutes, "Mean idle duration")->capture_default_str();
  myTraceGenCmd->add_option("--spread", mySynth.theRateSpreadDecades, "Per-app rate spread in decades")->capture_default_str();
  myTraceGenCmd->add_option("--read-prob", mySynth.theReadProbability, "Probability of read access")->capture_default_str();
  myTraceGenCmd->add_option("--out", myTraceOut, "Output file, standard output if omitted");

  // solve
  auto        mySolveCmd = myApp.add_subcommand("solve", "Solve one allocation instance");
  std::string myInstanceFile;
  mySolveCmd->add_option("--instance", myInstanceFile, "Instance file")->required();

  std::vector<const char*> myArgv;
  for (const auto& myArg : aArgs) {
    myArgv.emplace_back(myArg.c_str());
  }
  try {
    myApp.parse(static_cast<int>(myArgv.size()), myArgv.data());
  } catch (const CLI::ParseError& aErr) {
    if (aErr.get_exit_code() == 0) {
      aStdout << (dynamic_cast<const CLI::CallForVersion*>(&aErr) != nullptr
                   ? std::string(aErr.what()) + "\n"
                   : myApp.help("", CLI::AppFormatMode::All));
      return 0;
    }
    aStderr << "error: " << aErr.what() << '\n';
    return 2;
  }

  Json myManifest;
  myManifest["tool"]    = "lambdamu";
  myManifest["version"] = VERSION;
  myManifest["command"] = std::vector<std::string>(aArgs.begin() + 1, aArgs.end());
  myManifest["inputs"]  = Json::array();
  myManifest["output"]  = myOut;

  try {
    if (myPolicyCmd->parsed()) {
      myManifest["subcommand"] = "policy";
      policyCommand(myPolicyTrace, myPolicyFlags, myOut, myManifest, aStdout);
    } else if (mySnapshotCmd->parsed()) {
      myManifest["subcommand"] = "snapshot";
      snapshotCommand(mySnapshotNet, mySnapshotSweep, myLambdaApps, myMuApps, myOut,
                      myManifest, aStdout);
    } else if (myDynamicCmd->parsed()) {
      myManifest["subcommand"] = "dynamic";
      dynamicCommand(myDynamicNet, myDynamicTrace, myDynamicPolicy, myDynamicSweep, myApps,
                     myEpochs, myHours, myPattern, myOut, myManifest, aStdout);
    } else if (myGenCmd->parsed()) {
      const auto myTopology = generateTopology(
          myTopoSeed, myBrokers, myFar, myNear, NodeCaps{4, Rational(10)},
          NodeCaps{8, Rational(20)});
      if (myTopoOut.empty()) {
        saveTopology(myTopology, aStdout);
      } else {
        auto myStream = openOutput(myTopoOut);
        saveTopology(myTopology, myStream);
      }
    } else if (myInspectCmd->parsed()) {
      inspectCommand(myInspectFile, aStdout);
    } else if (myTraceGenCmd->parsed()) {
      const auto myHorizon = static_cast<TimeMs>(std::llround(myTraceHours * 3'600'000));
      TraceSet   myTrace   = [&]() {
        try {
          return synthTrace(myTraceSeed, myTraceApps, myHorizon, mySynth);
        } catch (const DomainError& aErr) {
          throw UsageError(aErr.what());
        }
      }();
      if (myTraceOut.empty()) {
        writeTrace(myTrace, aStdout);
      } else {
        auto myStream = openOutput(myTraceOut);
        writeTrace(myTrace, myStream);
      }
    } else if (mySolveCmd->parsed()) {
      auto       myStream   = openInput(myInstanceFile);
      const auto myInstance = loadInstance(myStream);
      const auto mySolution = solveJoint(myInstance);
      writeSolutionCsv(mySolution.theAssignment, mySolution.theWeights, aStdout);
      aStderr << "mu cost " << toString(mySolution.theMuCost) << ", lambda cost "
           << toString(mySolution.theLambdaCost) << '\n';
    }
  } catch (const UsageError& aErr) {
    aStderr << "error: " << aErr.what() << '\n';
    return 2;
  } catch (const ParseError& aErr) {
    aStderr << "error: " << aErr.what() << '\n';
    return 2;
  } catch (const InvalidConfiguration& aErr) {
    aStderr << "error: " << aErr.what() << '\n';
    return 2;
  } catch (const std::exception& aErr) {
    aStderr << "error: " << aErr.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace lambdamu
