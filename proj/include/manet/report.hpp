#ifndef MANET_REPORT_HPP
#define MANET_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "manet/metrics.hpp"
#include "manet/simulation.hpp"

namespace manet
{

struct ReportOptions
{
    SimTime throughputWindow = 0.5;
    SimTime throughputStep = 0.1;
};

struct RunReport
{
    std::string scenario;
    std::string protocol;
    std::uint64_t seed = 0;
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t dropped = 0;
    std::uint64_t unresolved = 0;
    std::uint64_t lost = 0;
    double deliveryRatio = 0.0;
    std::optional<double> transmissionEfficiency;
    double meanThroughput = 0.0;
    double meanDelay = 0.0;
    ControlOverhead overhead;
    std::uint64_t routeChanges = 0;
    std::uint64_t discoveries = 0;
    double routeLengthExcess = 0.0;
};

RunReport makeReport(const std::string& scenario,
                     Protocol protocol,
                     std::uint64_t seed,
                     const RunResult& result,
                     const ReportOptions& options = {});

nlohmann::json toJson(const RunReport& report);
std::string formatReport(const RunReport& report);

struct PlotSet
{
    std::vector<Dataset> receivedLost;
    Series throughput;
    Series delay;
};

PlotSet makePlots(const Ledger& ledger, SimTime endTime, const ReportOptions& options = {});

/// trace.txt, report.json and plots/{received_lost,throughput,delay}.xg
void writeRunOutputs(const std::filesystem::path& dir,
                     const RunResult& result,
                     const RunReport& report,
                     const ReportOptions& options = {});

/// One aligned row per report.
std::string formatComparison(const std::vector<RunReport>& reports);

} // namespace manet

#endif
