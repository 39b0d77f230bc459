#include "manet/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace manet
{

namespace
{

std::string
fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void
writeFile(const std::filesystem::path& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary);
    out << body;
    out.close();
    if (!out)
    {
        throw SinkFailure("cannot write " + path.string());
    }
}

} // namespace

RunReport
makeReport(const std::string& scenario,
           Protocol protocol,
           std::uint64_t seed,
           const RunResult& result,
           const ReportOptions& options)
{
    const Ledger& ledger = result.ledger;
    RunReport r;
    r.scenario = scenario;
    r.protocol = std::string(protocolName(protocol));
    r.seed = seed;
    r.sent = ledger.sent();
    r.received = ledger.received();
    r.dropped = ledger.dropped();
    r.unresolved = ledger.unresolved();
    r.lost = r.dropped + r.unresolved;
    r.deliveryRatio = deliveryRatio(ledger);
    if (ledger.dataTransmissions() > 0)
    {
        r.transmissionEfficiency = transmissionEfficiency(ledger);
    }
    r.meanThroughput = meanValue(
        throughputSeries(ledger, options.throughputWindow, options.throughputStep, result.endTime));
    r.meanDelay = meanValue(delaySeries(ledger));
    r.overhead = controlOverhead(ledger);
    r.routeChanges = routeChanges(ledger);
    r.discoveries = result.discoveries.size();
    double excess = 0.0;
    std::uint64_t counted = 0;
    for (const auto& d : result.discoveries)
    {
        if (d.bfsHops >= 0)
        {
            excess += static_cast<double>(d.install.hops) - d.bfsHops;
            ++counted;
        }
    }
    r.routeLengthExcess = counted ? excess / static_cast<double>(counted) : 0.0;
    return r;
}

nlohmann::json
toJson(const RunReport& r)
{
    nlohmann::json j;
    j["scenario"] = r.scenario;
    j["protocol"] = r.protocol;
    j["seed"] = r.seed;
    j["sent"] = r.sent;
    j["received"] = r.received;
    j["dropped"] = r.dropped;
    j["unresolved"] = r.unresolved;
    j["lost"] = r.lost;
    j["delivery_ratio"] = r.deliveryRatio;
    j["transmission_efficiency"] =
        r.transmissionEfficiency ? nlohmann::json(*r.transmissionEfficiency) : nlohmann::json();
    j["mean_throughput_bps"] = r.meanThroughput;
    j["mean_delay_s"] = r.meanDelay;
    j["control_overhead"] = {{"by_kind", r.overhead.byKind}, {"total", r.overhead.total}};
    j["route_changes"] = r.routeChanges;
    j["discoveries"] = r.discoveries;
    j["route_length_excess"] = r.routeLengthExcess;
    return j;
}

std::string
formatReport(const RunReport& r)
{
    std::ostringstream out;
    auto row = [&out](const std::string& key, const std::string& value) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-24s %s\n", key.c_str(), value.c_str());
        out << buf;
    };
    row("scenario", r.scenario);
    row("protocol", r.protocol);
    row("seed", std::to_string(r.seed));
    row("packets sent", std::to_string(r.sent));
    row("packets received", std::to_string(r.received));
    row("packets dropped", std::to_string(r.dropped));
    row("unresolved at end", std::to_string(r.unresolved));
    row("packets lost", std::to_string(r.lost));
    row("delivery ratio", fmt("%.4f", r.deliveryRatio));
    row("transmission efficiency",
        r.transmissionEfficiency ? fmt("%.4f", *r.transmissionEfficiency) : "n/a");
    row("mean throughput (bps)", fmt("%.1f", r.meanThroughput));
    row("mean delay (s)", fmt("%.6f", r.meanDelay));
    row("control overhead", std::to_string(r.overhead.total));
    for (const auto& [kind, count] : r.overhead.byKind)
    {
        row("  " + kind, std::to_string(count));
    }
    row("route changes", std::to_string(r.routeChanges));
    row("discoveries", std::to_string(r.discoveries));
    row("route length excess", fmt("%.3f", r.routeLengthExcess));
    return out.str();
}

PlotSet
makePlots(const Ledger& ledger, SimTime endTime, const ReportOptions& options)
{
    PlotSet p;
    p.receivedLost.push_back(
        Dataset{"received", cumulativeSeries(ledger, EventKind::Received, options.throughputStep, endTime)});
    p.receivedLost.push_back(
        Dataset{"lost", cumulativeSeries(ledger, EventKind::Dropped, options.throughputStep, endTime)});
    p.throughput =
        throughputSeries(ledger, options.throughputWindow, options.throughputStep, endTime);
    p.delay = delaySeries(ledger);
    return p;
}

void
writeRunOutputs(const std::filesystem::path& dir,
                const RunResult& result,
                const RunReport& report,
                const ReportOptions& options)
{
    std::filesystem::create_directories(dir / "plots");
    {
        std::ostringstream trace;
        writeTrace(trace, result.ledger);
        writeFile(dir / "trace.txt", trace.str());
    }
    writeFile(dir / "report.json", toJson(report).dump(2) + "\n");

    const PlotSet plots = makePlots(result.ledger, result.endTime, options);
    const std::string tag = report.scenario + " " + report.protocol;
    std::ostringstream rl, tp, dl;
    emitPlot(rl, "Packets received / lost (" + tag + ")", plots.receivedLost);
    emitPlot(tp, plots.throughput, "Throughput bps (" + tag + ")");
    emitPlot(dl, plots.delay, "End-to-end delay s (" + tag + ")");
    writeFile(dir / "plots" / "received_lost.xg", rl.str());
    writeFile(dir / "plots" / "throughput.xg", tp.str());
    writeFile(dir / "plots" / "delay.xg", dl.str());
}

std::string
formatComparison(const std::vector<RunReport>& reports)
{
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf,
                  sizeof buf,
                  "%-12s %-6s %6s %6s %6s %6s %8s %12s %10s %8s %7s\n",
                  "scenario",
                  "proto",
                  "seed",
                  "sent",
                  "recv",
                  "lost",
                  "ratio",
                  "thr(bps)",
                  "delay(s)",
                  "control",
                  "routes");
    out << buf;
    for (const auto& r : reports)
    {
        std::snprintf(buf,
                      sizeof buf,
                      "%-12s %-6s %6llu %6llu %6llu %6llu %8.4f %12.1f %10.6f %8llu %7llu\n",
                      r.scenario.c_str(),
                      r.protocol.c_str(),
                      static_cast<unsigned long long>(r.seed),
                      static_cast<unsigned long long>(r.sent),
                      static_cast<unsigned long long>(r.received),
                      static_cast<unsigned long long>(r.lost),
                      r.deliveryRatio,
                      r.meanThroughput,
                      r.meanDelay,
                      static_cast<unsigned long long>(r.overhead.total),
                      static_cast<unsigned long long>(r.routeChanges));
        out << buf;
    }
    return out.str();
}

} // namespace manet
