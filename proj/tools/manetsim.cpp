// manetsim: run MANET routing scenarios and AODV/DSDV comparisons.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "manet/report.hpp"
#include "manet/scenario.hpp"
#include "manet/simulation.hpp"

namespace fs = std::filesystem;
using namespace manet;

namespace
{

struct Tunables
{
    std::optional<double> range;
    double helloInterval = AodvConfig{}.helloInterval;
    double window = ReportOptions{}.throughputWindow;
};

std::string
scenarioLabel(const std::string& nameOrPath)
{
    const auto names = builtinScenarioNames();
    if (std::find(names.begin(), names.end(), nameOrPath) != names.end())
    {
        return nameOrPath;
    }
    return fs::path(nameOrPath).stem().string();
}

ScenarioSpec
prepare(const std::string& nameOrPath, const Tunables& tun)
{
    ScenarioSpec spec = loadScenario(nameOrPath);
    if (tun.range)
    {
        spec.radio.range = *tun.range;
        validateScenario(spec);
    }
    return spec;
}

struct Outcome
{
    RunResult result;
    RunReport report;
};

Outcome
execute(const ScenarioSpec& spec,
        const std::string& label,
        Protocol protocol,
        std::uint64_t seed,
        const Tunables& tun,
        const fs::path& dir)
{
    SimulationOptions opts;
    opts.protocol = protocol;
    opts.seed = seed;
    opts.aodv.helloInterval = tun.helloInterval;
    ReportOptions ropts;
    ropts.throughputWindow = tun.window;
    Outcome o{runScenario(spec, opts), {}};
    o.report = makeReport(label, protocol, seed, o.result, ropts);
    writeRunOutputs(dir, o.result, o.report, ropts);
    return o;
}

void
writeText(const fs::path& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out)
    {
        throw SinkFailure("cannot write " + path.string());
    }
}

int
runCommand(const std::string& scenario,
           const std::string& protocol,
           std::uint64_t seed,
           const std::string& out,
           const Tunables& tun)
{
    const ScenarioSpec spec = prepare(scenario, tun);
    const Outcome o = execute(spec, scenarioLabel(scenario), parseProtocol(protocol), seed, tun, out);
    std::cout << formatReport(o.report);
    return 0;
}

int
compareCommand(const std::vector<std::string>& scenarios,
               const std::vector<std::uint64_t>& seeds,
               const std::string& out,
               const Tunables& tun)
{
    struct Job
    {
        std::string label;
        Protocol protocol;
        std::uint64_t seed;
        std::future<Outcome> result;
    };
    std::vector<Job> jobs;
    for (const auto& s : scenarios)
    {
        const ScenarioSpec spec = prepare(s, tun);
        const std::string label = scenarioLabel(s);
        for (std::uint64_t seed : seeds)
        {
            for (Protocol p : {Protocol::Aodv, Protocol::Dsdv})
            {
                const fs::path dir = fs::path(out) / label / std::string(protocolName(p)) /
                                     ("seed-" + std::to_string(seed));
                jobs.push_back(Job{label,
                                   p,
                                   seed,
                                   std::async(std::launch::async, execute, spec, label, p, seed, tun, dir)});
            }
        }
    }

    std::vector<RunReport> reports;
    std::vector<Dataset> received, throughput, delay;
    ReportOptions ropts;
    ropts.throughputWindow = tun.window;
    for (auto& job : jobs)
    {
        Outcome o = job.result.get();
        if (job.seed == seeds.front())
        {
            const PlotSet plots = makePlots(o.result.ledger, o.result.endTime, ropts);
            const std::string tag = job.label + " " + std::string(protocolName(job.protocol));
            received.push_back(Dataset{tag + " received", plots.receivedLost[0].points});
            received.push_back(Dataset{tag + " lost", plots.receivedLost[1].points});
            throughput.push_back(Dataset{tag, plots.throughput});
            delay.push_back(Dataset{tag, plots.delay});
        }
        reports.push_back(std::move(o.report));
    }

    fs::create_directories(fs::path(out) / "plots");
    const std::string table = formatComparison(reports);
    writeText(fs::path(out) / "comparison.txt", table);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports)
    {
        j.push_back(toJson(r));
    }
    writeText(fs::path(out) / "comparison.json", j.dump(2) + "\n");
    std::ostringstream rl, tp, dl;
    emitPlot(rl, "Packets received / lost", received);
    emitPlot(tp, "Throughput bps", throughput);
    emitPlot(dl, "End-to-end delay s", delay);
    writeText(fs::path(out) / "plots" / "received_lost.xg", rl.str());
    writeText(fs::path(out) / "plots" / "throughput.xg", tp.str());
    writeText(fs::path(out) / "plots" / "delay.xg", dl.str());
    std::cout << table;
    return 0;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"MANET routing simulator (AODV, DSDV)"};
    app.require_subcommand(1);

    Tunables tun;
    auto addTunables = [&tun](CLI::App* cmd) {
        cmd->add_option("--range", tun.range, "Radio range in meters (overrides the scenario)");
        cmd->add_option("--hello-interval", tun.helloInterval, "AODV hello interval in seconds, 0 disables")
            ->capture_default_str();
        cmd->add_option("--window", tun.window, "Throughput window in seconds")->capture_default_str();
    };

    std::string scenario;
    std::string protocol = "aodv";
    std::uint64_t seed = 1;
    std::string out = "out";
    auto* run = app.add_subcommand("run", "Run one scenario under one protocol");
    run->add_option("--scenario", scenario, "Builtin name (scenario1, scenario2) or scenario file")
        ->required();
    run->add_option("--protocol", protocol, "aodv or dsdv")
        ->check(CLI::IsMember({"aodv", "dsdv"}))
        ->capture_default_str();
    run->add_option("--seed", seed, "Random seed")->capture_default_str();
    run->add_option("--out", out, "Output directory")->capture_default_str();
    addTunables(run);

    std::vector<std::string> scenarios;
    std::vector<std::uint64_t> seeds;
    std::string compareOut = "compare-out";
    auto* compare = app.add_subcommand("compare", "Run AODV and DSDV side by side over several seeds");
    compare->add_option("--scenario", scenarios, "Scenario (repeatable)")->required();
    compare->add_option("--seeds", seeds, "Comma-separated seeds")->required()->delimiter(',');
    compare->add_option("--out", compareOut, "Output directory")->capture_default_str();
    addTunables(compare);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
        {
            return runCommand(scenario, protocol, seed, out, tun);
        }
        return compareCommand(scenarios, seeds, compareOut, tun);
    }
    catch (const SyntaxError& e)
    {
        std::cerr << e.what() << '\n';
    }
    catch (const SemanticError& e)
    {
        std::cerr << "SemanticError: " << e.what() << '\n';
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 1;
}
