#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "manet/report.hpp"
#include "manet/simulation.hpp"

namespace py = pybind11;
using namespace manet;

namespace
{

Ledger
ledgerFromText(const std::string& trace)
{
    std::istringstream in(trace);
    return readTrace(in);
}

std::vector<std::pair<double, double>>
points(const Series& s)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(s.size());
    for (const auto& p : s)
    {
        out.emplace_back(p.t, p.value);
    }
    return out;
}

SimulationOptions
makeOptions(const std::string& protocol,
            std::uint64_t seed,
            bool checkLoops,
            std::optional<double> helloInterval,
            std::optional<double> updateInterval)
{
    SimulationOptions o;
    o.protocol = parseProtocol(protocol);
    o.seed = seed;
    o.checkLoops = checkLoops;
    if (helloInterval)
    {
        o.aodv.helloInterval = *helloInterval;
    }
    if (updateInterval)
    {
        o.dsdv.updateInterval = *updateInterval;
    }
    return o;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Discrete-event AODV/DSDV simulator core";

    py::register_exception<SyntaxError>(m, "ScenarioSyntaxError", PyExc_ValueError);
    py::register_exception<SemanticError>(m, "ScenarioSemanticError", PyExc_ValueError);
    py::register_exception<UnknownScenario>(m, "UnknownScenario", PyExc_KeyError);
    py::register_exception<ZeroLength>(m, "ZeroLength", PyExc_ValueError);
    py::register_exception<BadDuration>(m, "BadDuration", PyExc_ValueError);
    py::register_exception<DegenerateTrajectory>(m, "DegenerateTrajectory", PyExc_ValueError);
    py::register_exception<OutOfOrder>(m, "OutOfOrder", PyExc_ValueError);
    py::register_exception<InconsistentLedger>(m, "InconsistentLedger", PyExc_ValueError);

    m.def("builtin_names", &builtinScenarioNames);
    m.def("builtin_text", [](const std::string& name) { return std::string(builtinScenarioText(name)); });
    m.def("canonical", [](const std::string& text) { return serializeScenario(parseScenario(text)); },
          "Parse scenario text and print it back in canonical form.");
    m.def("load", [](const std::string& nameOrPath) { return serializeScenario(loadScenario(nameOrPath)); },
          "Canonical text of a builtin name or scenario file.");

    m.def(
        "run",
        [](const std::string& text,
           const std::string& name,
           const std::string& protocol,
           std::uint64_t seed,
           bool checkLoops,
           std::optional<double> helloInterval,
           std::optional<double> updateInterval) {
            const ScenarioSpec spec = parseScenario(text);
            const SimulationOptions opts = makeOptions(protocol, seed, checkLoops, helloInterval, updateInterval);
            RunResult r;
            {
                py::gil_scoped_release release;
                r = runScenario(spec, opts);
            }
            std::ostringstream trace;
            writeTrace(trace, r.ledger);
            py::dict out;
            out["report"] = toJson(makeReport(name, opts.protocol, seed, r)).dump();
            out["trace"] = trace.str();
            out["loops"] = r.loops.size();
            out["loop_checks"] = r.loopChecks;
            out["buffered_at_end"] = r.bufferedAtEnd;
            out["in_flight_at_end"] = r.inFlightAtEnd;
            return out;
        },
        py::arg("text"),
        py::arg("name") = "scenario",
        py::arg("protocol") = "aodv",
        py::arg("seed") = 1,
        py::arg("check_loops") = false,
        py::arg("hello_interval") = py::none(),
        py::arg("update_interval") = py::none());

    m.def(
        "write_outputs",
        [](const std::string& text,
           const std::string& name,
           const std::string& protocol,
           std::uint64_t seed,
           const std::filesystem::path& dir) {
            const SimulationOptions opts = makeOptions(protocol, seed, false, std::nullopt, std::nullopt);
            const RunResult r = runScenario(parseScenario(text), opts);
            writeRunOutputs(dir, r, makeReport(name, opts.protocol, seed, r));
        },
        py::arg("text"),
        py::arg("name"),
        py::arg("protocol"),
        py::arg("seed"),
        py::arg("dir"));

    m.def("delivery_ratio", [](const std::string& trace) { return deliveryRatio(ledgerFromText(trace)); });
    m.def("transmission_efficiency",
          [](const std::string& trace) { return transmissionEfficiency(ledgerFromText(trace)); });
    m.def(
        "throughput_series",
        [](const std::string& trace, double window, double step, double end) {
            return points(throughputSeries(ledgerFromText(trace), window, step, end));
        },
        py::arg("trace"),
        py::arg("window") = 0.5,
        py::arg("step") = 0.1,
        py::arg("end") = 5.0);
    m.def("delay_series", [](const std::string& trace) { return points(delaySeries(ledgerFromText(trace))); });
    m.def("route_sequence", [](const std::string& trace, NodeId src, NodeId dst) {
        return routeSequence(ledgerFromText(trace), src, dst);
    });
    m.def("control_overhead", [](const std::string& trace) { return controlOverhead(ledgerFromText(trace)).byKind; });

    m.def("density", &density, py::arg("node_count"), py::arg("length_km"));
    m.def("flow_rate", &flowRate, py::arg("crossings"), py::arg("duration_s"));
    m.def(
        "mean_speed",
        [](const std::vector<std::tuple<double, double, double>>& samples) {
            std::vector<std::pair<SimTime, Position>> trajectory;
            for (const auto& [t, x, y] : samples)
            {
                trajectory.emplace_back(t, Position{x, y});
            }
            return meanSpeed(trajectory);
        },
        py::arg("trajectory"));
}
