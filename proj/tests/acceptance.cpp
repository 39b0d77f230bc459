// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "manet/report.hpp"
#include "manet/simulation.hpp"
#include "oracles.hpp"

using namespace manet;
using Path = std::vector<std::uint32_t>;

namespace
{

struct Outcome
{
    bool ok = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok)
        {
            detail = why;
        }
        ok = false;
    }
};

/// Raw trace line, parsed here rather than through the library reader.
struct Line
{
    char kind = 0;
    double t = 0.0;
    std::int64_t node = 0;
    std::string subkind;
    std::int64_t uid = 0;
    std::int64_t src = 0;
    std::int64_t dst = 0;
};

std::vector<Line>
traceLines(const Ledger& ledger)
{
    std::ostringstream out;
    writeTrace(out, ledger);
    std::istringstream in(out.str());
    std::vector<Line> lines;
    std::string text;
    while (std::getline(in, text))
    {
        std::istringstream row(text);
        Line l;
        std::int64_t size = 0;
        row >> l.kind >> l.t >> l.node >> l.subkind >> size >> l.uid >> l.src >> l.dst;
        lines.push_back(l);
    }
    return lines;
}

struct Delivery
{
    double sentAt = 0.0;
    double receivedAt = 0.0;
    Path path;
};

std::vector<Delivery>
deliveries(const std::vector<Line>& lines, std::int64_t src, std::int64_t dst)
{
    std::map<std::int64_t, Delivery> open;
    std::vector<Delivery> out;
    for (const auto& l : lines)
    {
        if (l.src != src || l.dst != dst)
        {
            continue;
        }
        if (l.kind == 's')
        {
            open[l.uid].sentAt = l.t;
        }
        else if (l.kind == 'f')
        {
            open[l.uid].path.push_back(static_cast<std::uint32_t>(l.node));
        }
        else if (l.kind == 'r')
        {
            Delivery d = open[l.uid];
            d.receivedAt = l.t;
            d.path.push_back(static_cast<std::uint32_t>(l.node));
            out.push_back(d);
            open.erase(l.uid);
        }
        else if (l.kind == 'd')
        {
            open.erase(l.uid);
        }
    }
    return out;
}

std::vector<Path>
distinctRoutes(const std::vector<Delivery>& ds)
{
    std::vector<Path> seq;
    for (const auto& d : ds)
    {
        if (seq.empty() || seq.back() != d.path)
        {
            seq.push_back(d.path);
        }
    }
    return seq;
}

std::vector<double>
dropTimes(const std::vector<Line>& lines)
{
    std::vector<double> ts;
    for (const auto& l : lines)
    {
        if (l.kind == 'd')
        {
            ts.push_back(l.t);
        }
    }
    return ts;
}

std::string
show(const std::vector<Path>& routes)
{
    std::string s = "[";
    for (const auto& r : routes)
    {
        s += "[";
        for (std::size_t i = 0; i < r.size(); ++i)
        {
            s += (i ? "," : "") + std::to_string(r[i]);
        }
        s += "]";
    }
    return s + "]";
}

SimulationOptions
options(Protocol p, std::uint64_t seed)
{
    SimulationOptions o;
    o.protocol = p;
    o.seed = seed;
    return o;
}

double
elapsedSeconds(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool
anyIn(const std::vector<double>& ts, double lo, double hi)
{
    for (double t : ts)
    {
        if (t >= lo && t < hi)
        {
            return true;
        }
    }
    return false;
}

Outcome
scenario1Fidelity()
{
    Outcome o;
    RunResult r;
    const double secs = elapsedSeconds([&] { r = runScenario(builtinScenario("scenario1"), options(Protocol::Aodv, 1)); });
    const auto lines = traceLines(r.ledger);
    const auto routes = distinctRoutes(deliveries(lines, 0, 5));
    if (routes != std::vector<Path>{{0, 2, 4, 5}, {0, 1, 5}})
    {
        o.fail("route sequence " + show(routes));
    }
    for (const auto& l : lines)
    {
        if (l.kind == 'c' && l.subkind == "RREQ")
        {
            if (l.t != 1.0 || l.node != 0)
            {
                o.fail("first RREQ not from node 0 at t=1.0");
            }
            break;
        }
    }
    const auto drops = dropTimes(lines);
    if (!anyIn(drops, 2.9, 3.1))
    {
        o.fail("no data drop near t=3.0");
    }
    if (secs >= 1.0)
    {
        o.fail("runtime " + std::to_string(secs) + " s");
    }
    if (o.ok)
    {
        o.detail = show(routes) + ", " + std::to_string(drops.size()) + " drop(s), " +
                   std::to_string(secs * 1000.0).substr(0, 5) + " ms";
    }
    return o;
}

Outcome
scenario2Fidelity()
{
    Outcome o;
    RunResult r;
    const double secs = elapsedSeconds([&] { r = runScenario(builtinScenario("scenario2"), options(Protocol::Aodv, 1)); });
    const auto lines = traceLines(r.ledger);
    const auto ds = deliveries(lines, 0, 5);
    const auto routes = distinctRoutes(ds);
    const std::vector<Path> expected{{0, 7, 3, 5}, {0, 7, 5}, {0, 1, 4, 5}, {0, 9, 4, 5}};
    if (routes != expected)
    {
        o.fail("route sequence " + show(routes));
    }
    const auto drops = dropTimes(lines);
    // a break can only show up on the next emission after the triggering movement
    if (!anyIn(drops, 2.2, 2.45))
    {
        o.fail("no drop at the first break");
    }
    if (!anyIn(drops, 2.45, 2.95))
    {
        o.fail("no drop at the second break");
    }
    if (!anyIn(drops, 2.95, 3.3))
    {
        o.fail("no drop at the third break");
    }
    for (const auto& d : ds)
    {
        if (d.sentAt >= 1.9 && d.sentAt < 2.2 && d.path != expected[0])
        {
            o.fail("node 4 movement at t=2.0 changed the route");
        }
    }
    if (secs >= 1.0)
    {
        o.fail("runtime " + std::to_string(secs) + " s");
    }
    if (o.ok)
    {
        o.detail = show(routes) + ", " + std::to_string(drops.size()) + " drop(s)";
    }
    return o;
}

Outcome
trends()
{
    Outcome o;
    const int seeds = 10;
    double delay1 = 0.0;
    double delay2 = 0.0;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed)
    {
        const auto r1 = runScenario(builtinScenario("scenario1"), options(Protocol::Aodv, seed));
        const auto r2 = runScenario(builtinScenario("scenario2"), options(Protocol::Aodv, seed));
        const auto a = makeReport("scenario1", Protocol::Aodv, seed, r1);
        const auto b = makeReport("scenario2", Protocol::Aodv, seed, r2);
        const std::string tag = "seed " + std::to_string(seed) + ": ";
        if (!(b.dropped > a.dropped))
        {
            o.fail(tag + "dropped not higher in scenario2");
        }
        if (!(b.received < a.received))
        {
            o.fail(tag + "received not lower in scenario2");
        }
        if (!(b.meanThroughput < a.meanThroughput))
        {
            o.fail(tag + "throughput not lower in scenario2");
        }
        if (!(b.meanDelay >= a.meanDelay))
        {
            o.fail(tag + "delay lower in scenario2");
        }
        delay1 += a.meanDelay;
        delay2 += b.meanDelay;
    }
    if (!(delay2 / seeds > delay1 / seeds))
    {
        o.fail("mean of mean delays not higher in scenario2");
    }
    if (o.ok)
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%d seeds, mean delay %.6f vs %.6f s", seeds, delay1 / seeds, delay2 / seeds);
        o.detail = buf;
    }
    return o;
}

Outcome
loopFreedom()
{
    Outcome o;
    std::vector<ScenarioSpec> specs{builtinScenario("scenario1"), builtinScenario("scenario2")};
    std::mt19937_64 rng(20261016);
    for (int i = 0; i < 100; ++i)
    {
        specs.push_back(oracle::randomScenario(rng));
    }
    std::uint64_t checks = 0;
    for (std::size_t i = 0; i < specs.size(); ++i)
    {
        for (Protocol p : {Protocol::Aodv, Protocol::Dsdv})
        {
            auto opts = options(p, 1 + i);
            opts.checkLoops = true;
            const auto r = runScenario(specs[i], opts);
            checks += r.loopChecks;
            if (!r.loops.empty())
            {
                o.fail("scenario #" + std::to_string(i) + " " + std::string(protocolName(p)) +
                       ": loop at t=" + std::to_string(r.loops.front().t));
            }
        }
    }
    if (o.ok)
    {
        o.detail = std::to_string(specs.size()) + " scenarios x 2 protocols, " + std::to_string(checks) +
                   " event boundaries checked";
    }
    return o;
}

Outcome
bfsEquivalence()
{
    Outcome o;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i)
    {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 9);
        auto spec = oracle::randomConnectedStatic(rng, n);
        const std::uint32_t src = static_cast<std::uint32_t>(rng() % n);
        std::uint32_t dst = src;
        while (dst == src)
        {
            dst = static_cast<std::uint32_t>(rng() % n);
        }
        spec.flows.push_back(TrafficFlow{src, dst, 10.0, 512, 0.5, 1.5});
        auto opts = options(Protocol::Aodv, 1 + static_cast<std::uint64_t>(i));
        opts.aodv.helloInterval = 0.0;
        const auto r = runScenario(spec, opts);
        const int expected = oracle::hopMatrix(spec, 0.5)[src][dst];
        bool seen = false;
        for (const auto& d : r.discoveries)
        {
            if (d.install.node == src && d.install.dst == dst)
            {
                seen = true;
                if (static_cast<int>(d.install.hops) != expected)
                {
                    o.fail("topology " + std::to_string(i) + ": installed " + std::to_string(d.install.hops) +
                           " hops, BFS " + std::to_string(expected));
                }
                break;
            }
        }
        if (!seen)
        {
            o.fail("topology " + std::to_string(i) + ": no discovery completed");
        }
    }
    if (o.ok)
    {
        o.detail = "200 topologies, exact";
    }
    return o;
}

Outcome
overheadOrdering()
{
    Outcome o;
    ScenarioSpec grid;
    grid.endTime = 5.0;
    for (int i = 0; i < 6; ++i)
    {
        grid.nodes.push_back(Position{100.0 + 180.0 * (i % 3), 200.0 + 180.0 * (i / 3)});
    }
    auto quiet = options(Protocol::Aodv, 1);
    quiet.aodv.helloInterval = 0.0;
    const auto aodv = runScenario(grid, quiet).ledger.controlTransmissions();
    const auto dsdvOpts = options(Protocol::Dsdv, 1);
    const auto dsdv = runScenario(grid, dsdvOpts).ledger.controlTransmissions();
    const auto floor = grid.nodes.size() * static_cast<std::size_t>(std::floor(grid.endTime / dsdvOpts.dsdv.updateInterval));
    if (aodv != 0)
    {
        o.fail("AODV sent " + std::to_string(aodv) + " control frames with no traffic");
    }
    if (dsdv < floor)
    {
        o.fail("DSDV sent " + std::to_string(dsdv) + " < " + std::to_string(floor));
    }
    for (const char* name : {"scenario1", "scenario2"})
    {
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
        {
            const auto a = runScenario(builtinScenario(name), options(Protocol::Aodv, seed));
            const auto d = runScenario(builtinScenario(name), options(Protocol::Dsdv, seed));
            if (!(d.ledger.controlTransmissions() > a.ledger.controlTransmissions()))
            {
                o.fail(std::string(name) + " seed " + std::to_string(seed) + ": DSDV not above AODV");
            }
        }
    }
    if (o.ok)
    {
        o.detail = "idle: AODV 0, DSDV " + std::to_string(dsdv) + " (floor " + std::to_string(floor) + ")";
    }
    return o;
}

Outcome
conservation()
{
    Outcome o;
    std::vector<std::pair<std::string, ScenarioSpec>> specs{{"scenario1", builtinScenario("scenario1")},
                                                            {"scenario2", builtinScenario("scenario2")}};
    std::mt19937_64 rng(99);
    for (int i = 0; i < 20; ++i)
    {
        specs.emplace_back("random" + std::to_string(i), oracle::randomScenario(rng));
    }
    for (const auto& [name, spec] : specs)
    {
        for (Protocol p : {Protocol::Aodv, Protocol::Dsdv})
        {
            const auto r = runScenario(spec, options(p, 3));
            const std::string tag = name + "/" + std::string(protocolName(p)) + ": ";
            const auto lines = traceLines(r.ledger);
            std::uint64_t s = 0;
            std::uint64_t rc = 0;
            std::uint64_t d = 0;
            std::map<std::int64_t, std::pair<double, int>> open;
            for (const auto& l : lines)
            {
                s += l.kind == 's';
                rc += l.kind == 'r';
                // control frames lost on a broken link also appear as drops
                d += l.kind == 'd' && open.count(l.uid) != 0;
                if (l.kind == 's')
                {
                    open[l.uid] = {l.t, 0};
                }
                else if (l.kind == 'f')
                {
                    ++open[l.uid].second;
                }
                else if (l.kind == 'r')
                {
                    const auto [sentAt, hops] = open[l.uid];
                    // trace times carry microsecond resolution
                    if (l.t - sentAt < hops * r.radio.hopLatency - 1e-9)
                    {
                        o.fail(tag + "delay below hops x latency for uid " + std::to_string(l.uid));
                    }
                }
            }
            if (s != rc + d + r.bufferedAtEnd + r.inFlightAtEnd)
            {
                o.fail(tag + "sent != received + dropped + unresolved");
            }
            if (r.ledger.unresolved() != r.bufferedAtEnd + r.inFlightAtEnd)
            {
                o.fail(tag + "unresolved count disagrees with buffers");
            }
            const double ratio = deliveryRatio(r.ledger);
            if (s > 0 && !(ratio >= 0.0 && ratio <= 1.0))
            {
                o.fail(tag + "delivery ratio out of range");
            }
            if (r.ledger.dataTransmissions() > 0)
            {
                const double eff = transmissionEfficiency(r.ledger);
                if (!(eff >= 0.0 && eff <= 1.0))
                {
                    o.fail(tag + "efficiency out of range");
                }
            }
            std::ostringstream out;
            writeTrace(out, r.ledger);
            std::istringstream in(out.str());
            const Ledger back = readTrace(in);
            const auto a = makePlots(r.ledger, r.endTime);
            const auto b = makePlots(back, r.endTime);
            if (!(a.throughput == b.throughput && a.delay == b.delay &&
                  a.receivedLost.size() == b.receivedLost.size()))
            {
                o.fail(tag + "series differ after trace round trip");
            }
            for (std::size_t k = 0; k < a.receivedLost.size() && k < b.receivedLost.size(); ++k)
            {
                if (!(a.receivedLost[k].points == b.receivedLost[k].points))
                {
                    o.fail(tag + "cumulative series differ after trace round trip");
                }
            }
            if (controlOverhead(back).total != controlOverhead(r.ledger).total ||
                routeChanges(back) != routeChanges(r.ledger))
            {
                o.fail(tag + "overhead or route changes differ after trace round trip");
            }
        }
    }
    if (o.ok)
    {
        o.detail = std::to_string(specs.size()) + " scenarios x 2 protocols";
    }
    return o;
}

std::map<std::string, std::string>
readTree(const std::filesystem::path& root)
{
    std::map<std::string, std::string> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root))
    {
        if (entry.is_regular_file())
        {
            std::ifstream in(entry.path(), std::ios::binary);
            std::ostringstream body;
            body << in.rdbuf();
            files[std::filesystem::relative(entry.path(), root).string()] = body.str();
        }
    }
    return files;
}

Outcome
determinism()
{
    Outcome o;
    const auto base = std::filesystem::temp_directory_path() / ("manet-accept-" + std::to_string(::getpid()));
    std::size_t compared = 0;
    for (const char* name : {"scenario1", "scenario2"})
    {
        for (Protocol p : {Protocol::Aodv, Protocol::Dsdv})
        {
            for (std::uint64_t seed : {1u, 42u})
            {
                std::vector<std::map<std::string, std::string>> trees;
                for (int run = 0; run < 2; ++run)
                {
                    const auto dir = base / std::to_string(run);
                    std::filesystem::remove_all(dir);
                    const auto r = runScenario(builtinScenario(name), options(p, seed));
                    writeRunOutputs(dir, r, makeReport(name, p, seed, r));
                    trees.push_back(readTree(dir));
                }
                compared += trees[0].size();
                if (trees[0] != trees[1] || trees[0].size() != 5)
                {
                    o.fail(std::string(name) + "/" + std::string(protocolName(p)) + " seed " +
                           std::to_string(seed) + ": outputs differ");
                }
            }
        }
    }
    std::filesystem::remove_all(base);
    if (o.ok)
    {
        o.detail = std::to_string(compared) + " files byte-identical across paired runs";
    }
    return o;
}

struct Segment
{
    double from;
    double to;
    Path route;
};

void
checkLayout(Outcome& o, const std::string& name, const ScenarioSpec& spec, const std::vector<Segment>& segments)
{
    for (std::size_t i = 0; i < segments.size(); ++i)
    {
        const auto& seg = segments[i];
        const auto paths = oracle::shortestPaths(spec, seg.route.front(), seg.route.back(), seg.from);
        if (paths.size() != 1 || paths[0] != seg.route)
        {
            o.fail(name + ": " + show({seg.route}) + " not the unique shortest path at t=" + std::to_string(seg.from));
        }
        for (double t = seg.from; t <= seg.to + 1e-12; t += 0.001)
        {
            if (!oracle::pathIntact(spec, seg.route, t))
            {
                o.fail(name + ": " + show({seg.route}) + " broken at t=" + std::to_string(t));
                break;
            }
        }
        if (i + 1 < segments.size() && oracle::pathIntact(spec, seg.route, segments[i + 1].from))
        {
            o.fail(name + ": " + show({seg.route}) + " still intact at t=" + std::to_string(segments[i + 1].from));
        }
    }
}

Outcome
layoutOracle()
{
    Outcome o;
    const std::filesystem::path data = MANET_DATA_DIR;
    ScenarioSpec s1;
    ScenarioSpec s2;
    try
    {
        s1 = loadScenario((data / "scenario1.scn").string());
        s2 = loadScenario((data / "scenario2.scn").string());
    }
    catch (const std::exception& e)
    {
        o.fail(std::string("cannot load layout files: ") + e.what());
        return o;
    }
    if (!(s1 == builtinScenario("scenario1")) || !(s2 == builtinScenario("scenario2")))
    {
        o.fail("builtin scenarios differ from the shipped layout files");
    }
    checkLayout(o, "scenario1", s1, {{1.0, 2.9, {0, 2, 4, 5}}, {3.05, 5.0, {0, 1, 5}}});
    if (oracle::linked(s1, 4, 5, 3.0))
    {
        o.fail("scenario1: nodes 4 and 5 still linked at t=3.0");
    }
    checkLayout(o,
                "scenario2",
                s2,
                {{1.0, 2.2, {0, 7, 3, 5}}, {2.3, 2.6, {0, 7, 5}}, {2.7, 3.1, {0, 1, 4, 5}}, {3.2, 5.0, {0, 9, 4, 5}}});
    if (o.ok)
    {
        o.detail = "2 + 4 route segments unique, intact and broken on cue";
    }
    return o;
}

} // namespace

int
main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"scenario 1 route fidelity", scenario1Fidelity},
        {"scenario 2 route fidelity", scenario2Fidelity},
        {"mobility trend over seeds", trends},
        {"loop freedom", loopFreedom},
        {"BFS oracle equivalence", bfsEquivalence},
        {"on-demand overhead ordering", overheadOrdering},
        {"conservation and metric identities", conservation},
        {"determinism", determinism},
        {"layout oracle", layoutOracle},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("[%s] %zu. %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        failed += o.ok ? 0 : 1;
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}
