#include "manet/simulation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace manet
{

std::string_view
protocolName(Protocol protocol)
{
    return protocol == Protocol::Aodv ? "aodv" : "dsdv";
}

Protocol
parseProtocol(std::string_view name)
{
    if (name == "aodv" || name == "AODV")
    {
        return Protocol::Aodv;
    }
    if (name == "dsdv" || name == "DSDV")
    {
        return Protocol::Dsdv;
    }
    throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

std::vector<LoopViolation>
findLoops(const std::vector<std::vector<RouteView>>& tables, SimTime t)
{
    std::map<NodeId, std::map<NodeId, NodeId>> nextHop;
    for (NodeId n = 0; n < tables.size(); ++n)
    {
        for (const auto& r : tables[n])
        {
            if (r.active && r.dst != n)
            {
                nextHop[r.dst][n] = r.nextHop;
            }
        }
    }
    std::vector<LoopViolation> out;
    for (const auto& [dst, hops] : nextHop)
    {
        // 0 = unvisited, 1 = on current walk, 2 = known loop-free
        std::map<NodeId, int> state;
        for (const auto& [start, ignored] : hops)
        {
            std::vector<NodeId> walk;
            NodeId cur = start;
            while (true)
            {
                int& s = state[cur];
                if (s == 2)
                {
                    break;
                }
                if (s == 1)
                {
                    auto first = std::find(walk.begin(), walk.end(), cur);
                    out.push_back(LoopViolation{t, dst, std::vector<NodeId>(first, walk.end())});
                    break;
                }
                s = 1;
                walk.push_back(cur);
                auto it = hops.find(cur);
                if (it == hops.end())
                {
                    break;
                }
                cur = it->second;
            }
            for (NodeId w : walk)
            {
                state[w] = 2;
            }
        }
    }
    return out;
}

CompiledScenario
compileScenario(const ScenarioSpec& spec,
                Engine& engine,
                World& world,
                const std::function<void(const TrafficFlow&)>& emit)
{
    CompiledScenario out;
    auto legs = spec.movements;
    std::stable_sort(legs.begin(), legs.end(), [](const WaypointLeg& a, const WaypointLeg& b) {
        return a.start < b.start;
    });
    for (const auto& leg : legs)
    {
        world.applyMovement(leg);
        ++out.legs;
    }
    for (const auto& flow : spec.flows)
    {
        for (SimTime t : emissionTimes(flow))
        {
            engine.schedule(t, [&emit, flow]() { emit(flow); });
            ++out.emissions;
        }
    }
    return out;
}

Simulation::Simulation(ScenarioSpec spec, SimulationOptions options)
    : m_spec(std::move(spec)),
      m_options(options),
      m_engine(options.seed)
{
    validateScenario(m_spec);
    m_world = std::make_unique<World>(m_engine, Mobility(m_spec.nodes), m_spec.radio, m_ledger);
    const auto n = static_cast<NodeId>(m_spec.nodes.size());
    for (NodeId id = 0; id < n; ++id)
    {
        NodeContext ctx;
        ctx.self = id;
        ctx.engine = &m_engine;
        ctx.world = m_world.get();
        ctx.ledger = &m_ledger;
        ctx.endTime = m_spec.endTime;
        ctx.routeNeeded = [this, id](NodeId dst) { return routeNeeded(id, dst); };
        ctx.routeInstalled = [this](const RouteInstall& ri) {
            const auto adj =
                adjacency(m_world->mobility(), m_spec.radio.range, ri.requestedAt);
            m_discoveries.push_back(DiscoveryRecord{ri, bfsDistances(adj, ri.node).at(ri.dst)});
        };
        if (m_options.protocol == Protocol::Aodv)
        {
            m_nodes.push_back(std::make_unique<AodvNode>(std::move(ctx), m_options.aodv));
        }
        else
        {
            m_nodes.push_back(std::make_unique<DsdvNode>(std::move(ctx), m_options.dsdv));
        }
    }
    m_world->setReceiver([this](NodeId to, NodeId from, const Frame& frame) {
        m_nodes[to]->receive(from, frame);
    });
    // scheduled emissions hold a reference to the callback, so it lives in a member
    m_emit = [this](const TrafficFlow& f) { emit(f); };
    m_compiled = compileScenario(m_spec, m_engine, *m_world, m_emit);
}

Simulation::~Simulation() = default;

PacketUid
Simulation::emit(const TrafficFlow& flow)
{
    DataPacket p;
    p.uid = m_ledger.newUid();
    p.src = flow.src;
    p.dst = flow.dst;
    p.size = flow.packetSize;
    p.createdAt = m_engine.now();
    m_ledger.record(LedgerEvent{
        EventKind::Sent, m_engine.now(), flow.src, "DATA", p.size, p.uid, p.src, p.dst});
    m_nodes[flow.src]->originateData(p);
    return p.uid;
}

PacketUid
Simulation::inject(NodeId src, NodeId dst, std::uint32_t size)
{
    TrafficFlow f;
    f.src = src;
    f.dst = dst;
    f.packetSize = size;
    return emit(f);
}

bool
Simulation::routeNeeded(NodeId src, NodeId dst) const
{
    for (const auto& f : m_spec.flows)
    {
        if (f.src == src && f.dst == dst && m_engine.now() < f.stop)
        {
            return true;
        }
    }
    return false;
}

AodvNode*
Simulation::aodv(NodeId id)
{
    return dynamic_cast<AodvNode*>(m_nodes.at(id).get());
}

DsdvNode*
Simulation::dsdv(NodeId id)
{
    return dynamic_cast<DsdvNode*>(m_nodes.at(id).get());
}

std::vector<LoopViolation>
Simulation::checkLoopsNow() const
{
    std::vector<std::vector<RouteView>> tables;
    tables.reserve(m_nodes.size());
    for (const auto& n : m_nodes)
    {
        tables.push_back(n->routes());
    }
    return findLoops(tables, m_engine.now());
}

RunResult
Simulation::run()
{
    if (m_ran)
    {
        throw std::logic_error("Simulation::run called twice");
    }
    m_ran = true;
    if (m_options.checkLoops)
    {
        m_engine.setStepObserver([this]() {
            ++m_loopChecks;
            auto found = checkLoopsNow();
            m_loops.insert(m_loops.end(), found.begin(), found.end());
        });
    }
    for (auto& n : m_nodes)
    {
        n->start();
    }
    RunResult out;
    out.steps = m_engine.runUntil(m_spec.endTime);
    m_engine.setStepObserver(nullptr);
    for (const auto& n : m_nodes)
    {
        out.bufferedAtEnd += n->bufferedPackets();
    }
    out.inFlightAtEnd = m_world->dataInFlight();
    out.endTime = m_spec.endTime;
    out.radio = m_spec.radio;
    out.loopChecks = m_loopChecks;
    out.loops = m_loops;
    out.discoveries = m_discoveries;
    out.ledger = m_ledger;
    return out;
}

RunResult
runScenario(const ScenarioSpec& spec, const SimulationOptions& options)
{
    Simulation sim(spec, options);
    return sim.run();
}

} // namespace manet
