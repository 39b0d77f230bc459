#ifndef MANET_SIMULATION_HPP
#define MANET_SIMULATION_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "manet/aodv.hpp"
#include "manet/dsdv.hpp"
#include "manet/metrics.hpp"
#include "manet/routing.hpp"
#include "manet/scenario.hpp"
#include "manet/sim_core.hpp"
#include "manet/world.hpp"

namespace manet
{

enum class Protocol
{
    Aodv,
    Dsdv,
};

std::string_view protocolName(Protocol protocol);
/// Accepts "aodv" or "dsdv".
Protocol parseProtocol(std::string_view name);

struct SimulationOptions
{
    Protocol protocol = Protocol::Aodv;
    std::uint64_t seed = 1;
    AodvConfig aodv;
    DsdvConfig dsdv;
    /// Walk every next-hop graph after each event.
    bool checkLoops = false;
};

struct LoopViolation
{
    SimTime t = 0.0;
    NodeId dst = 0;
    std::vector<NodeId> cycle;
};

struct DiscoveryRecord
{
    RouteInstall install;
    /// Shortest path length when the request went out; -1 if disconnected.
    int bfsHops = -1;
};

struct CompiledScenario
{
    std::size_t emissions = 0;
    std::size_t legs = 0;
};

struct RunResult
{
    Ledger ledger;
    SimTime endTime = 0.0;
    RadioModel radio;
    std::uint64_t steps = 0;
    std::uint64_t bufferedAtEnd = 0;
    std::uint64_t inFlightAtEnd = 0;
    std::uint64_t loopChecks = 0;
    std::vector<LoopViolation> loops;
    std::vector<DiscoveryRecord> discoveries;
};

/// Cycles in the next-hop graphs formed by the given per-node tables.
std::vector<LoopViolation> findLoops(const std::vector<std::vector<RouteView>>& tables, SimTime t);

class Simulation
{
public:
    Simulation(ScenarioSpec spec, SimulationOptions options);
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Runs to the scenario end time. Call once.
    RunResult run();

    Engine& engine() { return m_engine; }
    World& world() { return *m_world; }
    const ScenarioSpec& spec() const { return m_spec; }
    const CompiledScenario& compiled() const { return m_compiled; }
    RoutingProtocol& node(NodeId id) { return *m_nodes.at(id); }
    AodvNode* aodv(NodeId id);
    DsdvNode* dsdv(NodeId id);

    std::vector<LoopViolation> checkLoopsNow() const;

    const Ledger& ledger() const { return m_ledger; }
    /// Generates one data packet now, exactly as a flow emission would.
    PacketUid inject(NodeId src, NodeId dst, std::uint32_t size = 512);

private:
    PacketUid emit(const TrafficFlow& flow);
    bool routeNeeded(NodeId src, NodeId dst) const;

    ScenarioSpec m_spec;
    SimulationOptions m_options;
    Engine m_engine;
    Ledger m_ledger;
    std::unique_ptr<World> m_world;
    std::vector<std::unique_ptr<RoutingProtocol>> m_nodes;
    std::function<void(const TrafficFlow&)> m_emit;
    CompiledScenario m_compiled;
    std::vector<DiscoveryRecord> m_discoveries;
    std::vector<LoopViolation> m_loops;
    std::uint64_t m_loopChecks = 0;
    bool m_ran = false;
};

/// Registers movement legs and schedules every flow emission.
CompiledScenario compileScenario(const ScenarioSpec& spec,
                                 Engine& engine,
                                 World& world,
                                 const std::function<void(const TrafficFlow&)>& emit);

RunResult runScenario(const ScenarioSpec& spec, const SimulationOptions& options);

} // namespace manet

#endif
