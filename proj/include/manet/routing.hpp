#ifndef MANET_ROUTING_HPP
#define MANET_ROUTING_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "manet/messages.hpp"
#include "manet/metrics.hpp"
#include "manet/sim_core.hpp"
#include "manet/world.hpp"

namespace manet
{

/// A completed route discovery at a traffic source.
struct RouteInstall
{
    NodeId node = 0;
    NodeId dst = 0;
    std::uint32_t hops = 0;
    SimTime requestedAt = 0.0;
    SimTime installedAt = 0.0;
};

struct RouteView
{
    NodeId dst = 0;
    NodeId nextHop = 0;
    std::uint32_t hops = 0;
    SequenceNumber seq = 0;
    bool active = false;
};

/// Everything a node's protocol instance may touch.
struct NodeContext
{
    NodeId self = 0;
    Engine* engine = nullptr;
    World* world = nullptr;
    Ledger* ledger = nullptr;
    SimTime endTime = 0.0;
    /// Whether this node still has traffic scheduled toward dst.
    std::function<bool(NodeId dst)> routeNeeded;
    std::function<void(const RouteInstall&)> routeInstalled;
};

class RoutingProtocol
{
public:
    explicit RoutingProtocol(NodeContext ctx);
    virtual ~RoutingProtocol() = default;

    RoutingProtocol(const RoutingProtocol&) = delete;
    RoutingProtocol& operator=(const RoutingProtocol&) = delete;

    NodeId self() const { return m_ctx.self; }

    virtual void start() = 0;
    /// A locally generated packet (already recorded as Sent).
    virtual void originateData(const DataPacket& packet) = 0;
    virtual void receive(NodeId from, const Frame& frame) = 0;
    /// Current table; inactive entries are reported with active = false.
    virtual std::vector<RouteView> routes() const = 0;
    virtual std::size_t bufferedPackets() const { return 0; }
    virtual SequenceNumber ownSequence() const = 0;

protected:
    SimTime now() const { return m_ctx.engine->now(); }
    Engine& engine() { return *m_ctx.engine; }
    World& world() { return *m_ctx.world; }
    Ledger& ledger() { return *m_ctx.ledger; }
    const NodeContext& context() const { return m_ctx; }

    void recordDrop(const DataPacket& packet, const std::string& reason);
    void recordControlDrop(const Frame& frame);
    void recordDelivery(const DataPacket& packet);
    /// Unicasts a copy with the hop counter advanced.
    UnicastOutcome transmit(NodeId next, DataPacket packet);

private:
    NodeContext m_ctx;
};

} // namespace manet

#endif
