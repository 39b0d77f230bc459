#ifndef MANET_AODV_HPP
#define MANET_AODV_HPP

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "manet/routing.hpp"

namespace manet
{

struct AodvConfig
{
    SimTime activeRouteTimeout = 3.0;
    SimTime reversePathLifetime = 1.0;
    SimTime rrepWaitTimeout = 0.2;
    int rreqRetries = 2;
    /// Zero disables hello beacons.
    SimTime helloInterval = 1.0;
    int allowedHelloLoss = 2;
    bool helloAlways = false;
    std::size_t bufferCapacity = 64;
    /// Upper bound of the random delay on RREQ rebroadcasts.
    SimTime maxJitter = 0.0001;
};

struct RouteEntry
{
    NodeId dst = 0;
    NodeId nextHop = 0;
    std::uint32_t hopCount = 0;
    SequenceNumber dstSeq = 0;
    SimTime expiresAt = 0.0;
    bool active = false;
    std::set<NodeId> precursors;
};

struct ReversePathEntry
{
    NodeId toward = 0;
    NodeId via = 0;
    std::uint32_t hopCount = 0;
    SimTime expiresAt = 0.0;
};

struct PendingDiscovery
{
    NodeId dst = 0;
    int retriesLeft = 0;
    EventHandle timer;
    SimTime requestedAt = 0.0;
    std::deque<DataPacket> buffered;
};

class AodvNode : public RoutingProtocol
{
public:
    AodvNode(NodeContext ctx, AodvConfig config);

    void start() override;
    void originateData(const DataPacket& packet) override;
    void receive(NodeId from, const Frame& frame) override;
    std::vector<RouteView> routes() const override;
    std::size_t bufferedPackets() const override;
    SequenceNumber ownSequence() const override { return m_ownSeq; }

    Rreq startDiscovery(NodeId dst);
    void handleRreq(NodeId from, const Rreq& rreq);
    void handleRrep(NodeId from, const Rrep& rrep);
    void handleRerr(NodeId from, const Rerr& rerr);
    void handleHello(NodeId from, const Hello& hello);
    void handleData(NodeId from, const DataPacket& packet);
    bool updateRoute(const RouteEntry& candidate);
    std::optional<Rerr> onLinkBreak(NodeId deadNeighbor);
    void helloTick();
    std::vector<NodeId> expireRoutes(SimTime t);

    const AodvConfig& config() const { return m_config; }
    BroadcastId broadcastId() const { return m_bcastId; }
    const RouteEntry* route(NodeId dst) const;
    /// Non-null only while the entry is active and unexpired.
    const RouteEntry* activeRoute(NodeId dst) const;
    const ReversePathEntry* reversePath(NodeId toward) const;
    const PendingDiscovery* pending(NodeId dst) const;
    const std::map<NodeId, SimTime>& helloNeighbors() const { return m_helloNeighbors; }
    bool hasActiveRoute() const;

private:
    RouteEntry* activeRouteMut(NodeId dst);
    Rreq sendRreq(PendingDiscovery& discovery);
    void discoveryTimeout(NodeId dst);
    void forward(RouteEntry& entry, const DataPacket& packet);
    void sendRerr(const std::vector<Unreachable>& unreachable, const std::set<NodeId>& to);
    void rediscover(const std::vector<Unreachable>& lost);
    void scheduleHello(std::uint64_t k);

    AodvConfig m_config;
    SequenceNumber m_ownSeq = 0;
    BroadcastId m_bcastId = 0;
    std::map<NodeId, RouteEntry> m_routes;
    std::map<NodeId, ReversePathEntry> m_reverse;
    std::set<std::pair<NodeId, BroadcastId>> m_seen;
    std::map<NodeId, PendingDiscovery> m_pending;
    std::map<NodeId, SimTime> m_helloNeighbors;
};

} // namespace manet

#endif
