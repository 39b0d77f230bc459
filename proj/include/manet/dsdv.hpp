#ifndef MANET_DSDV_HPP
#define MANET_DSDV_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "manet/routing.hpp"

namespace manet
{

struct DsdvConfig
{
    SimTime updateInterval = 1.0;
    /// Periodic dumps a neighbor may miss before the link is declared broken.
    int allowedLoss = 2;
    SimTime maxJitter = 0.0001;
};

struct DsdvEntry
{
    NodeId dst = 0;
    NodeId nextHop = 0;
    /// Empty means unreachable.
    std::optional<std::uint32_t> hops;
    SequenceNumber seq = 0;
    SimTime installTime = 0.0;

    bool reachable() const { return hops.has_value() && seq % 2 == 0; }
};

class DsdvNode : public RoutingProtocol
{
public:
    DsdvNode(NodeContext ctx, DsdvConfig config);

    void start() override;
    void originateData(const DataPacket& packet) override;
    void receive(NodeId from, const Frame& frame) override;
    std::vector<RouteView> routes() const override;
    SequenceNumber ownSequence() const override { return m_ownSeq; }

    DsdvUpdate periodicDump();
    DsdvUpdate triggeredUpdate(const std::set<NodeId>& changed);
    std::size_t handleUpdate(NodeId from, const DsdvUpdate& update);
    void forwardData(const DataPacket& packet);
    std::vector<NodeId> onLinkBreak(NodeId neighbor);

    const DsdvEntry* entry(NodeId dst) const;
    const std::map<NodeId, SimTime>& neighbors() const { return m_neighbors; }

private:
    void scheduleDump(std::uint64_t k);
    void queueTrigger(const std::set<NodeId>& changed);
    DsdvAdvert advert(const DsdvEntry& e) const;

    DsdvConfig m_config;
    SequenceNumber m_ownSeq = 0;
    std::map<NodeId, DsdvEntry> m_table;
    std::map<NodeId, SimTime> m_neighbors;
    std::set<NodeId> m_triggerQueue;
    EventHandle m_triggerTimer;
};

} // namespace manet

#endif
