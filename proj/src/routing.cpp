#include "manet/routing.hpp"

namespace manet
{

RoutingProtocol::RoutingProtocol(NodeContext ctx) : m_ctx(std::move(ctx)) {}

void
RoutingProtocol::recordDrop(const DataPacket& packet, const std::string& reason)
{
    ledger().record(LedgerEvent{
        EventKind::Dropped, now(), self(), reason, packet.size, packet.uid, packet.src, packet.dst});
}

void
RoutingProtocol::recordControlDrop(const Frame& frame)
{
    ledger().record(LedgerEvent{EventKind::Dropped,
                                now(),
                                self(),
                                std::string(frameKind(frame)),
                                frameSize(frame),
                                ledger().newUid(),
                                self(),
                                -1});
}

void
RoutingProtocol::recordDelivery(const DataPacket& packet)
{
    ledger().record(LedgerEvent{EventKind::Received,
                                now(),
                                self(),
                                "DATA",
                                packet.size,
                                packet.uid,
                                packet.src,
                                packet.dst});
}

UnicastOutcome
RoutingProtocol::transmit(NodeId next, DataPacket packet)
{
    ++packet.hops;
    return world().unicast(self(), next, packet);
}

} // namespace manet
