#include "manet/dsdv.hpp"

namespace manet
{

DsdvNode::DsdvNode(NodeContext ctx, DsdvConfig config)
    : RoutingProtocol(std::move(ctx)),
      m_config(config)
{
    m_table[self()] = DsdvEntry{self(), self(), 0u, 0, 0.0};
}

void
DsdvNode::start()
{
    scheduleDump(0);
}

void
DsdvNode::scheduleDump(std::uint64_t k)
{
    const SimTime base = static_cast<double>(k) * m_config.updateInterval;
    if (base >= context().endTime || base < now())
    {
        return;
    }
    const SimTime jitter = engine().rng().uniform(0.0, m_config.maxJitter);
    engine().schedule(base + jitter, [this, k]() {
        periodicDump();
        scheduleDump(k + 1);
    });
}

DsdvAdvert
DsdvNode::advert(const DsdvEntry& e) const
{
    return DsdvAdvert{e.dst, e.seq, e.hops};
}

DsdvUpdate
DsdvNode::periodicDump()
{
    const SimTime limit = m_config.allowedLoss * m_config.updateInterval;
    std::vector<NodeId> silent;
    for (const auto& [n, heard] : m_neighbors)
    {
        if (now() - heard > limit)
        {
            silent.push_back(n);
        }
    }
    for (NodeId n : silent)
    {
        onLinkBreak(n);
    }

    m_ownSeq += 2;
    m_table[self()].seq = m_ownSeq;
    DsdvUpdate update;
    update.origin = self();
    update.fullDump = true;
    for (const auto& [dst, e] : m_table)
    {
        update.entries.push_back(advert(e));
    }
    world().broadcast(self(), update);
    return update;
}

DsdvUpdate
DsdvNode::triggeredUpdate(const std::set<NodeId>& changed)
{
    DsdvUpdate update;
    update.origin = self();
    for (NodeId dst : changed)
    {
        if (auto it = m_table.find(dst); it != m_table.end())
        {
            update.entries.push_back(advert(it->second));
        }
    }
    if (!update.entries.empty())
    {
        world().broadcast(self(), update);
    }
    return update;
}

void
DsdvNode::queueTrigger(const std::set<NodeId>& changed)
{
    if (changed.empty())
    {
        return;
    }
    m_triggerQueue.insert(changed.begin(), changed.end());
    if (engine().isPending(m_triggerTimer))
    {
        return;
    }
    const SimTime jitter = engine().rng().uniform(0.0, m_config.maxJitter);
    m_triggerTimer = engine().scheduleIn(jitter, [this]() {
        std::set<NodeId> batch = std::move(m_triggerQueue);
        m_triggerQueue.clear();
        triggeredUpdate(batch);
    });
}

std::size_t
DsdvNode::handleUpdate(NodeId from, const DsdvUpdate& update)
{
    m_neighbors[from] = now();
    std::set<NodeId> changed;
    for (const auto& adv : update.entries)
    {
        if (adv.dst == self())
        {
            if (adv.seq > m_ownSeq)
            {
                // someone advertised us as broken; outbid it
                m_ownSeq = adv.seq + (adv.seq % 2 == 0 ? 2 : 1);
                m_table[self()].seq = m_ownSeq;
                changed.insert(self());
            }
            continue;
        }
        std::optional<std::uint32_t> hops;
        if (adv.hops)
        {
            hops = *adv.hops + 1;
        }
        auto it = m_table.find(adv.dst);
        if (it == m_table.end())
        {
            if (hops)
            {
                m_table[adv.dst] = DsdvEntry{adv.dst, from, hops, adv.seq, now()};
                changed.insert(adv.dst);
            }
            continue;
        }
        DsdvEntry& e = it->second;
        bool adopt = false;
        if (adv.seq > e.seq)
        {
            // a newer "unreachable" only matters when it comes from our next hop
            adopt = hops.has_value() || e.nextHop == from || !e.hops.has_value();
        }
        else if (adv.seq == e.seq && hops)
        {
            adopt = !e.hops || *hops < *e.hops;
        }
        if (adopt)
        {
            e = DsdvEntry{adv.dst, from, hops, adv.seq, now()};
            changed.insert(adv.dst);
        }
    }
    queueTrigger(changed);
    return changed.size();
}

std::vector<NodeId>
DsdvNode::onLinkBreak(NodeId neighbor)
{
    m_neighbors.erase(neighbor);
    std::vector<NodeId> broken;
    std::set<NodeId> changed;
    for (auto& [dst, e] : m_table)
    {
        if (dst != self() && e.nextHop == neighbor && e.reachable())
        {
            ++e.seq;
            e.hops.reset();
            e.installTime = now();
            broken.push_back(dst);
            changed.insert(dst);
        }
    }
    queueTrigger(changed);
    return broken;
}

void
DsdvNode::originateData(const DataPacket& packet)
{
    forwardData(packet);
}

void
DsdvNode::forwardData(const DataPacket& packet)
{
    if (packet.dst == self())
    {
        recordDelivery(packet);
        return;
    }
    auto it = m_table.find(packet.dst);
    if (it == m_table.end() || !it->second.reachable())
    {
        recordDrop(packet, "NRTE");
        return;
    }
    const NodeId next = it->second.nextHop;
    if (transmit(next, packet) == UnicastOutcome::LinkBreak)
    {
        recordDrop(packet, "LINK");
        onLinkBreak(next);
    }
}

void
DsdvNode::receive(NodeId from, const Frame& frame)
{
    if (const auto* u = std::get_if<DsdvUpdate>(&frame))
    {
        handleUpdate(from, *u);
    }
    else if (const auto* p = std::get_if<DataPacket>(&frame))
    {
        forwardData(*p);
    }
}

std::vector<RouteView>
DsdvNode::routes() const
{
    std::vector<RouteView> out;
    for (const auto& [dst, e] : m_table)
    {
        if (dst != self())
        {
            out.push_back(RouteView{dst, e.nextHop, e.hops.value_or(0), e.seq, e.reachable()});
        }
    }
    return out;
}

const DsdvEntry*
DsdvNode::entry(NodeId dst) const
{
    auto it = m_table.find(dst);
    return it == m_table.end() ? nullptr : &it->second;
}

} // namespace manet
