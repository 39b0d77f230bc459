#include "manet/aodv.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet
{

AodvNode::AodvNode(NodeContext ctx, AodvConfig config)
    : RoutingProtocol(std::move(ctx)),
      m_config(config)
{
}

void
AodvNode::start()
{
    if (m_config.helloInterval > 0.0)
    {
        scheduleHello(1);
    }
}

void
AodvNode::scheduleHello(std::uint64_t k)
{
    const SimTime at = static_cast<double>(k) * m_config.helloInterval;
    if (at >= context().endTime || at < now())
    {
        return;
    }
    engine().schedule(at, [this, k]() {
        helloTick();
        scheduleHello(k + 1);
    });
}

void
AodvNode::originateData(const DataPacket& packet)
{
    expireRoutes(now());
    if (RouteEntry* e = activeRouteMut(packet.dst))
    {
        forward(*e, packet);
        return;
    }
    if (m_pending.count(packet.dst) == 0)
    {
        startDiscovery(packet.dst);
    }
    auto& buffer = m_pending.at(packet.dst).buffered;
    if (m_config.bufferCapacity == 0)
    {
        recordDrop(packet, "BUF");
        return;
    }
    if (buffer.size() >= m_config.bufferCapacity)
    {
        recordDrop(buffer.front(), "BUF");
        buffer.pop_front();
    }
    buffer.push_back(packet);
}

void
AodvNode::receive(NodeId from, const Frame& frame)
{
    expireRoutes(now());
    if (const auto* m = std::get_if<Rreq>(&frame))
    {
        handleRreq(from, *m);
    }
    else if (const auto* m = std::get_if<Rrep>(&frame))
    {
        handleRrep(from, *m);
    }
    else if (const auto* m = std::get_if<Rerr>(&frame))
    {
        handleRerr(from, *m);
    }
    else if (const auto* m = std::get_if<Hello>(&frame))
    {
        handleHello(from, *m);
    }
    else if (const auto* m = std::get_if<DataPacket>(&frame))
    {
        handleData(from, *m);
    }
}

std::vector<RouteView>
AodvNode::routes() const
{
    std::vector<RouteView> out;
    for (const auto& [dst, e] : m_routes)
    {
        out.push_back(RouteView{dst, e.nextHop, e.hopCount, e.dstSeq, activeRoute(dst) != nullptr});
    }
    return out;
}

std::size_t
AodvNode::bufferedPackets() const
{
    std::size_t n = 0;
    for (const auto& [dst, d] : m_pending)
    {
        n += d.buffered.size();
    }
    return n;
}

Rreq
AodvNode::startDiscovery(NodeId dst)
{
    if (m_pending.count(dst) != 0)
    {
        throw std::logic_error("route discovery already pending");
    }
    PendingDiscovery& d = m_pending[dst];
    d.dst = dst;
    d.retriesLeft = m_config.rreqRetries;
    return sendRreq(d);
}

Rreq
AodvNode::sendRreq(PendingDiscovery& d)
{
    ++m_ownSeq;
    ++m_bcastId;
    Rreq rreq;
    rreq.src = self();
    rreq.srcSeq = m_ownSeq;
    rreq.bcastId = m_bcastId;
    rreq.dst = d.dst;
    const RouteEntry* known = route(d.dst);
    rreq.dstLastSeq = known ? known->dstSeq : 0;
    m_seen.emplace(self(), m_bcastId);
    d.requestedAt = now();
    world().broadcast(self(), rreq);
    const NodeId dst = d.dst;
    d.timer = engine().scheduleIn(m_config.rrepWaitTimeout, [this, dst]() { discoveryTimeout(dst); });
    return rreq;
}

void
AodvNode::discoveryTimeout(NodeId dst)
{
    auto it = m_pending.find(dst);
    if (it == m_pending.end())
    {
        return;
    }
    if (it->second.retriesLeft > 0)
    {
        --it->second.retriesLeft;
        sendRreq(it->second);
        return;
    }
    std::deque<DataPacket> lost = std::move(it->second.buffered);
    m_pending.erase(it);
    for (const auto& p : lost)
    {
        recordDrop(p, "RTO");
    }
}

void
AodvNode::handleRreq(NodeId from, const Rreq& rreq)
{
    if (rreq.src == self() || !m_seen.emplace(rreq.src, rreq.bcastId).second)
    {
        return;
    }
    m_reverse[rreq.src] =
        ReversePathEntry{rreq.src, from, rreq.hopCount + 1, now() + m_config.reversePathLifetime};

    Rrep reply;
    reply.src = rreq.src;
    reply.dst = rreq.dst;
    if (rreq.dst == self())
    {
        m_ownSeq = std::max(m_ownSeq, rreq.dstLastSeq) + 1;
        reply.dstSeq = m_ownSeq;
        reply.hopCount = 0;
        reply.lifetime = m_config.activeRouteTimeout;
    }
    else if (RouteEntry* e = activeRouteMut(rreq.dst); e && e->dstSeq >= rreq.dstLastSeq)
    {
        reply.dstSeq = e->dstSeq;
        reply.hopCount = e->hopCount;
        reply.lifetime = e->expiresAt - now();
        e->precursors.insert(from);
    }
    else
    {
        Rreq next = rreq;
        ++next.hopCount;
        const SimTime jitter = engine().rng().uniform(0.0, m_config.maxJitter);
        engine().scheduleIn(jitter, [this, next]() { world().broadcast(self(), next); });
        return;
    }
    if (world().unicast(self(), from, reply) == UnicastOutcome::LinkBreak)
    {
        recordControlDrop(reply);
    }
}

void
AodvNode::handleRrep(NodeId from, const Rrep& rrep)
{
    RouteEntry candidate;
    candidate.dst = rrep.dst;
    candidate.nextHop = from;
    candidate.hopCount = rrep.hopCount + 1;
    candidate.dstSeq = rrep.dstSeq;
    candidate.expiresAt = now() + rrep.lifetime;
    candidate.active = true;
    const bool updated = updateRoute(candidate);

    if (rrep.src == self())
    {
        auto it = m_pending.find(rrep.dst);
        const RouteEntry* e = activeRoute(rrep.dst);
        if (it == m_pending.end() || e == nullptr)
        {
            return;
        }
        engine().cancel(it->second.timer);
        if (context().routeInstalled)
        {
            context().routeInstalled(
                RouteInstall{self(), rrep.dst, e->hopCount, it->second.requestedAt, now()});
        }
        std::deque<DataPacket> buffered = std::move(it->second.buffered);
        m_pending.erase(it);
        for (const auto& p : buffered)
        {
            originateData(p);
        }
        return;
    }
    if (!updated)
    {
        return;
    }
    auto rev = m_reverse.find(rrep.src);
    if (rev == m_reverse.end() || rev->second.expiresAt <= now())
    {
        recordControlDrop(rrep);
        return;
    }
    const NodeId via = rev->second.via;
    m_routes.at(rrep.dst).precursors.insert(via);
    Rrep next = rrep;
    ++next.hopCount;
    if (world().unicast(self(), via, next) == UnicastOutcome::LinkBreak)
    {
        recordControlDrop(next);
    }
}

bool
AodvNode::updateRoute(const RouteEntry& candidate)
{
    auto it = m_routes.find(candidate.dst);
    if (it == m_routes.end())
    {
        m_routes.emplace(candidate.dst, candidate);
        return true;
    }
    RouteEntry& e = it->second;
    const bool live = e.active && e.expiresAt > now();
    const bool replace = candidate.dstSeq > e.dstSeq ||
                         (candidate.dstSeq == e.dstSeq && candidate.hopCount < e.hopCount) ||
                         (!live && candidate.dstSeq == e.dstSeq);
    if (!replace)
    {
        return false;
    }
    std::set<NodeId> precursors = std::move(e.precursors);
    precursors.insert(candidate.precursors.begin(), candidate.precursors.end());
    e = candidate;
    e.precursors = std::move(precursors);
    return true;
}

void
AodvNode::forward(RouteEntry& entry, const DataPacket& packet)
{
    entry.expiresAt = std::max(entry.expiresAt, now() + m_config.activeRouteTimeout);
    const NodeId next = entry.nextHop;
    if (transmit(next, packet) == UnicastOutcome::LinkBreak)
    {
        recordDrop(packet, "LINK");
        onLinkBreak(next);
    }
}

void
AodvNode::handleData(NodeId from, const DataPacket& packet)
{
    if (packet.dst == self())
    {
        recordDelivery(packet);
        return;
    }
    if (RouteEntry* e = activeRouteMut(packet.dst))
    {
        forward(*e, packet);
        return;
    }
    recordDrop(packet, "NRTE");
    if (const RouteEntry* stale = route(packet.dst))
    {
        sendRerr({Unreachable{packet.dst, stale->dstSeq}}, {from});
    }
}

std::optional<Rerr>
AodvNode::onLinkBreak(NodeId deadNeighbor)
{
    m_helloNeighbors.erase(deadNeighbor);
    std::vector<Unreachable> lost;
    std::set<NodeId> notify;
    for (auto& [dst, e] : m_routes)
    {
        if (e.nextHop == deadNeighbor && e.active && e.expiresAt > now())
        {
            e.active = false;
            ++e.dstSeq;
            lost.push_back(Unreachable{dst, e.dstSeq});
            notify.insert(e.precursors.begin(), e.precursors.end());
            e.precursors.clear();
        }
    }
    if (lost.empty())
    {
        return std::nullopt;
    }
    sendRerr(lost, notify);
    rediscover(lost);
    return Rerr{lost};
}

void
AodvNode::handleRerr(NodeId from, const Rerr& rerr)
{
    std::vector<Unreachable> lost;
    std::set<NodeId> notify;
    for (const auto& u : rerr.unreachable)
    {
        auto it = m_routes.find(u.dst);
        if (it == m_routes.end())
        {
            continue;
        }
        RouteEntry& e = it->second;
        if (e.active && e.expiresAt > now() && e.nextHop == from && e.dstSeq <= u.dstSeq)
        {
            e.active = false;
            e.dstSeq = u.dstSeq;
            lost.push_back(Unreachable{u.dst, e.dstSeq});
            notify.insert(e.precursors.begin(), e.precursors.end());
            e.precursors.clear();
        }
    }
    if (lost.empty())
    {
        return;
    }
    sendRerr(lost, notify);
    rediscover(lost);
}

void
AodvNode::sendRerr(const std::vector<Unreachable>& unreachable, const std::set<NodeId>& to)
{
    const Rerr rerr{unreachable};
    for (NodeId n : to)
    {
        if (n == self())
        {
            continue;
        }
        if (world().unicast(self(), n, rerr) == UnicastOutcome::LinkBreak)
        {
            recordControlDrop(rerr);
        }
    }
}

void
AodvNode::rediscover(const std::vector<Unreachable>& lost)
{
    if (!context().routeNeeded)
    {
        return;
    }
    for (const auto& u : lost)
    {
        if (context().routeNeeded(u.dst) && m_pending.count(u.dst) == 0 &&
            activeRoute(u.dst) == nullptr)
        {
            startDiscovery(u.dst);
        }
    }
}

void
AodvNode::handleHello(NodeId from, const Hello&)
{
    m_helloNeighbors[from] = now();
}

void
AodvNode::helloTick()
{
    expireRoutes(now());
    if (m_config.helloInterval <= 0.0)
    {
        return;
    }
    if (m_config.helloAlways || hasActiveRoute())
    {
        world().broadcast(self(), Hello{self(), m_ownSeq});
    }
    const SimTime limit = m_config.allowedHelloLoss * m_config.helloInterval;
    std::vector<NodeId> silent;
    for (const auto& [n, heard] : m_helloNeighbors)
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
}

std::vector<NodeId>
AodvNode::expireRoutes(SimTime t)
{
    std::vector<NodeId> expired;
    for (auto& [dst, e] : m_routes)
    {
        if (e.active && e.expiresAt <= t)
        {
            e.active = false;
            ++e.dstSeq;
            expired.push_back(dst);
        }
    }
    std::erase_if(m_reverse, [t](const auto& kv) { return kv.second.expiresAt <= t; });
    return expired;
}

const RouteEntry*
AodvNode::route(NodeId dst) const
{
    auto it = m_routes.find(dst);
    return it == m_routes.end() ? nullptr : &it->second;
}

const RouteEntry*
AodvNode::activeRoute(NodeId dst) const
{
    const RouteEntry* e = route(dst);
    return (e && e->active && e->expiresAt > now()) ? e : nullptr;
}

RouteEntry*
AodvNode::activeRouteMut(NodeId dst)
{
    return const_cast<RouteEntry*>(activeRoute(dst));
}

const ReversePathEntry*
AodvNode::reversePath(NodeId toward) const
{
    auto it = m_reverse.find(toward);
    return it == m_reverse.end() ? nullptr : &it->second;
}

const PendingDiscovery*
AodvNode::pending(NodeId dst) const
{
    auto it = m_pending.find(dst);
    return it == m_pending.end() ? nullptr : &it->second;
}

bool
AodvNode::hasActiveRoute() const
{
    return std::any_of(m_routes.begin(), m_routes.end(), [this](const auto& kv) {
        return activeRoute(kv.first) != nullptr;
    });
}

} // namespace manet
