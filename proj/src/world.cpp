#include "manet/world.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace manet
{

UnknownNode::UnknownNode(NodeId id) : std::out_of_range("UnknownNode: " + std::to_string(id)) {}

Mobility::Mobility(std::vector<Position> initial)
{
    m_tracks.reserve(initial.size());
    for (const auto& p : initial)
    {
        m_tracks.push_back(Track{p, {}, {}});
    }
}

const Mobility::Track&
Mobility::track(NodeId node) const
{
    if (node >= m_tracks.size())
    {
        throw UnknownNode(node);
    }
    return m_tracks[node];
}

void
Mobility::addLeg(const WaypointLeg& leg)
{
    if (leg.node >= m_tracks.size())
    {
        throw UnknownNode(leg.node);
    }
    if (!(leg.speed > 0.0))
    {
        throw std::invalid_argument("waypoint speed must be positive");
    }
    if (leg.start < 0.0)
    {
        throw std::invalid_argument("waypoint start time must be non-negative");
    }
    Track& tr = m_tracks[leg.node];
    std::vector<WaypointLeg> legs = tr.legs;
    legs.insert(std::upper_bound(legs.begin(),
                                 legs.end(),
                                 leg,
                                 [](const WaypointLeg& a, const WaypointLeg& b) {
                                     return a.start < b.start;
                                 }),
                leg);
    std::vector<Segment> segments;
    Position at = tr.origin;
    for (const auto& l : legs)
    {
        if (!segments.empty() && l.start < segments.back().end)
        {
            throw OverlappingLeg("leg for node " + std::to_string(leg.node) + " at " +
                                 std::to_string(leg.start) + " overlaps another leg");
        }
        const SimTime end = l.start + distance(at, l.dest) / l.speed;
        segments.push_back(Segment{l.start, end, at, l.dest});
        at = l.dest;
    }
    tr.legs = std::move(legs);
    tr.segments = std::move(segments);
    m_maxSpeed = std::max(m_maxSpeed, leg.speed);
}

Position
Mobility::positionAt(NodeId node, SimTime t) const
{
    const Track& tr = track(node);
    Position p = tr.origin;
    for (const auto& s : tr.segments)
    {
        if (t < s.start)
        {
            break;
        }
        if (t >= s.end)
        {
            p = s.to;
            continue;
        }
        const double f = (t - s.start) / (s.end - s.start);
        return Position{s.from.x + f * (s.to.x - s.from.x), s.from.y + f * (s.to.y - s.from.y)};
    }
    return p;
}

std::vector<std::vector<NodeId>>
adjacency(const Mobility& mobility, double range, SimTime t)
{
    const auto n = static_cast<NodeId>(mobility.nodeCount());
    std::vector<Position> pos;
    pos.reserve(n);
    for (NodeId i = 0; i < n; ++i)
    {
        pos.push_back(mobility.positionAt(i, t));
    }
    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId i = 0; i < n; ++i)
    {
        for (NodeId j = 0; j < n; ++j)
        {
            if (i != j && distance(pos[i], pos[j]) <= range)
            {
                adj[i].push_back(j);
            }
        }
    }
    return adj;
}

std::vector<int>
bfsDistances(const std::vector<std::vector<NodeId>>& adj, NodeId src)
{
    std::vector<int> dist(adj.size(), -1);
    std::deque<NodeId> queue{src};
    dist.at(src) = 0;
    while (!queue.empty())
    {
        const NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : adj[u])
        {
            if (dist[v] < 0)
            {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

World::World(Engine& engine, Mobility mobility, RadioModel radio, Ledger& ledger)
    : m_engine(engine),
      m_mobility(std::move(mobility)),
      m_radio(radio),
      m_ledger(ledger)
{
    if (!(m_radio.range > 0.0) || !(m_radio.hopLatency > 0.0))
    {
        throw std::invalid_argument("radio range and hop latency must be positive");
    }
}

Position
World::positionAt(NodeId node, SimTime t) const
{
    return m_mobility.positionAt(node, t);
}

bool
World::inRange(NodeId a, NodeId b, SimTime t) const
{
    if (a == b)
    {
        throw std::invalid_argument("inRange needs two distinct nodes");
    }
    return distance(m_mobility.positionAt(a, t), m_mobility.positionAt(b, t)) <= m_radio.range;
}

std::vector<NodeId>
World::neighbors(NodeId node, SimTime t) const
{
    const Position p = m_mobility.positionAt(node, t);
    std::vector<NodeId> out;
    for (NodeId other = 0; other < nodeCount(); ++other)
    {
        if (other != node && distance(p, m_mobility.positionAt(other, t)) <= m_radio.range)
        {
            out.push_back(other);
        }
    }
    return out;
}

std::vector<NodeId>
World::broadcast(NodeId sender, const Frame& frame)
{
    const auto receivers = neighbors(sender, m_engine.now());
    recordControl(sender, -1, frame);
    for (NodeId to : receivers)
    {
        deliver(to, sender, frame);
    }
    return receivers;
}

UnicastOutcome
World::unicast(NodeId sender, NodeId next, const Frame& frame)
{
    if (sender == next)
    {
        throw std::invalid_argument("unicast to self");
    }
    if (!inRange(sender, next, m_engine.now()))
    {
        return UnicastOutcome::LinkBreak;
    }
    if (const auto* data = std::get_if<DataPacket>(&frame))
    {
        m_ledger.record(LedgerEvent{EventKind::DataTx,
                                    m_engine.now(),
                                    sender,
                                    "DATA",
                                    data->size,
                                    data->uid,
                                    data->src,
                                    data->dst});
        ++m_dataInFlight;
    }
    else
    {
        recordControl(sender, next, frame);
    }
    deliver(next, sender, frame);
    return UnicastOutcome::Sent;
}

void
World::applyMovement(const WaypointLeg& leg)
{
    if (leg.start < m_engine.now())
    {
        throw PastTime(leg.start, m_engine.now());
    }
    m_mobility.addLeg(leg);
}

void
World::deliver(NodeId to, NodeId from, const Frame& frame)
{
    m_engine.scheduleIn(m_radio.hopLatency, [this, to, from, frame]() {
        if (std::holds_alternative<DataPacket>(frame))
        {
            --m_dataInFlight;
        }
        if (m_receiver)
        {
            m_receiver(to, from, frame);
        }
    });
}

void
World::recordControl(NodeId sender, std::int64_t receiver, const Frame& frame)
{
    m_ledger.record(LedgerEvent{EventKind::ControlTx,
                                m_engine.now(),
                                sender,
                                std::string(frameKind(frame)),
                                frameSize(frame),
                                m_ledger.newUid(),
                                sender,
                                receiver});
}

} // namespace manet
