#ifndef MANET_WORLD_HPP
#define MANET_WORLD_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/messages.hpp"
#include "manet/metrics.hpp"
#include "manet/sim_core.hpp"

namespace manet
{

class UnknownNode : public std::out_of_range
{
public:
    explicit UnknownNode(NodeId id);
};

class OverlappingLeg : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct WaypointLeg
{
    NodeId node = 0;
    SimTime start = 0.0;
    Position dest;
    double speed = 0.0;

    bool operator==(const WaypointLeg&) const = default;
};

struct RadioModel
{
    double range = 250.0;
    SimTime hopLatency = 0.001;

    bool operator==(const RadioModel&) const = default;
};

/// Piecewise-linear trajectories; position is held between legs.
class Mobility
{
public:
    explicit Mobility(std::vector<Position> initial = {});

    std::size_t nodeCount() const { return m_tracks.size(); }

    void addLeg(const WaypointLeg& leg);
    Position positionAt(NodeId node, SimTime t) const;
    double maxSpeed() const { return m_maxSpeed; }

private:
    struct Segment
    {
        SimTime start;
        SimTime end;
        Position from;
        Position to;
    };
    struct Track
    {
        Position origin;
        std::vector<WaypointLeg> legs;
        std::vector<Segment> segments;
    };

    const Track& track(NodeId node) const;

    std::vector<Track> m_tracks;
    double m_maxSpeed = 0.0;
};

/// Unit-disk connectivity at time t.
std::vector<std::vector<NodeId>> adjacency(const Mobility& mobility, double range, SimTime t);

/// Hop distances from src; -1 where unreachable.
std::vector<int> bfsDistances(const std::vector<std::vector<NodeId>>& adj, NodeId src);

enum class UnicastOutcome
{
    Sent,
    LinkBreak,
};

/**
 * Radio medium. Transmissions are evaluated against positions at send time and
 * arrive one hop latency later. Every transmission is recorded in the ledger.
 */
class World
{
public:
    using Receiver = std::function<void(NodeId to, NodeId from, const Frame& frame)>;

    World(Engine& engine, Mobility mobility, RadioModel radio, Ledger& ledger);

    std::size_t nodeCount() const { return m_mobility.nodeCount(); }
    const RadioModel& radio() const { return m_radio; }
    const Mobility& mobility() const { return m_mobility; }

    void setReceiver(Receiver receiver) { m_receiver = std::move(receiver); }

    Position positionAt(NodeId node, SimTime t) const;
    bool inRange(NodeId a, NodeId b, SimTime t) const;
    std::vector<NodeId> neighbors(NodeId node, SimTime t) const;

    /// Returns the nodes a delivery was scheduled for.
    std::vector<NodeId> broadcast(NodeId sender, const Frame& frame);
    UnicastOutcome unicast(NodeId sender, NodeId next, const Frame& frame);

    void applyMovement(const WaypointLeg& leg);

    /// Data frames scheduled for delivery but not yet delivered.
    std::uint64_t dataInFlight() const { return m_dataInFlight; }

private:
    void deliver(NodeId to, NodeId from, const Frame& frame);
    void recordControl(NodeId sender, std::int64_t receiver, const Frame& frame);

    Engine& m_engine;
    Mobility m_mobility;
    RadioModel m_radio;
    Ledger& m_ledger;
    Receiver m_receiver;
    std::uint64_t m_dataInFlight = 0;
};

} // namespace manet

#endif
