#ifndef MANET_METRICS_HPP
#define MANET_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/messages.hpp"
#include "manet/sim_core.hpp"

namespace manet
{

enum class EventKind : char
{
    Sent = 's',
    Received = 'r',
    Dropped = 'd',
    ControlTx = 'c',
    DataTx = 'f',
};

/// One trace line. For data events src/dst are the flow endpoints; for control
/// events src is the transmitter and dst the receiver (-1 for broadcast).
struct LedgerEvent
{
    EventKind kind = EventKind::Sent;
    SimTime t = 0.0;
    NodeId node = 0;
    std::string subkind;
    std::uint32_t size = 0;
    PacketUid uid = 0;
    std::int64_t src = -1;
    std::int64_t dst = -1;

    bool operator==(const LedgerEvent&) const = default;
};

class OutOfOrder : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class InconsistentLedger : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class NoTransmissions : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ZeroLength : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class BadDuration : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class DegenerateTrajectory : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class SinkFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// True for RREQ, RREP, RERR, HELLO and DSDV.
bool isControlSubkind(const std::string& subkind);

/// Append-only event log. Times are stored at microsecond resolution so the
/// persisted trace reproduces the in-memory ledger exactly.
class Ledger
{
public:
    void record(LedgerEvent ev);

    PacketUid newUid() { return ++m_lastUid; }

    const std::vector<LedgerEvent>& events() const { return m_events; }

    std::uint64_t sent() const { return m_sent; }
    std::uint64_t received() const { return m_received; }
    std::uint64_t dropped() const { return m_dropped; }
    std::uint64_t dataTransmissions() const { return m_dataTx; }
    std::uint64_t controlTransmissions() const { return m_controlTx; }
    std::uint64_t controlDrops() const { return m_controlDrops; }

    /// Sent uids with no Received/Dropped event.
    std::uint64_t unresolved() const { return m_sent - m_received - m_dropped; }

private:
    enum class Fate : std::uint8_t
    {
        Open,
        Resolved,
    };

    std::vector<LedgerEvent> m_events;
    std::unordered_map<PacketUid, Fate> m_data;
    PacketUid m_lastUid = 0;
    std::uint64_t m_sent = 0;
    std::uint64_t m_received = 0;
    std::uint64_t m_dropped = 0;
    std::uint64_t m_dataTx = 0;
    std::uint64_t m_controlTx = 0;
    std::uint64_t m_controlDrops = 0;
};

SimTime quantize(SimTime t);

struct SeriesPoint
{
    SimTime t = 0.0;
    double value = 0.0;

    bool operator==(const SeriesPoint&) const = default;
};

using Series = std::vector<SeriesPoint>;

double deliveryRatio(const Ledger& ledger);
double transmissionEfficiency(const Ledger& ledger);

/// Delivered payload bits per second over (t - window, t], sampled at k * step.
Series throughputSeries(const Ledger& ledger, SimTime window, SimTime step, SimTime endTime);

/// (receive time, end-to-end delay) per delivered packet.
Series delaySeries(const Ledger& ledger);

/// Running count of events of one kind, sampled at k * step.
Series cumulativeSeries(const Ledger& ledger, EventKind kind, SimTime step, SimTime endTime);

double meanValue(const Series& series);

struct ControlOverhead
{
    std::map<std::string, std::uint64_t> byKind;
    std::uint64_t total = 0;
};

ControlOverhead controlOverhead(const Ledger& ledger);

struct DeliveredPath
{
    PacketUid uid = 0;
    NodeId src = 0;
    NodeId dst = 0;
    SimTime receivedAt = 0.0;
    std::vector<NodeId> path;
};

/// Hop-by-hop path of every delivered packet, in delivery order.
std::vector<DeliveredPath> deliveredPaths(const Ledger& ledger);

/// Distinct consecutive paths taken by delivered packets of one flow.
std::vector<std::vector<NodeId>> routeSequence(const Ledger& ledger, NodeId src, NodeId dst);

/// Sum over flows of (number of distinct consecutive paths - 1).
std::uint64_t routeChanges(const Ledger& ledger);

/// Nodes per km.
double density(std::uint64_t nodeCount, double lengthKm);
/// Crossings per hour.
double flowRate(std::uint64_t crossings, double durationSeconds);
double meanSpeed(const std::vector<std::pair<SimTime, Position>>& trajectory);

struct Dataset
{
    std::string label;
    Series points;
};

void emitPlot(std::ostream& out, const Series& series, const std::string& title);
void emitPlot(std::ostream& out, const std::string& title, const std::vector<Dataset>& datasets);

std::string formatEvent(const LedgerEvent& ev);
void writeTrace(std::ostream& out, const Ledger& ledger);
/// Parses a trace written by writeTrace; throws InconsistentLedger on bad lines.
Ledger readTrace(std::istream& in);

} // namespace manet

#endif
