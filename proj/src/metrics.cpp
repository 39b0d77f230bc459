#include "manet/metrics.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace manet
{

namespace
{

bool
isDataEvent(const LedgerEvent& ev)
{
    switch (ev.kind)
    {
    case EventKind::Sent:
    case EventKind::Received:
    case EventKind::DataTx:
        return true;
    case EventKind::Dropped:
        return !isControlSubkind(ev.subkind);
    case EventKind::ControlTx:
        return false;
    }
    return false;
}

std::uint64_t
sampleCount(SimTime step, SimTime endTime)
{
    if (step <= 0.0)
    {
        throw std::invalid_argument("sample step must be positive");
    }
    return static_cast<std::uint64_t>(std::floor(endTime / step + 1e-9));
}

std::string
fixed6(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

bool
isControlSubkind(const std::string& subkind)
{
    return subkind == "RREQ" || subkind == "RREP" || subkind == "RERR" || subkind == "HELLO" ||
           subkind == "DSDV";
}

SimTime
quantize(SimTime t)
{
    return std::round(t * 1e6) / 1e6;
}

void
Ledger::record(LedgerEvent ev)
{
    ev.t = quantize(ev.t);
    if (!m_events.empty() && ev.t < m_events.back().t)
    {
        throw OutOfOrder("ledger event at " + fixed6(ev.t) + " after " +
                         fixed6(m_events.back().t));
    }
    if (isDataEvent(ev))
    {
        auto it = m_data.find(ev.uid);
        switch (ev.kind)
        {
        case EventKind::Sent:
            if (it != m_data.end())
            {
                throw InconsistentLedger("uid " + std::to_string(ev.uid) + " sent twice");
            }
            m_data.emplace(ev.uid, Fate::Open);
            m_lastUid = std::max(m_lastUid, ev.uid);
            ++m_sent;
            break;
        case EventKind::DataTx:
            if (it == m_data.end() || it->second != Fate::Open)
            {
                throw InconsistentLedger("forward of unknown or resolved uid " +
                                         std::to_string(ev.uid));
            }
            ++m_dataTx;
            break;
        default:
            if (it == m_data.end() || it->second != Fate::Open)
            {
                throw InconsistentLedger("resolution of unknown or resolved uid " +
                                         std::to_string(ev.uid));
            }
            it->second = Fate::Resolved;
            ++(ev.kind == EventKind::Received ? m_received : m_dropped);
            break;
        }
    }
    else
    {
        m_lastUid = std::max(m_lastUid, ev.uid);
        ++(ev.kind == EventKind::ControlTx ? m_controlTx : m_controlDrops);
    }
    m_events.push_back(std::move(ev));
}

double
deliveryRatio(const Ledger& ledger)
{
    if (ledger.sent() == 0)
    {
        return 1.0;
    }
    return static_cast<double>(ledger.received()) / static_cast<double>(ledger.sent());
}

double
transmissionEfficiency(const Ledger& ledger)
{
    if (ledger.dataTransmissions() == 0)
    {
        throw NoTransmissions("no data transmissions in ledger");
    }
    return static_cast<double>(ledger.received()) /
           static_cast<double>(ledger.dataTransmissions());
}

Series
throughputSeries(const Ledger& ledger, SimTime window, SimTime step, SimTime endTime)
{
    if (window <= 0.0)
    {
        throw std::invalid_argument("throughput window must be positive");
    }
    std::vector<std::pair<SimTime, double>> rx;
    for (const auto& ev : ledger.events())
    {
        if (ev.kind == EventKind::Received)
        {
            rx.emplace_back(ev.t, 8.0 * ev.size);
        }
    }
    Series out;
    const std::uint64_t n = sampleCount(step, endTime);
    for (std::uint64_t k = 1; k <= n; ++k)
    {
        const SimTime t = static_cast<double>(k) * step;
        double bits = 0.0;
        for (const auto& [at, b] : rx)
        {
            if (at > t - window && at <= t)
            {
                bits += b;
            }
        }
        out.push_back({t, bits / window});
    }
    return out;
}

Series
delaySeries(const Ledger& ledger)
{
    std::unordered_map<PacketUid, SimTime> sentAt;
    Series out;
    for (const auto& ev : ledger.events())
    {
        if (ev.kind == EventKind::Sent)
        {
            sentAt[ev.uid] = ev.t;
        }
        else if (ev.kind == EventKind::Received)
        {
            out.push_back({ev.t, ev.t - sentAt.at(ev.uid)});
        }
    }
    return out;
}

Series
cumulativeSeries(const Ledger& ledger, EventKind kind, SimTime step, SimTime endTime)
{
    std::vector<SimTime> times;
    for (const auto& ev : ledger.events())
    {
        if (ev.kind == kind && (kind != EventKind::Dropped || !isControlSubkind(ev.subkind)))
        {
            times.push_back(ev.t);
        }
    }
    Series out;
    const std::uint64_t n = sampleCount(step, endTime);
    for (std::uint64_t k = 1; k <= n; ++k)
    {
        const SimTime t = static_cast<double>(k) * step;
        const auto count = std::upper_bound(times.begin(), times.end(), t) - times.begin();
        out.push_back({t, static_cast<double>(count)});
    }
    return out;
}

double
meanValue(const Series& series)
{
    if (series.empty())
    {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& p : series)
    {
        sum += p.value;
    }
    return sum / static_cast<double>(series.size());
}

ControlOverhead
controlOverhead(const Ledger& ledger)
{
    ControlOverhead out;
    for (const auto& ev : ledger.events())
    {
        if (ev.kind == EventKind::ControlTx)
        {
            ++out.byKind[ev.subkind];
            ++out.total;
        }
    }
    return out;
}

std::vector<DeliveredPath>
deliveredPaths(const Ledger& ledger)
{
    std::unordered_map<PacketUid, std::vector<NodeId>> hops;
    std::vector<DeliveredPath> out;
    for (const auto& ev : ledger.events())
    {
        if (ev.kind == EventKind::DataTx)
        {
            hops[ev.uid].push_back(ev.node);
        }
        else if (ev.kind == EventKind::Received)
        {
            DeliveredPath p;
            p.uid = ev.uid;
            p.src = static_cast<NodeId>(ev.src);
            p.dst = static_cast<NodeId>(ev.dst);
            p.receivedAt = ev.t;
            p.path = std::move(hops[ev.uid]);
            p.path.push_back(ev.node);
            hops.erase(ev.uid);
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<std::vector<NodeId>>
routeSequence(const Ledger& ledger, NodeId src, NodeId dst)
{
    std::vector<std::vector<NodeId>> seq;
    for (auto& p : deliveredPaths(ledger))
    {
        if (p.src != src || p.dst != dst)
        {
            continue;
        }
        if (seq.empty() || seq.back() != p.path)
        {
            seq.push_back(std::move(p.path));
        }
    }
    return seq;
}

std::uint64_t
routeChanges(const Ledger& ledger)
{
    std::set<std::pair<NodeId, NodeId>> flows;
    for (const auto& ev : ledger.events())
    {
        if (ev.kind == EventKind::Sent)
        {
            flows.emplace(static_cast<NodeId>(ev.src), static_cast<NodeId>(ev.dst));
        }
    }
    std::uint64_t changes = 0;
    for (const auto& [s, d] : flows)
    {
        const auto seq = routeSequence(ledger, s, d);
        if (!seq.empty())
        {
            changes += seq.size() - 1;
        }
    }
    return changes;
}

double
density(std::uint64_t nodeCount, double lengthKm)
{
    if (!(lengthKm > 0.0))
    {
        throw ZeroLength("density: length must be positive");
    }
    return static_cast<double>(nodeCount) / lengthKm;
}

double
flowRate(std::uint64_t crossings, double durationSeconds)
{
    if (!(durationSeconds > 0.0) || durationSeconds > 3600.0)
    {
        throw BadDuration("flow rate: duration must lie in (0, 3600] seconds");
    }
    return static_cast<double>(crossings) * 3600.0 / durationSeconds;
}

double
meanSpeed(const std::vector<std::pair<SimTime, Position>>& trajectory)
{
    if (trajectory.size() < 2)
    {
        throw DegenerateTrajectory("mean speed needs at least two samples");
    }
    double length = 0.0;
    for (std::size_t i = 1; i < trajectory.size(); ++i)
    {
        if (!(trajectory[i].first > trajectory[i - 1].first))
        {
            throw DegenerateTrajectory("trajectory times must strictly increase");
        }
        length += distance(trajectory[i - 1].second, trajectory[i].second);
    }
    return length / (trajectory.back().first - trajectory.front().first);
}

void
emitPlot(std::ostream& out, const Series& series, const std::string& title)
{
    emitPlot(out, title, {Dataset{"", series}});
}

void
emitPlot(std::ostream& out, const std::string& title, const std::vector<Dataset>& datasets)
{
    if (!title.empty())
    {
        out << "TitleText: " << title << '\n';
    }
    for (std::size_t i = 0; i < datasets.size(); ++i)
    {
        if (i > 0)
        {
            out << '\n';
        }
        if (!datasets[i].label.empty())
        {
            out << '"' << datasets[i].label << '\n';
        }
        for (const auto& p : datasets[i].points)
        {
            out << fixed6(p.t) << ' ' << fixed6(p.value) << '\n';
        }
    }
    out.flush();
    if (!out)
    {
        throw SinkFailure("plot output stream failed");
    }
}

std::string
formatEvent(const LedgerEvent& ev)
{
    char buf[256];
    std::snprintf(buf,
                  sizeof buf,
                  "%c %.6f %" PRIu32 " %s %" PRIu32 " %" PRIu64 " %" PRId64 " %" PRId64,
                  static_cast<char>(ev.kind),
                  ev.t,
                  ev.node,
                  ev.subkind.c_str(),
                  ev.size,
                  ev.uid,
                  ev.src,
                  ev.dst);
    return buf;
}

void
writeTrace(std::ostream& out, const Ledger& ledger)
{
    for (const auto& ev : ledger.events())
    {
        out << formatEvent(ev) << '\n';
    }
    out.flush();
    if (!out)
    {
        throw SinkFailure("trace output stream failed");
    }
}

Ledger
readTrace(std::istream& in)
{
    Ledger ledger;
    std::string line;
    std::uint64_t lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (line.empty())
        {
            continue;
        }
        std::istringstream fields(line);
        char kind = 0;
        LedgerEvent ev;
        if (!(fields >> kind >> ev.t >> ev.node >> ev.subkind >> ev.size >> ev.uid >> ev.src >>
              ev.dst))
        {
            throw InconsistentLedger("malformed trace line " + std::to_string(lineNo));
        }
        switch (kind)
        {
        case 's':
        case 'r':
        case 'd':
        case 'c':
        case 'f':
            ev.kind = static_cast<EventKind>(kind);
            break;
        default:
            throw InconsistentLedger("unknown event kind on trace line " + std::to_string(lineNo));
        }
        ledger.record(std::move(ev));
    }
    return ledger;
}

} // namespace manet
