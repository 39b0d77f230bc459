#ifndef MANET_SIM_CORE_HPP
#define MANET_SIM_CORE_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace manet
{

/// Simulation time in seconds.
using SimTime = double;

class PastTime : public std::logic_error
{
public:
    explicit PastTime(SimTime at, SimTime now);
};

/// Seeded source of randomness; the only one a run is allowed to use.
class Rng
{
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next();
    /// Uniform in [0, 1), 53 bits.
    double uniform();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 m_gen;
};

class EventHandle
{
public:
    EventHandle() = default;
    bool valid() const { return m_id != 0; }
    std::uint64_t id() const { return m_id; }

private:
    friend class Engine;
    explicit EventHandle(std::uint64_t id) : m_id(id) {}
    std::uint64_t m_id = 0;
};

/**
 * Global clock and event queue. Events fire in (time, insertion order).
 */
class Engine
{
public:
    using Action = std::function<void()>;

    explicit Engine(std::uint64_t seed = 0);

    SimTime now() const { return m_now; }

    EventHandle schedule(SimTime at, Action action);
    EventHandle scheduleIn(SimTime delay, Action action);

    /// True if the event was pending and will no longer fire.
    bool cancel(EventHandle handle);
    bool isPending(EventHandle handle) const;

    /// Processes every event due at or before tEnd; returns the number processed.
    std::uint64_t runUntil(SimTime tEnd);

    std::size_t pending() const { return m_actions.size(); }

    /// Called after every processed event.
    void setStepObserver(Action observer) { m_observer = std::move(observer); }

    Rng& rng() { return m_rng; }

private:
    struct Key
    {
        SimTime at;
        std::uint64_t seq;
        bool operator>(const Key& o) const
        {
            return at != o.at ? at > o.at : seq > o.seq;
        }
    };

    SimTime m_now = 0.0;
    std::uint64_t m_nextSeq = 1;
    std::priority_queue<Key, std::vector<Key>, std::greater<Key>> m_queue;
    std::unordered_map<std::uint64_t, Action> m_actions;
    Action m_observer;
    Rng m_rng;
};

} // namespace manet

#endif
