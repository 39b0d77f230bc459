#include "manet/sim_core.hpp"

#include <string>

namespace manet
{

PastTime::PastTime(SimTime at, SimTime now)
    : std::logic_error("PastTime: event at " + std::to_string(at) + " scheduled from " +
                       std::to_string(now))
{
}

Rng::Rng(std::uint64_t seed) : m_gen(seed) {}

std::uint64_t
Rng::next()
{
    return m_gen();
}

double
Rng::uniform()
{
    return static_cast<double>(m_gen() >> 11) * 0x1.0p-53;
}

double
Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

std::uint64_t
Rng::below(std::uint64_t n)
{
    if (n == 0)
    {
        throw std::invalid_argument("Rng::below: empty range");
    }
    // rejection sampling keeps the result unbiased and platform independent
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do
    {
        v = m_gen();
    } while (v >= limit);
    return v % n;
}

Engine::Engine(std::uint64_t seed) : m_rng(seed) {}

EventHandle
Engine::schedule(SimTime at, Action action)
{
    if (at < m_now)
    {
        throw PastTime(at, m_now);
    }
    const std::uint64_t seq = m_nextSeq++;
    m_queue.push(Key{at, seq});
    m_actions.emplace(seq, std::move(action));
    return EventHandle(seq);
}

EventHandle
Engine::scheduleIn(SimTime delay, Action action)
{
    return schedule(m_now + delay, std::move(action));
}

bool
Engine::cancel(EventHandle handle)
{
    return handle.valid() && m_actions.erase(handle.id()) > 0;
}

bool
Engine::isPending(EventHandle handle) const
{
    return handle.valid() && m_actions.count(handle.id()) > 0;
}

std::uint64_t
Engine::runUntil(SimTime tEnd)
{
    if (tEnd < m_now)
    {
        throw PastTime(tEnd, m_now);
    }
    std::uint64_t steps = 0;
    while (!m_queue.empty() && m_queue.top().at <= tEnd)
    {
        const Key key = m_queue.top();
        m_queue.pop();
        auto it = m_actions.find(key.seq);
        if (it == m_actions.end())
        {
            continue;
        }
        Action action = std::move(it->second);
        m_actions.erase(it);
        m_now = key.at;
        action();
        ++steps;
        if (m_observer)
        {
            m_observer();
        }
    }
    m_now = tEnd;
    return steps;
}

} // namespace manet
