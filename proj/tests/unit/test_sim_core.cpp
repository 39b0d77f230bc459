#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "manet/sim_core.hpp"

using namespace manet;

TEST_SUITE("sim_core")
{
    TEST_CASE("schedule returns a handle and grows the queue")
    {
        Engine e;
        auto h = e.schedule(1.0, [] {});
        CHECK(h.valid());
        CHECK(e.pending() == 1);
    }

    TEST_CASE("scheduling into the past throws")
    {
        Engine e;
        e.schedule(1.0, [] {});
        e.runUntil(1.0);
        CHECK_THROWS_AS(e.schedule(0.5, [] {}), PastTime);
    }

    TEST_CASE("equal times fire in insertion order")
    {
        Engine e;
        std::string order;
        e.schedule(2.0, [&] { order += 'A'; });
        e.schedule(2.0, [&] { order += 'B'; });
        e.schedule(1.0, [&] { order += 'C'; });
        e.runUntil(3.0);
        CHECK(order == "CAB");
    }

    TEST_CASE("cancel semantics")
    {
        Engine e;
        int fired = 0;
        auto h = e.schedule(1.0, [&] { ++fired; });
        CHECK(e.cancel(h));
        CHECK_FALSE(e.cancel(h));
        auto g = e.schedule(1.0, [&] { ++fired; });
        e.runUntil(2.0);
        CHECK(fired == 1);
        CHECK_FALSE(e.cancel(g));
        CHECK_FALSE(e.cancel(EventHandle{}));
    }

    TEST_CASE("runUntil on an empty queue advances the clock")
    {
        Engine e;
        CHECK(e.runUntil(5.0) == 0);
        CHECK(e.now() == 5.0);
        CHECK(e.runUntil(5.0) == 0);
    }

    TEST_CASE("runUntil includes events exactly at the horizon and leaves later ones")
    {
        Engine e;
        int fired = 0;
        e.schedule(5.0, [&] { ++fired; });
        e.schedule(5.000001, [&] { ++fired; });
        CHECK(e.runUntil(5.0) == 1);
        CHECK(e.pending() == 1);
        CHECK(e.now() == 5.0);
    }

    TEST_CASE("events scheduled during the run are honoured")
    {
        Engine e;
        std::vector<double> times;
        e.schedule(1.0, [&] {
            times.push_back(e.now());
            e.scheduleIn(0.5, [&] { times.push_back(e.now()); });
            e.scheduleIn(0.0, [&] { times.push_back(e.now()); });
        });
        e.runUntil(2.0);
        CHECK(times == std::vector<double>{1.0, 1.0, 1.5});
    }

    TEST_CASE("random batches replay identically")
    {
        auto replay = [](std::uint64_t seed) {
            std::mt19937_64 gen(seed);
            Engine e;
            std::vector<int> order;
            for (int i = 0; i < 500; ++i)
            {
                const double t = static_cast<double>(gen() % 50) / 10.0;
                e.schedule(t, [&order, i] { order.push_back(i); });
            }
            e.runUntil(10.0);
            return order;
        };
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            const auto a = replay(seed);
            CHECK(a.size() == 500);
            CHECK(a == replay(seed));
        }
    }

    TEST_CASE("step observer sees every processed event")
    {
        Engine e;
        int seen = 0;
        e.setStepObserver([&] { ++seen; });
        for (int i = 0; i < 7; ++i)
        {
            e.schedule(i * 0.1, [] {});
        }
        e.cancel(e.schedule(0.05, [] {}));
        CHECK(e.runUntil(1.0) == 7);
        CHECK(seen == 7);
    }

    TEST_CASE("rng is deterministic and uniform lies in [0, 1)")
    {
        Rng a(42), b(42), c(43);
        bool differs = false;
        for (int i = 0; i < 1000; ++i)
        {
            const double x = a.uniform();
            CHECK(x == b.uniform());
            CHECK(x >= 0.0);
            CHECK(x < 1.0);
            differs = differs || x != c.uniform();
        }
        CHECK(differs);
        for (int i = 0; i < 100; ++i)
        {
            CHECK(a.below(7) < 7);
        }
        CHECK_THROWS(a.below(0));
    }
}
