#ifndef MANET_GEOMETRY_HPP
#define MANET_GEOMETRY_HPP

#include <cmath>

namespace manet
{

struct Position
{
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Position&) const = default;
};

inline double
distance(const Position& a, const Position& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace manet

#endif
