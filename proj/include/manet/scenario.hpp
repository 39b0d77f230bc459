#ifndef MANET_SCENARIO_HPP
#define MANET_SCENARIO_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "manet/geometry.hpp"
#include "manet/messages.hpp"
#include "manet/world.hpp"

namespace manet
{

class SyntaxError : public std::runtime_error
{
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& what);
    std::size_t line() const { return m_line; }
    std::size_t column() const { return m_column; }

private:
    std::size_t m_line;
    std::size_t m_column;
};

class SemanticError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class UnknownScenario : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct Area
{
    double width = 800.0;
    double height = 800.0;

    bool operator==(const Area&) const = default;
};

struct TrafficFlow
{
    NodeId src = 0;
    NodeId dst = 0;
    double rate = 10.0;
    std::uint32_t packetSize = 512;
    SimTime start = 1.0;
    SimTime stop = 5.0;

    bool operator==(const TrafficFlow&) const = default;
};

struct ScenarioSpec
{
    Area area;
    RadioModel radio;
    /// Initial position of node i at index i.
    std::vector<Position> nodes;
    std::vector<WaypointLeg> movements;
    std::vector<TrafficFlow> flows;
    SimTime endTime = 0.0;

    bool operator==(const ScenarioSpec&) const = default;
};

/// Parses the line-oriented scenario format and validates the result.
ScenarioSpec parseScenario(std::string_view text);

/// Inverse of parseScenario; doubles use the shortest round-trip form.
std::string serializeScenario(const ScenarioSpec& spec);

void validateScenario(const ScenarioSpec& spec);

ScenarioSpec builtinScenario(std::string_view name);
std::string_view builtinScenarioText(std::string_view name);
std::vector<std::string> builtinScenarioNames();

/// A builtin name, or else a path to a scenario file.
ScenarioSpec loadScenario(const std::string& nameOrPath);

Mobility buildMobility(const ScenarioSpec& spec);

/// start + k / rate for every k with the result before stop.
std::vector<SimTime> emissionTimes(const TrafficFlow& flow);

} // namespace manet

#endif
