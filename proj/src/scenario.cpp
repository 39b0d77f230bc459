#include "manet/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace manet
{

namespace detail
{
extern const std::string_view kScenario1Text;
extern const std::string_view kScenario2Text;
} // namespace detail

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("SyntaxError at " + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + what),
      m_line(line),
      m_column(column)
{
}

namespace
{

struct Token
{
    std::string_view text;
    std::size_t column;
};

class LineReader
{
public:
    LineReader(std::size_t line, std::vector<Token> tokens)
        : m_line(line),
          m_tokens(std::move(tokens))
    {
    }

    const std::string_view directive() const { return m_tokens.front().text; }

    void expectArity(std::size_t n) const
    {
        if (m_tokens.size() != n + 1)
        {
            const std::size_t col = m_tokens.size() > n + 1 ? m_tokens[n + 1].column
                                                            : m_tokens.back().column +
                                                                  m_tokens.back().text.size();
            throw SyntaxError(m_line,
                              col,
                              "'" + std::string(directive()) + "' takes " + std::to_string(n) +
                                  " arguments");
        }
    }

    double real(std::size_t i) const
    {
        const Token& tok = m_tokens[i];
        double v = 0.0;
        const char* end = tok.text.data() + tok.text.size();
        auto [ptr, ec] = std::from_chars(tok.text.data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v))
        {
            throw SyntaxError(m_line, tok.column, "expected a number, got '" + std::string(tok.text) + "'");
        }
        return v;
    }

    std::uint64_t integer(std::size_t i) const
    {
        const Token& tok = m_tokens[i];
        std::uint64_t v = 0;
        const char* end = tok.text.data() + tok.text.size();
        auto [ptr, ec] = std::from_chars(tok.text.data(), end, v);
        if (ec != std::errc() || ptr != end)
        {
            throw SyntaxError(m_line,
                              tok.column,
                              "expected a non-negative integer, got '" + std::string(tok.text) + "'");
        }
        return v;
    }

    NodeId node(std::size_t i) const
    {
        const std::uint64_t v = integer(i);
        if (v > 1'000'000)
        {
            throw SyntaxError(m_line, m_tokens[i].column, "node id too large");
        }
        return static_cast<NodeId>(v);
    }

    std::size_t line() const { return m_line; }

private:
    std::size_t m_line;
    std::vector<Token> m_tokens;
};

std::vector<Token>
tokenize(std::string_view line)
{
    if (auto hash = line.find('#'); hash != std::string_view::npos)
    {
        line = line.substr(0, hash);
    }
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size())
    {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
        {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
        {
            ++i;
        }
        if (i > start)
        {
            out.push_back(Token{line.substr(start, i - start), start + 1});
        }
    }
    return out;
}

std::string
shortest(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

bool
inside(const Area& area, const Position& p)
{
    return p.x >= 0.0 && p.x <= area.width && p.y >= 0.0 && p.y <= area.height;
}

std::string
str(double v)
{
    return shortest(v);
}

} // namespace

ScenarioSpec
parseScenario(std::string_view text)
{
    ScenarioSpec spec;
    std::vector<std::optional<Position>> nodes;
    std::optional<SimTime> end;
    std::size_t lineNo = 0;
    std::size_t directives = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
        {
            nl = text.size();
        }
        const std::string_view raw = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineNo;
        auto tokens = tokenize(raw);
        if (tokens.empty())
        {
            continue;
        }
        ++directives;
        const LineReader r(lineNo, std::move(tokens));
        const auto d = r.directive();
        if (d == "area")
        {
            r.expectArity(2);
            spec.area = Area{r.real(1), r.real(2)};
        }
        else if (d == "range")
        {
            r.expectArity(1);
            spec.radio.range = r.real(1);
        }
        else if (d == "node")
        {
            r.expectArity(3);
            const NodeId id = r.node(1);
            if (nodes.size() <= id)
            {
                nodes.resize(id + 1);
            }
            if (nodes[id])
            {
                throw SemanticError("line " + std::to_string(lineNo) + ": node " +
                                    std::to_string(id) + " declared twice");
            }
            nodes[id] = Position{r.real(2), r.real(3)};
        }
        else if (d == "move")
        {
            r.expectArity(5);
            spec.movements.push_back(
                WaypointLeg{r.node(2), r.real(1), Position{r.real(3), r.real(4)}, r.real(5)});
        }
        else if (d == "flow")
        {
            r.expectArity(6);
            const std::uint64_t size = r.integer(4);
            if (size > UINT32_MAX)
            {
                throw SyntaxError(lineNo, 0, "packet size too large");
            }
            spec.flows.push_back(TrafficFlow{r.node(1),
                                             r.node(2),
                                             r.real(3),
                                             static_cast<std::uint32_t>(size),
                                             r.real(5),
                                             r.real(6)});
        }
        else if (d == "end")
        {
            r.expectArity(1);
            if (end)
            {
                throw SemanticError("line " + std::to_string(lineNo) + ": duplicate end directive");
            }
            end = r.real(1);
        }
        else
        {
            throw SyntaxError(lineNo, 1, "unknown directive '" + std::string(d) + "'");
        }
    }
    if (directives == 0)
    {
        throw SyntaxError(1, 1, "empty scenario");
    }
    if (!end)
    {
        throw SyntaxError(lineNo, 1, "missing end directive");
    }
    spec.endTime = *end;
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        if (!nodes[i])
        {
            throw SemanticError("node ids must be dense; node " + std::to_string(i) + " missing");
        }
        spec.nodes.push_back(*nodes[i]);
    }
    validateScenario(spec);
    return spec;
}

void
validateScenario(const ScenarioSpec& spec)
{
    const auto n = spec.nodes.size();
    if (n == 0)
    {
        throw SemanticError("scenario declares no nodes");
    }
    if (!(spec.area.width > 0.0) || !(spec.area.height > 0.0))
    {
        throw SemanticError("area must have positive size");
    }
    if (!(spec.radio.range > 0.0) || !(spec.radio.hopLatency > 0.0))
    {
        throw SemanticError("radio range and hop latency must be positive");
    }
    if (!(spec.endTime > 0.0))
    {
        throw SemanticError("end time must be positive");
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!inside(spec.area, spec.nodes[i]))
        {
            throw SemanticError("node " + std::to_string(i) + " lies outside the area");
        }
    }
    for (const auto& m : spec.movements)
    {
        if (m.node >= n)
        {
            throw SemanticError("move references unknown node " + std::to_string(m.node));
        }
        if (m.start < 0.0 || m.start >= spec.endTime)
        {
            throw SemanticError("move time " + str(m.start) + " outside [0, end)");
        }
        if (!(m.speed > 0.0))
        {
            throw SemanticError("move speed must be positive");
        }
        if (!inside(spec.area, m.dest))
        {
            throw SemanticError("move destination outside the area");
        }
    }
    try
    {
        buildMobility(spec);
    }
    catch (const OverlappingLeg& e)
    {
        throw SemanticError(e.what());
    }
    for (const auto& f : spec.flows)
    {
        if (f.src >= n || f.dst >= n)
        {
            throw SemanticError("flow references unknown node");
        }
        if (f.src == f.dst)
        {
            throw SemanticError("flow source and destination coincide");
        }
        if (!(f.rate > 0.0) || f.packetSize == 0)
        {
            throw SemanticError("flow rate and packet size must be positive");
        }
        if (f.start < 0.0 || !(f.start < f.stop) || f.stop > spec.endTime)
        {
            throw SemanticError("flow times must satisfy 0 <= start < stop <= end");
        }
    }
}

Mobility
buildMobility(const ScenarioSpec& spec)
{
    Mobility mobility(spec.nodes);
    auto legs = spec.movements;
    std::stable_sort(legs.begin(), legs.end(), [](const WaypointLeg& a, const WaypointLeg& b) {
        return a.start < b.start;
    });
    for (const auto& leg : legs)
    {
        mobility.addLeg(leg);
    }
    return mobility;
}

std::string
serializeScenario(const ScenarioSpec& spec)
{
    std::ostringstream out;
    out << "area " << str(spec.area.width) << ' ' << str(spec.area.height) << '\n';
    out << "range " << str(spec.radio.range) << '\n';
    for (std::size_t i = 0; i < spec.nodes.size(); ++i)
    {
        out << "node " << i << ' ' << str(spec.nodes[i].x) << ' ' << str(spec.nodes[i].y) << '\n';
    }
    for (const auto& m : spec.movements)
    {
        out << "move " << str(m.start) << ' ' << m.node << ' ' << str(m.dest.x) << ' '
            << str(m.dest.y) << ' ' << str(m.speed) << '\n';
    }
    for (const auto& f : spec.flows)
    {
        out << "flow " << f.src << ' ' << f.dst << ' ' << str(f.rate) << ' ' << f.packetSize << ' '
            << str(f.start) << ' ' << str(f.stop) << '\n';
    }
    out << "end " << str(spec.endTime) << '\n';
    return out.str();
}

std::vector<std::string>
builtinScenarioNames()
{
    return {"scenario1", "scenario2"};
}

std::string_view
builtinScenarioText(std::string_view name)
{
    if (name == "scenario1")
    {
        return detail::kScenario1Text;
    }
    if (name == "scenario2")
    {
        return detail::kScenario2Text;
    }
    throw UnknownScenario("UnknownScenario: '" + std::string(name) + "'");
}

ScenarioSpec
builtinScenario(std::string_view name)
{
    return parseScenario(builtinScenarioText(name));
}

ScenarioSpec
loadScenario(const std::string& nameOrPath)
{
    const auto names = builtinScenarioNames();
    if (std::find(names.begin(), names.end(), nameOrPath) != names.end())
    {
        return builtinScenario(nameOrPath);
    }
    std::ifstream in(nameOrPath, std::ios::binary);
    if (!in)
    {
        throw SyntaxError(0, 0, "cannot read scenario file '" + nameOrPath + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseScenario(buf.str());
}

std::vector<SimTime>
emissionTimes(const TrafficFlow& flow)
{
    std::vector<SimTime> out;
    for (std::uint64_t k = 0;; ++k)
    {
        const SimTime t = flow.start + static_cast<double>(k) / flow.rate;
        if (t >= flow.stop - 1e-9)
        {
            break;
        }
        out.push_back(t);
    }
    return out;
}

} // namespace manet
