#include "manet/messages.hpp"

namespace manet
{

namespace
{

template <class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

bool
isControl(const Frame& frame)
{
    return !std::holds_alternative<DataPacket>(frame);
}

std::string_view
frameKind(const Frame& frame)
{
    return std::visit(Overloaded{
                          [](const Rreq&) { return std::string_view("RREQ"); },
                          [](const Rrep&) { return std::string_view("RREP"); },
                          [](const Rerr&) { return std::string_view("RERR"); },
                          [](const Hello&) { return std::string_view("HELLO"); },
                          [](const DsdvUpdate&) { return std::string_view("DSDV"); },
                          [](const DataPacket&) { return std::string_view("DATA"); },
                      },
                      frame);
}

std::uint32_t
frameSize(const Frame& frame)
{
    return std::visit(
        Overloaded{
            [](const Rreq&) { return 24u; },
            [](const Rrep&) { return 20u; },
            [](const Rerr& m) { return 4u + 8u * static_cast<std::uint32_t>(m.unreachable.size()); },
            [](const Hello&) { return 20u; },
            [](const DsdvUpdate& m) { return 4u + 12u * static_cast<std::uint32_t>(m.entries.size()); },
            [](const DataPacket& m) { return m.size; },
        },
        frame);
}

} // namespace manet
