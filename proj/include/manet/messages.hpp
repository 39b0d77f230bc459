#ifndef MANET_MESSAGES_HPP
#define MANET_MESSAGES_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "manet/sim_core.hpp"

namespace manet
{

using NodeId = std::uint32_t;
using SequenceNumber = std::uint64_t;
using BroadcastId = std::uint64_t;
using PacketUid = std::uint64_t;

struct Rreq
{
    NodeId src = 0;
    SequenceNumber srcSeq = 0;
    BroadcastId bcastId = 0;
    NodeId dst = 0;
    SequenceNumber dstLastSeq = 0;
    std::uint32_t hopCount = 0;
};

struct Rrep
{
    NodeId src = 0;
    NodeId dst = 0;
    SequenceNumber dstSeq = 0;
    std::uint32_t hopCount = 0;
    SimTime lifetime = 0.0;
};

struct Unreachable
{
    NodeId dst = 0;
    SequenceNumber dstSeq = 0;
};

struct Rerr
{
    std::vector<Unreachable> unreachable;
};

struct Hello
{
    NodeId origin = 0;
    SequenceNumber seq = 0;
};

struct DsdvAdvert
{
    NodeId dst = 0;
    SequenceNumber seq = 0;
    /// Empty means unreachable.
    std::optional<std::uint32_t> hops;
};

struct DsdvUpdate
{
    NodeId origin = 0;
    std::vector<DsdvAdvert> entries;
    bool fullDump = false;
};

struct DataPacket
{
    PacketUid uid = 0;
    NodeId src = 0;
    NodeId dst = 0;
    std::uint32_t size = 0;
    SimTime createdAt = 0.0;
    std::uint32_t hops = 0;
};

using Frame = std::variant<Rreq, Rrep, Rerr, Hello, DsdvUpdate, DataPacket>;

bool isControl(const Frame& frame);

/// Trace subkind: RREQ, RREP, RERR, HELLO, DSDV or DATA.
std::string_view frameKind(const Frame& frame);

/// Nominal on-air size in bytes.
std::uint32_t frameSize(const Frame& frame);

} // namespace manet

#endif
