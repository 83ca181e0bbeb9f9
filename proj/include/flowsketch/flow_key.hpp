#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace flowsketch {

/// 104-bit five-tuple flow identifier.
struct FlowKey {
    uint32_t src_addr = 0;
    uint32_t dst_addr = 0;
    uint16_t src_port = 0;
    uint16_t dst_port = 0;
    uint8_t protocol = 0;

    auto operator<=>(const FlowKey&) const = default;

    /// Big-endian field concatenation: src_addr, dst_addr, src_port,
    /// dst_port, protocol. 13 bytes total.
    std::array<uint8_t, 13> to_bytes() const;
    static FlowKey from_bytes(const std::array<uint8_t, 13>& b);

    FlowKey operator^(const FlowKey& o) const {
        return FlowKey{src_addr ^ o.src_addr, dst_addr ^ o.dst_addr,
                       static_cast<uint16_t>(src_port ^ o.src_port),
                       static_cast<uint16_t>(dst_port ^ o.dst_port),
                       static_cast<uint8_t>(protocol ^ o.protocol)};
    }
    FlowKey& operator^=(const FlowKey& o) { return *this = *this ^ o; }

    bool is_zero() const {
        return src_addr == 0 && dst_addr == 0 && src_port == 0 &&
               dst_port == 0 && protocol == 0;
    }
};

/// A (flow ID, packet count) pair. count == 0 denotes an empty bucket.
struct FlowRecord {
    FlowKey key;
    uint32_t count = 0;

    bool empty() const { return count == 0; }
    bool operator==(const FlowRecord&) const = default;
};

std::string format_ipv4(uint32_t addr);
uint32_t parse_ipv4(const std::string& text);  // throws std::invalid_argument

/// "src,dst,sport,dport,proto" with dotted-quad addresses.
std::string format_key_csv(const FlowKey& key);

struct FlowKeyHash {
    size_t operator()(const FlowKey& k) const noexcept;
};

}  // namespace flowsketch
