#include "flowsketch/flow_key.hpp"

#include <charconv>
#include <stdexcept>

#include "flowsketch/hash_family.hpp"

namespace flowsketch {

std::array<uint8_t, 13> FlowKey::to_bytes() const {
    std::array<uint8_t, 13> b{};
    b[0] = uint8_t(src_addr >> 24);
    b[1] = uint8_t(src_addr >> 16);
    b[2] = uint8_t(src_addr >> 8);
    b[3] = uint8_t(src_addr);
    b[4] = uint8_t(dst_addr >> 24);
    b[5] = uint8_t(dst_addr >> 16);
    b[6] = uint8_t(dst_addr >> 8);
    b[7] = uint8_t(dst_addr);
    b[8] = uint8_t(src_port >> 8);
    b[9] = uint8_t(src_port);
    b[10] = uint8_t(dst_port >> 8);
    b[11] = uint8_t(dst_port);
    b[12] = protocol;
    return b;
}

FlowKey FlowKey::from_bytes(const std::array<uint8_t, 13>& b) {
    FlowKey k;
    k.src_addr = (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) |
                 (uint32_t(b[2]) << 8) | b[3];
    k.dst_addr = (uint32_t(b[4]) << 24) | (uint32_t(b[5]) << 16) |
                 (uint32_t(b[6]) << 8) | b[7];
    k.src_port = uint16_t((uint16_t(b[8]) << 8) | b[9]);
    k.dst_port = uint16_t((uint16_t(b[10]) << 8) | b[11]);
    k.protocol = b[12];
    return k;
}

std::string format_ipv4(uint32_t addr) {
    return std::to_string(addr >> 24) + "." + std::to_string((addr >> 16) & 0xFF) +
           "." + std::to_string((addr >> 8) & 0xFF) + "." + std::to_string(addr & 0xFF);
}

uint32_t parse_ipv4(const std::string& text) {
    uint32_t addr = 0;
    size_t pos = 0;
    for (int i = 0; i < 4; ++i) {
        if (pos >= text.size())
            throw std::invalid_argument("bad IPv4 address: " + text);
        unsigned octet = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), octet);
        if (ec != std::errc() || octet > 255)
            throw std::invalid_argument("bad IPv4 address: " + text);
        addr = (addr << 8) | octet;
        pos = size_t(ptr - text.data());
        if (i < 3) {
            if (pos >= text.size() || text[pos] != '.')
                throw std::invalid_argument("bad IPv4 address: " + text);
            ++pos;
        }
    }
    if (pos != text.size())
        throw std::invalid_argument("bad IPv4 address: " + text);
    return addr;
}

std::string format_key_csv(const FlowKey& key) {
    return format_ipv4(key.src_addr) + "," + format_ipv4(key.dst_addr) + "," +
           std::to_string(key.src_port) + "," + std::to_string(key.dst_port) + "," +
           std::to_string(key.protocol);
}

size_t FlowKeyHash::operator()(const FlowKey& k) const noexcept {
    const auto b = k.to_bytes();
    uint64_t w0 = 0, w1 = 0;
    for (int i = 0; i < 8; ++i) w0 = (w0 << 8) | b[i];
    for (int i = 8; i < 13; ++i) w1 = (w1 << 8) | b[i];
    return detail::mix64(detail::mix64(w0) ^ w1);
}

}  // namespace flowsketch
