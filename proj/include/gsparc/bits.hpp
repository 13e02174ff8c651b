#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gsparc {

using BigInt = boost::multiprecision::cpp_int;

/// Fixed-length bit string, most significant bit first. A string of n bits is
/// interpreted as the big-endian integer b_0 2^(n-1) + ... + b_(n-1) for hex I/O.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t nbits) : bits_(nbits, 0) {}

    static BitString from_hex(const std::string& hex, std::size_t nbits);
    static BitString from_big(const BigInt& value, std::size_t nbits);
    std::string to_hex() const;
    BigInt to_big() const;

    std::size_t size() const { return bits_.size(); }
    int operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, int v) { bits_[i] = static_cast<std::uint8_t>(v & 1); }
    void append(int v) { bits_.push_back(static_cast<std::uint8_t>(v & 1)); }

    bool operator==(const BitString&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Consumes big-endian bit groups from a BitString.
class BitReader {
public:
    explicit BitReader(const BitString& b) : bits_(b) {}
    std::uint64_t take(unsigned width);
    BigInt take_big(unsigned width);
    std::size_t remaining() const { return bits_.size() - pos_; }

private:
    const BitString& bits_;
    std::size_t pos_ = 0;
};

/// Appends big-endian bit groups.
class BitWriter {
public:
    void put(std::uint64_t value, unsigned width);
    void put_big(const BigInt& value, unsigned width);
    BitString take() { return std::move(out_); }

private:
    BitString out_;
};

}  // namespace gsparc
