#include "gsparc/bits.hpp"

#include <stdexcept>

#include "gsparc/core.hpp"

namespace gsparc {

BitString BitString::from_hex(const std::string& hex, std::size_t nbits) {
    const std::size_t want = (nbits + 3) / 4;
    if (hex.size() != want)
        throw config_error("hex string has " + std::to_string(hex.size()) + " digits, expected " +
                           std::to_string(want) + " for " + std::to_string(nbits) + " bits");
    BigInt v = 0;
    for (char c : hex) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw config_error(std::string("invalid hex digit '") + c + "'");
        v = (v << 4) | d;
    }
    if (nbits == 0 ? v != 0 : (v >> nbits) != 0)
        throw config_error("hex value does not fit in " + std::to_string(nbits) + " bits");
    return from_big(v, nbits);
}

BitString BitString::from_big(const BigInt& value, std::size_t nbits) {
    if (value < 0 || (value >> nbits) != 0)
        throw config_error("value does not fit in " + std::to_string(nbits) + " bits");
    BitString b(nbits);
    for (std::size_t i = 0; i < nbits; ++i)
        b.bits_[i] = static_cast<std::uint8_t>(boost::multiprecision::bit_test(value, unsigned(nbits - 1 - i)));
    return b;
}

BigInt BitString::to_big() const {
    BigInt v = 0;
    for (std::uint8_t b : bits_) v = (v << 1) | b;
    return v;
}

std::string BitString::to_hex() const {
    const std::size_t digits = (size() + 3) / 4;
    BigInt v = to_big();
    std::string out(digits, '0');
    static const char* kHex = "0123456789abcdef";
    for (std::size_t i = 0; i < digits; ++i) {
        out[digits - 1 - i] = kHex[static_cast<unsigned>(v & 0xf)];
        v >>= 4;
    }
    return out;
}

std::uint64_t BitReader::take(unsigned width) {
    if (width > 64) throw std::invalid_argument("BitReader::take width > 64");
    if (pos_ + width > bits_.size()) throw config_error("bit string too short");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | std::uint64_t(bits_[pos_++]);
    return v;
}

BigInt BitReader::take_big(unsigned width) {
    if (pos_ + width > bits_.size()) throw config_error("bit string too short");
    BigInt v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | int(bits_[pos_++]);
    return v;
}

void BitWriter::put(std::uint64_t value, unsigned width) {
    if (width > 64) throw std::invalid_argument("BitWriter::put width > 64");
    if (width < 64 && (value >> width) != 0) throw std::invalid_argument("value does not fit width");
    for (unsigned i = 0; i < width; ++i) out_.append(int((value >> (width - 1 - i)) & 1));
}

void BitWriter::put_big(const BigInt& value, unsigned width) {
    if ((value >> width) != 0 || value < 0) throw std::invalid_argument("value does not fit width");
    for (unsigned i = 0; i < width; ++i)
        out_.append(boost::multiprecision::bit_test(value, width - 1 - i) ? 1 : 0);
}

std::string to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

Field field_from_string(const std::string& s) {
    if (s == "real") return Field::Real;
    if (s == "complex") return Field::Complex;
    throw config_error("unknown field '" + s + "' (expected real|complex)");
}

}  // namespace gsparc
