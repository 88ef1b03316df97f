#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ptf/errors.hpp"

namespace ptf {

// A finite binary string. Position 0 is the leftmost character of the
// textual form; internally the first character sits at the most significant
// end of the used bits, so strings of equal length compare lexicographically
// as numbers and the code of an extension starts with the code of its prefix.
class BitString {
public:
    static constexpr std::uint32_t kMaxLen = 62;

    BitString() = default;  // the empty string

    BitString(std::uint32_t len, std::uint64_t bits) : len_(len), bits_(bits) {
        if (len > kMaxLen) throw Error("bitstring too long");
        if (len < 64 && (bits >> len) != 0) throw Error("bitstring code out of range");
    }

    static BitString parse(std::string_view text) {
        BitString s;
        for (char c : text) {
            if (c == '0') s = s.append(0);
            else if (c == '1') s = s.append(1);
            else throw ParseError("bad bitstring character");
        }
        return s;
    }

    std::uint32_t length() const { return len_; }
    std::uint64_t code() const { return bits_; }
    bool empty() const { return len_ == 0; }

    int bit(std::uint32_t i) const { return static_cast<int>((bits_ >> (len_ - 1 - i)) & 1u); }

    BitString append(int b) const {
        if (len_ >= kMaxLen) throw Error("bitstring too long");
        return BitString(len_ + 1, (bits_ << 1) | static_cast<std::uint64_t>(b & 1));
    }

    BitString prefix(std::uint32_t n) const {
        if (n > len_) throw Error("prefix longer than string");
        return BitString(n, bits_ >> (len_ - n));
    }

    // s.prefix_of(t): s is an initial segment of t (possibly equal).
    bool prefix_of(const BitString& t) const {
        return len_ <= t.len_ && (t.bits_ >> (t.len_ - len_)) == bits_;
    }

    bool proper_prefix_of(const BitString& t) const { return len_ < t.len_ && prefix_of(t); }

    bool comparable(const BitString& t) const { return prefix_of(t) || t.prefix_of(*this); }

    // Flip the last bit; only defined on nonempty strings.
    BitString sibling() const {
        if (len_ == 0) throw Error("sibling of empty string");
        return BitString(len_, bits_ ^ 1u);
    }

    std::string str() const {
        std::string out;
        out.reserve(len_);
        for (std::uint32_t i = 0; i < len_; ++i) out.push_back(bit(i) ? '1' : '0');
        return out;
    }

    // Canonical witness order: by length, then lexicographically.
    friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) {
        if (auto c = a.len_ <=> b.len_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }
    friend bool operator==(const BitString& a, const BitString& b) = default;

private:
    std::uint32_t len_ = 0;
    std::uint64_t bits_ = 0;
};

// All strings of the given length, in lexicographic order.
inline std::vector<BitString> all_strings(std::uint32_t len) {
    if (len > 24) throw Error("level too deep to enumerate");
    std::vector<BitString> out;
    out.reserve(std::size_t{1} << len);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) out.emplace_back(len, v);
    return out;
}

}  // namespace ptf
