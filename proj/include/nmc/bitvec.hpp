#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "nmc/common.hpp"

namespace nmc {

// Packed bit vector. Public indexing is 1-based throughout the library
// (matching the convention used by the coding constructions); storage is
// LSB-first inside 64-bit words, i.e. bit i lives at word (i-1)/64,
// position (i-1)%64.
class BitVec {
  public:
    BitVec() : len_(0) {}
    explicit BitVec(size_t len) : len_(len), w_((len + 63) / 64, 0) {}

    static BitVec from_uint(uint64_t value, size_t len) {
        if (len > 64) throw DimensionMismatch("BitVec::from_uint: len > 64");
        BitVec v(len);
        if (len) v.w_[0] = (len == 64) ? value : (value & ((1ULL << len) - 1));
        return v;
    }

    // "0101..." with character j (0-based) giving bit j+1
    static BitVec from_string(const std::string& s) {
        BitVec v(s.size());
        for (size_t j = 0; j < s.size(); ++j) {
            if (s[j] == '1') v.set(j + 1, true);
            else if (s[j] != '0') throw ParseError("BitVec::from_string: expected 0/1");
        }
        return v;
    }

    // Hex, low nibble first: nibble j encodes bits 4j+1..4j+4.
    static BitVec from_hex(const std::string& s, size_t len) {
        BitVec v(len);
        for (size_t j = 0; j < s.size(); ++j) {
            char c = s[j];
            unsigned nib;
            if (c >= '0' && c <= '9') nib = c - '0';
            else if (c >= 'a' && c <= 'f') nib = 10 + c - 'a';
            else if (c >= 'A' && c <= 'F') nib = 10 + c - 'A';
            else throw ParseError("BitVec::from_hex: bad hex digit");
            for (unsigned b = 0; b < 4; ++b) {
                size_t i = 4 * j + b + 1;
                if (i <= len) { if (nib >> b & 1) v.set(i, true); }
                else if (nib >> b & 1) throw ParseError("BitVec::from_hex: bits beyond declared length");
            }
        }
        return v;
    }

    size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(size_t i) const {
        check_index(i);
        return (w_[(i - 1) >> 6] >> ((i - 1) & 63)) & 1;
    }
    void set(size_t i, bool b) {
        check_index(i);
        uint64_t mask = 1ULL << ((i - 1) & 63);
        if (b) w_[(i - 1) >> 6] |= mask; else w_[(i - 1) >> 6] &= ~mask;
    }
    void flip(size_t i) { set(i, !get(i)); }

    size_t weight() const {
        size_t c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }

    // number of ones among positions from..to (inclusive, 1-based)
    size_t weight_range(size_t from, size_t to) const {
        if (from > to) return 0;
        check_index(from); check_index(to);
        size_t c = 0;
        for (size_t i = from; i <= to; ++i) c += get(i);  // fine at our sizes; hot paths use weight()
        return c;
    }

    BitVec& operator^=(const BitVec& o) {
        if (o.len_ != len_) throw DimensionMismatch("BitVec::^=: length mismatch");
        for (size_t j = 0; j < w_.size(); ++j) w_[j] ^= o.w_[j];
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }

    BitVec& operator&=(const BitVec& o) {
        if (o.len_ != len_) throw DimensionMismatch("BitVec::&=: length mismatch");
        for (size_t j = 0; j < w_.size(); ++j) w_[j] &= o.w_[j];
        return *this;
    }
    friend BitVec operator&(BitVec a, const BitVec& b) { a &= b; return a; }

    bool operator==(const BitVec& o) const { return len_ == o.len_ && w_ == o.w_; }
    bool operator!=(const BitVec& o) const { return !(*this == o); }
    bool operator<(const BitVec& o) const {
        if (len_ != o.len_) return len_ < o.len_;
        return w_ < o.w_;
    }

    // parity of the AND with another vector (the core of GF(2) matmul)
    bool dot(const BitVec& o) const {
        if (o.len_ != len_) throw DimensionMismatch("BitVec::dot: length mismatch");
        uint64_t acc = 0;
        for (size_t j = 0; j < w_.size(); ++j) acc ^= w_[j] & o.w_[j];
        return std::popcount(acc) & 1;
    }

    BitVec slice(size_t from, size_t to) const {  // inclusive, 1-based
        if (from < 1 || to > len_ || from > to + 1)
            throw DimensionMismatch("BitVec::slice: bad range");
        BitVec r(to + 1 - from);
        for (size_t i = from; i <= to; ++i) r.set(i - from + 1, get(i));
        return r;
    }

    BitVec concat(const BitVec& o) const {
        BitVec r(len_ + o.len_);
        for (size_t j = 0; j < w_.size(); ++j) r.w_[j] = w_[j];
        for (size_t i = 1; i <= o.len_; ++i) r.set(len_ + i, o.get(i));
        return r;
    }

    uint64_t to_uint() const {
        if (len_ > 64) throw DimensionMismatch("BitVec::to_uint: len > 64");
        return len_ ? w_[0] : 0;
    }

    std::string to_string() const {
        std::string s(len_, '0');
        for (size_t i = 1; i <= len_; ++i) if (get(i)) s[i - 1] = '1';
        return s;
    }

    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s((len_ + 3) / 4, '0');
        for (size_t j = 0; j < s.size(); ++j) {
            unsigned nib = 0;
            for (unsigned b = 0; b < 4; ++b) {
                size_t i = 4 * j + b + 1;
                if (i <= len_ && get(i)) nib |= 1u << b;
            }
            s[j] = digits[nib];
        }
        return s;
    }

    // positions of ones, ascending, 1-based
    std::vector<size_t> ones() const {
        std::vector<size_t> out;
        for (size_t j = 0; j < w_.size(); ++j) {
            uint64_t w = w_[j];
            while (w) {
                out.push_back(64 * j + std::countr_zero(w) + 1);
                w &= w - 1;
            }
        }
        return out;
    }

    const std::vector<uint64_t>& words() const { return w_; }

  private:
    void check_index(size_t i) const {
        if (i < 1 || i > len_) throw DimensionMismatch("BitVec: index out of range");
    }
    size_t len_;
    std::vector<uint64_t> w_;
};

} // namespace nmc
