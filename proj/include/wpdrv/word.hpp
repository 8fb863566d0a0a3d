// word.hpp
// Fixed-width machine words (8/16/32/64 bits, signed or unsigned) with
// wrap-around arithmetic. All values are stored zero-extended in a uint64_t;
// signedness only changes how comparisons, >>, and printing interpret bits.

#pragma once

#include <cstdint>
#include <string>

namespace wpdrv {

struct WordType {
  uint8_t bits = 32;  // one of 8, 16, 32, 64
  bool is_signed = false;

  friend bool operator==(const WordType &a, const WordType &b) {
    return a.bits == b.bits && a.is_signed == b.is_signed;
  }
  friend bool operator!=(const WordType &a, const WordType &b) { return !(a == b); }
};

inline WordType u8() { return {8, false}; }
inline WordType u16() { return {16, false}; }
inline WordType u32() { return {32, false}; }
inline WordType u64() { return {64, false}; }
inline WordType s8() { return {8, true}; }
inline WordType s16() { return {16, true}; }
inline WordType s32() { return {32, true}; }
inline WordType s64() { return {64, true}; }

// Low `bits` ones; bits == 64 must not shift by 64.
inline uint64_t word_mask(unsigned bits) {
  return bits >= 64 ? ~uint64_t{0} : ((uint64_t{1} << bits) - 1);
}

struct WordVal {
  uint64_t raw = 0;  // always masked to `type.bits`
  WordType type;

  WordVal() = default;
  WordVal(uint64_t v, WordType t) : raw(v & word_mask(t.bits)), type(t) {}

  bool is_zero() const { return raw == 0; }
  uint64_t sign_bit() const { return (raw >> (type.bits - 1)) & 1; }

  // Value sign-extended to 64 bits (for signed interpretation).
  int64_t as_signed() const {
    if (type.bits == 64) return static_cast<int64_t>(raw);
    uint64_t m = uint64_t{1} << (type.bits - 1);
    return static_cast<int64_t>((raw ^ m) - m);
  }

  friend bool operator==(const WordVal &a, const WordVal &b) {
    return a.raw == b.raw && a.type == b.type;
  }
  friend bool operator!=(const WordVal &a, const WordVal &b) { return !(a == b); }
};

// Wrap-around arithmetic. Both operands must share a width; the result keeps
// the left operand's type.
WordVal word_add(const WordVal &a, const WordVal &b);
WordVal word_sub(const WordVal &a, const WordVal &b);
WordVal word_mul(const WordVal &a, const WordVal &b);
// Division semantics follow SMT-LIB QF_BV: x/0 = all-ones, x%0 = x.
WordVal word_udiv(const WordVal &a, const WordVal &b);
WordVal word_urem(const WordVal &a, const WordVal &b);
WordVal word_and(const WordVal &a, const WordVal &b);
WordVal word_or(const WordVal &a, const WordVal &b);
WordVal word_xor(const WordVal &a, const WordVal &b);
WordVal word_not(const WordVal &a);
WordVal word_neg(const WordVal &a);
// Shift counts >= width yield 0 (ashr: 0 or all-ones by sign), as in QF_BV.
WordVal word_shl(const WordVal &a, const WordVal &sh);
WordVal word_lshr(const WordVal &a, const WordVal &sh);
WordVal word_ashr(const WordVal &a, const WordVal &sh);

bool word_ult(const WordVal &a, const WordVal &b);
bool word_ule(const WordVal &a, const WordVal &b);
bool word_slt(const WordVal &a, const WordVal &b);
bool word_sle(const WordVal &a, const WordVal &b);

WordVal word_zext(const WordVal &a, uint8_t bits, bool is_signed);
WordVal word_sext(const WordVal &a, uint8_t bits, bool is_signed);
WordVal word_trunc(const WordVal &a, uint8_t bits, bool is_signed);

std::string word_to_string(const WordVal &v);  // decimal, signed-aware
std::string word_to_hex(const WordVal &v);

}  // namespace wpdrv
