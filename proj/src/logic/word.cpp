#include "wpdrv/word.hpp"

#include <cassert>
#include <sstream>

namespace wpdrv {

static WordVal rewrap(uint64_t v, WordType t) { return WordVal(v, t); }

WordVal word_add(const WordVal &a, const WordVal &b) {
  assert(a.type.bits == b.type.bits);
  return rewrap(a.raw + b.raw, a.type);
}

WordVal word_sub(const WordVal &a, const WordVal &b) {
  assert(a.type.bits == b.type.bits);
  return rewrap(a.raw - b.raw, a.type);
}

WordVal word_mul(const WordVal &a, const WordVal &b) {
  assert(a.type.bits == b.type.bits);
  return rewrap(a.raw * b.raw, a.type);
}

WordVal word_udiv(const WordVal &a, const WordVal &b) {
  assert(a.type.bits == b.type.bits);
  if (b.raw == 0) return rewrap(word_mask(a.type.bits), a.type);
  return rewrap(a.raw / b.raw, a.type);
}

WordVal word_urem(const WordVal &a, const WordVal &b) {
  assert(a.type.bits == b.type.bits);
  if (b.raw == 0) return a;
  return rewrap(a.raw % b.raw, a.type);
}

WordVal word_and(const WordVal &a, const WordVal &b) { return rewrap(a.raw & b.raw, a.type); }
WordVal word_or(const WordVal &a, const WordVal &b) { return rewrap(a.raw | b.raw, a.type); }
WordVal word_xor(const WordVal &a, const WordVal &b) { return rewrap(a.raw ^ b.raw, a.type); }
WordVal word_not(const WordVal &a) { return rewrap(~a.raw, a.type); }
WordVal word_neg(const WordVal &a) { return rewrap(~a.raw + 1, a.type); }

WordVal word_shl(const WordVal &a, const WordVal &sh) {
  if (sh.raw >= a.type.bits) return rewrap(0, a.type);
  return rewrap(a.raw << sh.raw, a.type);
}

WordVal word_lshr(const WordVal &a, const WordVal &sh) {
  if (sh.raw >= a.type.bits) return rewrap(0, a.type);
  return rewrap(a.raw >> sh.raw, a.type);
}

WordVal word_ashr(const WordVal &a, const WordVal &sh) {
  uint64_t fill = a.sign_bit() ? word_mask(a.type.bits) : 0;
  if (sh.raw >= a.type.bits) return rewrap(fill, a.type);
  uint64_t shifted = a.raw >> sh.raw;
  uint64_t high = fill << (a.type.bits - sh.raw);
  return rewrap(shifted | high, a.type);
}

bool word_ult(const WordVal &a, const WordVal &b) { return a.raw < b.raw; }
bool word_ule(const WordVal &a, const WordVal &b) { return a.raw <= b.raw; }
bool word_slt(const WordVal &a, const WordVal &b) { return a.as_signed() < b.as_signed(); }
bool word_sle(const WordVal &a, const WordVal &b) { return a.as_signed() <= b.as_signed(); }

WordVal word_zext(const WordVal &a, uint8_t bits, bool is_signed) {
  assert(bits >= a.type.bits);
  return WordVal(a.raw, WordType{bits, is_signed});
}

WordVal word_sext(const WordVal &a, uint8_t bits, bool is_signed) {
  assert(bits >= a.type.bits);
  return WordVal(static_cast<uint64_t>(a.as_signed()), WordType{bits, is_signed});
}

WordVal word_trunc(const WordVal &a, uint8_t bits, bool is_signed) {
  assert(bits <= a.type.bits);
  return WordVal(a.raw, WordType{bits, is_signed});
}

std::string word_to_string(const WordVal &v) {
  if (v.type.is_signed) return std::to_string(v.as_signed());
  return std::to_string(v.raw);
}

std::string word_to_hex(const WordVal &v) {
  std::ostringstream os;
  os << "0x" << std::hex << v.raw;
  return os.str();
}

}  // namespace wpdrv
