#include "doctest.h"
#include "wpdrv/word.hpp"

using namespace wpdrv;

TEST_CASE("wrap-around arithmetic") {
  WordVal a(250, u8()), b(10, u8());
  CHECK(word_add(a, b).raw == 4);
  CHECK(word_sub(b, a).raw == 16);  // 10 - 250 mod 256
  CHECK(word_mul(a, b).raw == (250 * 10) % 256);
  CHECK(word_neg(WordVal(1, u8())).raw == 255);
}

TEST_CASE("division follows QF_BV totals") {
  WordVal x(7, u8()), zero(0, u8());
  CHECK(word_udiv(x, zero).raw == 255);
  CHECK(word_urem(x, zero).raw == 7);
  CHECK(word_udiv(WordVal(100, u8()), WordVal(7, u8())).raw == 14);
  CHECK(word_urem(WordVal(100, u8()), WordVal(7, u8())).raw == 2);
}

TEST_CASE("shifts saturate at width") {
  WordVal x(0x80, u8());
  CHECK(word_shl(WordVal(1, u8()), WordVal(8, u8())).raw == 0);
  CHECK(word_lshr(x, WordVal(9, u8())).raw == 0);
  CHECK(word_ashr(x, WordVal(3, u8())).raw == 0xF0);
  CHECK(word_ashr(x, WordVal(200, u8())).raw == 0xFF);
  CHECK(word_ashr(WordVal(0x40, u8()), WordVal(200, u8())).raw == 0);
}

TEST_CASE("signed comparison and extension") {
  WordVal minus_one(0xFF, s8());
  WordVal one(1, s8());
  CHECK(word_slt(minus_one, one));
  CHECK(!word_ult(minus_one, one));
  CHECK(minus_one.as_signed() == -1);
  CHECK(word_sext(minus_one, 32, true).raw == 0xFFFFFFFFu);
  CHECK(word_zext(minus_one, 32, false).raw == 0xFFu);
  CHECK(word_trunc(WordVal(0x1234, u16()), 8, false).raw == 0x34);
}

TEST_CASE("64-bit corner cases") {
  WordVal big(~uint64_t{0}, u64());
  CHECK(word_add(big, WordVal(1, u64())).raw == 0);
  CHECK(word_mask(64) == ~uint64_t{0});
  // slt interprets the bit pattern as signed regardless of nominal signedness
  CHECK(word_slt(big, WordVal(0, s64())));
  CHECK(word_slt(WordVal(big.raw, s64()), WordVal(0, s64())));
}
