#include "wpdrv/state.hpp"

#include <stdexcept>

namespace wpdrv {

int heap_tag_index(WordType tag) {
  int base;
  switch (tag.bits) {
    case 8: base = 0; break;
    case 16: base = 1; break;
    case 32: base = 2; break;
    case 64: base = 3; break;
    default: throw std::logic_error("heap_tag_index: bad width");
  }
  return base * 2 + (tag.is_signed ? 1 : 0);
}

WordType heap_tag_from_index(int idx) {
  static const uint8_t widths[4] = {8, 16, 32, 64};
  return WordType{widths[idx / 2], (idx % 2) != 0};
}

MemCheck check_heap_access(WordType tag, uint64_t addr) {
  if (addr == 0) return MemCheck::NullAddress;
  uint64_t bytes = tag.bits / 8;
  if (addr & (bytes - 1)) return MemCheck::Misaligned;
  return MemCheck::Ok;
}

WordVal heap_read(const TypedHeapState &s, WordType tag, uint64_t addr) {
  MemCheck c = check_heap_access(tag, addr);
  if (c != MemCheck::Ok)
    throw MemoryFault(c, c == MemCheck::NullAddress ? "null dereference" : "misaligned access");
  return s.read(tag, addr);
}

TypedHeapState heap_write(TypedHeapState s, WordType tag, uint64_t addr, WordVal v) {
  MemCheck c = check_heap_access(tag, addr);
  if (c != MemCheck::Ok)
    throw MemoryFault(c, c == MemCheck::NullAddress ? "null dereference" : "misaligned access");
  s.write(tag, addr, v);
  return s;
}

}  // namespace wpdrv
