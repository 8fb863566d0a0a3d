// state.hpp
// Concrete program state: a valuation of the flattened globals record plus
// one independent heap per pointed-to word type. Heaps of distinct types are
// separate maps, so a write through one type can never change a value read
// through another; there is no cast between heaps.

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "wpdrv/word.hpp"

namespace wpdrv {

// Index of a typed heap: word widths 8/16/32/64, signed and unsigned.
int heap_tag_index(WordType tag);
WordType heap_tag_from_index(int idx);
constexpr int kHeapTagCount = 8;

struct TypedHeapState {
  // total maps with default value 0
  std::map<uint64_t, uint64_t> maps[kHeapTagCount];

  WordVal read(WordType tag, uint64_t addr) const {
    const auto &m = maps[heap_tag_index(tag)];
    auto it = m.find(addr);
    return WordVal(it == m.end() ? 0 : it->second, tag);
  }

  void write(WordType tag, uint64_t addr, WordVal v) {
    maps[heap_tag_index(tag)][addr] = WordVal(v.raw, tag).raw;
  }

  friend bool operator==(const TypedHeapState &a, const TypedHeapState &b) {
    for (int i = 0; i < kHeapTagCount; ++i)
      if (a.maps[i] != b.maps[i]) return false;
    return true;
  }
};

enum class MemCheck { Ok, NullAddress, Misaligned };

// Dereference obligations: address nonzero and aligned to the value width.
MemCheck check_heap_access(WordType tag, uint64_t addr);

struct MemoryFault : std::runtime_error {
  MemCheck reason;
  MemoryFault(MemCheck r, const std::string &what) : std::runtime_error(what), reason(r) {}
};

// Checked accesses; fault if the address is null or misaligned.
WordVal heap_read(const TypedHeapState &s, WordType tag, uint64_t addr);
TypedHeapState heap_write(TypedHeapState s, WordType tag, uint64_t addr, WordVal v);

// Full concrete state: flattened global (and local) scalar locations plus
// the typed heaps. Locations absent from the map read as 0 of the type the
// reader requests.
struct ConcreteState {
  std::map<std::string, WordVal> globals;
  TypedHeapState heaps;

  WordVal get(const std::string &loc, WordType t) const {
    auto it = globals.find(loc);
    if (it == globals.end()) return WordVal(0, t);
    return it->second;
  }

  void set(const std::string &loc, WordVal v) { globals[loc] = v; }

  friend bool operator==(const ConcreteState &a, const ConcreteState &b) {
    return a.globals == b.globals && a.heaps == b.heaps;
  }
};

}  // namespace wpdrv
