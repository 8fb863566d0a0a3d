// ctype.hpp
// Types of the accepted C subset. Word types carry width and signedness;
// aggregates are structures and fixed-length arrays; function types exist so
// function pointers can be stored and compared (calling them is rejected
// later, by the subset checker).

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wpdrv/word.hpp"

namespace wpdrv {

struct CType;
using CTypePtr = std::shared_ptr<const CType>;

enum class TypeKind {
  Void,
  Word,      // unsigned or signed fixed-width integer
  Pointer,   // pointer to pointee
  Struct,    // named structure with ordered fields
  Array,     // fixed-length array of element type
  Function,  // parameter types + result type
  Float,     // recognized only so the subset checker can name the rejection
};

struct StructField {
  std::string name;
  CTypePtr type;
};

struct CType {
  TypeKind kind = TypeKind::Void;
  WordType word;                    // Word
  CTypePtr pointee;                 // Pointer
  std::string struct_name;          // Struct
  std::vector<StructField> fields;  // Struct
  CTypePtr element;                 // Array
  uint64_t array_len = 0;           // Array
  std::vector<CTypePtr> params;     // Function
  CTypePtr result;                  // Function

  bool is_word() const { return kind == TypeKind::Word; }
  bool is_pointer() const { return kind == TypeKind::Pointer; }
  bool is_void() const { return kind == TypeKind::Void; }
  bool is_function_pointer() const {
    return kind == TypeKind::Pointer && pointee && pointee->kind == TypeKind::Function;
  }
};

CTypePtr make_void_type();
CTypePtr make_word_type(WordType w);
CTypePtr make_pointer_type(CTypePtr pointee);
CTypePtr make_struct_type(std::string name, std::vector<StructField> fields);
CTypePtr make_array_type(CTypePtr element, uint64_t len);
CTypePtr make_function_type(std::vector<CTypePtr> params, CTypePtr result);
CTypePtr make_float_type();

bool type_equal(const CTypePtr &a, const CTypePtr &b);
std::string type_to_string(const CTypePtr &t);

// Pointers are modeled as 64-bit words (addresses); null is address 0.
inline WordType pointer_word_type() { return u64(); }

}  // namespace wpdrv
