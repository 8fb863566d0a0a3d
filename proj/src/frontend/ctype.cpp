#include "wpdrv/ctype.hpp"

#include <sstream>

namespace wpdrv {

CTypePtr make_void_type() {
  static CTypePtr v = std::make_shared<CType>(CType{TypeKind::Void});
  return v;
}

CTypePtr make_word_type(WordType w) {
  auto t = std::make_shared<CType>();
  t->kind = TypeKind::Word;
  t->word = w;
  return t;
}

CTypePtr make_pointer_type(CTypePtr pointee) {
  auto t = std::make_shared<CType>();
  t->kind = TypeKind::Pointer;
  t->pointee = std::move(pointee);
  return t;
}

CTypePtr make_struct_type(std::string name, std::vector<StructField> fields) {
  auto t = std::make_shared<CType>();
  t->kind = TypeKind::Struct;
  t->struct_name = std::move(name);
  t->fields = std::move(fields);
  return t;
}

CTypePtr make_array_type(CTypePtr element, uint64_t len) {
  auto t = std::make_shared<CType>();
  t->kind = TypeKind::Array;
  t->element = std::move(element);
  t->array_len = len;
  return t;
}

CTypePtr make_function_type(std::vector<CTypePtr> params, CTypePtr result) {
  auto t = std::make_shared<CType>();
  t->kind = TypeKind::Function;
  t->params = std::move(params);
  t->result = std::move(result);
  return t;
}

CTypePtr make_float_type() {
  static CTypePtr f = std::make_shared<CType>(CType{TypeKind::Float});
  return f;
}

bool type_equal(const CTypePtr &a, const CTypePtr &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Void:
    case TypeKind::Float:
      return true;
    case TypeKind::Word:
      return a->word == b->word;
    case TypeKind::Pointer:
      return type_equal(a->pointee, b->pointee);
    case TypeKind::Struct:
      // structures are nominal within a unit
      return a->struct_name == b->struct_name;
    case TypeKind::Array:
      return a->array_len == b->array_len && type_equal(a->element, b->element);
    case TypeKind::Function: {
      if (!type_equal(a->result, b->result)) return false;
      if (a->params.size() != b->params.size()) return false;
      for (size_t i = 0; i < a->params.size(); ++i)
        if (!type_equal(a->params[i], b->params[i])) return false;
      return true;
    }
  }
  return false;
}

std::string type_to_string(const CTypePtr &t) {
  if (!t) return "<null>";
  std::ostringstream os;
  switch (t->kind) {
    case TypeKind::Void:
      return "void";
    case TypeKind::Float:
      return "float";
    case TypeKind::Word:
      os << (t->word.is_signed ? "s" : "u") << int(t->word.bits);
      return os.str();
    case TypeKind::Pointer:
      return type_to_string(t->pointee) + "*";
    case TypeKind::Struct:
      return "struct " + t->struct_name;
    case TypeKind::Array:
      os << type_to_string(t->element) << "[" << t->array_len << "]";
      return os.str();
    case TypeKind::Function: {
      os << type_to_string(t->result) << "(";
      for (size_t i = 0; i < t->params.size(); ++i) {
        if (i) os << ", ";
        os << type_to_string(t->params[i]);
      }
      os << ")";
      return os.str();
    }
  }
  return "<bad>";
}

}  // namespace wpdrv
