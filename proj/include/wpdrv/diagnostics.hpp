// diagnostics.hpp
// Source locations and diagnostics shared by every pipeline stage.
// Rendered as `file:line:col: severity[code]: message`, one per line.

#pragma once

#include <string>
#include <vector>

namespace wpdrv {

struct SourceLoc {
  int line = 0;  // 1-based; 0 means "no location"
  int col = 0;

  bool valid() const { return line > 0; }
  friend bool operator==(const SourceLoc &a, const SourceLoc &b) {
    return a.line == b.line && a.col == b.col;
  }
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;  // machine-readable tag, e.g. "indirect-call", "switch"
  SourceLoc loc;
  std::string message;
};

inline Diagnostic make_error(std::string code, SourceLoc loc, std::string message) {
  return Diagnostic{Severity::Error, std::move(code), loc, std::move(message)};
}

inline bool has_errors(const std::vector<Diagnostic> &diags) {
  for (const auto &d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

std::string render_diagnostic(const std::string &file, const Diagnostic &d);

}  // namespace wpdrv
