#include "wpdrv/diagnostics.hpp"

#include <sstream>

namespace wpdrv {

std::string render_diagnostic(const std::string &file, const Diagnostic &d) {
  std::ostringstream os;
  os << file << ":" << d.loc.line << ":" << d.loc.col << ": "
     << (d.severity == Severity::Error ? "error" : "warning") << "[" << d.code
     << "]: " << d.message;
  return os.str();
}

}  // namespace wpdrv
