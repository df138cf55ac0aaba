#pragma once

#include <string>
#include <utility>
#include <vector>

namespace jcpme::tools {

// Fixed 12-significant-digit formatting so identical configs reproduce
// byte-identical artifacts.
std::string format_number(double v);

// CSV artifact: '#'-prefixed metadata lines carrying the resolved config,
// one column-header line, then data rows.  LF endings, '.' decimals.
struct Csv {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

// Writes to a file, or to stdout when path is "-".
void write_text(const std::string& path, const std::string& text);

}  // namespace jcpme::tools
