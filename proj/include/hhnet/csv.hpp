#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hhnet::csv {

// RFC-4180 style parse: quoted fields, doubled quotes, CR/LF line ends.
// Blank lines are skipped.
std::vector<std::vector<std::string>> parse(std::istream& in);

// Throws IoError when the file cannot be opened.
std::vector<std::vector<std::string>> parse_file(const std::string& path);

// Quotes the field only when needed.
std::string escape(const std::string& field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace hhnet::csv
