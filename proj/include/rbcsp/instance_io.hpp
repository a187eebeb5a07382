#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rbcsp/model.hpp"

namespace rbcsp {

// Malformed instance / hypergraph / CSV text.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form, always with '.' as separator.
std::string format_real(double x);
double parse_real(std::string_view text);

// Text format:
//   rbcsp v1
//   n k d m model alpha p r seed
//   s_0 ... s_{k-1} | c_1 c_2 ...        (one line per constraint, codes ascending)
std::string serialize(const Instance& inst);
Instance deserialize(std::string_view text);

void write_instance(const std::filesystem::path& path, const Instance& inst);
Instance read_instance(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rbcsp
