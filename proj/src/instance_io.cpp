#include "rbcsp/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace rbcsp {

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
  double x = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw FormatError("not a real number: '" + std::string(text) + "'");
  return x;
}

namespace {

template <typename T>
T parse_uint(std::string_view text) {
  T x = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw FormatError("not a non-negative integer: '" + std::string(text) + "'");
  return x;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

std::string serialize(const Instance& inst) {
  const GenParams& p = inst.params();
  std::string out = "rbcsp v1\n";
  out += std::to_string(p.n) + ' ' + std::to_string(p.k) + ' ' + std::to_string(inst.d()) + ' ' +
         std::to_string(inst.constraints().size()) + ' ' + to_string(p.model) + ' ' + format_real(p.alpha) + ' ' +
         format_real(p.p) + ' ' + format_real(p.r) + ' ' + std::to_string(p.seed) + '\n';
  for (const Constraint& c : inst.constraints()) {
    for (Var v : c.scope) out += std::to_string(v) + ' ';
    out += '|';
    for (TupleCode code : c.compatible.codes()) out += ' ' + std::to_string(code);
    out += '\n';
  }
  return out;
}

Instance deserialize(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty() || split_ws(lines[0]) != std::vector<std::string_view>{"rbcsp", "v1"})
    throw FormatError("instance: missing 'rbcsp v1' header");
  if (lines.size() < 2) throw FormatError("instance: missing parameter line");
  const auto head = split_ws(lines[1]);
  if (head.size() != 9) throw FormatError("instance: parameter line needs 9 fields");

  GenParams params;
  params.n = parse_uint<std::uint32_t>(head[0]);
  params.k = parse_uint<std::uint32_t>(head[1]);
  const auto d = parse_uint<std::uint32_t>(head[2]);
  const auto m = parse_uint<std::uint64_t>(head[3]);
  try {
    params.model = parse_model(std::string(head[4]));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("instance: ") + e.what());
  }
  params.alpha = parse_real(head[5]);
  params.p = parse_real(head[6]);
  params.r = parse_real(head[7]);
  params.seed = parse_uint<std::uint64_t>(head[8]);

  const auto space = tuple_space(d, params.k);
  if (!space) throw FormatError("instance: d^k exceeds the supported tuple space");

  std::vector<Constraint> constraints;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    if (split_ws(lines[li]).empty()) continue;
    const std::size_t bar = lines[li].find('|');
    if (bar == std::string_view::npos)
      throw FormatError("instance: line " + std::to_string(li + 1) + " lacks '|'");
    Constraint c;
    for (auto tok : split_ws(lines[li].substr(0, bar))) c.scope.push_back(parse_uint<Var>(tok));
    c.compatible = Relation(*space);
    TupleCode prev = 0;
    bool first = true;
    for (auto tok : split_ws(lines[li].substr(bar + 1))) {
      const auto code = parse_uint<TupleCode>(tok);
      if (code >= *space) throw FormatError("instance: tuple code out of range on line " + std::to_string(li + 1));
      if (!first && code <= prev)
        throw FormatError("instance: tuple codes not ascending on line " + std::to_string(li + 1));
      c.compatible.insert(code);
      prev = code;
      first = false;
    }
    constraints.push_back(std::move(c));
  }
  if (constraints.size() != m)
    throw FormatError("instance: header declares " + std::to_string(m) + " constraints, found " +
                      std::to_string(constraints.size()));
  try {
    return Instance(params, d, std::move(constraints));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

void write_instance(const std::filesystem::path& path, const Instance& inst) { write_file(path, serialize(inst)); }

Instance read_instance(const std::filesystem::path& path) { return deserialize(read_file(path)); }

}  // namespace rbcsp
