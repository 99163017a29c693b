#include "tunnel/stack_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "tunnel/error.hpp"

namespace tunnel {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

// Shortest text that reads back to the same double.
std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace

double parse_number(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc() || ptr != last || token.empty() || !std::isfinite(value)) {
    throw InvalidArgument("not a number: '" + std::string(token) + "'");
  }
  return value;
}

LayerStack parse_stack(std::string_view text) {
  std::optional<Medium> ambient;
  std::optional<Medium> substrate;
  std::vector<Layer> layers;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    auto number = [&](std::size_t i) {
      try {
        return parse_number(tokens[i]);
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no);
      }
    };
    auto medium = [&](double n) {
      try {
        return Medium(n);
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), line_no);
      }
    };

    const std::string_view key = tokens[0];
    if (substrate) throw ParseError("content after 'substrate' line", line_no);
    if (key == "ambient") {
      if (ambient) throw ParseError("duplicate 'ambient' line", line_no);
      if (tokens.size() != 2) throw ParseError("expected 'ambient <n>'", line_no);
      ambient = medium(number(1));
    } else if (key == "layer") {
      if (!ambient) throw ParseError("'layer' before 'ambient'", line_no);
      if (tokens.size() != 3) throw ParseError("expected 'layer <n> <thickness_nm>'", line_no);
      const double thickness = number(2);
      if (thickness < 0.0) throw ParseError("negative layer thickness", line_no);
      layers.emplace_back(medium(number(1)), thickness);
    } else if (key == "substrate") {
      if (!ambient) throw ParseError("'substrate' before 'ambient'", line_no);
      if (tokens.size() != 2) throw ParseError("expected 'substrate <n>'", line_no);
      substrate = medium(number(1));
    } else {
      throw ParseError("unknown keyword '" + std::string(key) + "'", line_no);
    }
  }
  if (!ambient) throw ParseError("missing 'ambient' line", 0);
  if (!substrate) throw ParseError("missing 'substrate' line", 0);
  return LayerStack{*ambient, std::move(layers), *substrate};
}

LayerStack read_stack_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stack file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_stack(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string format_stack(const LayerStack& stack, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    std::size_t pos = 0;
    while (pos < comment.size()) {
      const std::size_t eol = comment.find('\n', pos);
      const auto line = comment.substr(pos, eol == comment.npos ? comment.npos : eol - pos);
      out += "# ";
      out += line;
      out += '\n';
      if (eol == comment.npos) break;
      pos = eol + 1;
    }
  }
  out += "ambient " + format_double(stack.ambient.index()) + '\n';
  for (const auto& layer : stack.layers) {
    out += "layer " + format_double(layer.medium.index()) + ' ' + format_double(layer.thickness) + '\n';
  }
  out += "substrate " + format_double(stack.substrate.index()) + '\n';
  return out;
}

void write_stack_file(const std::filesystem::path& path, const LayerStack& stack,
                      std::string_view comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_stack(stack, comment);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace tunnel
