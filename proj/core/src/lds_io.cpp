#include "fpmc/lds_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fpmc {

std::vector<std::string> split_tokens(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

unsigned long parse_header_int(const std::string& value, const std::string& key, std::size_t line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size() || v < 0) throw std::invalid_argument(key);
    return static_cast<unsigned long>(v);
  } catch (const std::exception&) {
    throw ParseError("invalid value for " + key + ": '" + value + "'", line);
  }
}

}  // namespace

Lds parse_lds(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t d = 0;
  FpFormat fmt;
  RationalMatrix matrix;
  std::vector<Rational> init;
  bool in_init = false;

  auto parse_q = [&](const std::string& tok) {
    try {
      return parse_rational(tok);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  };

  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = split_tokens(raw);
    if (toks.empty()) continue;
    if (!have_header) {
      if (toks[0] != "lds") throw ParseError("expected header 'lds d=<int> base=<int> p=<int>'", lineno);
      bool seen_d = false;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto eq = toks[k].find('=');
        if (eq == std::string::npos) throw ParseError("malformed header field '" + toks[k] + "'", lineno);
        std::string key = toks[k].substr(0, eq);
        std::string value = toks[k].substr(eq + 1);
        if (key == "d") {
          d = parse_header_int(value, key, lineno);
          seen_d = true;
        } else if (key == "base") {
          fmt.base = parse_header_int(value, key, lineno);
        } else if (key == "p") {
          fmt.precision = static_cast<unsigned>(parse_header_int(value, key, lineno));
        } else if (key == "tie") {
          try {
            fmt.tie = parse_tie_rule(value);
          } catch (const ParseError& e) {
            throw ParseError(e.what(), lineno);
          }
        } else {
          throw ParseError("unknown header field '" + key + "'", lineno);
        }
      }
      if (!seen_d || d == 0) throw ParseError("header must give d >= 1", lineno);
      try {
        fmt.validate();
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
      }
      have_header = true;
      continue;
    }
    std::size_t start = 0;
    if (toks[0].rfind("init:", 0) == 0) {
      if (in_init || matrix.size() != d) {
        throw ParseError(in_init ? "duplicate 'init:'" :
                                   "expected " + std::to_string(d) + " matrix rows before 'init:'", lineno);
      }
      in_init = true;
      if (toks[0].size() > 5) toks[0] = toks[0].substr(5);
      else start = 1;
    }
    if (in_init) {
      for (std::size_t k = start; k < toks.size(); ++k) {
        if (init.size() == d) throw ParseError("too many initial values", lineno);
        init.push_back(parse_q(toks[k]));
      }
      continue;
    }
    if (matrix.size() == d) throw ParseError("expected 'init:' after " + std::to_string(d) + " rows", lineno);
    if (toks.size() != d) {
      throw ParseError("matrix row has " + std::to_string(toks.size()) + " entries, expected " +
                       std::to_string(d), lineno);
    }
    std::vector<Rational> row;
    for (const auto& tok : toks) row.push_back(parse_q(tok));
    matrix.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("missing 'lds' header", lineno);
  if (!in_init) throw ParseError("missing 'init:' line", lineno);
  if (init.size() != d) {
    throw ParseError("expected " + std::to_string(d) + " initial values, got " + std::to_string(init.size()), lineno);
  }
  return Lds(std::move(matrix), std::move(init), fmt);
}

std::string render_lds(const Lds& lds) {
  std::ostringstream out;
  const FpFormat& fmt = lds.format();
  out << "lds d=" << lds.dim() << " base=" << fmt.base << " p=" << fmt.precision;
  if (fmt.tie != TieRule::HalfAwayFromZero) out << " tie=" << to_string(fmt.tie);
  out << "\n";
  for (const auto& row : lds.matrix()) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << to_string(row[j]);
    out << "\n";
  }
  out << "init:";
  for (const auto& q : lds.init()) out << " " << to_string(q);
  out << "\n";
  return out.str();
}

}  // namespace fpmc
