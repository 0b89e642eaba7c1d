#include "fpmc/certificate_io.hpp"

#include <sstream>

#include "fpmc/lds_io.hpp"

namespace fpmc {

std::string render_growth(const Growth& g) { return g ? std::to_string(*g) : "-inf"; }

namespace {

std::string render_alpha(const Certificate& cert, std::size_t j) {
  if (cert.phases == 1) return render_growth(cert.growth[j][0]);
  std::string out;
  for (std::size_t r = 0; r < cert.phases; ++r) {
    if (r) out += ',';
    out += render_growth(cert.growth[j][r]);
  }
  return out;
}

std::string header_fields(const Certificate& cert) {
  std::string out = "N=" + std::to_string(cert.start) + " T=" + std::to_string(cert.period);
  if (cert.phases != 1) out += " P=" + std::to_string(cert.phases);
  return out;
}

Growth parse_growth(const std::string& s, std::size_t line) {
  if (s == "-inf" || s == "\xe2\x88\x92inf") return std::nullopt;
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid growth '" + s + "'", line);
  }
}

std::uint64_t parse_count(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size() || s[0] == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid count '" + s + "'", line);
  }
}

}  // namespace

std::string render_certificate(const Certificate& cert, const FpFormat& fmt) {
  std::ostringstream out;
  out << "cert " << header_fields(cert) << "\n";
  for (std::size_t j = 0; j < cert.dim(); ++j) out << "alpha_" << (j + 1) << "=" << render_alpha(cert, j) << "\n";
  for (const auto& v : cert.snapshot) {
    for (std::size_t j = 0; j < v.size(); ++j) out << (j ? " " : "") << render(v[j], fmt);
    out << "\n";
  }
  return out.str();
}

std::string summarize_certificate(const Certificate& cert) {
  std::string out = header_fields(cert);
  for (std::size_t j = 0; j < cert.dim(); ++j) out += " alpha_" + std::to_string(j + 1) + "=" + render_alpha(cert, j);
  out += cert.verified ? " verified=true" : " verified=false";
  return out;
}

Certificate parse_certificate(std::string_view text, const FpFormat& fmt) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  Certificate cert;
  bool header = false;
  std::vector<std::pair<std::size_t, std::vector<Growth>>> alphas;
  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = split_tokens(raw);
    if (toks.empty()) continue;
    if (!header) {
      if (toks[0] != "cert") throw ParseError("expected 'cert N=<int> T=<int>'", lineno);
      bool have_n = false, have_t = false;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto eq = toks[k].find('=');
        if (eq == std::string::npos) throw ParseError("malformed field '" + toks[k] + "'", lineno);
        std::string key = toks[k].substr(0, eq), value = toks[k].substr(eq + 1);
        if (key == "N") {
          cert.start = parse_count(value, lineno);
          have_n = true;
        } else if (key == "T") {
          cert.period = parse_count(value, lineno);
          have_t = true;
        } else if (key == "P") {
          cert.phases = parse_count(value, lineno);
        } else {
          throw ParseError("unknown field '" + key + "'", lineno);
        }
      }
      if (!have_n || !have_t || cert.period == 0 || cert.phases == 0) {
        throw ParseError("certificate header needs N and T >= 1", lineno);
      }
      header = true;
      continue;
    }
    if (toks[0].rfind("alpha_", 0) == 0) {
      if (toks.size() != 1) throw ParseError("unexpected text after alpha", lineno);
      auto eq = toks[0].find('=');
      if (eq == std::string::npos) throw ParseError("malformed alpha line", lineno);
      std::size_t j = parse_count(toks[0].substr(6, eq - 6), lineno);
      if (j != alphas.size() + 1) throw ParseError("alpha lines must be numbered 1, 2, ...", lineno);
      std::vector<Growth> values;
      std::stringstream parts(toks[0].substr(eq + 1));
      std::string part;
      while (std::getline(parts, part, ',')) values.push_back(parse_growth(part, lineno));
      if (values.size() != cert.phases) {
        throw ParseError("expected " + std::to_string(cert.phases) + " growth values", lineno);
      }
      alphas.emplace_back(j, std::move(values));
      continue;
    }
    if (alphas.empty()) throw ParseError("snapshot before alpha lines", lineno);
    if (toks.size() != alphas.size()) throw ParseError("snapshot vector has wrong dimension", lineno);
    FpVector v;
    for (const auto& tok : toks) {
      try {
        v.push_back(parse_fp(tok, fmt, true));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
    }
    cert.snapshot.push_back(std::move(v));
  }
  if (!header) throw ParseError("missing 'cert' header", lineno);
  if (alphas.empty()) throw ParseError("no alpha lines", lineno);
  if (!cert.snapshot.empty() && cert.snapshot.size() != cert.period) {
    throw ParseError("expected " + std::to_string(cert.period) + " snapshot vectors", lineno);
  }
  for (auto& [j, values] : alphas) cert.growth.push_back(std::move(values));
  return cert;
}

}  // namespace fpmc
