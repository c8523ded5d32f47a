#include "smc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smc::io {

namespace {

double parse_double(const std::string& tok, const std::string& context) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw std::runtime_error(context + ": not a number: '" + tok + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DenseMatrix read_csv_matrix(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file: " + path);
  std::vector<double> entries;
  std::size_t rows = 0, cols = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    std::stringstream ss(trimmed);
    std::string tok;
    std::size_t c = 0;
    while (std::getline(ss, tok, ',')) {
      entries.push_back(parse_double(
          trim(tok), path + ":" + std::to_string(lineno)));
      ++c;
    }
    if (cols == 0) {
      cols = c;
    } else if (c != cols) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": inconsistent column count");
    }
    ++rows;
  }
  if (rows == 0) throw std::runtime_error(path + ": empty matrix");
  return DenseMatrix(rows, cols, std::move(entries));
}

void write_csv_matrix(const std::string& path, const DenseMatrix& m,
                      bool header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  if (header) {
    for (std::size_t j = 0; j < m.cols(); ++j)
      out << (j ? ",c" : "c") << j;
    out << '\n';
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value");
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    if (cfg.values_.contains(key))
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("missing required config key '" + key + "'");
  return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key,
                                   const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  return parse_double(get(key), "config key '" + key + "'");
}

long long KeyValueConfig::get_int(const std::string& key) const {
  const std::string& tok = get(key);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ConfigError("config key '" + key + "': not an integer: '" + tok + "'");
  return v;
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(get(key));
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
  if (out.empty())
    throw ConfigError("config key '" + key + "': empty list");
  return out;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& tok : get_list(key))
    out.push_back(parse_double(tok, "config key '" + key + "'"));
  return out;
}

void KeyValueConfig::require_known_keys(
    const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    bool known = false;
    for (const std::string& a : allowed)
      if (a == key) {
        known = true;
        break;
      }
    if (!known) {
      const auto it = lines_.find(key);
      throw ConfigError("unknown config key '" + key + "' (line " +
                        std::to_string(it == lines_.end() ? 0 : it->second) +
                        ")");
    }
  }
}

}  // namespace smc::io
