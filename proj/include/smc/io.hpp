#ifndef SMC_IO_HPP
#define SMC_IO_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "smc/matrix.hpp"

namespace smc::io {

// Plain CSV, '.' decimal point, no locale dependence. Values are written
// with 17 significant digits so a write/read round trip is bit-exact.
DenseMatrix read_csv_matrix(const std::string& path, bool header = false);
void write_csv_matrix(const std::string& path, const DenseMatrix& m,
                      bool header = false);

std::string format_double(double v);  // shortest 17-significant-digit form

// Flat key=value config file: one pair per line, '#' comments, values may be
// comma-separated lists. Keys are validated by the caller against a known
// set; parse errors carry line numbers.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.contains(key); }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;

  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_list(const std::string& key) const;

  // Throws ConfigError naming any key outside the allowed set.
  void require_known_keys(const std::vector<std::string>& allowed) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
};

}  // namespace smc::io

#endif  // SMC_IO_HPP
