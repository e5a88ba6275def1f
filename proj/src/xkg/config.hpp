#pragma once
// key=value config files plus small CSV helpers for the CLI outputs.

#include <map>
#include <string>
#include <vector>

namespace xkg {

class Config {
public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  double get(const std::string& key, double fallback) const;
  int get(const std::string& key, int fallback) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

private:
  std::map<std::string, std::string> kv_;
};

// Minimal CSV writer: header once, then rows of doubles/strings.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void comment(const std::string& line);  // "# ..." sidecar line
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<double>& vals);
  void raw_row(const std::vector<std::string>& vals);

private:
  struct Impl;
  Impl* impl_;
};

std::string format_sci(double v);

}  // namespace xkg
