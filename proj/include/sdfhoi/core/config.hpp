#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sdfhoi {

// Flat key=value configuration. Text form is line-oriented:
//
//   sdfhoi-config v1
//   # comment
//   train.epochs = 40
//
// Keys are dotted lowercase names; values are scalars or bare strings.
class Config {
 public:
  static constexpr const char* kHeader = "sdfhoi-config v1";

  Config() = default;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  std::string serialize() const;
  void save(const std::string& path) const;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& v) { values_[key] = v; }
  void set(const std::string& key, double v);
  void set(const std::string& key, int v);

  // Getters with required/default flavors; missing required keys and
  // malformed values throw ValidationError naming the key.
  std::string get_str(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& dflt) const;
  double get_num(const std::string& key) const;
  double get_num(const std::string& key, double dflt) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;

  // Merge other's entries over this one's.
  void update(const Config& other);

  // FNV hash over the sorted key=value pairs whose key matches one of the
  // given prefixes (all pairs if empty).
  std::uint64_t hash(const std::vector<std::string>& prefixes = {}) const;

  const std::map<std::string, std::string>& items() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace sdfhoi
