#include "sdfhoi/core/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdfhoi/core/errors.hpp"
#include "sdfhoi/core/hash.hpp"

namespace sdfhoi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader)
    throw VersionMismatchError("config: missing or unknown header line (expected '" +
                               std::string(kHeader) + "')");
  Config cfg;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config: line " + std::to_string(lineno) +
                            " is not 'key = value': " + t);
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty())
      throw ValidationError("config: empty key on line " + std::to_string(lineno));
    cfg.values_[key] = val;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Config::serialize() const {
  std::ostringstream out;
  out << kHeader << "\n";
  for (const auto& [k, v] : values_) out << k << " = " << v << "\n";
  return out.str();
}

void Config::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("config: cannot write " + path);
  out << serialize();
}

void Config::set(const std::string& key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  values_[key] = buf;
}

void Config::set(const std::string& key, int v) { values_[key] = std::to_string(v); }

std::string Config::get_str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("config: missing key '" + key + "'");
  return it->second;
}

std::string Config::get_str(const std::string& key, const std::string& dflt) const {
  const auto it = values_.find(key);
  return it == values_.end() ? dflt : it->second;
}

double Config::get_num(const std::string& key) const {
  const std::string s = get_str(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: key '" + key + "' is not a number: " + s);
  }
}

double Config::get_num(const std::string& key, double dflt) const {
  return has(key) ? get_num(key) : dflt;
}

int Config::get_int(const std::string& key) const {
  const double v = get_num(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ValidationError("config: key '" + key + "' is not an integer");
  return i;
}

int Config::get_int(const std::string& key, int dflt) const {
  return has(key) ? get_int(key) : dflt;
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  const std::string s = get_str(key);
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw ValidationError("config: key '" + key + "' is not a boolean: " + s);
}

void Config::update(const Config& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::uint64_t Config::hash(const std::vector<std::string>& prefixes) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : values_) {  // std::map iterates in sorted order
    bool keep = prefixes.empty();
    for (const auto& p : prefixes)
      if (k.rfind(p, 0) == 0) {
        keep = true;
        break;
      }
    if (!keep) continue;
    h = fnv1a64(k, h);
    h = fnv1a64("=", h);
    h = fnv1a64(v, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

}  // namespace sdfhoi
