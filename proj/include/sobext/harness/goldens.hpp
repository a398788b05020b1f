#pragma once

// Pinned constants from an earlier run of a suite. Only regenerated on request.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "../core/error.hpp"

namespace sobext {

inline constexpr double kGoldenRelTol = 0.2;

struct GoldenRecord {
  std::string id;
  std::map<std::string, double> values;
  double rel_tol = kGoldenRelTol;
  std::string config_hash;
};

/// FNV-1a, stable across platforms.
inline std::string config_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream s;
  s << std::hex << h;
  return s.str();
}

class GoldenStore {
 public:
  GoldenStore() = default;

  static GoldenStore load(const std::string& path) {
    GoldenStore g;
    g.path_ = path;
    std::ifstream in(path);
    if (!in) return g;
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, "goldens file " + path + ": " + e.what());
    }
    for (const auto& r : j.value("records", nlohmann::json::array())) {
      GoldenRecord rec;
      rec.id = r.at("id").get<std::string>();
      rec.rel_tol = r.value("rel_tol", kGoldenRelTol);
      rec.config_hash = r.value("config_hash", "");
      for (const auto& [k, v] : r.at("values").items()) rec.values[k] = v.get<double>();
      g.records_[rec.id] = rec;
    }
    return g;
  }

  void save(const std::string& path) const {
    nlohmann::json j;
    j["records"] = nlohmann::json::array();
    for (const auto& [id, r] : records_) {
      nlohmann::json v;
      for (const auto& [k, x] : r.values) v[k] = x;
      j["records"].push_back({{"id", id}, {"rel_tol", r.rel_tol}, {"config_hash", r.config_hash}, {"values", v}});
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Parse, "cannot write goldens file " + path);
    out << j.dump(2) << "\n";
  }

  const GoldenRecord* find(const std::string& id) const {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
  }

  void put(GoldenRecord r) { records_[r.id] = std::move(r); }
  std::size_t size() const { return records_.size(); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::map<std::string, GoldenRecord> records_;
};

/// Relative drift of `value` against the pinned one; nullopt when unpinned.
inline std::optional<double> golden_drift(const GoldenRecord& g, const std::string& key, double value) {
  auto it = g.values.find(key);
  if (it == g.values.end()) return std::nullopt;
  double ref = it->second;
  if (ref == value) return 0.0;
  return std::abs(value - ref) / std::max(std::abs(ref), 1e-300);
}

}  // namespace sobext
