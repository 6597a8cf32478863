#ifndef BDWB_REPORT_HPP
#define BDWB_REPORT_HPP

#include <bdwb/rational.hpp>

#include <json.hpp>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bdwb {

/// `measured` marks quantities the construction bounds but a finite build
/// only observes; they never fail a run.
enum class CheckStatus { pass, fail, measured };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::measured: return "measured";
  }
  return "?";
}

struct Check {
  std::string name;
  std::string anchor;  // the statement being checked, in words
  CheckStatus status = CheckStatus::pass;
  std::vector<std::pair<std::string, std::string>> witnesses;
  std::string detail;

  Check& witness(std::string key, std::string value) {
    witnesses.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Check& witness(std::string key, const Scalar& value) { return witness(std::move(key), to_string(value)); }
};

struct VerificationReport {
  std::string suite;
  std::vector<Check> checks;

  Check& add(std::string name, std::string anchor, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), std::move(anchor), ok ? CheckStatus::pass : CheckStatus::fail, {},
                      std::move(detail)});
    return checks.back();
  }
  Check& measure(std::string name, std::string anchor, std::string detail = {}) {
    checks.push_back({std::move(name), std::move(anchor), CheckStatus::measured, {}, std::move(detail)});
    return checks.back();
  }
  void append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& c : checks)
      if (c.status == CheckStatus::fail) ++n;
    return n;
  }
  bool passed() const { return failures() == 0; }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline constexpr const char* kReportSchema = "bdverify/1";

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["suite"] = r.suite;
  j["failures"] = r.failures();
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["anchor"] = c.anchor;
    cj["status"] = to_string(c.status);
    if (!c.detail.empty()) cj["detail"] = c.detail;
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.witnesses) w[k] = v;
    cj["witnesses"] = std::move(w);
    arr.push_back(std::move(cj));
  }
  return j;
}

inline std::string render_text(const VerificationReport& r) {
  std::ostringstream out;
  out << "suite " << r.suite << ": " << r.checks.size() << " checks, " << r.failures() << " failed\n";
  for (const auto& c : r.checks) {
    out << "  [" << to_string(c.status) << "] " << c.name;
    if (!c.detail.empty()) out << " - " << c.detail;
    out << "\n";
    for (const auto& [k, v] : c.witnesses) out << "      " << k << " = " << v << "\n";
  }
  return out.str();
}

}  // namespace bdwb

#endif  // BDWB_REPORT_HPP
