#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bcov {

// Raised when a result would depend on data outside the stored truncation.
struct TruncationUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Status { Pass, Fail, Skipped };
const char* status_name(Status s);

struct CheckResult {
  std::string id;
  Status status = Status::Pass;
  std::string witness;
  std::string defect;
  std::string note;
};

struct Report {
  std::string title;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, std::string>> info;

  void add(std::string id, bool ok, std::string witness = {}, std::string defect = {});
  void skip(std::string id, std::string note);
  void note(std::string key, std::string value);
  void merge(const Report& other, const std::string& prefix = {});
  bool all_pass() const;
  int failures() const;
  const CheckResult* find(const std::string& id) const;

  std::string to_text() const;
  std::string to_json(const std::string& tool_version, const std::string& model_hash) const;
};

}  // namespace bcov
