#include "bcov/report.hpp"

#include <json.hpp>
#include <sstream>

namespace bcov {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

void Report::add(std::string id, bool ok, std::string witness, std::string defect) {
  CheckResult c;
  c.id = std::move(id);
  c.status = ok ? Status::Pass : Status::Fail;
  c.witness = std::move(witness);
  c.defect = std::move(defect);
  checks.push_back(std::move(c));
}

void Report::skip(std::string id, std::string note) {
  CheckResult c;
  c.id = std::move(id);
  c.status = Status::Skipped;
  c.note = std::move(note);
  checks.push_back(std::move(c));
}

void Report::note(std::string key, std::string value) { info.emplace_back(std::move(key), std::move(value)); }

void Report::merge(const Report& other, const std::string& prefix) {
  for (auto c : other.checks) {
    c.id = prefix + c.id;
    checks.push_back(std::move(c));
  }
  for (auto& [k, v] : other.info) info.emplace_back(prefix + k, v);
}

bool Report::all_pass() const { return failures() == 0; }

int Report::failures() const {
  int n = 0;
  for (auto& c : checks) n += c.status == Status::Fail;
  return n;
}

const CheckResult* Report::find(const std::string& id) const {
  for (auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string Report::to_text() const {
  std::ostringstream os;
  if (!title.empty()) os << "# " << title << "\n";
  for (auto& c : checks) {
    os << status_name(c.status) << "  " << c.id;
    if (!c.witness.empty()) os << "  witness: " << c.witness;
    if (!c.defect.empty()) os << "  defect: " << c.defect;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  for (auto& [k, v] : info) os << "info  " << k << " = " << v << "\n";
  int pass = 0, skipped = 0;
  for (auto& c : checks) {
    pass += c.status == Status::Pass;
    skipped += c.status == Status::Skipped;
  }
  os << "summary: " << pass << " pass, " << failures() << " fail, " << skipped << " skipped\n";
  return os.str();
}

std::string Report::to_json(const std::string& tool_version, const std::string& model_hash) const {
  nlohmann::ordered_json j;
  j["title"] = title;
  j["tool_version"] = tool_version;
  j["model_hash"] = model_hash;
  auto arr = nlohmann::ordered_json::array();
  for (auto& c : checks) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["status"] = status_name(c.status);
    if (!c.witness.empty()) e["witness"] = c.witness;
    if (!c.defect.empty()) e["defect"] = c.defect;
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(e);
  }
  j["checks"] = arr;
  auto inf = nlohmann::ordered_json::array();
  for (auto& [k, v] : info) inf.push_back({{"key", k}, {"value", v}});
  j["info"] = inf;
  int pass = 0, skipped = 0;
  for (auto& c : checks) {
    pass += c.status == Status::Pass;
    skipped += c.status == Status::Skipped;
  }
  j["summary"] = {{"pass", pass}, {"fail", failures()}, {"skipped", skipped}};
  return j.dump(2) + "\n";
}

}  // namespace bcov
