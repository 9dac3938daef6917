#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "derinv/profile.hpp"

namespace derinv {

enum class Verdict { Match, Mismatch, InsufficientData };
std::string to_string(Verdict v);

struct Check {
  std::string id;       // "i" .. "xii", or "dim" for the ground-field gate
  std::string name;
  std::string theorem;  // statement being applied
  bool applicable = false;
  std::string reason;   // hypothesis audit
  Verdict verdict = Verdict::InsufficientData;
  std::string details;
  std::vector<std::string> missing;  // fields absent from either profile
};

struct ObstructionReport {
  std::string a, b;
  std::vector<Check> checks;

  bool obstruction() const;
  // No applicable check reached a verdict.
  bool all_insufficient() const;
  const Check* first_mismatch() const;
  const Check* find(const std::string& id) const;
  // 0 no obstruction, 2 obstruction, 3 insufficient data everywhere.
  int exit_code() const;
};

ObstructionReport compare(const NumericalProfile& A, const NumericalProfile& B);
std::string explain(const ObstructionReport& R);
nlohmann::json to_json(const ObstructionReport& R);

}  // namespace derinv
