#pragma once

// Named pass/fail verdicts collected by verifiers.

#include "rowfin/matrix.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rowfin {

struct Check {
  std::string name;
  bool pass = true;
  /// Empty on pass; the first discrepancy on failure.
  std::string detail;
};

class CheckList {
 public:
  void add(std::string name, bool pass, std::string detail = {});
  void add(std::string name, const WindowComparison& cmp, const Ring& ring);
  void append(const CheckList& other, std::string_view prefix = {});

  bool all_pass() const;
  /// First failing check, or nullptr.
  const Check* first_failure() const;
  const std::vector<Check>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

 private:
  std::vector<Check> items_;
};

/// Throws VerificationFailure naming the first failing check.
void require_all(const CheckList& checks, std::string_view what);

}  // namespace rowfin
