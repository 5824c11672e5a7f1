#include "rowfin/check.hpp"

#include "rowfin/errors.hpp"

namespace rowfin {

void CheckList::add(std::string name, bool pass, std::string detail) {
  if (pass) detail.clear();
  items_.push_back(Check{std::move(name), pass, std::move(detail)});
}

void CheckList::add(std::string name, const WindowComparison& cmp, const Ring& ring) {
  add(std::move(name), cmp.equal, cmp.equal ? std::string{} : cmp.describe(ring));
}

void CheckList::append(const CheckList& other, std::string_view prefix) {
  for (const auto& c : other.items_) {
    items_.push_back(Check{std::string(prefix) + c.name, c.pass, c.detail});
  }
}

bool CheckList::all_pass() const { return first_failure() == nullptr; }

const Check* CheckList::first_failure() const {
  for (const auto& c : items_) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

void require_all(const CheckList& checks, std::string_view what) {
  if (const Check* bad = checks.first_failure()) {
    throw VerificationFailure(std::string(what) + ": " + bad->name + ": " + bad->detail);
  }
}

}  // namespace rowfin
