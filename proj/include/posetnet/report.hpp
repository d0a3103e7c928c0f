#pragma once

#include <string>
#include <vector>

namespace posetnet {

struct Assertion {
  enum class Status { pass, fail, skip };
  std::string name;
  Status status = Status::pass;
  std::string witness;
};

/// Verification outcome container: batteries report every assertion rather
/// than stopping at the first failure.
struct Report {
  std::string title;
  std::vector<Assertion> assertions;

  void add(const std::string& name, bool ok, const std::string& witness = "") {
    assertions.push_back({name, ok ? Assertion::Status::pass : Assertion::Status::fail, witness});
  }

  void skip(const std::string& name, const std::string& note) {
    assertions.push_back({name, Assertion::Status::skip, note});
  }

  void merge(const Report& sub) {
    for (const auto& a : sub.assertions) {
      Assertion copy = a;
      if (!sub.title.empty()) copy.name = sub.title + "." + copy.name;
      assertions.push_back(std::move(copy));
    }
  }

  int failures() const {
    int n = 0;
    for (const auto& a : assertions)
      if (a.status == Assertion::Status::fail) ++n;
    return n;
  }

  int passes() const {
    int n = 0;
    for (const auto& a : assertions)
      if (a.status == Assertion::Status::pass) ++n;
    return n;
  }

  bool all_passed() const { return failures() == 0; }
};

}  // namespace posetnet
