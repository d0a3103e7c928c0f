// Acceptance suite: every criterion prints one line and must pass.

#include "posetnet/acceptance.hpp"

#include <gtest/gtest.h>

#include <cstdio>

using namespace posetnet;

namespace {

void print_line(const Report& rep) {
  std::printf("[%s] %s (%d checks, %d failures)\n", rep.all_passed() ? "PASS" : "FAIL",
              rep.title.c_str(), rep.passes(), rep.failures());
  if (!rep.all_passed()) {
    for (const auto& a : rep.assertions)
      if (a.status == Assertion::Status::fail)
        std::printf("    failed: %s %s\n", a.name.c_str(), a.witness.c_str());
  }
}

}  // namespace

TEST(Acceptance, Criterion1RewritingAgainstClosure) {
  Report rep = acceptance::criterion1();
  print_line(rep);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Acceptance, Criterion2LoopGroupInvariants) {
  Report rep = acceptance::criterion2();
  print_line(rep);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Acceptance, Criterion3StepOperatorLaws) {
  Report rep = acceptance::criterion3();
  print_line(rep);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Acceptance, Criterion4CycleAlgebra) {
  Report rep = acceptance::criterion4();
  print_line(rep);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Acceptance, Criterion5Grading) {
  Report rep = acceptance::criterion5();
  print_line(rep);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Acceptance, Criterion6NetAndCorona) {
  Report rep = acceptance::criterion6();
  print_line(rep);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Acceptance, Criterion7Morphisms) {
  Report rep = acceptance::criterion7();
  print_line(rep);
  EXPECT_TRUE(rep.all_passed());
}

TEST(Acceptance, Criterion8ExampleScenario) {
  Report rep = acceptance::criterion8();
  print_line(rep);
  EXPECT_TRUE(rep.all_passed());
}
