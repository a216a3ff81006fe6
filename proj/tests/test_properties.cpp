#include <gtest/gtest.h>

#include "support/properties.hpp"

namespace {

class Invariant : public ::testing::TestWithParam<tsrs::testing::PropertyCheck> {};

TEST_P(Invariant, HoldsOnRandomCases) {
  tsrs::testing::Rng rng(0x5eed);
  for (int trial = 0; trial < 150; ++trial) {
    std::string msg = GetParam().run(rng);
    ASSERT_TRUE(msg.empty()) << "trial " << trial << ": " << msg;
  }
}

std::string name_of(const ::testing::TestParamInfo<tsrs::testing::PropertyCheck>& info) {
  std::string out;
  for (char c : std::string(info.param.name)) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

INSTANTIATE_TEST_SUITE_P(Properties, Invariant, ::testing::ValuesIn(tsrs::testing::property_checks()), name_of);

}  // namespace
