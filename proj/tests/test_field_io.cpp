#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "support.hpp"
#include "wavetorus/field_io.hpp"

using namespace wavetorus;
using namespace wt_test;

TEST(FieldIo, RoundTripThroughJson) {
  std::mt19937_64 rng(1);
  for (int M : {0, 1, 5, 12}) {
    const auto u = gaussian_field(rng, M);
    const auto doc = field_to_json(u);
    EXPECT_EQ(doc["M"], M);
    EXPECT_EQ(doc["domain"], "x:[0,pi],t:[0,2pi]");
    // Only the half-lattice is stored.
    EXPECT_EQ(doc["coeffs"].size(), (u.mode_count() + 1) / 2);
    EXPECT_LE((field_from_json(doc) - u).l2_norm(), 1e-15 * (1 + u.l2_norm()));
  }
}

TEST(FieldIo, RoundTripThroughFile) {
  std::mt19937_64 rng(2);
  const auto u = gaussian_field(rng, 9);
  const auto path = (std::filesystem::temp_directory_path() / "wavetorus_field_io_test.json").string();
  write_field(path, u);
  EXPECT_EQ(read_field(path), u);
  std::remove(path.c_str());
  EXPECT_THROW(read_field("/nonexistent/dir/field.json"), Error);
}

TEST(FieldIo, RejectsNonHermitianFields) {
  std::mt19937_64 rng(3);
  EXPECT_THROW(field_to_json(complex_field(rng, 4)), Error);
}

TEST(FieldIo, ParseErrorsNameTheOffendingEntry) {
  auto expect_parse_error = [](const nlohmann::json& doc, const std::string& needle) {
    try {
      field_from_json(doc);
      FAIL() << "no error for " << doc.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  nlohmann::json doc = {{"M", 2}, {"coeffs", {{{"j", 0}, {"k", 1}, {"re", 1.0}, {"im", 0.0}}}}};
  EXPECT_NO_THROW(field_from_json(doc));
  auto bad = doc;
  bad["extra"] = 1;
  expect_parse_error(bad, "extra");
  bad = doc;
  bad["coeffs"].push_back({{"j", 0}, {"k", -1}, {"re", 1.0}});
  expect_parse_error(bad, "coeffs[1]");
  bad = doc;
  bad["coeffs"].push_back({{"j", 2}, {"k", 0}, {"re", 1.0}});
  expect_parse_error(bad, "coeffs[1]");
  bad = doc;
  bad["domain"] = "x:[0,1]";
  expect_parse_error(bad, "domain");
  expect_parse_error(nlohmann::json{{"coeffs", nlohmann::json::array()}}, "field");
}

TEST(FieldIo, RestoresHermitianPartners) {
  nlohmann::json doc = {{"M", 3}, {"coeffs", {{{"j", 1}, {"k", 1}, {"re", 0.5}, {"im", -0.25}}}}};
  const auto u = field_from_json(doc);
  EXPECT_EQ(u(1, 1), complex(0.5, -0.25));
  EXPECT_EQ(u(-1, -1), complex(0.5, 0.25));
  EXPECT_TRUE(u.is_hermitian(0.0));
}
