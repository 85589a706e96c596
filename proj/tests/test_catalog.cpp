#include <doctest.h>

#include "cbrn/catalog.hpp"
#include "cbrn/error.hpp"

using namespace cbrn;

namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_catalog(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("bundled catalog has three groups of seven labels") {
  const auto catalog = load_catalog(CBRN_DATA_DIR "/catalog.txt");
  REQUIRE(catalog.groups().size() == 3);
  CHECK(catalog.pattern_count() == 21);
  CHECK(catalog.group("Color").labels[0] == "red");
  CHECK(catalog.group("Style").labels[3] == "rectangle");
  CHECK(catalog.group("Volume").labels[6] == "mini");
  CHECK(catalog.group("color").labels[6] == "purple");
  for (const auto& g : catalog.groups()) CHECK(g.labels.size() == 7);
}

TEST_CASE("catalog parsing") {
  CHECK(parse_catalog("").empty());
  CHECK(parse_catalog("# only a comment\n\n").empty());

  const auto c = parse_catalog("Shape:1:b\nShape:0:a\nTaste : 0 : sweet and sour \n");
  REQUIRE(c.groups().size() == 2);
  CHECK(c.groups()[0].labels == std::vector<std::string>{"a", "b"});
  CHECK(c.groups()[1].name == "Taste");
  CHECK(c.groups()[1].labels[0] == "sweet and sour");

  CHECK(code_of("Color:0:red\nColor:0:red\n") == ErrorCode::kDuplicateEntry);
  CHECK(code_of("Color:0:red\nColor:1:red\n") == ErrorCode::kDuplicateEntry);
  CHECK(code_of("Color:0:red\nColor:2:blue\n") == ErrorCode::kIndexGap);
  CHECK(code_of("Color:1:red\n") == ErrorCode::kIndexGap);
  CHECK(code_of("Color-red\n") == ErrorCode::kBadFormat);
  CHECK(code_of("Color:x:red\n") == ErrorCode::kBadFormat);
  CHECK(code_of("Color:0:\n") == ErrorCode::kBadFormat);
  CHECK(code_of("Two words:0:x\n") == ErrorCode::kBadFormat);
  CHECK_THROWS_AS(load_catalog("/nonexistent/catalog.txt"), Error);
}
