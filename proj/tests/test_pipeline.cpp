#include <doctest.h>

#include "cbrn/catalog.hpp"
#include "cbrn/error.hpp"
#include "cbrn/pipeline.hpp"
#include "cbrn/qr.hpp"

using namespace cbrn;

namespace {

AttributeCatalog bundled() { return load_catalog(std::filesystem::path(CBRN_DATA_DIR) / "catalog.txt"); }

}  // namespace

TEST_CASE("QR provider renders the label at the model size") {
  QrPatternProvider provider;
  CHECK(provider.shape().width == 116);
  const auto p = provider.make("Color", "red");
  CHECK(p == qr::render(qr::encode_label("red"), 4));
}

TEST_CASE("seeded provider is deterministic and label-sensitive") {
  SeededPatternProvider a(1, {10, 6}), b(1, {10, 6}), c(2, {10, 6});
  CHECK(a.make("Color", "red") == b.make("Color", "red"));
  CHECK_FALSE(a.make("Color", "red") == a.make("Color", "blue"));
  CHECK_FALSE(a.make("Color", "red") == a.make("Style", "red"));
  CHECK_FALSE(a.make("Color", "red") == c.make("Color", "red"));
  const auto p = a.make("Color", "red");
  CHECK(p.width() == 10);
  CHECK(p.height() == 6);
  CHECK(p.popcount() > 0);
}

TEST_CASE("make_provider") {
  CHECK(make_provider("qr", 0, {116, 116})->shape().width == 116);
  CHECK(make_provider("qr", 0, {29, 29})->shape().width == 29);
  CHECK(make_provider("random", 3, {7, 5})->shape().height == 5);
  CHECK_THROWS_AS(make_provider("qr", 0, {100, 100}), Error);
  CHECK_THROWS_AS(make_provider("noise", 0, {8, 8}), Error);
}

TEST_CASE("present checks the shape") {
  SystemConfig cfg;
  cfg.width = cfg.height = 4;
  CHECK(present(cfg, BinaryPattern(4, 4, std::vector<std::uint8_t>(16, 1)))[0] == 0.25);
  try {
    present(cfg, BinaryPattern(4, 5));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }
  cfg.normalization = Normalization::kNone;
  CHECK(present(cfg, BinaryPattern(4, 4, std::vector<std::uint8_t>(16, 1)))[3] == 1.0);
}

TEST_CASE("bundled catalog trains into exact recall of every symbol") {
  MemorySystem sys(SystemConfig{}, bundled());
  QrPatternProvider provider;
  const auto records = train_catalog(sys, provider);
  REQUIRE(records.size() == 21);
  for (const auto& r : records) {
    CHECK(r.report.recall.final_error <= 1e-12);
    CHECK(stored_bitmap(sys, r.neuron) == provider.make(r.group, r.label));
    const auto q = cue_response(sys.cue(r.neuron.ball), recall_forward(sys.recall(r.neuron.ball), r.neuron.neuron),
                                sys.config().threshold);
    CHECK(std::abs(q.q[r.neuron.neuron] - 100.0) <= 1e-9);
    CHECK(q.argmax == r.neuron.neuron);
  }
  CHECK(records[3].group == "Color");
  CHECK(records[3].label == "green");
  CHECK(records[10].label == "rectangle");
  CHECK(records[20].label == "mini");
}

TEST_CASE("stored_bitmap of an untrained neuron is all light") {
  SystemConfig cfg;
  cfg.width = cfg.height = 5;
  MemorySystem sys(cfg, bundled());
  CHECK(stored_bitmap(sys, {0, 0}).popcount() == 0);
  CHECK_THROWS_AS(stored_bitmap(sys, {0, 7}), Error);
}
