#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbrn/cli.hpp"
#include "cbrn/model_store.hpp"
#include "cbrn/pattern.hpp"
#include "cbrn/pipeline.hpp"
#include "cbrn/qr.hpp"

using namespace cbrn;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result tool(std::vector<std::string> args) {
  args.insert(args.begin(), "cbrn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kCatalog = (fs::path(CBRN_DATA_DIR) / "catalog.txt").string();

// Scratch directory with a trained and paired model shared by the tests below.
struct Workspace {
  fs::path dir;
  std::string model;

  Workspace() : dir(fs::temp_directory_path() / "cbrn_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
    model = path("model.cbrn");
    REQUIRE(tool({"train", "--catalog", kCatalog, "--out", model}).code == 0);
    REQUIRE(tool({"pair", "--model", model, "--pair", "Color:0=Style:3", "--pair", "Style:3=Volume:6", "--pair",
                 "Volume:6=Color:1"})
                .code == 0);
  }
  ~Workspace() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  std::string encode(const std::string& label) const {
    const auto file = path(label + ".pbm");
    REQUIRE(tool({"encode", "--label", label, "--out", file}).code == 0);
    return file;
  }
};

Workspace& workspace() {
  static Workspace ws;
  return ws;
}

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("encode") {
  auto& ws = workspace();
  const auto file = ws.path("enc.pbm");
  auto r = tool({"encode", "--label", "red", "--out", file});
  CHECK(r.code == 0);
  CHECK(load_pbm(file) == qr::render(qr::encode_label("red"), 4));
  CHECK(load_pbm(file).width() == 116);

  r = tool({"encode", "--label", "red", "--scale", "1", "--out", file});
  CHECK(r.code == 0);
  CHECK(load_pbm(file).width() == 29);

  r = tool({"encode", "--label", "red", "--scale", "1", "--mask", "5", "--out", file});
  CHECK(r.out.find("mask 5") != std::string::npos);

  CHECK(tool({"encode", "--label", "", "--out", file}).code == 2);
  CHECK(tool({"encode", "--label", std::string(54, 'a'), "--out", file}).code == 2);
  CHECK(tool({"encode", "--label", "red", "--mask", "8", "--out", file}).code == 2);
  CHECK(tool({"encode", "--label", "red", "--out", ws.path("missing/dir/x.pbm")}).code == 3);
}

TEST_CASE("usage errors") {
  CHECK(tool({}).code == 2);
  CHECK(tool({"frobnicate"}).code == 2);
  CHECK(tool({"train"}).code == 2);
  CHECK(tool({"--help"}).code == 0);
}

TEST_CASE("train") {
  auto& ws = workspace();
  const auto sys = model_store::load(ws.model);
  CHECK(sys.ball_count() == 3);
  CHECK(sys.config().dim() == 13456);

  const auto out = ws.path("again.cbrn");
  const auto r = tool({"train", "--catalog", kCatalog, "--out", out, "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ball,neuron,label,E,e,q\n") == 0);
  CHECK(r.out.find("Style,3,rectangle,0.000e+00,") != std::string::npos);
  CHECK(r.out.find("stored 21 patterns in 3 cue balls") != std::string::npos);

  SUBCASE("rerunning on a trained model keeps the stored patterns") {
    const auto resumed = ws.path("resumed.cbrn");
    CHECK(tool({"train", "--resume", out, "--out", resumed}).code == 0);
    const auto a = model_store::load(out), b = model_store::load(resumed);
    for (std::size_t ball = 0; ball < 3; ++ball) {
      CHECK(a.recall(ball) == b.recall(ball));
      for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < a.config().dim(); ++j)
          CHECK(std::abs(a.cue(ball).row(i)[j] - b.cue(ball).row(i)[j]) <= 1e-12);
    }
  }
  SUBCASE("empty catalog") {
    const auto empty = ws.path("empty.txt");
    std::ofstream(empty) << "# nothing\n";
    CHECK(tool({"train", "--catalog", empty, "--out", out}).code == 2);
  }
  SUBCASE("missing catalog file") { CHECK(tool({"train", "--catalog", ws.path("nope"), "--out", out}).code == 3); }
  SUBCASE("threshold must stay below theta") {
    CHECK(tool({"train", "--catalog", kCatalog, "--out", out, "--threshold", "150"}).code == 2);
  }
  SUBCASE("random provider with a small side") {
    CHECK(tool({"train", "--catalog", kCatalog, "--out", out, "--provider", "random", "--side", "10"}).code == 0);
    CHECK(model_store::load(out).config().dim() == 100);
    CHECK(tool({"train", "--catalog", kCatalog, "--out", out, "--side", "10"}).code == 2);
  }
}

TEST_CASE("pair") {
  auto& ws = workspace();
  const auto sys = model_store::load(ws.model);
  CHECK(sys.links().size() == 6);
  for (const auto& [key, u] : sys.links().entries()) CHECK(u == 100.0);

  const auto copy = ws.path("paired_again.cbrn");
  auto r = tool({"pair", "--model", ws.model, "--pair", "color:0=style:3", "--out", copy, "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("from,to,eta_before,eta_after,max_delta,u\n"
                   "Color:0 (red),Style:3 (rectangle),0,0,0,100\n"
                   "Style:3 (rectangle),Color:0 (red),0,0,0,100\n") == 0);
  CHECK(model_store::load(copy) == sys);

  CHECK(tool({"pair", "--model", ws.model, "--pair", "Color:0=Color:1", "--out", copy}).code == 2);
  CHECK(tool({"pair", "--model", ws.model, "--pair", "Color:0=Style:9", "--out", copy}).code == 2);
  CHECK(tool({"pair", "--model", ws.model, "--pair", "Shape:0=Style:1", "--out", copy}).code == 2);
  CHECK(tool({"pair", "--model", ws.model, "--pair", "Color:0", "--out", copy}).code == 2);
  CHECK(tool({"pair", "--model", ws.path("none.cbrn"), "--pair", "Color:0=Style:1"}).code == 3);
}

TEST_CASE("recall") {
  auto& ws = workspace();
  const auto red = ws.encode("red");
  auto r = tool({"recall", "--model", ws.model, "--ball", "Color", "--pattern", red, "--out", ws.path("rec.pbm")});
  CHECK(r.code == 0);
  // Green's symbol shares enough modules with red's to reach 72.17, so it
  // fires too; red stays the strict maximum.
  CHECK(r.out.find("threshold 72 fired {0,3} argmax 0") != std::string::npos);
  CHECK(r.out.find("red  100.0000      1") != std::string::npos);
  CHECK(load_pbm(ws.path("rec.pbm")) == load_pbm(red));

  SUBCASE("csv prints full precision") {
    r = tool({"recall", "--model", ws.model, "--ball", "color", "--pattern", red, "--format", "csv"});
    CHECK(r.out.find("neuron,label,q,fired\n0,red,") != std::string::npos);
  }
  SUBCASE("a lower threshold fires a superset") {
    r = tool({"recall", "--model", ws.model, "--ball", "Color", "--pattern", red, "--threshold", "10"});
    CHECK(r.code == 0);
    CHECK(r.out.find("threshold 10 fired {0,") != std::string::npos);
  }
  SUBCASE("all-dark probe matches direct dot products") {
    // Against a constant probe each q_i is theta * sqrt(p_i / N), p_i the
    // dark-pixel count of label i, so the winner is the densest symbol.
    const auto dark = ws.path("dark.pbm");
    const BinaryPattern all_dark(116, 116, std::vector<std::uint8_t>(116 * 116, 1));
    save_pbm(all_dark, dark);
    r = tool({"recall", "--model", ws.model, "--ball", "Style", "--pattern", dark, "--threshold", "0", "--format", "csv"});
    CHECK(r.code == 0);
    const auto sys = model_store::load(ws.model);
    const auto probe = normalize(all_dark);
    std::size_t best = 0;
    std::vector<double> q(7, 0.0);
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < probe.dim(); ++j) q[i] += sys.cue(1).row(i)[j] * probe[j];
      if (q[i] > q[best]) best = i;
    }
    CHECK(r.out.find("argmax " + std::to_string(best)) != std::string::npos);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    for (std::size_t i = 0; i < 7; ++i) {
      std::getline(lines, line);
      const auto a = line.find(',', line.find(',') + 1);
      CHECK(std::abs(std::stod(line.substr(a + 1)) - q[i]) <= 1e-9);
    }
  }
  SUBCASE("errors") {
    CHECK(tool({"recall", "--model", ws.model, "--ball", "Shape", "--pattern", red}).code == 2);
    const auto small = ws.path("small.pbm");
    REQUIRE(tool({"encode", "--label", "red", "--scale", "1", "--out", small}).code == 0);
    CHECK(tool({"recall", "--model", ws.model, "--ball", "Color", "--pattern", small}).code == 3);
    const auto green = ws.encode("green");
    // A Style probe of a Color label fires nothing; asking for a recall fails.
    CHECK(tool({"recall", "--model", ws.model, "--ball", "Style", "--pattern", green, "--out", ws.path("x.pbm")})
              .code == 3);
  }
}

TEST_CASE("associate") {
  auto& ws = workspace();
  const auto red = ws.encode("red");
  const auto rect = ws.encode("rectangle");
  const auto out = ws.path("assoc.pbm");

  auto r = tool({"associate", "--model", ws.model, "--from", "Color", "--pattern", red, "--to", "Style", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.find("path Color:0 (red) -> Style:3 (rectangle)") != std::string::npos);
  CHECK(slurp(out) == slurp(rect));

  r = tool({"associate", "--model", ws.model, "--from", "Style", "--pattern", rect, "--to", "Volume"});
  CHECK(r.code == 0);
  CHECK(r.out.find("-> Volume:6 (mini)") != std::string::npos);

  r = tool({"associate", "--model", ws.model, "--from", "Color", "--pattern", red, "--to", "Volume"});
  CHECK(r.code == 3);
  CHECK(r.err.find("NoAssociation") != std::string::npos);

  CHECK(tool({"associate", "--model", ws.model, "--from", "Color", "--pattern", red, "--to", "color"}).code == 2);
}

TEST_CASE("report") {
  auto& ws = workspace();
  auto r = tool({"report", "--model", ws.model, "--figure", "3", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("probe,q0,q1,q2,q3,q4,q5,q6,argmax,fired\n") == 0);
  CHECK(r.out.find("Color:0 (red),") != std::string::npos);
  CHECK(r.out.find(",0,{0,3}\n") != std::string::npos);
  CHECK(r.out.find(",3,{3,4,6}\n") != std::string::npos);
  CHECK(r.out.find(",6,{3,6}\n") != std::string::npos);

  r = tool({"report", "--model", ws.model, "--figure", "4"});
  CHECK(r.code == 0);
  std::size_t rows = 0;
  for (std::size_t pos = 0; (pos = r.out.find("100.00", pos)) != std::string::npos; ++pos) ++rows;
  CHECK(rows == 6);

  const auto bare = ws.path("bare.cbrn");
  REQUIRE(tool({"train", "--catalog", kCatalog, "--out", bare}).code == 0);
  r = tool({"report", "--model", bare, "--figure", "4", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("100") == std::string::npos);
  CHECK(r.out.find("Color:0 (red),Style,0,0,0,0,0,0,0,{}") != std::string::npos);

  CHECK(tool({"report", "--model", ws.model, "--figure", "5"}).code == 2);
}

TEST_CASE("config file and environment") {
  auto& ws = workspace();
  const auto out = ws.path("cfg.cbrn");
  const auto cfg = ws.path("cbrn.ini");
  std::ofstream(cfg) << "[train]\ntheta = 50\nthreshold = 30\nprovider = random\nside = 8\n";
  CHECK(tool({"--config", cfg, "train", "--catalog", kCatalog, "--out", out}).code == 0);
  auto sys = model_store::load(out);
  CHECK(sys.config().theta == 50.0);
  CHECK(sys.config().threshold == 30.0);
  CHECK(sys.config().width == 8);

  ::setenv("CBRN_THETA", "200", 1);
  ::setenv("CBRN_PROVIDER", "random", 1);
  ::setenv("CBRN_SIDE", "6", 1);
  CHECK(tool({"train", "--catalog", kCatalog, "--out", out}).code == 0);
  sys = model_store::load(out);
  CHECK(sys.config().theta == 200.0);
  CHECK(tool({"train", "--catalog", kCatalog, "--out", out, "--theta", "150"}).code == 0);
  CHECK(model_store::load(out).config().theta == 150.0);
  ::unsetenv("CBRN_THETA");
  ::unsetenv("CBRN_PROVIDER");
  ::unsetenv("CBRN_SIDE");
}
