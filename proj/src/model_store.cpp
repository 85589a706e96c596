#include "cbrn/model_store.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "cbrn/error.hpp"

namespace cbrn::model_store {

namespace {

void put_real(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

void put_row(std::string& out, char tag, std::size_t index, std::span<const double> row) {
  out.push_back(tag);
  out.push_back(' ');
  out += std::to_string(index);
  for (double v : row) {
    out.push_back(' ');
    put_real(out, v);
  }
  out.push_back('\n');
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  // Next non-blank, non-comment line.
  std::string_view line(const char* expecting) {
    while (pos_ < text_.size()) {
      auto nl = text_.find('\n', pos_);
      if (nl == std::string_view::npos) nl = text_.size();
      std::string_view l = text_.substr(pos_, nl - pos_);
      pos_ = nl + 1;
      ++line_no_;
      if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
      if (l.empty() || l.front() == '#') continue;
      return l;
    }
    throw Error(ErrorCode::kTruncated, std::string("model file ends before ") + expecting);
  }

  bool at_end() const noexcept { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::kBadFormat, "model line " + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

class Fields {
 public:
  Fields(std::string_view line, const Reader& reader) : rest_(line), reader_(reader) {}

  std::string_view word() {
    skip();
    auto end = rest_.find(' ');
    auto w = rest_.substr(0, end);
    rest_ = end == std::string_view::npos ? std::string_view{} : rest_.substr(end);
    if (w.empty()) reader_.fail("missing field");
    return w;
  }

  void expect(std::string_view keyword) {
    auto w = word();
    if (w != keyword) reader_.fail("expected '" + std::string(keyword) + "', got '" + std::string(w) + "'");
  }

  std::size_t count() {
    auto w = word();
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || ptr != w.data() + w.size()) reader_.fail("bad integer '" + std::string(w) + "'");
    return v;
  }

  double real() {
    auto w = word();
    double v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || ptr != w.data() + w.size()) reader_.fail("bad number '" + std::string(w) + "'");
    return v;
  }

  std::string_view remainder() {
    if (!rest_.empty() && rest_.front() == ' ') rest_.remove_prefix(1);
    auto r = rest_;
    rest_ = {};
    return r;
  }

  bool done() {
    skip();
    return rest_.empty();
  }

  void end() {
    if (!done()) reader_.fail("unexpected trailing fields");
  }

 private:
  void skip() {
    while (!rest_.empty() && rest_.front() == ' ') rest_.remove_prefix(1);
  }

  std::string_view rest_;
  const Reader& reader_;
};

double keyed_real(Reader& in, const char* key) {
  Fields f(in.line(key), in);
  f.expect(key);
  double v = f.real();
  f.end();
  return v;
}

std::size_t keyed_count(Reader& in, const char* key) {
  Fields f(in.line(key), in);
  f.expect(key);
  auto v = f.count();
  f.end();
  return v;
}

void read_row(Reader& in, char tag, std::size_t index, std::span<double> row) {
  const char name[2] = {tag, '\0'};
  Fields f(in.line(name), in);
  f.expect(std::string_view(name, 1));
  if (f.count() != index) in.fail(std::string(name) + " rows out of order");
  for (double& v : row) {
    if (f.done()) {
      if (in.at_end()) throw Error(ErrorCode::kTruncated, "model file ends inside a " + std::string(name) + " row");
      throw Error(ErrorCode::kDimensionMismatch,
                  std::string(name) + " row " + std::to_string(index) + " is shorter than dim");
    }
    v = f.real();
  }
  if (!f.done()) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(name) + " row " + std::to_string(index) + " is longer than dim");
  }
}

}  // namespace

std::string serialize(const MemorySystem& system) {
  const auto& cfg = system.config();
  std::string out;
  out += kMagic;
  out += "\n# attribute-wise associative memory model\n";
  out += "dim " + std::to_string(cfg.dim()) + "\n";
  out += "shape " + std::to_string(cfg.width) + " " + std::to_string(cfg.height) + "\n";
  auto kv = [&out](const char* key, double v) {
    out += key;
    out.push_back(' ');
    put_real(out, v);
    out.push_back('\n');
  };
  kv("theta", cfg.theta);
  kv("threshold", cfg.threshold);
  kv("eps_w", cfg.eps_w);
  kv("eps_v", cfg.eps_v);
  kv("lambda_cb", cfg.lambda_cb);
  out += "epochs " + std::to_string(cfg.epochs) + "\n";
  out += "normalization " + std::string(to_string(cfg.normalization)) + "\n";

  out += "balls " + std::to_string(system.ball_count()) + "\n";
  for (std::size_t b = 0; b < system.ball_count(); ++b) {
    const auto& group = system.catalog().groups()[b];
    out += "ball " + group.name + " " + std::to_string(group.labels.size()) + "\n";
    for (std::size_t i = 0; i < group.labels.size(); ++i) {
      out += "label " + std::to_string(i) + " " + group.labels[i] + "\n";
    }
    for (std::size_t i = 0; i < group.labels.size(); ++i) put_row(out, 'W', i, system.recall(b).row(i));
    for (std::size_t i = 0; i < group.labels.size(); ++i) put_row(out, 'V', i, system.cue(b).row(i));
    out += "end\n";
  }

  out += "links " + std::to_string(system.links().size()) + "\n";
  for (const auto& [key, u] : system.links().entries()) {
    out += "link " + system.cue(key.from.ball).name() + " " + std::to_string(key.from.neuron) + " " +
           system.cue(key.to.ball).name() + " " + std::to_string(key.to.neuron) + " ";
    put_real(out, u);
    out.push_back('\n');
  }
  out += "end\n";
  return out;
}

MemorySystem deserialize(std::string_view text) {
  Reader in(text);
  {
    auto magic = in.line("header");
    if (magic != kMagic) {
      if (magic.substr(0, 4) == "CBRN") {
        throw Error(ErrorCode::kUnsupportedVersion, "unsupported model format '" + std::string(magic) + "'");
      }
      throw Error(ErrorCode::kBadFormat, "not a CBRN model file");
    }
  }

  SystemConfig cfg;
  const std::size_t dim = keyed_count(in, "dim");
  {
    Fields f(in.line("shape"), in);
    f.expect("shape");
    cfg.width = f.count();
    cfg.height = f.count();
    f.end();
  }
  if (cfg.dim() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "header dim " + std::to_string(dim) + " does not match shape " +
                                                   std::to_string(cfg.width) + "x" + std::to_string(cfg.height));
  }
  cfg.theta = keyed_real(in, "theta");
  cfg.threshold = keyed_real(in, "threshold");
  cfg.eps_w = keyed_real(in, "eps_w");
  cfg.eps_v = keyed_real(in, "eps_v");
  cfg.lambda_cb = keyed_real(in, "lambda_cb");
  cfg.epochs = static_cast<int>(keyed_count(in, "epochs"));
  {
    Fields f(in.line("normalization"), in);
    f.expect("normalization");
    cfg.normalization = parse_normalization(f.word());
    f.end();
  }
  cfg.validate();

  const std::size_t balls = keyed_count(in, "balls");
  std::vector<AttributeGroup> groups;
  std::vector<std::vector<double>> w_rows;
  std::vector<std::vector<double>> v_rows;
  for (std::size_t b = 0; b < balls; ++b) {
    Fields head(in.line("ball section"), in);
    head.expect("ball");
    AttributeGroup group{std::string(head.word()), {}};
    const std::size_t n = head.count();
    head.end();
    for (std::size_t i = 0; i < n; ++i) {
      Fields f(in.line("label"), in);
      f.expect("label");
      if (f.count() != i) in.fail("labels out of order");
      auto label = f.remainder();
      if (label.empty()) in.fail("empty label");
      group.labels.emplace_back(label);
    }
    std::vector<double> w(n * dim), v(n * dim);
    for (std::size_t i = 0; i < n; ++i) read_row(in, 'W', i, std::span<double>(w).subspan(i * dim, dim));
    for (std::size_t i = 0; i < n; ++i) read_row(in, 'V', i, std::span<double>(v).subspan(i * dim, dim));
    Fields end(in.line("end of ball section"), in);
    end.expect("end");
    end.end();
    groups.push_back(std::move(group));
    w_rows.push_back(std::move(w));
    v_rows.push_back(std::move(v));
  }

  MemorySystem system(cfg, AttributeCatalog(std::move(groups)));
  for (std::size_t b = 0; b < balls; ++b) {
    for (std::size_t i = 0; i < system.cue(b).neurons(); ++i) {
      std::copy_n(w_rows[b].begin() + static_cast<long>(i * dim), dim, system.recall(b).row(i).begin());
      std::copy_n(v_rows[b].begin() + static_cast<long>(i * dim), dim, system.cue(b).row(i).begin());
    }
  }

  const std::size_t links = keyed_count(in, "links");
  for (std::size_t n = 0; n < links; ++n) {
    Fields f(in.line("link"), in);
    f.expect("link");
    const std::size_t from_ball = system.ball_index(f.word());
    const std::size_t from_neuron = f.count();
    const std::size_t to_ball = system.ball_index(f.word());
    const std::size_t to_neuron = f.count();
    const double u = f.real();
    f.end();
    LinkKey key{system.ref(from_ball, from_neuron), system.ref(to_ball, to_neuron)};
    if (key.from.ball == key.to.ball) {
      throw Error(ErrorCode::kIntraBallLink, "model links two neurons of one Cue Ball");
    }
    if (system.links().entries().count(key)) in.fail("duplicate link");
    system.links().at(key) = u;
  }
  Fields end(in.line("end of links"), in);
  end.expect("end");
  end.end();
  return system;
}

void save(const MemorySystem& system, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write model " + path.string());
  out << serialize(system);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

MemorySystem load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace cbrn::model_store
