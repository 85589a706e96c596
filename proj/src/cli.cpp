#include "cbrn/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbrn/catalog.hpp"
#include "cbrn/memory.hpp"
#include "cbrn/model_store.hpp"
#include "cbrn/pattern.hpp"
#include "cbrn/pipeline.hpp"
#include "cbrn/qr.hpp"

namespace cbrn::cli {

namespace {

enum class Format { kTable, kCsv };

struct EncodeArgs {
  std::string label;
  std::string out;
  std::size_t scale = qr::kDefaultScale;
  int mask = -1;
};

struct TrainArgs {
  std::string catalog;
  std::string out;
  std::string resume;
  double theta = 100.0;
  double threshold = 72.0;
  double eps_w = 1.0;
  double eps_v = 1.0;
  double lambda_cb = 1.0;
  int epochs = 1;
  bool unnormalized = false;
  std::string provider = "qr";
  std::uint64_t seed = 1;
  std::size_t side = kDefaultSide;
  Format format = Format::kTable;
};

struct PairArgs {
  std::string model;
  std::string out;
  std::vector<std::string> pairs;
  Format format = Format::kTable;
};

struct RecallArgs {
  std::string model;
  std::string ball;
  std::string pattern;
  std::optional<double> threshold;
  std::string out;
  Format format = Format::kTable;
};

struct AssociateArgs {
  std::string model;
  std::string from;
  std::string to;
  std::string pattern;
  std::string out;
};

struct ReportArgs {
  std::string model;
  int figure = 3;
  std::vector<std::string> probes;
  Format format = Format::kTable;
};

std::string real(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

// Minimal aligned-column / CSV table writer.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out, Format format) const {
    if (format == Format::kCsv) {
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
      }
      return;
    }
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()), 0);
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << "  ";
        out << std::setw(static_cast<int>(width[c])) << (c == 0 ? std::left : std::right) << row[c];
      }
      out << std::right << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string join(const std::vector<std::size_t>& values) {
  std::string s = "{";
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
  return s + "}";
}

// "ball:index", ball matched case-insensitively.
NeuronRef parse_neuron(const MemorySystem& system, std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidConfig, "expected ball:index, got '" + std::string(text) + "'");
  }
  const std::size_t ball = system.ball_index(text.substr(0, colon));
  auto digits = text.substr(colon + 1);
  std::size_t index = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw Error(ErrorCode::kInvalidConfig, "bad neuron index in '" + std::string(text) + "'");
  }
  return system.ref(ball, index);
}

std::string describe(const MemorySystem& system, NeuronRef n) {
  return system.cue(n.ball).name() + ":" + std::to_string(n.neuron) + " (" +
         system.catalog().groups()[n.ball].labels[n.neuron] + ")";
}

void add_format_option(CLI::App* cmd, Format& format) {
  cmd->add_option_function<std::string>(
         "--format", [&format](const std::string& v) { format = v == "csv" ? Format::kCsv : Format::kTable; },
         "Output format (table or csv)")
      ->check(CLI::IsMember({"table", "csv"}, CLI::ignore_case));
}

int cmd_encode(const EncodeArgs& args, std::ostream& out) {
  std::optional<int> mask;
  if (args.mask >= 0) mask = args.mask;
  const auto matrix = qr::encode_label(args.label, mask);
  const auto pattern = qr::render(matrix, args.scale);
  save_pbm(pattern, args.out);
  out << "wrote " << args.out << ": " << pattern.width() << "x" << pattern.height() << " pixels, version "
      << matrix.version << "-" << matrix.ecc_level << ", mask " << matrix.mask << ", " << matrix.dark_count()
      << " dark modules\n";
  return kExitOk;
}

int cmd_train(const TrainArgs& args, std::ostream& out) {
  std::optional<MemorySystem> system;
  if (!args.resume.empty()) {
    // Continue learning on existing weights with the stored configuration.
    system.emplace(model_store::load(args.resume));
  } else {
    SystemConfig cfg;
    cfg.width = cfg.height = args.side;
    cfg.theta = args.theta;
    cfg.threshold = args.threshold;
    cfg.eps_w = args.eps_w;
    cfg.eps_v = args.eps_v;
    cfg.lambda_cb = args.lambda_cb;
    cfg.epochs = args.epochs;
    cfg.normalization = args.unnormalized ? Normalization::kNone : Normalization::kL2;
    if (args.catalog.empty()) throw Error(ErrorCode::kInvalidConfig, "--catalog is required");
    system.emplace(cfg, load_catalog(args.catalog));
  }
  if (system->catalog().pattern_count() == 0) throw Error(ErrorCode::kInvalidConfig, "no patterns in catalog");

  const auto provider = make_provider(args.provider, args.seed, system->config().shape());
  const auto records = train_catalog(*system, *provider);

  Table table({"ball", "neuron", "label", "E", "e", "q"});
  for (const auto& r : records) {
    const auto stored = recall_forward(system->recall(r.neuron.ball), r.neuron.neuron);
    const auto q = cue_response(system->cue(r.neuron.ball), stored, system->config().threshold).q[r.neuron.neuron];
    table.add({r.group, std::to_string(r.neuron.neuron), r.label, sci(r.report.recall.final_error),
               sci(r.report.cue.final_error), fixed(q, 6)});
  }
  table.print(out, args.format);
  model_store::save(*system, args.out);
  out << "stored " << records.size() << " patterns in " << system->ball_count() << " cue balls -> " << args.out
      << "\n";
  return kExitOk;
}

int cmd_pair(const PairArgs& args, std::ostream& out) {
  auto system = model_store::load(args.model);
  Table table({"from", "to", "eta_before", "eta_after", "max_delta", "u"});
  for (const auto& text : args.pairs) {
    auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "expected ball:k=ball:l, got '" + text + "'");
    }
    const auto a = parse_neuron(system, std::string_view(text).substr(0, eq));
    const auto b = parse_neuron(system, std::string_view(text).substr(eq + 1));
    const auto report = learn_cross_weights(system, a, b);
    for (const auto* dir : {&report.forward, &report.backward}) {
      double delta = 0.0;
      for (double d : dir->learn.max_abs_deltas) delta = std::max(delta, d);
      table.add({describe(system, dir->link.from), describe(system, dir->link.to), real(dir->learn.errors.front()),
                 real(dir->learn.final_error), real(delta), real(dir->weight)});
    }
  }
  table.print(out, args.format);
  const std::string target = args.out.empty() ? args.model : args.out;
  model_store::save(system, target);
  out << system.links().size() << " directed links -> " << target << "\n";
  return kExitOk;
}

int cmd_recall(const RecallArgs& args, std::ostream& out) {
  const auto system = model_store::load(args.model);
  const std::size_t ball = system.ball_index(args.ball);
  const auto probe = present(system.config(), load_pbm(args.pattern, system.config().shape()));
  const double threshold = args.threshold.value_or(system.config().threshold);
  const auto response = cue_response(system.cue(ball), probe, threshold);

  Table table({"neuron", "label", "q", "fired"});
  for (std::size_t i = 0; i < response.q.size(); ++i) {
    const bool fired = response.q[i] >= threshold;
    table.add({std::to_string(i), system.catalog().groups()[ball].labels[i],
               args.format == Format::kCsv ? real(response.q[i]) : fixed(response.q[i]), fired ? "1" : "0"});
  }
  table.print(out, args.format);
  out << "threshold " << real(threshold) << " fired " << join(response.fired) << " argmax " << response.argmax
      << "\n";

  if (!args.out.empty()) {
    if (response.fired.empty()) {
      throw Error(ErrorCode::kNoRecognition, "no cue neuron fired; nothing to recall");
    }
    save_pbm(stored_bitmap(system, {ball, response.argmax}), args.out);
    out << "recalled " << describe(system, {ball, response.argmax}) << " -> " << args.out << "\n";
  }
  return kExitOk;
}

int cmd_associate(const AssociateArgs& args, std::ostream& out) {
  const auto system = model_store::load(args.model);
  const std::size_t from = system.ball_index(args.from);
  const std::size_t to = system.ball_index(args.to);
  if (from == to) throw Error(ErrorCode::kUnknownBallPair, "--from and --to name the same Cue Ball");
  const auto probe = present(system.config(), load_pbm(args.pattern, system.config().shape()));
  const auto assoc = associate(system, from, probe, to);
  out << "path " << describe(system, {from, assoc.from_neuron}) << " -> " << describe(system, {to, assoc.to_neuron})
      << "\n";
  out << "k " << assoc.from_neuron << " q_k " << fixed(assoc.from_q) << " l " << assoc.to_neuron << " q_l "
      << fixed(assoc.to_q) << "\n";
  if (!args.out.empty()) {
    save_pbm(reconstruct(assoc.recalled.values(), system.config().width, system.config().height), args.out);
    out << "wrote " << args.out << "\n";
  }
  return kExitOk;
}

std::vector<NeuronRef> report_probes(const MemorySystem& system, const std::vector<std::string>& probes) {
  std::vector<NeuronRef> out;
  for (const auto& p : probes) out.push_back(parse_neuron(system, p));
  return out;
}

std::vector<std::string> index_header(const std::string& first, std::size_t n) {
  std::vector<std::string> header{first};
  for (std::size_t i = 0; i < n; ++i) header.push_back("q" + std::to_string(i));
  return header;
}

int cmd_report(const ReportArgs& args, std::ostream& out) {
  const auto system = model_store::load(args.model);
  const auto& cfg = system.config();
  auto cell = [&](double q) { return args.format == Format::kCsv ? real(q) : fixed(q, 2); };

  std::size_t width = 0;
  for (std::size_t b = 0; b < system.ball_count(); ++b) width = std::max(width, system.cue(b).neurons());

  if (args.figure == 3) {
    auto header = index_header("probe", width);
    header.insert(header.end(), {"argmax", "fired"});
    Table table(header);
    for (const auto& probe : report_probes(system, args.probes)) {
      const auto stored = recall_forward(system.recall(probe.ball), probe.neuron);
      const auto r = cue_response(system.cue(probe.ball), stored, cfg.threshold);
      std::vector<std::string> row{describe(system, probe)};
      for (std::size_t i = 0; i < width; ++i) row.push_back(i < r.q.size() ? cell(r.q[i]) : "");
      row.push_back(std::to_string(r.argmax));
      row.push_back(join(r.fired));
      table.add(std::move(row));
    }
    table.print(out, args.format);
    if (args.format == Format::kTable) {
      out << "cue outputs q_i for each probe pattern; theta " << real(cfg.theta) << ", threshold "
          << real(cfg.threshold) << "\n";
    }
    return kExitOk;
  }

  // --figure 4: one row per (source neuron, target ball) with trained links;
  // without links, the default probes against every other ball.
  std::vector<std::pair<NeuronRef, std::size_t>> rows;
  for (const auto& [key, u] : system.links().entries()) {
    std::pair<NeuronRef, std::size_t> r{key.from, key.to.ball};
    if (std::find(rows.begin(), rows.end(), r) == rows.end()) rows.push_back(r);
  }
  if (rows.empty()) {
    for (const auto& probe : report_probes(system, args.probes)) {
      for (std::size_t b = 0; b < system.ball_count(); ++b) {
        if (b != probe.ball) rows.emplace_back(probe, b);
      }
    }
  }
  auto header = index_header("source", width);
  header.insert(header.begin() + 1, "target");
  header.push_back("fired");
  Table table(header);
  for (const auto& [src, to] : rows) {
    const auto r = cross_response(system, src, to, cfg.threshold);
    std::vector<std::string> row{describe(system, src), system.cue(to).name()};
    for (std::size_t i = 0; i < width; ++i) row.push_back(i < r.q.size() ? cell(r.q[i]) : "");
    row.push_back(join(r.fired));
    table.add(std::move(row));
  }
  table.print(out, args.format);
  if (args.format == Format::kTable) {
    out << "cross-ball outputs with the source neuron at z = 1. Trained links respond with exactly theta ("
        << real(cfg.theta) << ") after one-step learning; the value 99 seen in earlier runs of this model is not "
           "reproduced.\n";
  }
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyLabel:
    case ErrorCode::kLabelTooLong:
    case ErrorCode::kIndexOutOfRange:
    case ErrorCode::kIntraBallLink:
    case ErrorCode::kUnknownBall:
    case ErrorCode::kUnknownBallPair:
    case ErrorCode::kInvalidConfig:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attribute-wise associative memory: QR-coded labels stored in Cue Balls and a Recall Net"};
  app.name("cbrn");
  app.set_config("--config", "", "Read options from a key = value file");
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Render a label as a QR pattern (PBM)");
  encode->add_option("--label", enc.label, "Label text")->required();
  encode->add_option("--out", enc.out, "Output PBM file")->required();
  encode->add_option("--scale", enc.scale, "Pixels per module")->envname("CBRN_SCALE")->check(CLI::PositiveNumber);
  encode->add_option("--mask", enc.mask, "Force a mask pattern (0-7)")->check(CLI::Range(0, 7));

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Store every catalog label (recall and cue weights)");
  train->add_option("--catalog", tr.catalog, "Catalog file (group:index:label)")->envname("CBRN_CATALOG");
  train->add_option("--out", tr.out, "Model file to write")->required();
  train->add_option("--resume", tr.resume, "Continue training an existing model (uses its catalog and settings)");
  train->add_option("--theta", tr.theta, "Learning value")->envname("CBRN_THETA");
  train->add_option("--threshold", tr.threshold, "Firing threshold D")->envname("CBRN_THRESHOLD");
  train->add_option("--eps-w", tr.eps_w, "Recall-weight learning rate")->envname("CBRN_EPS_W");
  train->add_option("--eps-v", tr.eps_v, "Cue-weight learning rate")->envname("CBRN_EPS_V");
  train->add_option("--lambda-cb", tr.lambda_cb, "Cross-ball learning rate")->envname("CBRN_LAMBDA_CB");
  train->add_option("--epochs", tr.epochs, "Delta-rule repetitions per pattern")->envname("CBRN_EPOCHS");
  train->add_flag("--unnormalized", tr.unnormalized, "Present raw 0/1 pixels instead of unit-norm vectors");
  train->add_option("--provider", tr.provider, "Pattern source")
      ->check(CLI::IsMember({"qr", "random"}))
      ->envname("CBRN_PROVIDER");
  train->add_option("--seed", tr.seed, "Seed for the random provider")->envname("CBRN_SEED");
  train->add_option("--side", tr.side, "Pattern side in pixels")->envname("CBRN_SIDE")->check(CLI::PositiveNumber);
  add_format_option(train, tr.format);

  PairArgs pr;
  auto* pair = app.add_subcommand("pair", "Train cross-ball links in both directions");
  pair->add_option("--model", pr.model, "Model file")->required()->envname("CBRN_MODEL");
  pair->add_option("--pair", pr.pairs, "ball:k=ball:l (repeatable)")->required();
  pair->add_option("--out", pr.out, "Write the updated model here instead of in place");
  add_format_option(pair, pr.format);

  RecallArgs rc;
  auto* recall = app.add_subcommand("recall", "Present a pattern to one Cue Ball");
  recall->add_option("--model", rc.model, "Model file")->required()->envname("CBRN_MODEL");
  recall->add_option("--ball", rc.ball, "Cue Ball name")->required();
  recall->add_option("--pattern", rc.pattern, "Probe PBM")->required();
  recall->add_option("--threshold", rc.threshold, "Override the firing threshold");
  recall->add_option("--out", rc.out, "Write the recalled pattern (PBM)");
  add_format_option(recall, rc.format);

  AssociateArgs as;
  auto* assoc = app.add_subcommand("associate", "Recall the linked pattern of another attribute");
  assoc->add_option("--model", as.model, "Model file")->required()->envname("CBRN_MODEL");
  assoc->add_option("--from", as.from, "Cue Ball the probe belongs to")->required();
  assoc->add_option("--pattern", as.pattern, "Probe PBM")->required();
  assoc->add_option("--to", as.to, "Cue Ball to recall from")->required();
  assoc->add_option("--out", as.out, "Write the recalled pattern (PBM)");

  ReportArgs rp;
  rp.probes = {"Color:0", "Style:3", "Volume:6"};
  auto* report = app.add_subcommand("report", "Cue-output (3) or cross-ball (4) tables");
  report->add_option("--model", rp.model, "Model file")->required()->envname("CBRN_MODEL");
  report->add_option("--figure", rp.figure, "3 = cue outputs, 4 = cross-ball outputs")->check(CLI::IsMember({3, 4}));
  report->add_option("--probe", rp.probes, "ball:index probe (repeatable)")->capture_default_str();
  add_format_option(report, rp.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode) return cmd_encode(enc, out);
    if (*train) return cmd_train(tr, out);
    if (*pair) return cmd_pair(pr, out);
    if (*recall) return cmd_recall(rc, out);
    if (*assoc) return cmd_associate(as, out);
    if (*report) return cmd_report(rp, out);
  } catch (const cbrn::Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace cbrn::cli
