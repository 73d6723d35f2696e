#include "hrrxml_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hrrxml/capacity.hpp"
#include "hrrxml/checkpoint.hpp"
#include "hrrxml/error.hpp"
#include "hrrxml/metrics.hpp"
#include "hrrxml/train.hpp"
#include "hrrxml/vsa.hpp"
#include "hrrxml_cli/config.hpp"

namespace hrrxml::cli {
namespace {

using nlohmann::json;

// Shortest decimal form that round-trips, so equal doubles print equal bytes.
std::string num(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream s;
  for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? "," : "") << xs[i];
  return s.str();
}

// --out path or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error("cannot open " + path + " for writing");
    os_ = file_.get();
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

enum class Format { Csv, Json };

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("--format must be csv or json, got '" + s + "'");
}

VsaKind vsa_or_throw(const std::string& name) {
  const auto kind = parse_vsa_kind(name);
  if (!kind) throw ConfigError("unknown VSA '" + name + "' (expected hrr, hrr-proj, map-c or vtb)");
  return *kind;
}

LossVariant parse_loss(const std::string& s) {
  if (s == "abs") return LossVariant::AbsCosine;
  if (s == "plain") return LossVariant::PlainCosine;
  throw ConfigError("--hrr-loss must be abs or plain, got '" + s + "'");
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string(flag) + " is required");
}

// Options shared by every subcommand.
struct Common {
  std::string config;
  std::size_t jobs = 1;
};

// A subcommand: its CLI11 registration, the resolved option listing for the
// manifest, and the action.
struct Command {
  CLI::App* app = nullptr;
  Common common;
  std::function<ResolvedConfig()> resolved;
  std::function<std::uint64_t()> seed;
  std::function<void(const RunManifest&, std::ostream&, std::ostream&)> action;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key=value file; flags given on the command line take precedence");
  app->add_option("--jobs", c.jobs, "worker threads; outputs keep a fixed order");
}

// Fills options not set on the command line from the --config file.
void apply_config(const Command& cmd) {
  if (cmd.common.config.empty()) return;
  for (const auto& e : load_config(cmd.common.config)) {
    CLI::Option* opt = e.key == "config" ? nullptr : cmd.app->get_option_no_throw("--" + e.key);
    if (opt == nullptr) {
      throw ConfigError(cmd.common.config + ": line " + std::to_string(e.line) + ": unknown key '" + e.key +
                        "' for " + cmd.app->get_name());
    }
    if (opt->count() > 0) continue;
    opt->add_result(e.value);
    opt->run_callback();
  }
}

// ---------------------------------------------------------------- capacity

struct CapacityArgs {
  std::vector<std::string> vsa{"hrr", "hrr-proj", "vtb", "map-c"};
  std::vector<std::size_t> dims{256};
  double threshold = 0.03;
  std::size_t trials = kDefaultTrials;
  std::size_t n_max = 8192;
  std::size_t patience = 2;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
};

void register_capacity(CLI::App& root, Command& cmd, CapacityArgs& a) {
  cmd.app = root.add_subcommand("capacity", "retrieval-error capacity sweep per VSA and dimension");
  auto* app = cmd.app;
  app->add_option("--vsa", a.vsa, "hrr, hrr-proj, map-c, vtb (repeatable)")->delimiter(',');
  app->add_option("--dims", a.dims, "dimensions, comma separated")->delimiter(',');
  app->add_option("--threshold", a.threshold, "allowed retrieval-error fraction");
  app->add_option("--trials", a.trials);
  app->add_option("--n-max", a.n_max, "largest pair count on the sqrt(2) grid");
  app->add_option("--patience", a.patience, "stop after this many consecutive failing grid points");
  app->add_option("--seed", a.seed);
  app->add_option("--format", a.format, "csv or json (JSON lines)");
  app->add_option("--out", a.out);
  add_common(app, cmd.common);
  cmd.resolved = [&] {
    return ResolvedConfig{{"vsa", join(a.vsa)},       {"dims", join(a.dims)},
                          {"threshold", num(a.threshold)}, {"trials", std::to_string(a.trials)},
                          {"n-max", std::to_string(a.n_max)}, {"patience", std::to_string(a.patience)},
                          {"seed", std::to_string(a.seed)}, {"format", a.format},
                          {"jobs", std::to_string(cmd.common.jobs)}};
  };
  cmd.seed = [&] { return a.seed; };
  cmd.action = [&](const RunManifest& manifest, std::ostream& out, std::ostream& err) {
    const Format format = parse_format(a.format);
    std::vector<VsaKind> kinds;
    for (const auto& name : a.vsa) kinds.push_back(vsa_or_throw(name));
    if (a.dims.empty()) throw ConfigError("--dims needs at least one dimension");
    for (VsaKind k : kinds) {
      for (std::size_t d : a.dims) validate_dimension(k, Dimension(d));
    }
    const CapacitySweepOptions opts{a.trials, a.n_max, a.patience, cmd.common.jobs};
    Sink sink(a.out, out);
    std::ostream& os = sink.stream();
    write_manifest(os, manifest);
    if (format == Format::Csv) os << "row,vsa,d,n,trial,errors,p_error,threshold,capacity,largest_passing,saturated\n";
    for (VsaKind k : kinds) {
      const auto curve = capacity_curve(k, a.dims, a.threshold, RngSeed{a.seed}, opts);
      for (const auto& w : curve.warnings) err << "warning: " << w << '\n';
      for (const auto& point : curve.points) {
        const std::string vsa(to_string(k));
        for (const auto& est : point.sweep) {
          for (const auto& t : est.trials) {
            if (format == Format::Csv) {
              os << "trial," << vsa << ',' << t.d << ',' << t.n << ',' << t.trial << ',' << t.errors << ','
                 << num(t.p_error) << ",,,,\n";
            } else {
              os << json{{"row", "trial"}, {"vsa", vsa},        {"d", t.d},
                         {"n", t.n},       {"trial", t.trial}, {"errors", t.errors},
                         {"p_error", t.p_error}}
                        .dump()
                 << '\n';
            }
          }
        }
        if (format == Format::Csv) {
          os << "summary," << vsa << ',' << point.d << ",,,,," << num(point.threshold) << ',' << point.capacity
             << ',' << point.largest_passing << ',' << (point.saturated ? "true" : "false") << '\n';
        } else {
          os << json{{"row", "summary"},
                     {"vsa", vsa},
                     {"d", point.d},
                     {"threshold", point.threshold},
                     {"capacity", point.capacity},
                     {"largest_passing", point.largest_passing},
                     {"saturated", point.saturated}}
                    .dump()
             << '\n';
        }
      }
    }
  };
}

// ---------------------------------------------------------------- response

struct ResponseArgs {
  std::string vsa = "hrr-proj";
  std::size_t dim = 256;
  std::size_t n_min = 1;
  std::size_t n_max = 1024;
  std::size_t trials = kDefaultTrials;
  std::size_t max_queries = 0;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
};

void register_response(CLI::App& root, Command& cmd, ResponseArgs& a) {
  cmd.app = root.add_subcommand("response", "present/absent query response statistics over n = powers of two");
  auto* app = cmd.app;
  app->add_option("--vsa", a.vsa);
  app->add_option("--dim", a.dim);
  app->add_option("--n-min", a.n_min, "smallest pair count (rounded up to a power of two)");
  app->add_option("--n-max", a.n_max);
  app->add_option("--trials", a.trials);
  app->add_option("--max-queries", a.max_queries, "queries per trial, 0 = every bound pair");
  app->add_option("--seed", a.seed);
  app->add_option("--format", a.format, "csv or json (JSON lines)");
  app->add_option("--out", a.out);
  add_common(app, cmd.common);
  cmd.resolved = [&] {
    return ResolvedConfig{{"vsa", a.vsa},
                          {"dim", std::to_string(a.dim)},
                          {"n-min", std::to_string(a.n_min)},
                          {"n-max", std::to_string(a.n_max)},
                          {"trials", std::to_string(a.trials)},
                          {"max-queries", std::to_string(a.max_queries)},
                          {"seed", std::to_string(a.seed)},
                          {"format", a.format},
                          {"jobs", std::to_string(cmd.common.jobs)}};
  };
  cmd.seed = [&] { return a.seed; };
  cmd.action = [&](const RunManifest& manifest, std::ostream& out, std::ostream&) {
    const Format format = parse_format(a.format);
    const VsaKind kind = vsa_or_throw(a.vsa);
    if (a.n_min < 1 || a.n_max < a.n_min) throw ConfigError("need 1 <= --n-min <= --n-max");
    std::vector<std::size_t> ns;
    std::size_t n = 1;
    while (n < a.n_min) n *= 2;
    for (; n <= a.n_max; n *= 2) ns.push_back(n);
    if (ns.empty()) throw ConfigError("no power of two lies in [--n-min, --n-max]");
    const auto stats = query_response_distribution(kind, Dimension(a.dim), ns, RngSeed{a.seed},
                                                   ResponseOptions{a.trials, a.max_queries, cmd.common.jobs});
    Sink sink(a.out, out);
    std::ostream& os = sink.stream();
    write_manifest(os, manifest);
    if (format == Format::Csv) os << "vsa,d,n,mean_present,std_present,mean_absent,std_absent\n";
    for (const auto& s : stats) {
      if (format == Format::Csv) {
        os << a.vsa << ',' << a.dim << ',' << s.n << ',' << num(s.mean_present) << ',' << num(s.std_present) << ','
           << num(s.mean_absent) << ',' << num(s.std_absent) << '\n';
      } else {
        os << json{{"vsa", a.vsa},
                   {"d", a.dim},
                   {"n", s.n},
                   {"mean_present", s.mean_present},
                   {"std_present", s.std_present},
                   {"mean_absent", s.mean_absent},
                   {"std_absent", s.std_absent}}
                  .dump()
           << '\n';
      }
    }
  };
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data;
  std::string validation;
  std::string head = "hrr";
  std::size_t d_prime = 400;
  std::size_t hidden1 = 512;
  std::size_t hidden2 = 512;
  std::uint64_t label_seed = 0;
  std::size_t epochs = 10;
  double lr = 1e-3;
  std::size_t batch = 64;
  std::string optimizer = "adam";
  double weight_decay = 0.0;
  double dropout = 0.0;
  std::string hrr_loss = "abs";
  std::uint64_t seed = 0;
  bool one_based = false;
  bool timing = false;
  std::string out;
  std::string stats;
};

enum SeedStream : std::uint64_t { kInitStream = 0x696e6974, kTrainStream = 0x7472616e };

void register_train(CLI::App& root, Command& cmd, TrainArgs& a) {
  cmd.app = root.add_subcommand("train", "train an MLP with an fc or hrr output head");
  auto* app = cmd.app;
  app->add_option("--data", a.data, "training file (sparse multi-label text format)");
  app->add_option("--validation", a.validation, "optional held-out file for per-epoch P@1");
  app->add_option("--head", a.head, "fc or hrr");
  app->add_option("--d-prime", a.d_prime, "HRR output width");
  app->add_option("--hidden1", a.hidden1);
  app->add_option("--hidden2", a.hidden2);
  app->add_option("--label-seed", a.label_seed, "seed of the present/absent and class vectors");
  app->add_option("--epochs", a.epochs);
  app->add_option("--lr", a.lr);
  app->add_option("--batch", a.batch);
  app->add_option("--optimizer", a.optimizer, "adam or sgd");
  app->add_option("--weight-decay", a.weight_decay);
  app->add_option("--dropout", a.dropout);
  app->add_option("--hrr-loss", a.hrr_loss, "abs (|cos| terms) or plain (signed cosine)");
  app->add_option("--seed", a.seed);
  app->add_flag("--one-based", a.one_based, "feature and label indices in the files start at 1");
  app->add_flag("--timing", a.timing, "add wall-clock seconds to the per-epoch stats");
  app->add_option("--out", a.out, "checkpoint path");
  app->add_option("--stats", a.stats, "per-epoch JSON lines (default: standard output)");
  add_common(app, cmd.common);
  cmd.resolved = [&] {
    return ResolvedConfig{{"data", a.data},
                          {"validation", a.validation},
                          {"head", a.head},
                          {"d-prime", std::to_string(a.d_prime)},
                          {"hidden1", std::to_string(a.hidden1)},
                          {"hidden2", std::to_string(a.hidden2)},
                          {"label-seed", std::to_string(a.label_seed)},
                          {"epochs", std::to_string(a.epochs)},
                          {"lr", num(a.lr)},
                          {"batch", std::to_string(a.batch)},
                          {"optimizer", a.optimizer},
                          {"weight-decay", num(a.weight_decay)},
                          {"dropout", num(a.dropout)},
                          {"hrr-loss", a.hrr_loss},
                          {"seed", std::to_string(a.seed)},
                          {"one-based", a.one_based ? "true" : "false"},
                          {"timing", a.timing ? "true" : "false"},
                          {"out", a.out},
                          {"stats", a.stats},
                          {"jobs", std::to_string(cmd.common.jobs)}};
  };
  cmd.seed = [&] { return a.seed; };
  cmd.action = [&](const RunManifest& manifest, std::ostream& out, std::ostream&) {
    require(a.data, "--data");
    require(a.out, "--out");
    const ParseOptions popts{a.one_based};
    const SparseDataset data = load_xml_repo(a.data, popts);
    std::optional<SparseDataset> validation;
    if (!a.validation.empty()) validation = load_xml_repo(a.validation, popts);

    const ModelSpec spec{parse_head_kind(a.head), data.num_features, a.hidden1, a.hidden2,
                         data.num_labels,         a.d_prime,         a.label_seed};
    Model model(spec, derive_seed(RngSeed{a.seed}, kInitStream));
    TrainConfig cfg;
    cfg.epochs = a.epochs;
    cfg.batch_size = a.batch;
    cfg.learning_rate = a.lr;
    cfg.optimizer = parse_optimizer_kind(a.optimizer);
    cfg.weight_decay = a.weight_decay;
    cfg.dropout = a.dropout;
    cfg.hrr_loss = parse_loss(a.hrr_loss);
    cfg.seed = derive_seed(RngSeed{a.seed}, kTrainStream);
    cfg.jobs = cmd.common.jobs;
    cfg.validate();

    Sink sink(a.stats, out);
    std::ostream& os = sink.stream();
    write_manifest(os, manifest);
    const auto on_epoch = [&](const EpochStats& s) {
      json row{{"epoch", s.epoch}, {"mean_loss", s.mean_loss}};
      if (s.validation_p1) row["validation_p1"] = *s.validation_p1;
      if (a.timing) row["seconds"] = s.seconds;
      os << row.dump() << '\n' << std::flush;
    };
    (void)train(model, data, cfg, validation ? &*validation : nullptr, on_epoch);
    save_checkpoint(a.out, model);
    json done{{"event", "done"}, {"checkpoint", a.out}};
    if (validation) {
      const std::size_t ks[] = {1};
      done["validation_p1"] = evaluate_model(model, *validation, ks).at(1).p;
    }
    os << done.dump() << '\n';
  };
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string data;
  std::string checkpoint;
  std::string predictions;
  std::string propensities_from;
  std::vector<std::size_t> ks{kDefaultKs.begin(), kDefaultKs.end()};
  bool one_based = false;
  std::string out;
};

// One ranked list per line, label indices separated by commas or whitespace.
std::vector<std::vector<std::size_t>> load_predictions(const std::string& path, std::size_t num_labels) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::vector<std::size_t>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<std::size_t> ranked;
    std::string tok;
    while (fields >> tok) {
      std::size_t v = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError(line_no, "bad label index '" + tok + "' in " + path);
      }
      if (v >= num_labels) throw ParseError(line_no, "label " + tok + " out of range in " + path);
      if (std::find(ranked.begin(), ranked.end(), v) != ranked.end()) {
        throw ParseError(line_no, "label " + tok + " repeated in " + path);
      }
      ranked.push_back(v);
    }
    rows.push_back(std::move(ranked));
  }
  return rows;
}

void register_eval(CLI::App& root, Command& cmd, EvalArgs& a) {
  cmd.app = root.add_subcommand("eval", "ranking metrics for a checkpoint or a predictions file");
  auto* app = cmd.app;
  app->add_option("--data", a.data, "test file (sparse multi-label text format)");
  app->add_option("--checkpoint", a.checkpoint);
  app->add_option("--predictions", a.predictions, "ranked label lists, one line per test example");
  app->add_option("--propensities-from", a.propensities_from,
                  "file whose label frequencies give the propensities (default: --data)");
  app->add_option("--k", a.ks, "cutoffs, comma separated")->delimiter(',');
  app->add_flag("--one-based", a.one_based);
  app->add_option("--out", a.out);
  add_common(app, cmd.common);
  cmd.resolved = [&] {
    return ResolvedConfig{{"data", a.data},
                          {"checkpoint", a.checkpoint},
                          {"predictions", a.predictions},
                          {"propensities-from", a.propensities_from},
                          {"k", join(a.ks)},
                          {"one-based", a.one_based ? "true" : "false"},
                          {"jobs", std::to_string(cmd.common.jobs)}};
  };
  cmd.seed = [] { return std::uint64_t{0}; };
  cmd.action = [&](const RunManifest& manifest, std::ostream& out, std::ostream&) {
    require(a.data, "--data");
    if (a.checkpoint.empty() == a.predictions.empty()) {
      throw ConfigError("eval needs exactly one of --checkpoint and --predictions");
    }
    if (a.ks.empty()) throw ConfigError("--k needs at least one cutoff");
    const ParseOptions popts{a.one_based};
    const SparseDataset data = load_xml_repo(a.data, popts);
    std::vector<double> propensities = data.propensities;
    if (!a.propensities_from.empty()) {
      const SparseDataset ref = load_xml_repo(a.propensities_from, popts);
      if (ref.num_labels != data.num_labels) throw DimensionError("--propensities-from has a different label count");
      propensities = ref.propensities;
    }
    const std::size_t k_max = *std::max_element(a.ks.begin(), a.ks.end());

    std::vector<RankedPrediction> preds;
    json report;
    if (!a.checkpoint.empty()) {
      const Model model = load_checkpoint(a.checkpoint);
      const ModelSpec& spec = model.spec();
      if (spec.input != data.num_features || spec.num_labels != data.num_labels) {
        throw DimensionError("checkpoint expects D=" + std::to_string(spec.input) + ", L=" +
                             std::to_string(spec.num_labels) + "; data has D=" + std::to_string(data.num_features) +
                             ", L=" + std::to_string(data.num_labels));
      }
      if (k_max > spec.num_labels) throw ConfigError("--k exceeds the label count");
      preds = predict_topk(model, data, k_max);
      ModelSpec fc = spec;
      fc.head = HeadKind::Fc;
      const ParamCount mine = param_count(spec);
      const ParamCount base = param_count(fc);
      report["head"] = std::string(to_string(spec.head));
      report["param_count"] = {{"output_layer", mine.output_layer}, {"total", mine.total}};
      report["fc_param_count"] = {{"output_layer", base.output_layer}, {"total", base.total}};
      report["compression_percent"] = {
          {"output_layer", compression_percent(mine.output_layer, base.output_layer)},
          {"total", compression_percent(mine.total, base.total)}};
    } else {
      const auto ranked = load_predictions(a.predictions, data.num_labels);
      if (ranked.size() != data.size()) {
        throw DimensionError("predictions file has " + std::to_string(ranked.size()) + " rows, data has " +
                             std::to_string(data.size()));
      }
      for (std::size_t i = 0; i < ranked.size(); ++i) preds.push_back({ranked[i], data.examples[i].labels});
    }
    const MetricReport metrics = evaluate(preds, propensities, a.ks);

    json manifest_json{{"subcommand", manifest.subcommand},
                       {"version", manifest.version},
                       {"seed", manifest.seed},
                       {"started", manifest.started}};
    for (const auto& [key, value] : manifest.config) manifest_json["config"][key] = value;
    report["manifest"] = manifest_json;
    report["evaluated"] = metrics.evaluated;
    report["skipped"] = metrics.skipped;
    report["metrics"] = json::array();
    for (const auto& r : metrics.rows) {
      report["metrics"].push_back({{"k", r.k}, {"p", r.p}, {"psp", r.psp}, {"ndcg", r.ndcg}, {"psndcg", r.psndcg}});
    }
    Sink sink(a.out, out);
    sink.stream() << report.dump(2) << '\n';
  };
}

// ---------------------------------------------------------------- params

struct ParamsArgs {
  std::size_t input = 5000;
  std::size_t hidden1 = 512;
  std::size_t hidden2 = 512;
  std::size_t labels = 3993;
  std::size_t d_prime = 400;
  std::string out;
};

void register_params(CLI::App& root, Command& cmd, ParamsArgs& a) {
  cmd.app = root.add_subcommand("params", "parameter counts and output-layer compression, fc vs hrr head");
  auto* app = cmd.app;
  app->add_option("--input", a.input);
  app->add_option("--hidden1", a.hidden1);
  app->add_option("--hidden2", a.hidden2);
  app->add_option("--labels", a.labels);
  app->add_option("--d-prime", a.d_prime);
  app->add_option("--out", a.out);
  add_common(app, cmd.common);
  cmd.resolved = [&] {
    return ResolvedConfig{{"input", std::to_string(a.input)},     {"hidden1", std::to_string(a.hidden1)},
                          {"hidden2", std::to_string(a.hidden2)}, {"labels", std::to_string(a.labels)},
                          {"d-prime", std::to_string(a.d_prime)}, {"jobs", std::to_string(cmd.common.jobs)}};
  };
  cmd.seed = [] { return std::uint64_t{0}; };
  cmd.action = [&](const RunManifest& manifest, std::ostream& out, std::ostream&) {
    ModelSpec fc{HeadKind::Fc, a.input, a.hidden1, a.hidden2, a.labels, a.d_prime, 0};
    ModelSpec hrr = fc;
    hrr.head = HeadKind::Hrr;
    fc.validate();
    hrr.validate();
    const ParamCount f = param_count(fc);
    const ParamCount h = param_count(hrr);
    Sink sink(a.out, out);
    std::ostream& os = sink.stream();
    write_manifest(os, manifest);
    os << "head,output_layer,total,output_compression_percent,total_compression_percent\n"
       << "fc," << f.output_layer << ',' << f.total << ",0,0\n"
       << "hrr," << h.output_layer << ',' << h.total << ',' << num(compression_percent(h.output_layer, f.output_layer))
       << ',' << num(compression_percent(h.total, f.total)) << '\n';
  };
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::size_t n = 2000;
  std::size_t features = 100;
  std::size_t labels = 20;
  std::size_t labels_per_point = 2;
  double noise = SynthOptions{}.noise;
  std::uint64_t seed = 0;
  std::string out;
};

void register_synth(CLI::App& root, Command& cmd, SynthArgs& a) {
  cmd.app = root.add_subcommand("synth", "write a planted-map synthetic dataset");
  auto* app = cmd.app;
  app->add_option("--n", a.n, "examples");
  app->add_option("--features", a.features);
  app->add_option("--labels", a.labels);
  app->add_option("--labels-per-point", a.labels_per_point);
  app->add_option("--noise", a.noise, "std of Gaussian noise on the planted features");
  app->add_option("--seed", a.seed);
  app->add_option("--out", a.out, "dataset path (default: standard output)");
  add_common(app, cmd.common);
  cmd.resolved = [&] { return ResolvedConfig{}; };
  cmd.seed = [&] { return a.seed; };
  cmd.action = [&](const RunManifest&, std::ostream& out, std::ostream&) {
    const auto ds = synth_generate(a.n, a.features, a.labels, a.labels_per_point, RngSeed{a.seed},
                                   SynthOptions{a.noise});
    Sink sink(a.out, out);
    serialize_xml_repo(sink.stream(), ds);
  };
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App root{"Holographic reduced representation experiments", "hrrxml"};
  root.require_subcommand(1);
  root.set_version_flag("--version", version_string());

  Command capacity, response, train_cmd, eval_cmd, params, synth;
  CapacityArgs capacity_args;
  ResponseArgs response_args;
  TrainArgs train_args;
  EvalArgs eval_args;
  ParamsArgs params_args;
  SynthArgs synth_args;
  register_capacity(root, capacity, capacity_args);
  register_response(root, response, response_args);
  register_train(root, train_cmd, train_args);
  register_eval(root, eval_cmd, eval_args);
  register_params(root, params, params_args);
  register_synth(root, synth, synth_args);
  Command* commands[] = {&capacity, &response, &train_cmd, &eval_cmd, &params, &synth};

  try {
    // CLI11 consumes the argument vector back to front.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    root.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << root.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  Command* cmd = nullptr;
  for (Command* c : commands) {
    if (c->app->parsed()) cmd = c;
  }
  try {
    apply_config(*cmd);
    if (cmd->common.jobs < 1) throw ConfigError("--jobs must be at least 1");
    const RunManifest manifest{cmd->app->get_name(), cmd->resolved(), cmd->seed(), version_string(),
                               start_timestamp()};
    cmd->action(manifest, out, err);
    return kExitOk;
  } catch (const DivergenceError& e) {
    err << "diverged: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace hrrxml::cli
