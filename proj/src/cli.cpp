#include "fraudgraph/cli.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fraudgraph/baselines.hpp"
#include "fraudgraph/errors.hpp"
#include "fraudgraph/experiments.hpp"
#include "fraudgraph/export.hpp"
#include "fraudgraph/generator.hpp"
#include "fraudgraph/metrics.hpp"
#include "fraudgraph/split.hpp"
#include "fraudgraph/stats.hpp"

namespace fraudgraph {

namespace {

struct GenFlags {
  std::string config_file;
  std::string scale;
  std::uint32_t users = 0;
  std::uint64_t seed = 42;
  std::uint32_t rings_ticketing = 0;
  std::uint32_t rings_ghost = 0;
  std::uint32_t rings_ato = 0;
  double fraud_rate = 0.0;
  std::vector<std::string> drop_relation;
  std::vector<std::string> drop_feature;
  std::string calibration;
  bool widen = false;
  std::vector<int> ticketing_size;
  std::vector<int> ghost_reviewers;
  std::vector<int> ato_compromised;

  CLI::App* app = nullptr;
  bool Given(const char* name) const { return app->count(name) > 0; }
};

void AddGenerationFlags(CLI::App* app, GenFlags& f,
                        const std::string& default_scale) {
  f.app = app;
  f.scale = default_scale;
  app->add_option("--config", f.config_file,
                  "JSON config file; explicit flags override its keys");
  app->add_option("--scale", f.scale, "toy, small, medium, large or xlarge")
      ->capture_default_str();
  app->add_option("--users", f.users, "override the preset user count");
  app->add_option("--seed", f.seed, "root seed")->capture_default_str();
  app->add_option("--rings-ticketing", f.rings_ticketing,
                  "ticketing ring count");
  app->add_option("--rings-ghost", f.rings_ghost, "ghost hotel ring count");
  app->add_option("--rings-ato", f.rings_ato, "account takeover ring count");
  app->add_option("--fraud-rate", f.fraud_rate,
                  "target user fraud rate; derives ring counts");
  app->add_option("--drop-relation", f.drop_relation,
                  "relation to emit empty (repeatable; 'wrote/about' drops "
                  "both review relations)");
  app->add_option("--drop-feature", f.drop_feature,
                  "user feature column to omit (repeatable)");
  app->add_option("--calibration", f.calibration,
                  "enforce (default) or report")
      ->check(CLI::IsMember({"enforce", "report"}));
  app->add_flag("--widen-size-bounds", f.widen,
                "allow ring sizes outside the documented bounds");
  app->add_option("--ticketing-size", f.ticketing_size,
                  "ticketing members LO HI")
      ->expected(2);
  app->add_option("--ghost-reviewers", f.ghost_reviewers,
                  "ghost hotel reviewers LO HI")
      ->expected(2);
  app->add_option("--ato-compromised", f.ato_compromised,
                  "compromised accounts per ATO ring LO HI")
      ->expected(2);
}

GeneratorConfig BuildConfig(const GenFlags& f) {
  GeneratorConfig c;
  if (!f.config_file.empty()) {
    c = LoadConfigFile(f.config_file);
    if (f.Given("--scale")) c.scale = f.scale;
  } else {
    c.scale = f.scale;
  }
  if (f.Given("--users")) c.n_users = f.users;
  if (f.Given("--seed") || f.config_file.empty()) c.seed = f.seed;
  if (f.Given("--rings-ticketing")) c.n_ticketing_rings = f.rings_ticketing;
  if (f.Given("--rings-ghost")) c.n_ghost_hotel_rings = f.rings_ghost;
  if (f.Given("--rings-ato")) c.n_ato_rings = f.rings_ato;
  if (f.Given("--fraud-rate")) c.fraud_rate_target = f.fraud_rate;
  for (const auto& r : f.drop_relation) c.relation_exclusions.insert(r);
  for (const auto& x : f.drop_feature) c.feature_exclusions.insert(x);
  if (f.Given("--calibration")) {
    c.calibration = f.calibration == "report" ? CalibrationMode::kReport
                                              : CalibrationMode::kEnforce;
  }
  if (f.widen) c.widen_size_bounds = true;
  auto range = [](const std::vector<int>& v) { return SizeRange{v[0], v[1]}; };
  if (f.Given("--ticketing-size")) c.ticketing_size = range(f.ticketing_size);
  if (f.Given("--ghost-reviewers")) c.ghost_reviewers = range(f.ghost_reviewers);
  if (f.Given("--ato-compromised")) c.ato_compromised = range(f.ato_compromised);
  return c;
}

struct SplitFlags {
  std::uint64_t seed = 0;
  bool seed_given = false;
  SplitFractions fractions;
};

void AddSplitFlags(CLI::App* app, SplitFlags& f) {
  app->add_option("--train", f.fractions.train, "train fraction")
      ->capture_default_str();
  app->add_option("--val", f.fractions.val, "validation fraction")
      ->capture_default_str();
  app->add_option("--test", f.fractions.test, "test fraction")
      ->capture_default_str();
}

struct TrainFlags {
  TrainOptions options;
};

void AddTrainFlags(CLI::App* app, TrainFlags& f) {
  app->add_option("--epochs", f.options.epochs, "gradient descent epochs")
      ->capture_default_str();
  app->add_option("--lr", f.options.learning_rate, "learning rate")
      ->capture_default_str();
  app->add_option("--l2", f.options.l2, "L2 penalty")->capture_default_str();
}

std::string SplitLine(const SplitAssignment& a,
                      const std::vector<RingRecord>& rings) {
  std::size_t test_rings[3] = {0, 0, 0};
  for (const RingRecord& ring : rings) {
    if (a.ring_partition[ring.ring_id] == Partition::kTest) {
      ++test_rings[static_cast<int>(ring.type) - 1];
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "split: train=%zu val=%zu test=%zu users; test rings "
                "ticketing=%zu ghost_hotel=%zu ato=%zu (total %zu)\n",
                a.Users(Partition::kTrain).size(),
                a.Users(Partition::kVal).size(),
                a.Users(Partition::kTest).size(), test_rings[0],
                test_rings[1], test_rings[2],
                test_rings[0] + test_rings[1] + test_rings[2]);
  return buf;
}

void PrintWarnings(const std::vector<std::string>& warnings,
                   std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

int CmdGenerate(const GenFlags& gf, SplitFlags sf, const std::string& out_dir,
                std::ostream& out, std::ostream& err) {
  const GeneratorConfig config = BuildConfig(gf);
  const GenerationResult gen = Generate(config);
  if (!gen.calibration.features.empty() && !gen.calibration.pass()) {
    err << "warning: calibration gate not met (max |d| = "
        << gen.calibration.MaxAbsD() << "); see analyze\n";
  }
  sf.fractions.Validate();
  const SplitAssignment split = Split(
      gen.graph, gen.rings, sf.fractions, sf.seed_given ? sf.seed : gen.config.seed);
  PrintWarnings(split.warnings, err);
  const ExportInfo info = ExportBundle(
      gen.graph, gen.rings, split, {config, gen.config, gen.shift_factor},
      out_dir);
  out << Summary(gen) << SplitLine(split, gen.rings) << "digest=" << info.digest
      << "\nbundle=" << out_dir << "\nconfig: " << ToJson(config).dump()
      << "\n";
  return kExitOk;
}

int CmdAnalyze(const std::string& bundle_dir, const std::string& csv_dir,
               std::ostream& out) {
  const Bundle b = LoadBundle(bundle_dir);
  const IsolationReport iso = ScanIsolation(b.graph);
  const LeakageReport leak = VerifyNoLeakage(b.graph, b.rings, b.assignment);
  out << "isolation: bridging_devices=" << iso.bridging_devices
      << " bridging_ips=" << iso.bridging_ips << (iso.ok() ? " ok" : " FAIL")
      << "\nleakage: leaking_devices=" << leak.leaking_devices
      << " leaking_ips=" << leak.leaking_ips
      << " spanning_rings=" << leak.spanning_rings
      << (leak.ok() ? " ok" : " FAIL") << "\n"
      << SplitLine(b.assignment, b.rings) << "\n";
  const MotifFingerprints motifs = ComputeMotifFingerprints(b.graph, b.rings);
  const HomophilyReport homophily = ComputeHomophily(b.graph);
  out << "\nmotif fingerprints:\n" << MotifText(motifs)
      << "\nhomophily:\n" << HomophilyText(homophily);
  std::optional<CalibrationReport> cal;
  if (!b.rings.empty()) {
    cal = ComputeCalibration(b.graph);
    out << "\ncalibration: max |d| = " << cal->MaxAbsD()
        << (cal->pass() ? " pass\n" : " FAIL\n") << CalibrationText(*cal);
  }
  if (!csv_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(csv_dir, ec);
    if (ec) throw IoError("cannot create " + csv_dir + ": " + ec.message());
    WriteText(csv_dir + "/motifs.csv", MotifCsv(motifs));
    WriteText(csv_dir + "/homophily.csv", HomophilyCsv(homophily));
    if (cal) WriteText(csv_dir + "/calibration.csv", CalibrationCsv(*cal));
  }
  return kExitOk;
}

int CmdSplit(const std::string& bundle_dir, std::string out_dir,
             SplitFlags sf, std::ostream& out, std::ostream& err) {
  Bundle b = LoadBundle(bundle_dir);
  sf.fractions.Validate();
  const SplitAssignment split =
      Split(b.graph, b.rings, sf.fractions,
            sf.seed_given ? sf.seed : b.context.config.seed);
  PrintWarnings(split.warnings, err);
  const LeakageReport leak = VerifyNoLeakage(b.graph, b.rings, split);
  if (!leak.ok()) throw ValidationError("split leaks ring infrastructure");
  if (out_dir.empty()) out_dir = bundle_dir;
  const ExportInfo info =
      ExportBundle(b.graph, b.rings, split, b.context, out_dir);
  out << SplitLine(split, b.rings) << "digest=" << info.digest
      << "\nbundle=" << out_dir << "\n";
  return kExitOk;
}

int CmdSweep(const GenFlags& gf, const SplitFlags& sf, const TrainFlags& tf,
             const std::string& out_path, std::ostream& out,
             std::ostream& err) {
  const GeneratorConfig base = BuildConfig(gf);
  sf.fractions.Validate();
  const SweepResult result = RunSweep(base, sf.fractions, tf.options);
  PrintWarnings(result.warnings, err);
  const std::string csv = SweepCsv(result);
  if (out_path.empty()) {
    out << csv;
  } else {
    WriteText(out_path, csv);
    out << "rows=" << result.rows.size() << " written to " << out_path
        << "\n";
  }
  return kExitOk;
}

int CmdAblate(const std::string& bundle_dir, const std::string& emit_dir,
              const TrainFlags& tf, std::ostream& out) {
  const Bundle b = LoadBundle(bundle_dir);
  const auto rows = RunAblation(b.graph, b.rings, b.assignment,
                                DefaultAblations(), tf.options);
  out << AblationCsv(rows);
  if (!emit_dir.empty()) {
    for (const AblationCondition& c : DefaultAblations()) {
      ExportContext ctx = b.context;
      for (const auto& r : c.relations) {
        ctx.request.relation_exclusions.insert(r);
        ctx.config.relation_exclusions.push_back(r);
      }
      for (const auto& x : c.features) {
        ctx.request.feature_exclusions.insert(x);
        ctx.config.feature_exclusions.push_back(x);
      }
      const auto path = std::filesystem::path(emit_dir) / c.name;
      ExportBundle(ApplyAblation(b.graph, c), b.rings, b.assignment, ctx, path);
    }
  }
  return kExitOk;
}

int CmdEvaluate(const std::string& bundle_dir, const std::string& score_path,
                bool csv, std::ostream& out) {
  const Bundle b = LoadBundle(bundle_dir);
  const auto scores =
      ReadScoreFile(score_path, b.graph.table(NodeType::kUser).size());
  const MetricsReport report = Evaluate(b.graph, b.rings, b.assignment, scores);
  out << (csv ? MetricsCsv(report) : MetricsText(report));
  return kExitOk;
}

int CmdBaseline(const std::string& bundle_dir, const std::string& model_name,
                const std::string& score_path, const TrainFlags& tf, bool csv,
                std::ostream& out) {
  const Bundle b = LoadBundle(bundle_dir);
  const LinearModel model =
      model_name == "tabular"
          ? TrainTabular(b.graph, b.assignment, tf.options)
          : TrainGraphAggregate(b.graph, b.assignment, tf.options);
  const std::vector<double> scores = PredictAll(model, b.graph);
  if (!score_path.empty()) {
    std::vector<NodeId> ids(scores.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i);
    WriteScoreFile(score_path, ids, scores);
  }
  const MetricsReport report = Evaluate(b.graph, b.rings, b.assignment, scores);
  out << (csv ? MetricsCsv(report) : MetricsText(report));
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Synthetic travel fraud graph generator and evaluation harness",
               "fraudgraph"};
  app.require_subcommand(1);

  GenFlags gen_flags;
  SplitFlags gen_split;
  std::string gen_out;
  auto* generate = app.add_subcommand(
      "generate", "generate a graph, split it and write an export bundle");
  AddGenerationFlags(generate, gen_flags, "medium");
  AddSplitFlags(generate, gen_split);
  generate->add_option("--split-seed", gen_split.seed,
                       "split seed (default: the generation seed)");
  generate->add_option("--out", gen_out, "bundle directory")->required();

  std::string analyze_bundle, analyze_csv;
  auto* analyze = app.add_subcommand(
      "analyze", "isolation, leakage, motif, homophily and calibration report");
  analyze->add_option("--bundle", analyze_bundle, "bundle directory")
      ->required();
  analyze->add_option("--csv-dir", analyze_csv,
                      "also write motifs.csv, homophily.csv, calibration.csv");

  std::string split_bundle, split_out;
  SplitFlags split_flags;
  auto* split = app.add_subcommand(
      "split", "re-split a bundle by ring and rewrite its split files");
  split->add_option("--bundle", split_bundle, "bundle directory")->required();
  split->add_option("--seed", split_flags.seed,
                    "split seed (default: the generation seed)");
  split->add_option("--out", split_out,
                    "write the re-split bundle here instead of in place");
  AddSplitFlags(split, split_flags);

  GenFlags sweep_flags;
  SplitFlags sweep_split;
  TrainFlags sweep_train;
  std::string sweep_out;
  auto* sweep = app.add_subcommand(
      "sweep",
      "ring-size difficulty sweep scored with the graph-aggregate baseline");
  AddGenerationFlags(sweep, sweep_flags, "small");
  AddSplitFlags(sweep, sweep_split);
  AddTrainFlags(sweep, sweep_train);
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");

  std::string ablate_bundle, ablate_emit;
  TrainFlags ablate_train;
  auto* ablate = app.add_subcommand(
      "ablate", "relation and feature ablations over both baselines");
  ablate->add_option("--bundle", ablate_bundle, "bundle directory")
      ->required();
  ablate->add_option("--emit-dir", ablate_emit,
                     "also export one bundle per ablation condition");
  AddTrainFlags(ablate, ablate_train);

  std::string eval_bundle, eval_scores, eval_format = "text";
  auto* evaluate = app.add_subcommand(
      "evaluate", "score an external prediction file against a bundle");
  evaluate->add_option("--bundle", eval_bundle, "bundle directory")
      ->required();
  evaluate->add_option("--scores", eval_scores,
                       "score file: user_id<TAB>score per line")
      ->required();
  evaluate->add_option("--format", eval_format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  std::string base_bundle, base_model = "graph", base_scores,
                           base_format = "text";
  TrainFlags base_train;
  auto* baseline = app.add_subcommand(
      "baseline", "train a native logistic baseline and evaluate it");
  baseline->add_option("--bundle", base_bundle, "bundle directory")
      ->required();
  baseline->add_option("--model", base_model, "tabular or graph")
      ->check(CLI::IsMember({"tabular", "graph"}))
      ->capture_default_str();
  baseline->add_option("--scores-out", base_scores,
                       "write every user's score to this file");
  baseline->add_option("--format", base_format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  AddTrainFlags(baseline, base_train);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*generate) {
      gen_split.seed_given = generate->count("--split-seed") > 0;
      return CmdGenerate(gen_flags, gen_split, gen_out, out, err);
    }
    if (*analyze) return CmdAnalyze(analyze_bundle, analyze_csv, out);
    if (*split) {
      split_flags.seed_given = split->count("--seed") > 0;
      return CmdSplit(split_bundle, split_out, split_flags, out, err);
    }
    if (*sweep) {
      return CmdSweep(sweep_flags, sweep_split, sweep_train, sweep_out, out,
                      err);
    }
    if (*ablate) return CmdAblate(ablate_bundle, ablate_emit, ablate_train, out);
    if (*evaluate) {
      return CmdEvaluate(eval_bundle, eval_scores, eval_format == "csv", out);
    }
    if (*baseline) {
      return CmdBaseline(base_bundle, base_model, base_scores, base_train,
                         base_format == "csv", out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitConfig;
}

}  // namespace fraudgraph
