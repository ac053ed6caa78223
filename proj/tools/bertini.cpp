// Command-line front end: predictions, experiments, summary recomputation,
// and a quick self-check suite.
#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bertini/experiment.hpp"
#include "bertini/groebner.hpp"
#include "bertini/predict.hpp"
#include "bertini/smoothness.hpp"

using namespace bertini;

namespace {

uint64_t default_budget() {
  if (const char* env = std::getenv("BERTINI_BUDGET")) {
    try {
      const unsigned long long v = std::stoull(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
      // fall through to the built-in default
    }
  }
  return 200000;
}

std::vector<uint32_t> parse_point(const Field& field, const std::string& text) {
  std::vector<uint32_t> coords;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ':')) coords.push_back(field.parse_element(item));
  return coords;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonOpts {
  std::string field = "2";
  int n = 2;
  std::string hypersurface;
  std::vector<int> degrees;
  int truncation = 12;
  uint64_t gb_budget = default_budget();
};

void add_common(CLI::App* cmd, CommonOpts& o, bool degrees_required) {
  cmd->add_option("--field,-q", o.field, "Base field size, e.g. 2, 3, 2^2");
  cmd->add_option("--n", o.n, "Ambient projective dimension")->check(CLI::Range(1, 7));
  cmd->add_option("--hypersurface", o.hypersurface,
                  "Smooth form cutting the ambient variety, e.g. x0^2+x1*x2");
  auto* d = cmd->add_option("--degrees,-d", o.degrees,
                            "Section degrees, ascending (comma separated)")
                ->delimiter(',');
  if (degrees_required) d->required();
  cmd->add_option("--truncation,-r", o.truncation,
                  "Degrees e < r kept in the truncated density product")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gb-budget", o.gb_budget,
                  "S-polynomial reduction budget (default from BERTINI_BUDGET)");
}

Variety build_variety(const CommonOpts& o, FieldPtr& field_out) {
  FieldPtr field = Field::parse(o.field);
  field_out = field;
  if (!o.hypersurface.empty()) {
    const Form g = parse_form(field, o.n + 1, o.hypersurface);
    return Variety::hypersurface(g, o.gb_budget);
  }
  return Variety::projective_space(field, o.n);
}

int cmd_predict(const CommonOpts& o, int conditioning, const std::string& out) {
  FieldPtr field;
  const Variety X = build_variety(o, field);
  const int k = o.degrees.empty() ? 1 : int(o.degrees.size());
  const PredictionReport rep =
      make_prediction(X, k, o.truncation, o.degrees, conditioning);
  write_output(out, prediction_to_json(rep) + "\n");
  return 0;
}

struct RunOpts {
  CommonOpts common;
  bool exhaustive = false;
  uint64_t trials = 0;
  uint64_t min_smooth = 0;
  uint64_t seed = 0;
  std::vector<std::string> contain, avoid;
  int count_extensions = 1;
  std::string oracle = "gb";
  int brute_extension = 1;
  int threads = 0;
  bool timings = false;
  std::string records_path, summary_path, csv_path;
};

ExperimentConfig make_config(const RunOpts& r) {
  ExperimentConfig cfg;
  cfg.field = Field::parse(r.common.field);
  cfg.n = r.common.n;
  if (!r.common.hypersurface.empty())
    cfg.hypersurface = parse_form(cfg.field, cfg.n + 1, r.common.hypersurface);
  cfg.degrees = r.common.degrees;
  cfg.exhaustive = r.exhaustive;
  cfg.trials = r.trials;
  cfg.min_smooth = r.min_smooth;
  cfg.seed = r.seed;
  for (const std::string& s : r.contain)
    cfg.contain.push_back(parse_point(*cfg.field, s));
  for (const std::string& s : r.avoid)
    cfg.avoid.push_back(parse_point(*cfg.field, s));
  cfg.count_extensions = r.count_extensions;
  if (r.oracle == "gb") cfg.oracle = OracleKind::Groebner;
  else if (r.oracle == "brute") cfg.oracle = OracleKind::Brute;
  else if (r.oracle == "both") cfg.oracle = OracleKind::Both;
  else throw std::invalid_argument("oracle must be gb, brute or both");
  cfg.brute_extension = r.brute_extension;
  cfg.threads = r.threads;
  cfg.gb_budget = r.common.gb_budget;
  cfg.timings = r.timings;
  cfg.truncation = r.common.truncation;
  return cfg;
}

int cmd_run(const RunOpts& r) {
  const ExperimentConfig cfg = make_config(r);
  const RunResult res = run_experiment(cfg);
  if (!r.records_path.empty())
    write_output(r.records_path, records_to_jsonl(res.records));
  const std::string summary = summary_to_json(res.summary, cfg, &res.prediction);
  write_output(r.summary_path, summary);
  if (!r.csv_path.empty()) write_output(r.csv_path, summary_to_csv(res.summary));
  // Comparison failures are data, not errors: always exit 0 here.
  return 0;
}

int cmd_stats(const RunOpts& r, const std::string& records_path,
              const std::string& emit_records) {
  const ExperimentConfig cfg = make_config(r);
  const std::vector<TrialRecord> recs = parse_jsonl(read_file(records_path));
  if (!emit_records.empty()) write_output(emit_records, records_to_jsonl(recs));
  Variety X = make_variety(cfg);
  const PredictionReport pred =
      make_prediction(X, int(cfg.degrees.size()), cfg.truncation, cfg.degrees,
                      int(cfg.contain.size() + cfg.avoid.size()));
  const RunSummary s = summarize(cfg, recs, &pred);
  write_output(r.summary_path, summary_to_json(s, cfg, &pred));
  if (!r.csv_path.empty()) write_output(r.csv_path, summary_to_csv(s));
  return 0;
}

// ---- verify: curated cross-checks, each cheap enough for a smoke run ----

int g_checks = 0, g_failures = 0;

void check(const std::string& name, bool ok, const std::string& detail = "") {
  ++g_checks;
  if (ok) {
    std::cout << "ok " << name << "\n";
  } else {
    ++g_failures;
    std::cout << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << "\n";
  }
}

int cmd_verify() {
  // Field arithmetic closes over inverses in F_9.
  {
    FieldPtr f9 = Field::create(3, 2);
    bool ok = true;
    for (uint32_t a = 1; a < 9 && ok; ++a)
      ok = f9->mul(a, f9->inv(a)) == f9->from_int(1);
    check("field_inverses_f9", ok);
  }
  // Frobenius fixes exactly the prime field in F_8.
  {
    FieldPtr f8 = Field::create(2, 3);
    int fixed = 0;
    for (uint32_t a = 0; a < 8; ++a)
      if (f8->frobenius(a) == a) ++fixed;
    check("frobenius_fixed_field_f8", fixed == 2);
  }
  // Buchberger solves a zero-dimensional system to a unit-free basis.
  {
    FieldPtr f5 = Field::create(5, 1);
    const Polynomial a = parse_polynomial(f5, 2, "x0^2+x1^2+4");
    const Polynomial b = parse_polynomial(f5, 2, "x0*x1+2");
    const auto res = buchberger({a, b}, {});
    bool closed = true;
    for (size_t i = 0; i < res.basis.size() && closed; ++i)
      for (size_t j = i + 1; j < res.basis.size() && closed; ++j)
        closed = reduce(s_polynomial(res.basis[i], res.basis[j]), res.basis)
                     .is_zero();
    check("groebner_self_reduction", closed && !res.unit);
  }
  // The two smoothness oracles agree on every plane conic over F_3.
  {
    FieldPtr f3 = Field::create(3, 1);
    const Variety P2 = Variety::projective_space(f3, 2);
    FormEnumeration en(f3, 3, 2);
    bool agree = true;
    uint64_t smooth = 0;
    for (uint64_t i = 1; i < en.count(); ++i) {
      const FormTuple t({en.at(i)});
      const bool gb = is_smooth_gb(t, P2).smooth;
      const bool br = is_smooth_brute(t, P2, 2).smooth;
      agree = agree && gb == br;
      if (gb) ++smooth;
    }
    check("oracle_agreement_conics_f3", agree && smooth > 0,
          "smooth=" + std::to_string(smooth));
  }
  // Degree-1 sections of P^2 over F_2: every nonzero linear form is smooth,
  // so the density is (q^3-1)/q^3 among all forms.
  {
    FieldPtr f2 = Field::create(2, 1);
    ExperimentConfig cfg;
    cfg.field = f2;
    cfg.n = 2;
    cfg.degrees = {1};
    cfg.exhaustive = true;
    cfg.oracle = OracleKind::Both;
    cfg.brute_extension = 1;
    cfg.threads = 1;
    const RunResult res = run_experiment(cfg);
    const bool ok = res.summary.smooth == 7 && res.summary.attempted == 8 &&
                    res.summary.oracle_disagree == 0;
    check("linear_sections_p2_f2", ok,
          "smooth=" + std::to_string(res.summary.smooth));
  }
  // Truncated density times local corrections matches the zeta limit:
  // for plane curves the r -> oo density is zeta_{P^2}(3)^{-1} = 21/64 at q=2.
  {
    const Rational inv_zeta = 1 / zeta_projective(2, 2, 3);
    check("zeta_p2_value", inv_zeta == Rational(21, 64), rat_string(inv_zeta));
    const Variety P2 = Variety::projective_space(Field::create(2, 1), 2);
    const TruncatedDensity d24 = truncated_density(P2, 1, 24);
    const double gap = d24.to_double() - rat_double(inv_zeta);
    check("density_converges_to_zeta", gap < 1e-6 && gap > -1e-6);
  }
  // Binomial model: pmf sums to one and matches the closed-form moments.
  {
    const Rational pi(7, 39);
    Rational total = 0;
    for (int j = 0; j <= 15; ++j) total += binomial_pmf(15, pi, j);
    check("binomial_pmf_total", total == 1);
    const auto raw = binomial_raw_moments(15, pi, 2);
    check("binomial_mean", raw[1] == Rational(35, 13), rat_string(raw[1]));
  }
  // JSONL round trip is byte-identical.
  {
    FieldPtr f2 = Field::create(2, 1);
    ExperimentConfig cfg;
    cfg.field = f2;
    cfg.n = 2;
    cfg.degrees = {2};
    cfg.trials = 6;
    cfg.seed = 42;
    cfg.oracle = OracleKind::Both;
    cfg.brute_extension = 2;
    cfg.threads = 1;
    const RunResult res = run_experiment(cfg);
    const std::string text = records_to_jsonl(res.records);
    check("jsonl_round_trip", records_to_jsonl(parse_jsonl(text)) == text);
  }
  std::cout << (g_failures == 0 ? "verify: all " : "verify: FAILED ")
            << g_checks << " checks" << (g_failures ? ", " : " passed")
            << (g_failures ? std::to_string(g_failures) + " failures" : "")
            << "\n";
  return g_failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Densities of smooth complete intersections over finite fields"};
  app.require_subcommand(1);

  CommonOpts pre;
  int conditioning = 0;
  std::string predict_out = "-";
  CLI::App* predict = app.add_subcommand("predict", "Print the model report");
  add_common(predict, pre, true);
  predict->add_option("--conditioning", conditioning,
                      "Number of conditioned points (for the error bound)");
  predict->add_option("--out", predict_out, "Output path (default stdout)");

  RunOpts run;
  CLI::App* runc = app.add_subcommand("run", "Run an experiment");
  add_common(runc, run.common, true);
  runc->add_flag("--exhaustive", run.exhaustive, "Enumerate every form tuple");
  runc->add_option("--trials", run.trials, "Fixed number of sampled trials");
  runc->add_option("--min-smooth", run.min_smooth,
                   "Sample until this many smooth tuples are seen");
  runc->add_option("--seed", run.seed, "Master seed");
  runc->add_option("--contain", run.contain,
                   "Point the sections must contain, coords 'c0:c1:...'");
  runc->add_option("--avoid", run.avoid, "Point the sections must miss");
  runc->add_option("--count-extensions", run.count_extensions,
                   "Record point counts over degrees 1..E")
      ->check(CLI::Range(0, 16));
  runc->add_option("--oracle", run.oracle, "gb, brute or both");
  runc->add_option("--brute-extension", run.brute_extension,
                   "Extension degree bound for the brute oracle");
  runc->add_option("--threads", run.threads, "Worker threads (0 = hardware)");
  runc->add_flag("--timings", run.timings, "Record wall-clock timings");
  runc->add_option("--records", run.records_path, "Write trial records (JSONL)");
  runc->add_option("--summary", run.summary_path,
                   "Summary path (default stdout)");
  runc->add_option("--csv", run.csv_path, "Write the comparison table (CSV)");

  RunOpts st;
  std::string stats_records, emit_records;
  CLI::App* stats = app.add_subcommand(
      "stats", "Recompute a summary from recorded trials");
  add_common(stats, st.common, true);
  stats->add_option("--records", stats_records, "Trial records (JSONL)")
      ->required();
  stats->add_option("--emit-records", emit_records,
                    "Re-serialize the parsed records to this path");
  stats->add_option("--contain", st.contain, "Conditioned point 'c0:c1:...'");
  stats->add_option("--avoid", st.avoid, "Avoided point 'c0:c1:...'");
  stats->add_option("--summary", st.summary_path, "Summary path (default stdout)");
  stats->add_option("--csv", st.csv_path, "Write the comparison table (CSV)");
  stats->add_option("--seed", st.seed, "Master seed recorded in the summary");

  CLI::App* verify = app.add_subcommand("verify", "Run the self-check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (predict->parsed()) return cmd_predict(pre, conditioning, predict_out);
    if (runc->parsed()) return cmd_run(run);
    if (stats->parsed()) {
      // stats needs a mode for config validation; records define the trials.
      if (!st.exhaustive && st.trials == 0 && st.min_smooth == 0) st.trials = 1;
      return cmd_stats(st, stats_records, emit_records);
    }
    if (verify->parsed()) return cmd_verify();
  } catch (const std::invalid_argument& e) {
    // Invalid flag values (bad field, descending degrees, off-variety
    // points, ...) exit 2 like syntactic flag errors.
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
