// End-to-end experiment harness: configuration validation, exhaustive and
// sampled runs, deterministic per-trial seeding, JSONL round trips,
// empirical densities and moments, the comparison table, and the summary
// reports.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bertini/experiment.hpp"
#include "bertini/gf.hpp"
#include "bertini/mpoly.hpp"
#include "bertini/rng.hpp"

using namespace bertini;

namespace {

ExperimentConfig base_config(uint32_t p, uint32_t s, int n,
                             std::vector<int> degrees) {
  ExperimentConfig cfg;
  cfg.field = Field::create(p, s);
  cfg.n = n;
  cfg.degrees = std::move(degrees);
  cfg.threads = 1;
  return cfg;
}

const ComparisonRow& row(const RunSummary& s, const std::string& metric) {
  for (const auto& r : s.comparisons)
    if (r.metric == metric) return r;
  REQUIRE_MESSAGE(false, "missing comparison row " << metric);
  static ComparisonRow dummy;
  return dummy;
}

bool has_row(const RunSummary& s, const std::string& metric) {
  for (const auto& r : s.comparisons)
    if (r.metric == metric) return true;
  return false;
}

}  // namespace

TEST_CASE("verdict names") {
  CHECK(verdict_name(Verdict::Smooth) == "smooth");
  CHECK(verdict_name(Verdict::Singular) == "singular");
  CHECK(verdict_name(Verdict::Undecided) == "undecided");
  for (Verdict v : {Verdict::Smooth, Verdict::Singular, Verdict::Undecided})
    CHECK(verdict_from_name(verdict_name(v)) == v);
  CHECK_THROWS_AS(verdict_from_name("fuzzy"), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  auto run_throws = [](ExperimentConfig cfg) {
    CHECK_THROWS_AS(run_experiment(cfg), std::invalid_argument);
  };

  {
    ExperimentConfig cfg;  // no field
    cfg.degrees = {2};
    cfg.exhaustive = true;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {});  // no degrees
    cfg.exhaustive = true;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {0});  // degree < 1
    cfg.exhaustive = true;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {3, 2});  // descending
    cfg.exhaustive = true;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {1, 1, 1, 1});  // k > dim + 1
    cfg.exhaustive = true;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {2});  // no mode at all
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {2});  // two modes
    cfg.exhaustive = true;
    cfg.trials = 5;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {2});
    cfg.trials = 5;
    cfg.count_extensions = 17;
    run_throws(cfg);
    cfg.count_extensions = -1;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {2});
    cfg.trials = 5;
    cfg.oracle = OracleKind::Brute;
    cfg.brute_extension = 0;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {2});
    cfg.trials = 5;
    cfg.truncation = 0;
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {2});
    cfg.trials = 5;
    cfg.batch = 0;
    run_throws(cfg);
  }

  // Conditioning point validation.
  {
    auto cfg = base_config(2, 1, 2, {2});
    cfg.trials = 5;
    cfg.contain = {{0, 1}};  // wrong coordinate count
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {2});
    cfg.trials = 5;
    cfg.contain = {{0, 3, 1}};  // coordinate outside the field
    run_throws(cfg);
  }
  {
    auto cfg = base_config(3, 1, 2, {2});
    cfg.trials = 5;
    cfg.contain = {{0, 2, 1}};  // not normalized: scales to (0,1,2)
    run_throws(cfg);
  }
  {
    auto cfg = base_config(2, 1, 2, {2});
    cfg.trials = 5;
    cfg.contain = {{0, 0, 1}};
    cfg.avoid = {{0, 0, 1}};  // duplicate across the two lists
    run_throws(cfg);
  }
  {
    // Hypersurface ambient: conditioning points must lie on it.
    auto cfg = base_config(3, 1, 2, {1});
    cfg.hypersurface = parse_form(cfg.field, 3, "x0^2 + x1^2 + x2^2");
    cfg.trials = 5;
    cfg.contain = {{1, 0, 0}};  // not on the conic
    run_throws(cfg);
  }
  {
    // Hypersurface must live in the configured ambient space.
    auto cfg = base_config(3, 1, 3, {1});
    cfg.hypersurface = parse_form(cfg.field, 3, "x0^2 + x1^2 + x2^2");
    cfg.trials = 5;
    run_throws(cfg);
  }
  {
    // Exhaustive enumeration larger than the configured cap.
    auto cfg = base_config(2, 1, 2, {2});
    cfg.exhaustive = true;
    cfg.max_enumeration = 32;  // 64 quadrics
    run_throws(cfg);
  }
}

TEST_CASE("exhaustive linear systems on the projective plane") {
  auto cfg = base_config(2, 1, 2, {1});
  cfg.exhaustive = true;
  cfg.seed = 7;
  cfg.count_extensions = 2;
  cfg.contain = {{0, 0, 1}};
  cfg.avoid = {{1, 0, 0}};

  const RunResult res = run_experiment(cfg);
  const RunSummary& s = res.summary;

  // All 8 coefficient vectors, including the zero form.
  REQUIRE(res.records.size() == 8);
  CHECK(s.attempted == 8);
  CHECK(s.decided == 8);
  CHECK(s.undecided == 0);
  CHECK(s.smooth == 7);
  CHECK_FALSE(s.undecided_alarm);

  for (uint64_t i = 0; i < 8; ++i) {
    CHECK(res.records[i].trial == i);
    CHECK(res.records[i].seed == per_trial_seed(cfg.seed, i));
    CHECK(res.records[i].degrees == std::vector<int>{1});
    CHECK(res.records[i].ms == 0.0);
    CHECK(res.records[i].contains.size() == 1);
    CHECK(res.records[i].avoids.size() == 1);
  }
  // Trial 0 is the zero form: singular, and its zero locus is everything.
  CHECK(res.records[0].verdict == Verdict::Singular);
  CHECK(res.records[0].counts == std::vector<uint64_t>{7, 21});
  // Smooth sections are lines, i.e. copies of P^1.
  for (const auto& rec : res.records)
    if (rec.verdict == Verdict::Smooth)
      CHECK(rec.counts == std::vector<uint64_t>{3, 5});

  // Exact densities: 7 of 8 sections smooth; of the smooth ones, 3 pass
  // through (0:0:1) and 4 miss (1:0:0); 2 do both.
  REQUIRE(s.density.has_value());
  CHECK(s.density->numer == 7);
  CHECK(s.density->denom == 8);
  CHECK(s.density->estimate == Rational(7, 8));
  REQUIRE(s.conditioned_density.has_value());
  CHECK(s.conditioned_density->numer == 2);
  CHECK(s.conditioned_density->denom == 8);
  CHECK(s.contain_smooth == std::vector<uint64_t>{3});
  CHECK(s.avoid_smooth == std::vector<uint64_t>{4});

  // Every smooth section has exactly 3 rational points.
  CHECK(s.histogram == std::vector<uint64_t>{0, 0, 0, 7, 0, 0, 0, 0});
  REQUIRE(s.raw_moments.size() == 5);
  CHECK(s.raw_moments[1] == doctest::Approx(3.0));

  // Comparison table: the degree-1 density is far from the limiting value,
  // but the conditional rows match the model exactly.
  const std::vector<std::string> metrics = {
      "density",    "conditioned_density", "contains_0",    "avoids_0",
      "mean_count", "variance_count",      "std_moment_2",  "std_moment_3"};
  REQUIRE(s.comparisons.size() == metrics.size());
  for (size_t i = 0; i < metrics.size(); ++i)
    CHECK(s.comparisons[i].metric == metrics[i]);

  CHECK_FALSE(row(s, "density").pass);
  CHECK(row(s, "density").predicted == doctest::Approx(0.328137447995305));
  CHECK(row(s, "density").tail_bound == doctest::Approx(1.0 / 512));
  CHECK(row(s, "conditioned_density").pass);
  CHECK(row(s, "contains_0").pass);
  CHECK(row(s, "contains_0").z == 0.0);
  CHECK(row(s, "contains_0").empirical == doctest::Approx(3.0 / 7));
  CHECK(row(s, "contains_0").predicted == doctest::Approx(3.0 / 7));
  CHECK(row(s, "avoids_0").pass);
  CHECK(row(s, "avoids_0").z == 0.0);
  CHECK(row(s, "avoids_0").empirical == doctest::Approx(4.0 / 7));
  CHECK(row(s, "mean_count").pass);
  CHECK(row(s, "mean_count").z == 0.0);
  CHECK(row(s, "mean_count").empirical == doctest::Approx(3.0));
  CHECK(row(s, "mean_count").predicted == doctest::Approx(3.0));
  CHECK_FALSE(row(s, "variance_count").pass);  // zero sample variance
  CHECK(row(s, "variance_count").predicted == doctest::Approx(12.0 / 7));
  CHECK_FALSE(row(s, "std_moment_2").applicable);  // needs 30 smooth trials
  CHECK_FALSE(row(s, "std_moment_3").applicable);
  CHECK_FALSE(has_row(s, "chi_square_p"));  // needs 50 smooth trials

  // The prediction block carries the exact model quantities.
  REQUIRE(res.prediction.pi.has_value());
  CHECK(*res.prediction.pi == Rational(3, 7));
  REQUIRE(res.prediction.N.has_value());
  CHECK(*res.prediction.N == 7);
}

TEST_CASE("exhaustive quadrics with both oracles") {
  auto cfg = base_config(2, 1, 2, {2});
  cfg.exhaustive = true;
  cfg.seed = 11;
  cfg.oracle = OracleKind::Both;
  cfg.brute_extension = 2;

  const RunResult res = run_experiment(cfg);
  const RunSummary& s = res.summary;

  CHECK(s.attempted == 64);
  CHECK(s.decided == 64);
  CHECK(s.smooth == 28);
  CHECK(s.oracle_agree == 64);
  CHECK(s.oracle_disagree == 0);
  for (const auto& rec : res.records) {
    REQUIRE(rec.brute_verdict.has_value());
    CHECK(*rec.brute_verdict == rec.verdict);
    // The bulk brute sweep reports flags only, not witnesses.
    CHECK_FALSE(rec.witness.has_value());
  }

  // Every smooth conic over F_2 has exactly 3 rational points.
  CHECK(s.histogram == std::vector<uint64_t>{0, 0, 0, 28, 0, 0, 0, 0});
  REQUIRE(s.density.has_value());
  CHECK(s.density->estimate == Rational(7, 16));

  CHECK(row(s, "mean_count").pass);
  CHECK(row(s, "mean_count").z == 0.0);
  CHECK_FALSE(row(s, "variance_count").pass);
  CHECK_FALSE(row(s, "std_moment_2").applicable);  // 28 < 30
  CHECK_FALSE(has_row(s, "chi_square_p"));
  CHECK_FALSE(has_row(s, "conditioned_density"));
}

TEST_CASE("empty intersections when the section count exceeds the dimension") {
  auto cfg = base_config(2, 1, 1, {1, 1});
  cfg.exhaustive = true;
  const RunResult res = run_experiment(cfg);
  const RunSummary& s = res.summary;

  // 4 x 4 coefficient vectors; smooth means empty over the closure, which
  // happens exactly for the 6 ordered pairs of distinct nonzero forms.
  CHECK(s.attempted == 16);
  CHECK(s.smooth == 6);
  REQUIRE(s.density.has_value());
  CHECK(s.density->estimate == Rational(3, 8));
  CHECK(s.histogram == std::vector<uint64_t>{6});  // no rational points

  CHECK_FALSE(res.prediction.pi.has_value());
  CHECK_FALSE(res.prediction.N.has_value());
  REQUIRE(s.comparisons.size() == 1);
  CHECK(s.comparisons[0].metric == "density");
  CHECK(s.comparisons[0].pass);
}

TEST_CASE("sampled runs are deterministic across reruns and thread counts") {
  auto cfg = base_config(2, 1, 2, {2});
  cfg.trials = 40;
  cfg.seed = 123;
  cfg.oracle = OracleKind::Brute;
  cfg.brute_extension = 2;

  const RunResult a = run_experiment(cfg);
  const RunResult b = run_experiment(cfg);
  auto cfg4 = cfg;
  cfg4.threads = 4;
  const RunResult c = run_experiment(cfg4);

  const std::string ja = records_to_jsonl(a.records);
  CHECK(ja == records_to_jsonl(b.records));
  CHECK(ja == records_to_jsonl(c.records));
  CHECK(summary_to_json(a.summary, cfg, &a.prediction) ==
        summary_to_json(b.summary, cfg, &b.prediction));
  // The summary is also thread-count independent (the config echo differs
  // in nothing: thread count is not part of the report).
  CHECK(summary_to_json(a.summary, cfg, &a.prediction) ==
        summary_to_json(c.summary, cfg4, &c.prediction));

  CHECK(a.summary.attempted == 40);
  REQUIRE(a.summary.density.has_value());
  CHECK(a.summary.density->denom == a.summary.decided);
  for (uint64_t i = 0; i < a.records.size(); ++i)
    CHECK(a.records[i].seed == per_trial_seed(cfg.seed, i));
}

TEST_CASE("minimal-prefix stopping in min_smooth mode") {
  auto cfg = base_config(2, 1, 2, {2});
  cfg.min_smooth = 10;
  cfg.seed = 31;
  cfg.batch = 3;  // force several scheduling rounds
  cfg.oracle = OracleKind::Brute;
  cfg.brute_extension = 2;

  const RunResult res = run_experiment(cfg);
  uint64_t smooth = 0;
  for (const auto& rec : res.records)
    if (rec.verdict == Verdict::Smooth) ++smooth;
  CHECK(smooth == 10);
  REQUIRE(!res.records.empty());
  CHECK(res.records.back().verdict == Verdict::Smooth);
  CHECK(res.summary.attempted == res.records.size());
  CHECK(res.summary.smooth == 10);

  // Rerun reproduces the same prefix.
  const RunResult res2 = run_experiment(cfg);
  CHECK(records_to_jsonl(res.records) == records_to_jsonl(res2.records));

  // An unreachable target inside the trial cap is an error.
  auto capped = cfg;
  capped.min_smooth = 5;
  capped.max_enumeration = 6;
  capped.batch = 4;
  capped.seed = 3;
  CHECK_THROWS_AS(run_experiment(capped), std::runtime_error);
}

TEST_CASE("timing fields activate only on request") {
  auto cfg = base_config(2, 1, 2, {1});
  cfg.exhaustive = true;
  cfg.timings = true;
  const RunResult res = run_experiment(cfg);
  CHECK(res.summary.total_ms > 0);
  double ms_sum = 0;
  for (const auto& rec : res.records) ms_sum += rec.ms;
  CHECK(ms_sum > 0);
}

TEST_CASE("empirical density from records") {
  auto rec = [](Verdict v, std::vector<uint8_t> contains,
                std::vector<uint8_t> avoids) {
    TrialRecord r;
    r.verdict = v;
    r.contains = std::move(contains);
    r.avoids = std::move(avoids);
    return r;
  };
  const std::vector<TrialRecord> recs = {
      rec(Verdict::Smooth, {1}, {1}),
      rec(Verdict::Smooth, {0}, {1}),
      rec(Verdict::Smooth, {1}, {0}),
      rec(Verdict::Singular, {}, {}),
      rec(Verdict::Undecided, {}, {}),
  };
  const auto d = empirical_density(recs);
  CHECK(d.numer == 3);
  CHECK(d.denom == 4);
  CHECK(d.estimate == Rational(3, 4));
  CHECK(d.wilson95.lower < 0.75);
  CHECK(d.wilson95.upper > 0.75);
  CHECK(empirical_density(recs, true, false).numer == 2);
  CHECK(empirical_density(recs, false, true).numer == 2);
  CHECK(empirical_density(recs, true, true).numer == 1);
  CHECK(empirical_density(recs, true, true).denom == 4);

  const std::vector<TrialRecord> undecided = {
      rec(Verdict::Undecided, {}, {}),
  };
  CHECK_THROWS_AS(empirical_density(undecided), std::invalid_argument);
}

TEST_CASE("empirical moments of the count statistic") {
  auto rec = [](Verdict v, std::vector<uint64_t> counts) {
    TrialRecord r;
    r.verdict = v;
    r.counts = std::move(counts);
    return r;
  };

  std::vector<TrialRecord> recs;
  for (int i = 0; i < 40; ++i) recs.push_back(rec(Verdict::Smooth, {3}));
  for (int i = 0; i < 5; ++i) recs.push_back(rec(Verdict::Singular, {5}));
  recs.push_back(rec(Verdict::Smooth, {}));  // no counts: skipped

  const auto m = empirical_moments(recs, 4, 7, Rational(3, 7), 2);
  CHECK(m.smooth == 40);
  CHECK(m.raw[0] == 1.0);
  CHECK(m.raw[1] == doctest::Approx(3.0));
  CHECK(m.raw[2] == doctest::Approx(9.0));
  // Counts sit exactly at the model mean 7 * 3/7 = 3.
  CHECK(m.standardized[1] == doctest::Approx(0.0));
  CHECK(m.standardized[2] == doctest::Approx(0.0));
  // Alternative normalization by sqrt(N q^k) = sqrt(14).
  CHECK(m.sqrt_scaled[2] == doctest::Approx(9.0 / 14));

  std::vector<TrialRecord> few(recs.begin(), recs.begin() + 29);
  CHECK_THROWS_AS(empirical_moments(few, 4, 7, Rational(3, 7), 2),
                  std::invalid_argument);
}

TEST_CASE("empirical moments of a synthetic binomial sample") {
  // Counts drawn from Binomial(15, 7/39), the model for two cubic sections
  // in P^3 over F_2.
  Rng rng(20260815);
  std::vector<TrialRecord> recs;
  for (int i = 0; i < 2000; ++i) {
    TrialRecord r;
    r.verdict = Verdict::Smooth;
    uint64_t c = 0;
    for (int b = 0; b < 15; ++b)
      if (rng.below(39) < 7) ++c;
    r.counts = {c};
    recs.push_back(std::move(r));
  }
  const auto m = empirical_moments(recs, 4, 15, Rational(7, 39), 4);
  CHECK(m.smooth == 2000);
  CHECK(m.raw[1] == doctest::Approx(35.0 / 13).epsilon(0.06));
  CHECK(std::fabs(m.standardized[1]) < 0.1);
  CHECK(m.standardized[2] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(m.standardized[3] == doctest::Approx(0.43129).epsilon(0.9));
  CHECK(m.standardized[4] == doctest::Approx(3.05269).epsilon(0.35));
  // The alternative normalization is the raw moment rescaled by
  // sqrt(N q^k)^j = 60^{j/2}.
  for (int j = 1; j <= 4; ++j)
    CHECK(m.sqrt_scaled[j] ==
          doctest::Approx(m.raw[j] / std::pow(60.0, j / 2.0)).epsilon(1e-9));
}

TEST_CASE("record JSONL round trip") {
  auto cfg = base_config(2, 1, 2, {2});
  cfg.trials = 60;
  cfg.seed = 5;
  cfg.oracle = OracleKind::Both;
  cfg.brute_extension = 2;
  cfg.count_extensions = 2;
  cfg.contain = {{0, 0, 1}};
  cfg.avoid = {{1, 0, 0}};

  const RunResult res = run_experiment(cfg);
  CHECK(res.summary.oracle_disagree == 0);
  bool has_witness = false, has_singular = false;
  for (const auto& rec : res.records) {
    if (rec.witness) has_witness = true;
    if (rec.verdict == Verdict::Singular) has_singular = true;
  }
  CHECK(has_singular);
  CHECK(has_witness);

  const std::string jsonl = records_to_jsonl(res.records);
  const auto parsed = parse_jsonl(jsonl);
  REQUIRE(parsed.size() == res.records.size());
  CHECK(records_to_jsonl(parsed) == jsonl);
  for (size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].trial == res.records[i].trial);
    CHECK(parsed[i].seed == res.records[i].seed);
    CHECK(parsed[i].verdict == res.records[i].verdict);
    CHECK(parsed[i].counts == res.records[i].counts);
  }

  CHECK_THROWS_WITH_AS(parse_jsonl("{oops\n"),
                       doctest::Contains("line 1"), std::invalid_argument);
  const std::string good = record_to_json(res.records[0]);
  CHECK_THROWS_WITH_AS(parse_jsonl(good + "\nnot json\n"),
                       doctest::Contains("line 2"), std::invalid_argument);
}

TEST_CASE("summary serialization") {
  auto cfg = base_config(2, 1, 2, {1});
  cfg.exhaustive = true;
  cfg.seed = 7;
  cfg.contain = {{0, 0, 1}};
  cfg.avoid = {{1, 0, 0}};

  const RunResult res = run_experiment(cfg);
  const std::string text = summary_to_json(res.summary, cfg, &res.prediction);
  const auto j = nlohmann::json::parse(text);

  CHECK(j["config"]["field"] == "2");
  CHECK(j["config"]["n"] == 2);
  CHECK(j["config"]["degrees"] == nlohmann::json::array({1}));
  CHECK(j["config"]["mode"] == "exhaustive");
  CHECK(j["config"]["oracle"] == "gb");
  CHECK(j["config"]["seed"] == "0x0000000000000007");
  CHECK_FALSE(j["config"].contains("threads"));
  CHECK_FALSE(j["config"].contains("brute_extension"));
  CHECK(j["config"]["contain"] == nlohmann::json::array({"(0:0:1)"}));
  CHECK(j["config"]["avoid"] == nlohmann::json::array({"(1:0:0)"}));

  CHECK(j["prediction"]["pi"]["rational"] == "3/7");
  CHECK(j["summary"]["attempted"] == 8);
  CHECK(j["summary"]["density"]["numer"] == 7);
  CHECK(j["summary"]["density"]["denom"] == 8);
  CHECK(j["summary"]["density"]["estimate"]["rational"] == "7/8");
  CHECK(j["summary"]["conditioned_density"]["numer"] == 2);
  CHECK(j["summary"]["undecided_alarm"] == false);
  CHECK_FALSE(j["summary"].contains("total_ms"));
  REQUIRE(j["summary"]["comparisons"].is_array());
  CHECK(j["summary"]["comparisons"][0]["metric"] == "density");

  const std::string csv = summary_to_csv(res.summary);
  CHECK(csv.rfind("metric,empirical,predicted,tail_bound,z,pass\n", 0) == 0);
  CHECK(csv.find("\nstd_moment_2,0,1,0,0,na\n") != std::string::npos);
  CHECK(csv.find("contains_0,") != std::string::npos);
}

TEST_CASE("budget exhaustion leaves trials undecided and raises the alarm") {
  auto cfg = base_config(2, 1, 2, {3});
  cfg.trials = 50;
  cfg.seed = 97;
  cfg.gb_budget = 1;

  const RunResult res = run_experiment(cfg);
  const RunSummary& s = res.summary;
  CHECK(s.attempted == 50);
  // A single-pair budget leaves most trials undecided, but some are still
  // decided without any pair reductions: a rational singular point refutes
  // smoothness, and charts whose generators already contain a unit are
  // certified trivial outright.
  CHECK(s.undecided > 0);
  CHECK(s.decided > 0);
  CHECK(s.decided + s.undecided == 50);
  CHECK(s.undecided_alarm);
  REQUIRE(!s.notes.empty());
  CHECK(s.notes[0].find("undecided fraction exceeds") != std::string::npos);
  REQUIRE(s.density.has_value());
  CHECK(s.density->numer == s.smooth);
  CHECK(s.density->denom == s.decided);
  CHECK(empirical_density(res.records).numer == s.smooth);
  CHECK(empirical_density(res.records).denom == s.decided);

  const auto j = nlohmann::json::parse(
      summary_to_json(s, cfg, &res.prediction));
  CHECK(j["summary"]["undecided_alarm"] == true);
  CHECK(j["summary"].contains("density"));
  const std::string csv = summary_to_csv(s);
  CHECK(csv.find("\ndensity,") != std::string::npos);
  CHECK(csv.find(",na\n") != std::string::npos);

  // The default budget decides every one of these trials.
  auto easy = cfg;
  easy.gb_budget = 200000;
  const RunResult full = run_experiment(easy);
  CHECK(full.summary.undecided == 0);
  CHECK(full.summary.decided == 50);
  CHECK_FALSE(full.summary.undecided_alarm);
}

TEST_CASE("hypersurface ambient variety") {
  auto cfg = base_config(3, 1, 2, {1});
  cfg.hypersurface = parse_form(cfg.field, 3, "x0^2 + x1^2 + x2^2");
  cfg.exhaustive = true;
  cfg.contain = {{1, 1, 1}};  // 1 + 1 + 1 = 0 over F_3, so it lies on the conic
  // Closed points of the conic are found by enumerating P^2 over F_{3^e};
  // keep the truncation order low enough for that to stay feasible.
  cfg.truncation = 6;

  const RunResult res = run_experiment(cfg);
  const RunSummary& s = res.summary;
  CHECK(s.attempted == 27);  // all linear forms over F_3
  CHECK(s.decided == 27);
  REQUIRE(res.prediction.N.has_value());
  CHECK(*res.prediction.N == 4);
  CHECK(res.prediction.degX == 2);
  CHECK(res.prediction.m == 1);
  REQUIRE(s.density.has_value());
  CHECK(s.density->denom == 27);
  CHECK(s.histogram.size() == 5);  // counts range over 0..4
  CHECK(has_row(s, "contains_0"));
}

TEST_CASE("comparison table validates a faithful model and flags corruption") {
  FieldPtr f2 = Field::create(2, 1);
  const Variety p3 = Variety::projective_space(f2, 3);
  const PredictionReport pred = make_prediction(p3, 2, 12);
  const double density = pred.truncated_density.to_double();

  // Synthesize records straight from the predicted model: smoothness is
  // Bernoulli(density), counts are Binomial(15, pi_num/pi_den).
  auto synth = [&](uint64_t seed, uint64_t trials, double smooth_p,
                   uint32_t pi_num, uint32_t pi_den) {
    std::vector<TrialRecord> recs;
    Rng rng(seed);
    for (uint64_t i = 0; i < trials; ++i) {
      TrialRecord r;
      r.trial = i;
      r.seed = per_trial_seed(seed, i);
      r.degrees = {3, 3};
      r.verdict = rng.unit() < smooth_p ? Verdict::Smooth : Verdict::Singular;
      uint64_t c = 0;
      for (int b = 0; b < 15; ++b)
        if (rng.below(pi_den) < pi_num) ++c;
      r.counts = {c};
      recs.push_back(std::move(r));
    }
    return recs;
  };
  auto summarize_with = [&](uint64_t seed,
                            const std::vector<TrialRecord>& recs) {
    auto cfg = base_config(2, 1, 3, {3, 3});
    cfg.trials = recs.size();
    cfg.seed = seed;
    return summarize(cfg, recs, &pred);
  };

  // Faithful model, many seeds: every applicable row passes in at least
  // 95 of 100 runs (each row is a 3-sigma or 1% test).
  int all_pass = 0;
  for (uint64_t i = 0; i < 100; ++i) {
    const uint64_t seed = 50000 + i;
    const auto s = summarize_with(seed, synth(seed, 1500, density, 7, 39));
    bool ok = true;
    for (const auto& r : s.comparisons)
      if (r.applicable && !r.pass) ok = false;
    all_pass += ok ? 1 : 0;
    if (i == 0) {
      CHECK(has_row(s, "density"));
      CHECK(has_row(s, "mean_count"));
      CHECK(has_row(s, "variance_count"));
      CHECK(has_row(s, "std_moment_2"));
      CHECK(has_row(s, "std_moment_3"));
      CHECK(has_row(s, "chi_square_p"));
    }
  }
  CHECK(all_pass >= 95);

  // A corrupted success probability must trip the mean row.
  {
    const auto s =
        summarize_with(424242, synth(424242, 4000, density, 35, 156));
    CHECK_FALSE(row(s, "mean_count").pass);
    CHECK(std::fabs(row(s, "mean_count").z) > 3);
  }
  // A corrupted smoothness rate must trip the density row.
  {
    const auto s =
        summarize_with(424243, synth(424243, 4000, density * 0.85, 7, 39));
    CHECK_FALSE(row(s, "density").pass);
  }
}

TEST_CASE("sampled estimates cover the exhaustive density") {
  // Exhaustive truth for quadrics on the projective plane over F_2:
  // 28 of 64 are smooth.
  const double truth = 28.0 / 64;
  auto cfg = base_config(2, 1, 2, {2});
  cfg.trials = 4000;
  cfg.oracle = OracleKind::Brute;
  cfg.brute_extension = 2;
  cfg.count_extensions = 0;

  int covered = 0;
  for (int i = 0; i < 100; ++i) {
    cfg.seed = 1000 + i;
    const RunResult res = run_experiment(cfg);
    REQUIRE(res.summary.density.has_value());
    const auto& w = res.summary.density->wilson95;
    if (w.lower <= truth && truth <= w.upper) ++covered;
  }
  CHECK(covered >= 95);
}
