// Reproducible smoothness experiments: exhaustive sweeps or seeded Monte
// Carlo over tuples of forms, with per-trial smoothness verdicts,
// conditioning outcomes, point-count statistics and comparisons against the
// exact predictions.
//
// Determinism contract: trial i is driven entirely by
// per_trial_seed(master_seed, i), workers write records into slots indexed
// by trial, and all aggregation runs single-threaded in trial order, so the
// JSONL output and summary are byte-identical for any worker thread count.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bertini/predict.hpp"
#include "bertini/smoothness.hpp"
#include "bertini/stats.hpp"

namespace bertini {

enum class OracleKind { Groebner, Brute, Both };
enum class Verdict { Smooth, Singular, Undecided };

std::string verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& s);

struct ExperimentConfig {
  FieldPtr field;
  int n = 2;                         // ambient P^n
  std::optional<Form> hypersurface;  // ambient variety is V(g) when set
  std::vector<int> degrees;          // d_1 <= ... <= d_k, k >= 1

  bool exhaustive = false;
  uint64_t trials = 0;      // sampled mode with a fixed trial count
  uint64_t min_smooth = 0;  // sampled mode: minimal prefix with this many smooth
  uint64_t seed = 0;

  // Rational points of X to test containment / avoidance against,
  // normalized coordinates over the base field.
  std::vector<std::vector<uint32_t>> contain, avoid;

  int count_extensions = 1;  // record N'_e for e = 1..this
  OracleKind oracle = OracleKind::Groebner;
  int brute_extension = 1;  // E for the brute oracle
  int threads = 0;          // 0 = hardware concurrency
  uint64_t gb_budget = 200000;
  bool timings = false;     // when false, "ms" fields are written as 0
  int truncation = 12;      // r for the density prediction
  uint64_t batch = 1024;    // scheduling granule in min_smooth mode
  uint64_t max_enumeration = uint64_t{1} << 22;
};

struct WitnessData {
  int extension = 1;                // residue degree of the singular point
  std::vector<std::string> coords;  // element syntax of the witness field
};

struct TrialRecord {
  uint64_t trial = 0;
  uint64_t seed = 0;
  std::vector<int> degrees;
  Verdict verdict = Verdict::Undecided;  // Groebner verdict when oracle=both
  std::optional<Verdict> brute_verdict;  // present when oracle=both
  std::optional<WitnessData> witness;
  std::vector<uint8_t> contains, avoids;  // per configured point; decided only
  std::vector<uint64_t> counts;           // counts[e-1] = N'_e; decided only
  double ms = 0;
};

struct ComparisonRow {
  std::string metric;
  double empirical = 0, predicted = 0, tail_bound = 0, z = 0;
  bool pass = false;
  bool applicable = true;
};

struct DensityEstimate {
  uint64_t numer = 0, denom = 0;
  Rational estimate;
  WilsonInterval wilson95;
};

struct RunSummary {
  uint64_t attempted = 0, decided = 0, undecided = 0, smooth = 0;
  std::optional<DensityEstimate> density;              // smooth / decided
  std::optional<DensityEstimate> conditioned_density;  // with all conditions
  std::vector<uint64_t> contain_smooth;  // per point: smooth trials containing it
  std::vector<uint64_t> avoid_smooth;    // per point: smooth trials avoiding it
  std::vector<uint64_t> histogram;       // of N'_1 over smooth trials
  std::vector<double> raw_moments;          // E[N'_1^j], j = 0..4, smooth trials
  std::vector<double> standardized_moments; // model-standardized, j = 0..4
  std::vector<double> sqrt_scaled_moments;  // N'_1 / sqrt(N q^k) powers
  uint64_t oracle_agree = 0, oracle_disagree = 0;
  std::vector<ComparisonRow> comparisons;
  std::vector<std::string> notes;
  bool undecided_alarm = false;
  double total_ms = 0;
};

struct RunResult {
  std::vector<TrialRecord> records;
  RunSummary summary;
  PredictionReport prediction;
};

// Validates the configuration and builds the ambient variety.
Variety make_variety(const ExperimentConfig& cfg);

// Runs the experiment. Exhaustive mode visits every tuple exactly once
// (tuple index in mixed radix over the per-degree enumerations, first form
// fastest); sampled mode draws coefficients per trial from
// Rng(per_trial_seed(seed, trial)), form by ascending degree, coefficients
// in grevlex-descending monomial order.
RunResult run_experiment(const ExperimentConfig& cfg);

// One record per line; stable field order and formatting, byte-reproducible.
std::string record_to_json(const TrialRecord& rec);
std::string records_to_jsonl(const std::vector<TrialRecord>& recs);
std::vector<TrialRecord> parse_jsonl(const std::string& text);

// smooth-and-conditions-satisfied / decided with a Wilson 95% interval.
// Throws std::invalid_argument when no trial is decided.
DensityEstimate empirical_density(const std::vector<TrialRecord>& recs,
                                  bool require_contains_all = false,
                                  bool require_avoids_all = false);

struct EmpiricalMoments {
  uint64_t smooth = 0;
  std::vector<double> raw;                    // j = 0..rmax
  std::vector<double> standardized;           // model-standardized
  std::vector<double> sqrt_scaled;
};

// Moments of N'_1 over smooth trials. Standardization uses the model mean
// N*pi and variance N*pi*(1-pi) (not sample moments); the alternative
// normalization divides N'_1 by sqrt(N * qk) where qk = q^k. Throws when
// fewer than 30 smooth trials carry counts.
EmpiricalMoments empirical_moments(const std::vector<TrialRecord>& recs,
                                   int rmax, const BigInt& N, const Rational& pi,
                                   const BigInt& qk);

// Summary (and comparison table when a prediction is supplied).
RunSummary summarize(const ExperimentConfig& cfg,
                     const std::vector<TrialRecord>& recs,
                     const PredictionReport* pred);

std::string summary_to_json(const RunSummary& s, const ExperimentConfig& cfg,
                            const PredictionReport* pred);
std::string summary_to_csv(const RunSummary& s);

}  // namespace bertini
