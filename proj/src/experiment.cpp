#include "bertini/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>
#include <thread>

namespace bertini {

using nlohmann::ordered_json;

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Smooth: return "smooth";
    case Verdict::Singular: return "singular";
    default: return "undecided";
  }
}

Verdict verdict_from_name(const std::string& s) {
  if (s == "smooth") return Verdict::Smooth;
  if (s == "singular") return Verdict::Singular;
  if (s == "undecided") return Verdict::Undecided;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

Variety make_variety(const ExperimentConfig& cfg) {
  if (!cfg.field) throw std::invalid_argument("experiment: no field");
  if (cfg.hypersurface) {
    if (cfg.hypersurface->nvars() != cfg.n + 1 ||
        !cfg.hypersurface->field()->same(*cfg.field))
      throw std::invalid_argument("experiment: hypersurface does not live in the configured space");
    return Variety::hypersurface(*cfg.hypersurface, cfg.gb_budget);
  }
  return Variety::projective_space(cfg.field, cfg.n);
}

namespace {

std::string seed_hex(uint64_t seed) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "0x%016llx", (unsigned long long)seed);
  return buf;
}

void validate_config(const ExperimentConfig& cfg, const Variety& X) {
  if (cfg.degrees.empty())
    throw std::invalid_argument("experiment: no degrees configured");
  for (size_t i = 0; i < cfg.degrees.size(); ++i) {
    if (cfg.degrees[i] < 1)
      throw std::invalid_argument("experiment: degrees must be >= 1");
    if (i && cfg.degrees[i] < cfg.degrees[i - 1])
      throw std::invalid_argument("experiment: degrees must be ascending");
  }
  const int k = int(cfg.degrees.size());
  if (k > X.dim() + 1)
    throw std::invalid_argument("experiment: need k <= dim X + 1");
  const int modes = (cfg.exhaustive ? 1 : 0) + (cfg.trials > 0 ? 1 : 0) +
                    (cfg.min_smooth > 0 ? 1 : 0);
  if (modes != 1)
    throw std::invalid_argument(
        "experiment: configure exactly one of exhaustive, trials, min_smooth");
  if (cfg.count_extensions < 0 || cfg.count_extensions > 16)
    throw std::invalid_argument("experiment: count_extensions out of range");
  if (cfg.brute_extension < 1 && cfg.oracle != OracleKind::Groebner)
    throw std::invalid_argument("experiment: brute oracle needs extension >= 1");
  if (cfg.truncation < 1)
    throw std::invalid_argument("experiment: truncation must be >= 1");
  if (cfg.batch < 1) throw std::invalid_argument("experiment: batch must be >= 1");

  // Conditioning points: right length, normalized, distinct, on X.
  auto check_points = [&](const std::vector<std::vector<uint32_t>>& pts,
                          const char* what) {
    for (const auto& pt : pts) {
      if (int(pt.size()) != cfg.n + 1)
        throw std::invalid_argument(std::string("experiment: ") + what +
                                    " point has wrong coordinate count");
      for (uint32_t c : pt) {
        if (c >= cfg.field->size())
          throw std::invalid_argument(std::string("experiment: ") + what +
                                      " point coordinate out of range");
      }
      if (normalize_projective(*cfg.field, pt) != pt)
        throw std::invalid_argument(std::string("experiment: ") + what +
                                    " point is not normalized");
      ProjPoint P{cfg.field, pt, 1};
      if (!X.contains(P))
        throw std::invalid_argument(std::string("experiment: ") + what +
                                    " point is not on the variety");
    }
  };
  check_points(cfg.contain, "contain");
  check_points(cfg.avoid, "avoid");
  std::vector<std::vector<uint32_t>> all = cfg.contain;
  all.insert(all.end(), cfg.avoid.begin(), cfg.avoid.end());
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("experiment: conditioning points must be distinct");
}

struct TrialEngine {
  const ExperimentConfig& cfg;
  Variety X;
  std::vector<FormEnumeration> enums;  // exhaustive mode only
  uint64_t exhaustive_total = 0;
  std::vector<ProjPoint> contain_pts, avoid_pts;
  // Bulk brute verdicts (exhaustive hypersurfaces over F_2 on P^1/P^2).
  std::vector<uint8_t> bulk_brute;

  TrialEngine(const ExperimentConfig& c, Variety var) : cfg(c), X(std::move(var)) {
    for (const auto& pt : cfg.contain)
      contain_pts.push_back({cfg.field, pt, 1});
    for (const auto& pt : cfg.avoid) avoid_pts.push_back({cfg.field, pt, 1});
    if (cfg.exhaustive) {
      exhaustive_total = 1;
      for (int d : cfg.degrees) {
        enums.emplace_back(cfg.field, cfg.n + 1, d, cfg.max_enumeration);
        const uint64_t c = enums.back().count();
        if (exhaustive_total > cfg.max_enumeration / c)
          throw std::invalid_argument("experiment: exhaustive enumeration larger than the bound");
        exhaustive_total *= c;
      }
      const bool can_bulk = cfg.oracle != OracleKind::Groebner &&
                            cfg.field->size() == 2 && !cfg.hypersurface &&
                            cfg.degrees.size() == 1 && cfg.n <= 2 &&
                            cfg.brute_extension <= 16;
      if (can_bulk)
        bulk_brute = brute_singular_flags_f2(cfg.n, cfg.degrees[0],
                                             cfg.brute_extension);
    }
  }

  FormTuple make_tuple(uint64_t idx, Rng& rng) const {
    std::vector<Form> forms;
    if (cfg.exhaustive) {
      uint64_t v = idx;
      for (const FormEnumeration& en : enums) {
        forms.push_back(en.at(v % en.count()));
        v /= en.count();
      }
    } else {
      for (int d : cfg.degrees)
        forms.push_back(random_form(cfg.field, cfg.n + 1, d, rng));
    }
    return FormTuple(std::move(forms));
  }

  TrialRecord run_trial(uint64_t idx) const {
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.trial = idx;
    rec.seed = per_trial_seed(cfg.seed, idx);
    rec.degrees = cfg.degrees;
    Rng rng(rec.seed);
    const FormTuple tuple = make_tuple(idx, rng);

    std::optional<SmoothnessVerdict> gbv, brv;
    if (cfg.oracle != OracleKind::Brute) {
      try {
        gbv = is_smooth_gb(tuple, X, cfg.gb_budget);
      } catch (const BudgetExhausted&) {
        // verdict stays undecided
      }
    }
    if (cfg.oracle != OracleKind::Groebner) {
      if (!bulk_brute.empty()) {
        SmoothnessVerdict v;
        v.method = SmoothnessVerdict::Method::Brute;
        v.scanned_degree = cfg.brute_extension;
        v.smooth = bulk_brute[idx] == 0;
        brv = v;
      } else {
        brv = is_smooth_brute(tuple, X, cfg.brute_extension);
      }
    }

    if (cfg.oracle == OracleKind::Brute) {
      rec.verdict = brv->smooth ? Verdict::Smooth : Verdict::Singular;
    } else {
      rec.verdict = !gbv ? Verdict::Undecided
                         : gbv->smooth ? Verdict::Smooth : Verdict::Singular;
    }
    if (cfg.oracle == OracleKind::Both)
      rec.brute_verdict = brv->smooth ? Verdict::Smooth : Verdict::Singular;

    if (brv && !brv->smooth && brv->witness) {
      WitnessData w;
      w.extension = brv->witness->degree;
      for (uint32_t c : brv->witness->coords)
        w.coords.push_back(brv->witness->field->element_string(c));
      rec.witness = std::move(w);
    }

    if (rec.verdict != Verdict::Undecided) {
      for (int e = 1; e <= cfg.count_extensions; ++e)
        rec.counts.push_back(count_points(tuple, X, e));
      for (const ProjPoint& pt : contain_pts)
        rec.contains.push_back(contains_with_transversality(tuple, X, pt) ? 1 : 0);
      for (const ProjPoint& pt : avoid_pts)
        rec.avoids.push_back(avoids(tuple, X, pt) ? 1 : 0);
    }

    if (cfg.timings) {
      rec.ms = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
                   .count();
    }
    return rec;
  }
};

void execute_range(const TrialEngine& eng, std::vector<TrialRecord>& records,
                   uint64_t begin, uint64_t end, int threads) {
  if (begin >= end) return;
  std::atomic<uint64_t> next{begin};
  std::vector<std::exception_ptr> errors(size_t(threads), nullptr);
  auto work = [&](int tid) {
    try {
      for (;;) {
        const uint64_t i = next.fetch_add(1);
        if (i >= end) return;
        records[i] = eng.run_trial(i);
      }
    } catch (...) {
      errors[tid] = std::current_exception();
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult out;
  Variety X = make_variety(cfg);
  validate_config(cfg, X);
  const int k = int(cfg.degrees.size());
  out.prediction =
      make_prediction(X, k, cfg.truncation, cfg.degrees,
                      int(cfg.contain.size() + cfg.avoid.size()));

  TrialEngine eng(cfg, X);
  int threads = cfg.threads;
  if (threads <= 0) threads = int(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;

  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.exhaustive || cfg.trials > 0) {
    const uint64_t total = cfg.exhaustive ? eng.exhaustive_total : cfg.trials;
    out.records.resize(total);
    execute_range(eng, out.records, 0, total, threads);
  } else {
    // Minimal-prefix stopping: find the smallest T with min_smooth smooth
    // verdicts among trials 0..T-1. Batches are a scheduling granule only.
    const uint64_t cap = std::max<uint64_t>(cfg.max_enumeration, cfg.min_smooth);
    uint64_t scheduled = 0, found_smooth = 0, stop = 0;
    while (stop == 0) {
      const uint64_t new_end = std::min(scheduled + cfg.batch, cap);
      if (new_end == scheduled)
        throw std::runtime_error(
            "experiment: trial cap reached before min_smooth was met");
      out.records.resize(new_end);
      execute_range(eng, out.records, scheduled, new_end, threads);
      for (uint64_t i = scheduled; i < new_end && stop == 0; ++i) {
        if (out.records[i].verdict == Verdict::Smooth &&
            ++found_smooth == cfg.min_smooth)
          stop = i + 1;
      }
      scheduled = new_end;
    }
    out.records.resize(stop);
  }
  const double total_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();

  out.summary = summarize(cfg, out.records, &out.prediction);
  out.summary.total_ms = cfg.timings ? total_ms : 0;
  return out;
}

// ---- serialization ----

std::string record_to_json(const TrialRecord& rec) {
  ordered_json j;
  j["trial"] = rec.trial;
  j["seed"] = seed_hex(rec.seed);
  j["degrees"] = rec.degrees;
  j["verdict"] = verdict_name(rec.verdict);
  if (rec.brute_verdict) j["verdict_brute"] = verdict_name(*rec.brute_verdict);
  if (rec.witness) {
    ordered_json w;
    w["e"] = rec.witness->extension;
    w["coords"] = rec.witness->coords;
    j["witness"] = w;
  }
  if (!rec.contains.empty()) {
    std::vector<int> v(rec.contains.begin(), rec.contains.end());
    j["contains"] = v;
  }
  if (!rec.avoids.empty()) {
    std::vector<int> v(rec.avoids.begin(), rec.avoids.end());
    j["avoids"] = v;
  }
  ordered_json counts = ordered_json::object();
  for (size_t e = 0; e < rec.counts.size(); ++e)
    counts[std::to_string(e + 1)] = rec.counts[e];
  j["counts"] = counts;
  j["ms"] = rec.ms;
  return j.dump();
}

std::string records_to_jsonl(const std::vector<TrialRecord>& recs) {
  std::string out;
  for (const TrialRecord& r : recs) {
    out += record_to_json(r);
    out += "\n";
  }
  return out;
}

std::vector<TrialRecord> parse_jsonl(const std::string& text) {
  std::vector<TrialRecord> recs;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw std::invalid_argument("jsonl line " + std::to_string(lineno) +
                                  ": " + e.what());
    }
    TrialRecord rec;
    rec.trial = j.at("trial").get<uint64_t>();
    rec.seed = std::stoull(j.at("seed").get<std::string>(), nullptr, 16);
    rec.degrees = j.at("degrees").get<std::vector<int>>();
    rec.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    if (j.contains("verdict_brute"))
      rec.brute_verdict =
          verdict_from_name(j["verdict_brute"].get<std::string>());
    if (j.contains("witness")) {
      WitnessData w;
      w.extension = j["witness"].at("e").get<int>();
      w.coords = j["witness"].at("coords").get<std::vector<std::string>>();
      rec.witness = std::move(w);
    }
    if (j.contains("contains")) {
      for (int v : j["contains"].get<std::vector<int>>())
        rec.contains.push_back(uint8_t(v));
    }
    if (j.contains("avoids")) {
      for (int v : j["avoids"].get<std::vector<int>>())
        rec.avoids.push_back(uint8_t(v));
    }
    const auto& counts = j.at("counts");
    for (size_t e = 1; counts.contains(std::to_string(e)); ++e)
      rec.counts.push_back(counts[std::to_string(e)].get<uint64_t>());
    rec.ms = j.at("ms").get<double>();
    recs.push_back(std::move(rec));
  }
  return recs;
}

// ---- aggregation ----

DensityEstimate empirical_density(const std::vector<TrialRecord>& recs,
                                  bool require_contains_all,
                                  bool require_avoids_all) {
  DensityEstimate est;
  for (const TrialRecord& r : recs) {
    if (r.verdict == Verdict::Undecided) continue;
    ++est.denom;
    if (r.verdict != Verdict::Smooth) continue;
    bool ok = true;
    if (require_contains_all) {
      for (uint8_t c : r.contains) ok = ok && c;
    }
    if (require_avoids_all) {
      for (uint8_t a : r.avoids) ok = ok && a;
    }
    if (ok) ++est.numer;
  }
  if (est.denom == 0)
    throw std::invalid_argument("empirical_density: no decided trials");
  est.estimate = Rational(est.numer, est.denom);
  est.wilson95 = wilson_interval(est.numer, est.denom, 1.959963984540054);
  return est;
}

EmpiricalMoments empirical_moments(const std::vector<TrialRecord>& recs,
                                   int rmax, const BigInt& N,
                                   const Rational& pi, const BigInt& qk) {
  EmpiricalMoments out;
  std::vector<double> xs;
  for (const TrialRecord& r : recs) {
    if (r.verdict == Verdict::Smooth && !r.counts.empty()) {
      xs.push_back(double(r.counts[0]));
    }
  }
  out.smooth = xs.size();
  if (xs.size() < 30)
    throw std::invalid_argument(
        "empirical_moments: need at least 30 smooth trials with counts, got " +
        std::to_string(xs.size()));
  const double inv_n = 1.0 / double(xs.size());
  const double mean = rat_double(Rational(N) * pi);
  const double sigma = std::sqrt(rat_double(Rational(N) * pi * (1 - pi)));
  const double scale = std::sqrt(rat_double(Rational(N * qk)));
  out.raw.assign(rmax + 1, 0.0);
  out.standardized.assign(rmax + 1, 0.0);
  out.sqrt_scaled.assign(rmax + 1, 0.0);
  out.raw[0] = out.standardized[0] = out.sqrt_scaled[0] = 1;
  for (int j = 1; j <= rmax; ++j) {
    double raw = 0, std = 0, scl = 0;
    for (double x : xs) {
      raw += std::pow(x, j);
      std += std::pow((x - mean) / sigma, j);
      scl += std::pow(x / scale, j);
    }
    out.raw[j] = raw * inv_n;
    out.standardized[j] = std * inv_n;
    out.sqrt_scaled[j] = scl * inv_n;
  }
  return out;
}

RunSummary summarize(const ExperimentConfig& cfg,
                     const std::vector<TrialRecord>& recs,
                     const PredictionReport* pred) {
  RunSummary s;
  s.attempted = recs.size();
  for (const TrialRecord& r : recs) {
    if (r.verdict == Verdict::Undecided) {
      ++s.undecided;
      continue;
    }
    ++s.decided;
    if (r.verdict == Verdict::Smooth) ++s.smooth;
    if (r.brute_verdict) {
      if (*r.brute_verdict == r.verdict)
        ++s.oracle_agree;
      else
        ++s.oracle_disagree;
    }
  }
  if (s.attempted > 0 &&
      double(s.undecided) / double(s.attempted) > 0.001) {
    s.undecided_alarm = true;
    s.notes.push_back("undecided fraction exceeds 0.1%: " +
                      std::to_string(s.undecided) + " of " +
                      std::to_string(s.attempted));
  }
  if (s.decided > 0) {
    s.density = empirical_density(recs, false, false);
    if (!cfg.contain.empty() || !cfg.avoid.empty())
      s.conditioned_density = empirical_density(recs, true, true);
  }
  s.contain_smooth.assign(cfg.contain.size(), 0);
  s.avoid_smooth.assign(cfg.avoid.size(), 0);
  std::vector<double> xs;  // N'_1 over smooth trials
  for (const TrialRecord& r : recs) {
    if (r.verdict != Verdict::Smooth) continue;
    for (size_t i = 0; i < r.contains.size() && i < s.contain_smooth.size(); ++i)
      s.contain_smooth[i] += r.contains[i];
    for (size_t i = 0; i < r.avoids.size() && i < s.avoid_smooth.size(); ++i)
      s.avoid_smooth[i] += r.avoids[i];
    if (!r.counts.empty()) xs.push_back(double(r.counts[0]));
  }

  // Histogram of N'_1 over smooth trials.
  uint64_t hist_size = 0;
  if (pred && pred->N && *pred->N <= 4096)
    hist_size = pred->N->convert_to<uint64_t>() + 1;
  for (double x : xs) hist_size = std::max(hist_size, uint64_t(x) + 1);
  if (!xs.empty()) {
    s.histogram.assign(hist_size, 0);
    for (double x : xs) ++s.histogram[size_t(x)];
  }

  // Raw moments.
  if (!xs.empty()) {
    s.raw_moments.assign(5, 0.0);
    s.raw_moments[0] = 1;
    for (int j = 1; j <= 4; ++j) {
      double acc = 0;
      for (double x : xs) acc += std::pow(x, j);
      s.raw_moments[j] = acc / double(xs.size());
    }
  }

  const bool have_model = pred && pred->pi && pred->N;
  double model_mean = 0, model_sigma = 0;
  if (have_model) {
    model_mean = rat_double(*pred->model_mean);
    model_sigma = std::sqrt(rat_double(*pred->model_variance));
  }
  std::vector<double> us;  // model-standardized values
  if (have_model && model_sigma > 0) {
    for (double x : xs) us.push_back((x - model_mean) / model_sigma);
  }
  if (us.size() >= 30) {
    s.standardized_moments.assign(5, 0.0);
    s.standardized_moments[0] = 1;
    for (int j = 1; j <= 4; ++j) {
      double acc = 0;
      for (double u : us) acc += std::pow(u, j);
      s.standardized_moments[j] = acc / double(us.size());
    }
    // Alternative normalization of the count: N'_1 / sqrt(N q^k).
    const double denom = std::sqrt(rat_double(Rational(*pred->N)) *
                                   std::pow(double(pred->q), pred->k));
    s.sqrt_scaled_moments.assign(5, 0.0);
    s.sqrt_scaled_moments[0] = 1;
    for (int j = 1; j <= 4; ++j) {
      double acc = 0;
      for (double x : xs) acc += std::pow(x / denom, j);
      s.sqrt_scaled_moments[j] = acc / double(xs.size());
    }
  }

  if (!pred) return s;

  // ---- comparison table ----
  auto add_row = [&](const std::string& metric, double emp, double predicted,
                     double tail, double z, bool pass, bool applicable = true) {
    s.comparisons.push_back({metric, emp, predicted, tail, z, pass, applicable});
  };

  if (s.density) {
    const double emp = double(s.density->numer) / double(s.density->denom);
    const double predicted = pred->truncated_density.to_double();
    const double tail = rat_double(pred->tail_bound);
    const auto w3 = wilson_interval(s.density->numer, s.density->denom, 3.0);
    const double se = w3.halfwidth / 3.0;
    const double diff = emp - predicted;
    add_row("density", emp, predicted, tail,
            se > 0 ? diff / se : (diff == 0 ? 0 : 1e9),
            std::fabs(diff) <= w3.halfwidth + tail);
  } else {
    add_row("density", 0, pred->truncated_density.to_double(),
            rat_double(pred->tail_bound), 0, false, false);
  }

  if (s.conditioned_density && pred->pi) {
    const int g = int(cfg.contain.size()), h = int(cfg.avoid.size());
    const Rational pi = *pred->pi;
    const double joint = pred->truncated_density.to_double() *
                         rat_double(rat_pow(pi, g) * rat_pow(1 - pi, h));
    const double emp =
        double(s.conditioned_density->numer) / double(s.conditioned_density->denom);
    const auto w3 = wilson_interval(s.conditioned_density->numer,
                                    s.conditioned_density->denom, 3.0);
    const double se = w3.halfwidth / 3.0;
    const double diff = emp - joint;
    add_row("conditioned_density", emp, joint, rat_double(pred->tail_bound),
            se > 0 ? diff / se : (diff == 0 ? 0 : 1e9),
            std::fabs(diff) <= w3.halfwidth + rat_double(pred->tail_bound));
  }

  if (have_model) {
    const double pi = rat_double(*pred->pi);
    for (size_t i = 0; i < s.contain_smooth.size(); ++i) {
      if (s.smooth == 0) {
        add_row("contains_" + std::to_string(i), 0, pi, 0, 0, false, false);
        continue;
      }
      const double emp = double(s.contain_smooth[i]) / double(s.smooth);
      const auto w3 = wilson_interval(s.contain_smooth[i], s.smooth, 3.0);
      const double se = w3.halfwidth / 3.0;
      const double diff = emp - pi;
      add_row("contains_" + std::to_string(i), emp, pi, 0,
              se > 0 ? diff / se : (diff == 0 ? 0 : 1e9),
              std::fabs(diff) <= w3.halfwidth);
    }
    for (size_t i = 0; i < s.avoid_smooth.size(); ++i) {
      if (s.smooth == 0) {
        add_row("avoids_" + std::to_string(i), 0, 1 - pi, 0, 0, false, false);
        continue;
      }
      const double emp = double(s.avoid_smooth[i]) / double(s.smooth);
      const auto w3 = wilson_interval(s.avoid_smooth[i], s.smooth, 3.0);
      const double se = w3.halfwidth / 3.0;
      const double diff = emp - (1 - pi);
      add_row("avoids_" + std::to_string(i), emp, 1 - pi, 0,
              se > 0 ? diff / se : (diff == 0 ? 0 : 1e9),
              std::fabs(diff) <= w3.halfwidth);
    }
  }

  const size_t nsm = xs.size();
  if (have_model && nsm >= 2) {
    // Sample central moments for the mean/variance rows.
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= double(nsm);
    double m2 = 0, m4 = 0;
    for (double x : xs) {
      const double d = x - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    m2 /= double(nsm);
    m4 /= double(nsm);
    const double s2 = m2 * double(nsm) / double(nsm - 1);  // unbiased

    {
      const double se = std::sqrt(s2 / double(nsm));
      const double diff = mean - model_mean;
      const double z = se > 0 ? diff / se : (diff == 0 ? 0 : 1e9);
      add_row("mean_count", mean, model_mean, 0, z, std::fabs(z) <= 3);
    }
    {
      const double var_of_s2 = std::max(0.0, (m4 - m2 * m2) / double(nsm));
      const double se = std::sqrt(var_of_s2);
      const double predicted = model_sigma * model_sigma;
      const double diff = s2 - predicted;
      const double z = se > 0 ? diff / se : (diff == 0 ? 0 : 1e9);
      add_row("variance_count", s2, predicted, 0, z, std::fabs(z) <= 3);
    }
  } else if (have_model) {
    add_row("mean_count", 0, model_mean, 0, 0, false, false);
    add_row("variance_count", 0, model_sigma * model_sigma, 0, 0, false, false);
  }

  if (have_model && us.size() >= 30 && !s.standardized_moments.empty()) {
    const auto model_std = binomial_standardized_moments(*pred->N, *pred->pi, 3);
    for (int j = 2; j <= 3; ++j) {
      const int jj = j;
      const double emp = s.standardized_moments[j];
      const double predicted = model_std[j];
      const double se = bootstrap_sigma(
          us,
          [jj](const std::vector<double>& v) {
            double acc = 0;
            for (double u : v) acc += std::pow(u, jj);
            return acc / double(v.size());
          },
          1000, mix64(cfg.seed + 0xb00 + uint64_t(j)));
      const double diff = emp - predicted;
      const double z = se > 0 ? diff / se : (diff == 0 ? 0 : 1e9);
      add_row("std_moment_" + std::to_string(j), emp, predicted, 0, z,
              std::fabs(z) <= 3);
    }
  } else if (have_model) {
    add_row("std_moment_2", 0, 1, 0, 0, false, false);
    add_row("std_moment_3", 0, 0, 0, 0, false, false);
  }

  if (have_model && !s.histogram.empty() && *pred->N <= 4096 &&
      s.smooth >= 50 && *pred->pi > 0 && *pred->pi < 1) {
    const int N = pred->N->convert_to<int>();
    const Rational pi = *pred->pi;
    const Rational ratio = pi / (1 - pi);
    Rational cur = rat_pow(1 - pi, int(N));
    std::vector<double> pmf;
    std::vector<uint64_t> obs;
    for (int j = 0; j <= N; ++j) {
      pmf.push_back(rat_double(cur));
      obs.push_back(j < int(s.histogram.size()) ? s.histogram[j] : 0);
      if (j < N) cur *= ratio * Rational(N - j, j + 1);
    }
    const auto chi = chi_square_gof(obs, pmf, 5.0);
    add_row("chi_square_p", chi.p_value, 0.01, 0, chi.statistic,
            chi.p_value >= 0.01);
  }

  return s;
}

// ---- reports ----

static ordered_json rational_json(const Rational& x) {
  ordered_json o;
  o["rational"] = rat_string(x);
  o["decimal"] = rat_decimal(x);
  return o;
}

static ordered_json density_json(const DensityEstimate& d) {
  ordered_json o;
  o["numer"] = d.numer;
  o["denom"] = d.denom;
  o["estimate"] = rational_json(d.estimate);
  o["wilson95"] = {d.wilson95.lower, d.wilson95.upper};
  return o;
}

std::string summary_to_json(const RunSummary& s, const ExperimentConfig& cfg,
                            const PredictionReport* pred) {
  ordered_json j;
  ordered_json c;
  c["field"] = cfg.field->name();
  c["n"] = cfg.n;
  if (cfg.hypersurface) c["hypersurface"] = cfg.hypersurface->str();
  c["degrees"] = cfg.degrees;
  c["mode"] = cfg.exhaustive ? "exhaustive"
              : cfg.min_smooth > 0 ? "min_smooth" : "sampled";
  if (cfg.trials) c["trials"] = cfg.trials;
  if (cfg.min_smooth) c["min_smooth"] = cfg.min_smooth;
  c["seed"] = seed_hex(cfg.seed);
  c["oracle"] = cfg.oracle == OracleKind::Groebner ? "gb"
                : cfg.oracle == OracleKind::Brute ? "brute" : "both";
  if (cfg.oracle != OracleKind::Groebner)
    c["brute_extension"] = cfg.brute_extension;
  c["count_extensions"] = cfg.count_extensions;
  c["truncation"] = cfg.truncation;
  if (!cfg.contain.empty() || !cfg.avoid.empty()) {
    auto pts = [&](const std::vector<std::vector<uint32_t>>& v) {
      ordered_json arr = ordered_json::array();
      for (const auto& pt : v) {
        std::string str = "(";
        for (size_t i = 0; i < pt.size(); ++i) {
          if (i) str += ":";
          str += cfg.field->element_string(pt[i]);
        }
        arr.push_back(str + ")");
      }
      return arr;
    };
    c["contain"] = pts(cfg.contain);
    c["avoid"] = pts(cfg.avoid);
  }
  j["config"] = c;
  if (pred) j["prediction"] = ordered_json::parse(prediction_to_json(*pred));

  ordered_json r;
  r["attempted"] = s.attempted;
  r["decided"] = s.decided;
  r["undecided"] = s.undecided;
  r["smooth"] = s.smooth;
  if (s.density) r["density"] = density_json(*s.density);
  if (s.conditioned_density)
    r["conditioned_density"] = density_json(*s.conditioned_density);
  if (!s.contain_smooth.empty()) r["contain_smooth"] = s.contain_smooth;
  if (!s.avoid_smooth.empty()) r["avoid_smooth"] = s.avoid_smooth;
  if (!s.histogram.empty()) r["histogram"] = s.histogram;
  if (!s.raw_moments.empty()) r["raw_moments"] = s.raw_moments;
  if (!s.standardized_moments.empty())
    r["standardized_moments"] = s.standardized_moments;
  if (!s.sqrt_scaled_moments.empty())
    r["sqrt_scaled_moments"] = s.sqrt_scaled_moments;
  if (s.oracle_agree + s.oracle_disagree > 0) {
    r["oracle_agree"] = s.oracle_agree;
    r["oracle_disagree"] = s.oracle_disagree;
  }
  r["undecided_alarm"] = s.undecided_alarm;
  if (s.total_ms > 0) r["total_ms"] = s.total_ms;
  if (!s.notes.empty()) r["notes"] = s.notes;
  if (!s.comparisons.empty()) {
    ordered_json rows = ordered_json::array();
    for (const ComparisonRow& row : s.comparisons) {
      ordered_json o;
      o["metric"] = row.metric;
      o["empirical"] = row.empirical;
      o["predicted"] = row.predicted;
      o["tail_bound"] = row.tail_bound;
      o["z"] = row.z;
      o["pass"] = row.pass;
      o["applicable"] = row.applicable;
      rows.push_back(o);
    }
    r["comparisons"] = rows;
  }
  j["summary"] = r;
  return j.dump(2) + "\n";
}

std::string summary_to_csv(const RunSummary& s) {
  std::string out = "metric,empirical,predicted,tail_bound,z,pass\n";
  char buf[256];
  for (const ComparisonRow& row : s.comparisons) {
    const char* pass = row.applicable ? (row.pass ? "true" : "false") : "na";
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%s\n",
                  row.metric.c_str(), row.empirical, row.predicted,
                  row.tail_bound, row.z, pass);
    out += buf;
  }
  return out;
}

}  // namespace bertini
