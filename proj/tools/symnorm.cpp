//
// Copyright 2026 The symnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// symnorm command-line tool: gen, sketch, query, exact, eval, audit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "symnorm/symnorm.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitCalibration = 4;
constexpr std::size_t kChunk = 1 << 16;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed=" << s << "\n";
  return s;
}

struct SketchOptions {
  std::string stream;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> instances;
  bool pin_noise = false;
  std::string constants;
  std::vector<std::string> norms;
  int trials = 1;
};

symnorm::Config load_config(const SketchOptions& o) {
  symnorm::Config cfg;
  if (!o.config.empty()) cfg = symnorm::read_config(o.config);
  if (!o.constants.empty()) symnorm::apply_overrides(cfg, o.constants);
  if (o.instances) cfg.params.instances = *o.instances;
  if (o.seed) cfg.seed = o.seed;
  return cfg;
}

// The stream header supplies n and m unless the config pins them.
void adopt_header(symnorm::Config& cfg, const symnorm::StreamHeader& h) {
  if (cfg.n_set && cfg.params.n != h.n) throw symnorm::FormatError("config n differs from stream header");
  if (cfg.m_set && cfg.params.m < h.m) throw symnorm::FormatError("config m below stream header m");
  cfg.params.n = h.n;
  if (!cfg.m_set) cfg.params.m = std::max(h.m, h.n);
}

symnorm::ReleaseSet sketch_stream(std::istream& in, symnorm::Config cfg, std::uint64_t seed,
                                  bool pin_noise) {
  symnorm::StreamReader reader(in);
  adopt_header(cfg, reader.header());
  symnorm::Pipeline pipeline(cfg.params, seed, {pin_noise, 0});
  std::vector<std::uint64_t> chunk;
  while (reader.next_chunk(chunk, kChunk)) pipeline.ingest_batch(chunk);
  return pipeline.release();
}

int cmd_gen(const std::string& dist, std::uint64_t n, std::uint64_t m,
            const std::optional<std::uint64_t>& seed, const std::string& out) {
  const auto stream = symnorm::generate(dist, n, m, resolve_seed(seed));
  if (out.empty() || out == "-") {
    symnorm::write_stream(std::cout, stream);
  } else {
    symnorm::write_stream_file(out, stream);
  }
  return 0;
}

int cmd_sketch(const SketchOptions& o) {
  auto cfg = load_config(o);
  const std::uint64_t seed = resolve_seed(cfg.seed);
  std::ifstream in(o.stream);
  if (!in) throw symnorm::FormatError("cannot open stream: " + o.stream);
  const auto release = sketch_stream(in, cfg, seed, o.pin_noise);
  if (o.out.empty() || o.out == "-") {
    std::cout << symnorm::to_json(release);
  } else {
    symnorm::write_release(release, o.out);
  }
  return 0;
}

symnorm::NormSpec parse_norm(const std::string& text) {
  try {
    return symnorm::NormSpec::Parse(text);
  } catch (const std::invalid_argument& e) {
    throw symnorm::FormatError(e.what());
  }
}

std::string format_value(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

int cmd_query(const std::string& release_path, const std::vector<std::string>& norms) {
  const auto release = symnorm::read_release(release_path);
  for (const auto& text : norms) {
    const auto norm = parse_norm(text);
    const auto r = symnorm::query(release, norm);
    std::cout << "norm=" << norm.to_string() << " estimate=" << format_value(r.estimate)
              << " instances=" << r.per_instance.size() << "\n";
  }
  return 0;
}

int cmd_exact(const std::string& stream_path, const std::vector<std::string>& norms) {
  const auto stream = symnorm::read_stream_file(stream_path);
  symnorm::FrequencyVector v(stream.header.n);
  for (auto item : stream.items) v.ingest(item);
  for (const auto& text : norms) {
    const auto norm = parse_norm(text);
    std::cout << "norm=" << norm.to_string() << " exact=" << format_value(symnorm::oracle_norm(v, norm))
              << "\n";
  }
  return 0;
}

int cmd_eval(const SketchOptions& o) {
  auto cfg = load_config(o);
  const std::uint64_t seed = resolve_seed(cfg.seed);
  const auto stream = symnorm::read_stream_file(o.stream);
  adopt_header(cfg, stream.header);
  symnorm::FrequencyVector v(stream.header.n);
  for (auto item : stream.items) v.ingest(item);
  std::vector<symnorm::NormSpec> norms;
  for (const auto& t : o.norms) norms.push_back(parse_norm(t));
  std::vector<std::vector<double>> errors(norms.size());
  std::cout << "norm\texact\testimate\trel_error\n";
  for (int t = 0; t < o.trials; ++t) {
    const std::uint64_t s = o.trials == 1 ? seed : symnorm::derive_seed(seed, {static_cast<std::uint64_t>(t)});
    symnorm::Pipeline pipeline(cfg.params, s, {o.pin_noise, 0});
    for (std::size_t i = 0; i < stream.items.size(); i += kChunk) {
      const std::size_t len = std::min(kChunk, stream.items.size() - i);
      pipeline.ingest_batch(std::span<const std::uint64_t>(stream.items).subspan(i, len));
    }
    const auto release = pipeline.release();
    for (std::size_t k = 0; k < norms.size(); ++k) {
      const double exact = symnorm::oracle_norm(v, norms[k]);
      const double est = symnorm::query(release, norms[k]).estimate;
      const double err = exact == 0 ? (est == 0 ? 0.0 : INFINITY) : std::fabs(est / exact - 1.0);
      errors[k].push_back(err);
      std::cout << norms[k].to_string() << "\t" << format_value(exact) << "\t" << format_value(est)
                << "\t" << format_value(err) << "\n";
    }
  }
  if (o.trials > 1) {
    for (std::size_t k = 0; k < norms.size(); ++k) {
      auto e = errors[k];
      std::sort(e.begin(), e.end());
      double mean = 0;
      for (double x : e) mean += x;
      mean /= static_cast<double>(e.size());
      const auto rank = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(e.size()))) - 1;
      std::cout << "summary\t" << norms[k].to_string() << "\tmean=" << format_value(mean)
                << "\tp90=" << format_value(e[rank]) << "\n";
    }
  }
  return 0;
}

int cmd_audit(const SketchOptions& o, int pairs, int runs) {
  auto cfg = load_config(o);
  const std::uint64_t seed = resolve_seed(cfg.seed);
  const auto d = symnorm::derive(cfg.params, seed);
  bool ok = true;

  const std::uint64_t n = std::min<std::uint64_t>(cfg.params.n, 1024);
  const std::uint64_t len = std::min<std::uint64_t>(cfg.params.m, 10000);
  const std::uint64_t width = std::min<std::uint64_t>(d.width, 1 << 16);
  const auto sens = symnorm::countsketch_sensitivity_audit(d.rows, width, n, len, pairs,
                                                           symnorm::derive_seed(seed, {1}));
  const bool sens_ok = sens.max_delta <= 2;
  ok = ok && sens_ok;
  std::cout << "sensitivity\tpairs=" << sens.pairs << "\tmax_delta=" << sens.max_delta
            << "\tbound=2\t" << (sens_ok ? "PASS" : "FAIL") << "\n";

  const auto ledger = symnorm::budget_ledger(d);
  const bool ledger_ok = ledger.sums_to(cfg.params.epsilon, cfg.params.delta) &&
                         ledger.scales_cover_sensitivity();
  ok = ok && ledger_ok;
  std::cout << "budget\tentries=" << ledger.entries().size()
            << "\tepsilon=" << format_value(ledger.total_epsilon())
            << "\tdelta=" << format_value(ledger.total_delta()) << "\t"
            << (ledger_ok ? "PASS" : "FAIL") << "\n";
  for (const auto& e : ledger.entries()) {
    if (e.instance != 0) continue;
    std::cout << "  " << e.component << "\tsensitivity=" << format_value(e.sensitivity)
              << "\tscale=" << format_value(e.scale) << "\tepsilon=" << format_value(e.epsilon)
              << "\tdelta=" << format_value(e.delta) << "\n";
  }

  const double eps = cfg.params.epsilon;
  const auto hist = symnorm::scalar_release_audit(100.0, 2.0, 8.0 / eps, eps, runs,
                                                  symnorm::derive_seed(seed, {2}));
  ok = ok && hist.pass;
  std::cout << "dp_histogram\truns=" << runs << "\tbins=" << hist.bins_checked
            << "\tworst_ratio=" << format_value(hist.worst_ratio)
            << "\tallowance=" << format_value(hist.worst_allowance) << "\t"
            << (hist.pass ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private symmetric-norm estimation over insertion-only streams"};
  app.require_subcommand(1);

  std::string dist = "zipf:1.1";
  std::uint64_t gen_n = 1024, gen_m = 10000;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic stream file");
  gen->add_option("--dist", dist, "uniform | zipf:<s> | planted:<count@fraction;...>");
  gen->add_option("--n", gen_n, "Universe size")->check(CLI::PositiveNumber);
  gen->add_option("--m", gen_m, "Number of updates");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Output path (default stdout)");

  SketchOptions so;
  auto* sketch = app.add_subcommand("sketch", "Sketch a stream into a release file");
  sketch->add_option("--stream", so.stream, "Stream file")->required();
  sketch->add_option("--config", so.config, "key=value config file");
  sketch->add_option("--out", so.out, "Release output path (default stdout)");
  sketch->add_option("--seed", so.seed, "Seed");
  sketch->add_option("--instances", so.instances, "Repetition instances");
  sketch->add_flag("--pin-noise", so.pin_noise, "Zero all noise (test mode, not private)");
  sketch->add_option("--constants", so.constants, "Constant overrides k=v,k=v");

  std::string release_path;
  std::vector<std::string> query_norms;
  auto* query = app.add_subcommand("query", "Evaluate norms on a release file");
  query->add_option("--release", release_path, "Release file")->required();
  query->add_option("--norm", query_norms, "lp:<p> | topk:<k> (repeatable)")->required();

  std::string exact_stream;
  std::vector<std::string> exact_norms;
  auto* exact = app.add_subcommand("exact", "Exact norms of a stream file");
  exact->add_option("--stream", exact_stream, "Stream file")->required();
  exact->add_option("--norm", exact_norms, "lp:<p> | topk:<k> (repeatable)")->required();

  SketchOptions eo;
  auto* eval = app.add_subcommand("eval", "Private estimate vs exact error table");
  eval->add_option("--stream", eo.stream, "Stream file")->required();
  eval->add_option("--config", eo.config, "key=value config file");
  eval->add_option("--norm", eo.norms, "lp:<p> | topk:<k> (repeatable)")->required();
  eval->add_option("--seed", eo.seed, "Seed");
  eval->add_option("--instances", eo.instances, "Repetition instances");
  eval->add_flag("--pin-noise", eo.pin_noise, "Zero all noise (test mode, not private)");
  eval->add_option("--constants", eo.constants, "Constant overrides k=v,k=v");
  eval->add_option("--trials", eo.trials, "Seeds to aggregate")->check(CLI::PositiveNumber);

  SketchOptions ao;
  int pairs = 100, runs = 10000;
  auto* audit = app.add_subcommand("audit", "Sensitivity, budget and empirical DP checks");
  audit->add_option("--config", ao.config, "key=value config file");
  audit->add_option("--seed", ao.seed, "Seed");
  audit->add_option("--instances", ao.instances, "Repetition instances");
  audit->add_option("--constants", ao.constants, "Constant overrides k=v,k=v");
  audit->add_option("--pairs", pairs, "Neighboring stream pairs")->check(CLI::PositiveNumber);
  audit->add_option("--runs", runs, "Runs per side of the histogram audit")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(dist, gen_n, gen_m, gen_seed, gen_out);
    if (*sketch) return cmd_sketch(so);
    if (*query) return cmd_query(release_path, query_norms);
    if (*exact) return cmd_exact(exact_stream, exact_norms);
    if (*eval) return cmd_eval(eo);
    if (*audit) return cmd_audit(ao, pairs, runs);
  } catch (const symnorm::CalibrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCalibration;
  } catch (const symnorm::InfeasibleParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const symnorm::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
