/* Copyright 2026 The DGDF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// dgdf: verify | cost | bench | train-toy | gen-data
//
// Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgdf/cost_model.h"
#include "dgdf/data_synth.h"
#include "dgdf/fusion.h"
#include "dgdf/tensor_io.h"
#include "dgdf/toy_net.h"
#include "verify_suite.h"

namespace {

using namespace dgdf;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<FusionMethod> parse_methods(const std::string& list) {
  std::vector<FusionMethod> out;
  for (const auto& name : split(list, ',')) {
    try {
      out.push_back(ParseFusionMethod(name));
    } catch (const Error&) {
      throw UsageError("unknown method '" + name + "' (naive, gdf, scheme_a, scheme_b)");
    }
  }
  if (out.empty()) throw UsageError("no methods given");
  return out;
}

std::pair<int, int> parse_hw(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    const int h = std::stoi(s.substr(0, x)), w = std::stoi(s.substr(x + 1));
    if (h < 1 || w < 1) throw std::invalid_argument(s);
    return {h, w};
  } catch (const std::logic_error&) {
    throw UsageError("--hw expects HxW, got '" + s + "'");
  }
}

// Writes to `path`, or stdout when path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::trunc);
      if (!file_) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void finish(const std::string& path) {
    os().flush();
    if (file_.is_open() && !file_) throw Error(ErrorCode::kIo, "write failed: " + path);
  }

 private:
  std::ofstream file_;
};

std::string invocation(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t seed = 7;
  int threads = 1;
};

int run_verify(const VerifyArgs& a) {
  const auto results = run_verify_suite(a.seed, a.threads);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s %s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "all properties passed" : "verification FAILED");
  return all ? kExitOk : kExitVerifyFailed;
}

struct CostArgs {
  std::uint64_t n = 16;
  int c = 4, k = 3, m = 2;
  double sigma = 0.25;
  std::string methods = "naive,gdf,scheme_a,scheme_b";
  std::string out;
  bool csv = false;
};

int run_cost(const CostArgs& a, const std::string& cmdline) {
  std::vector<CostReport> rows;
  for (FusionMethod m : parse_methods(a.methods)) {
    try {
      rows.push_back(cost_formula(m, a.n, a.c, a.k, a.m, a.sigma));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (a.csv || !a.out.empty()) {
    Output o(a.out);
    o.os() << "# " << cmdline << "\n" << cost_csv_header() << "\n";
    for (const auto& r : rows) o.os() << cost_csv_row(r) << "\n";
    o.finish(a.out);
    if (!a.out.empty() && a.out != "-") std::printf("wrote %s\n", a.out.c_str());
    if (a.csv) return kExitOk;
  }
  std::printf("N=%llu C=%d K=%d M=%d sigma=%g\n", static_cast<unsigned long long>(a.n), a.c, a.k,
              a.m, a.sigma);
  std::printf("%-9s %14s %16s %14s %14s %16s %14s\n", "method", "params", "gen_flops",
              "gen_mem", "app_params", "app_flops", "app_mem");
  for (const auto& r : rows)
    std::printf("%-9s %14llu %16llu %14llu %14llu %16llu %14llu\n", FusionMethodName(r.method),
                static_cast<unsigned long long>(r.total().params),
                static_cast<unsigned long long>(r.gen.flops),
                static_cast<unsigned long long>(r.gen.mem_elems),
                static_cast<unsigned long long>(r.app.params),
                static_cast<unsigned long long>(r.app.flops),
                static_cast<unsigned long long>(r.app.mem_elems));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string methods = "gdf,scheme_a,scheme_b";
  std::string hw = "32x32";
  std::vector<int> cs = {16};
  std::vector<int> ks = {3};
  std::vector<int> ms = {4};
  double sigma = 0.25;
  int repeats = 11;
  int warmup = 3;
  int threads = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string samples_out;
};

// One timed closure per method: generation then application.
std::function<void()> make_forward(FusionMethod method, const TensorD& g, const TensorD& x, int k,
                                   int m, double sigma, std::uint64_t seed,
                                   const ExecOptions& exec) {
  const int c = g.c();
  switch (method) {
    case FusionMethod::kNaive: {
      auto s = std::make_shared<NaiveGDFState<double>>(NaiveGDFState<double>::Make(c, k, seed));
      return [=, &g, &x] {
        naive_apply(x, naive_generate(g, *s, nullptr, kDefaultNaiveCap, exec), nullptr, exec);
      };
    }
    case FusionMethod::kGdf: {
      auto s = std::make_shared<FactorizedGDFState<double>>(
          FactorizedGDFState<double>::Make(c, k, sigma, seed));
      return [=, &g, &x] {
        const auto f = gen_gdf(g, *s, nullptr, exec);
        gdf_apply(x, f.depthwise, f.cross, nullptr, exec);
      };
    }
    case FusionMethod::kSchemeA: {
      auto s = std::make_shared<SchemeAState<double>>(SchemeAState<double>::Make(c, k, m, seed));
      return [=, &g, &x] {
        scheme_a_apply(x, gen_scheme_a(g, *s, nullptr, exec), s->component, nullptr, exec);
      };
    }
    case FusionMethod::kSchemeB: {
      auto s = std::make_shared<SchemeBState<double>>(SchemeBState<double>::Make(c, k, seed));
      return [=, &g, &x] {
        scheme_b_apply(x, gen_scheme_b(g, *s, nullptr, exec), s->component, nullptr, exec);
      };
    }
  }
  throw UsageError("unknown method");
}

std::int64_t percentile(const std::vector<std::int64_t>& sorted, double q) {
  // Nearest rank.
  const std::size_t n = sorted.size();
  std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  idx = std::clamp<std::size_t>(idx, 1, n);
  return sorted[idx - 1];
}

int run_bench(const BenchArgs& a, const std::string& cmdline) {
  if (a.repeats < 11) throw UsageError("--repeats must be >= 11");
  if (a.warmup < 0) throw UsageError("--warmup must be >= 0");
  if (a.threads < 1) throw UsageError("--threads must be >= 1");
  const auto methods = parse_methods(a.methods);
  const auto [h, w] = parse_hw(a.hw);
  const ExecOptions exec{a.threads};

  Output o(a.out);
  std::unique_ptr<Output> samples;
  if (!a.samples_out.empty()) samples = std::make_unique<Output>(a.samples_out);
  o.os() << "# " << cmdline << "\n";
  o.os() << "# threads=" << a.threads << (a.threads > 1 ? " (row-parallel)" : " (single-threaded)")
         << " warmup=" << a.warmup << " dtype=f64\n";
  o.os() << "# analytic columns come from the closed-form cost model\n";
  o.os() << "method,h,w,c,k,m,sigma,params,gen_flops,app_flops,gen_mem_elems,app_mem_elems,"
            "wall_ns_median,wall_ns_p10,wall_ns_p90,repeats\n";
  if (samples) samples->os() << "method,h,w,c,k,m,repeat,wall_ns\n";

  for (int c : a.cs)
    for (int k : a.ks)
      for (int m : a.ms)
        for (FusionMethod method : methods) {
          if (c < 1 || k < 1 || k % 2 == 0 || m < 1)
            throw UsageError("--c, --m must be >= 1 and --k odd");
          // m only matters for scheme A; other methods run once per (c, k).
          if (method != FusionMethod::kSchemeA && m != a.ms.front()) continue;
          const int m_eff = method == FusionMethod::kSchemeA ? m : 1;
          const CostReport cost = cost_formula(method, static_cast<std::uint64_t>(h) * w, c, k,
                                               m_eff, a.sigma);
          if (method == FusionMethod::kNaive &&
              static_cast<std::uint64_t>(h) * w * k * k * c * c > kDefaultNaiveCap) {
            o.os() << "# skipped naive h=" << h << " w=" << w << " c=" << c << " k=" << k
                   << ": generated filter exceeds the resource guard\n";
            continue;
          }
          const std::uint64_t s = derive_seed(a.seed, c * 1000 + k * 10 + m_eff);
          const TensorD g = seeded_fill<double>(h, w, c, derive_seed(s, 1),
                                                Distribution::Uniform(-1.0, 1.0));
          const TensorD x = seeded_fill<double>(h, w, c, derive_seed(s, 2),
                                                Distribution::Uniform(-1.0, 1.0));
          auto fwd = make_forward(method, g, x, k, m_eff, a.sigma, derive_seed(s, 3), exec);
          for (int i = 0; i < a.warmup; ++i) fwd();
          std::vector<std::int64_t> ns;
          for (int i = 0; i < a.repeats; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            fwd();
            const auto t1 = std::chrono::steady_clock::now();
            ns.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
            if (samples)
              samples->os() << FusionMethodName(method) << ',' << h << ',' << w << ',' << c << ','
                            << k << ',' << m_eff << ',' << i << ',' << ns.back() << "\n";
          }
          std::vector<std::int64_t> sorted = ns;
          std::sort(sorted.begin(), sorted.end());
          o.os() << FusionMethodName(method) << ',' << h << ',' << w << ',' << c << ',' << k << ','
                 << m_eff << ',' << a.sigma << ',' << cost.total().params << ','
                 << cost.gen.flops << ',' << cost.app.flops << ',' << cost.gen.mem_elems << ','
                 << cost.app.mem_elems << ',' << percentile(sorted, 0.5) << ','
                 << percentile(sorted, 0.1) << ',' << percentile(sorted, 0.9) << ','
                 << a.repeats << "\n";
        }
  o.finish(a.out);
  if (samples) samples->finish(a.samples_out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string fusion = "scheme_b";
  int iterations = 200;
  int scenes = 8;
  int held_out = 2;
  int size = 32;
  double density = 0.3;
  std::uint64_t seed = 1;
  double lr = ToyNetConfig{}.lr;
  double momentum = 0.9;
  int m = 4;
  std::string aggregation = "pixel_union";
  std::string trace_out;
  std::string summary_out;
  std::string checkpoint_dir;
};

int run_train(const TrainArgs& a, const std::string& cmdline) {
  std::vector<ToyFusion> kinds;
  try {
    kinds = a.fusion == "all" ? AllToyFusions() : std::vector<ToyFusion>{ParseToyFusion(a.fusion)};
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  Aggregation agg;
  if (a.aggregation == "pixel_union") {
    agg = Aggregation::kPixelUnion;
  } else if (a.aggregation == "per_image_mean") {
    agg = Aggregation::kPerImageMean;
  } else {
    throw UsageError("--aggregation is pixel_union or per_image_mean");
  }
  if (a.scenes < 1 || a.held_out < 0 || a.size < 8 || a.size % 2)
    throw UsageError("need --scenes >= 1, --held-out >= 0 and an even --size >= 8");
  if (!(a.density > 0.0 && a.density <= 1.0)) throw UsageError("--density must be in (0, 1]");

  const auto train_set = make_toy_dataset(a.seed, a.scenes, a.size, a.size, a.density);
  const auto held = a.held_out ? make_toy_dataset(derive_seed(a.seed, 99), a.held_out, a.size,
                                                  a.size, a.density)
                               : std::vector<ToySample>{};

  std::unique_ptr<Output> trace_out, summary_out;
  if (!a.trace_out.empty()) {
    trace_out = std::make_unique<Output>(a.trace_out);
    trace_out->os() << "# " << cmdline << "\nfusion,iter,loss\n";
  }
  if (!a.summary_out.empty()) {
    summary_out = std::make_unique<Output>(a.summary_out);
    summary_out->os() << "# " << cmdline << "\n# aggregation=" << AggregationName(agg)
                      << "\nfusion,weights,biases,initial_loss,final_loss,wall_ms,"
                      << metrics_csv_header() << "\n";
  }

  for (ToyFusion kind : kinds) {
    ToyNetConfig cfg;
    cfg.fusion = kind;
    cfg.iterations = a.iterations;
    cfg.seed = a.seed;
    cfg.lr = a.lr;
    cfg.momentum = a.momentum;
    cfg.m = a.m;
    ToyNet net;
    try {
      net = build_toy_net(cfg);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    const ParamCount pc = param_count(net);
    const auto t0 = std::chrono::steady_clock::now();
    TrainTrace trace;
    try {
      trace = train_toy(net, train_set, held, agg);
    } catch (const DivergenceError& e) {
      std::fprintf(stderr, "%s: %s\n", ToyFusionName(kind), e.what());
      if (trace_out)
        for (std::size_t i = 0; i < e.trace().losses.size(); ++i)
          trace_out->os() << ToyFusionName(kind) << ',' << i << ',' << e.trace().losses[i] << "\n";
      return kExitVerifyFailed;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%-9s params=%zu (+%zu biases) loss %.6g -> %.6g (x%.3f) in %.0f ms", ToyFusionName(kind),
                pc.weights, pc.biases, trace.losses.front(), trace.losses.back(),
                trace.losses.back() / trace.losses.front(), ms);
    if (!held.empty()) std::printf("  held-out rmse %.1f mm", trace.held_out.rmse_mm);
    std::printf("\n");
    if (trace_out)
      for (std::size_t i = 0; i < trace.losses.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", trace.losses[i]);
        trace_out->os() << ToyFusionName(kind) << ',' << i << ',' << buf << "\n";
      }
    if (summary_out) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s,%zu,%zu,%.17g,%.17g,%.1f,", ToyFusionName(kind),
                    pc.weights, pc.biases, trace.losses.front(), trace.losses.back(), ms);
      summary_out->os() << buf << (held.empty() ? std::string() : metrics_csv_row(trace.held_out))
                        << "\n";
    }
    if (!a.checkpoint_dir.empty())
      write_bundle(a.checkpoint_dir, std::string("toy_") + ToyFusionName(kind), toy_to_bundle(net));
  }
  if (trace_out) trace_out->finish(a.trace_out);
  if (summary_out) summary_out->finish(a.summary_out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string out_dir;
  int count = 4;
  int h = 32, w = 32;
  int rects = 4;
  double density = 0.3;
  std::uint64_t seed = 1;
};

int run_gen(const GenArgs& a) {
  if (a.count < 1) throw UsageError("--count must be >= 1");
  if (!(a.density > 0.0 && a.density <= 1.0)) throw UsageError("--density must be in (0, 1]");
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + a.out_dir);
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t s = derive_seed(a.seed, i);
    SceneSample scene;
    try {
      scene = synth_scene(s, a.h, a.w, a.rects);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    const DepthMap sparse = sparsify(scene.dense_depth, a.density, derive_seed(s, 1));
    char stem[32];
    std::snprintf(stem, sizeof(stem), "scene_%04d", i);
    const std::string base = (std::filesystem::path(a.out_dir) / stem).string();
    write_tensor(base + ".guidance.dgdf", scene.guidance);
    write_tensor(base + ".depth.dgdf", scene.dense_depth);
    write_pgm16(base + ".depth.pgm", scene.dense_depth);
    write_pgm16(base + ".sparse.pgm", sparse);
  }
  std::printf("wrote %d scenes to %s\n", a.count, a.out_dir.c_str());
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kIo:
    case ErrorCode::kMalformedHeader:
    case ErrorCode::kTruncatedData:
      return kExitIo;
    case ErrorCode::kInvalidInput:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidShape:
    case ErrorCode::kInvalidRatio:
    case ErrorCode::kUnknownOp:
      return kExitUsage;
    default:
      return kExitVerifyFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guided dynamic filter fusion: verification, cost tables, benchmarks, toy training"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the property suites; exit 0 iff all pass");
  verify->add_option("--seed", va.seed, "Base seed");
  verify->add_option("--threads", va.threads, "Run independent properties concurrently")
      ->check(CLI::PositiveNumber);

  CostArgs ca;
  auto* cost = app.add_subcommand("cost", "Closed-form parameter/FLOP/memory table");
  cost->add_option("--n", ca.n, "Pixel count N");
  cost->add_option("--c", ca.c, "Channels C");
  cost->add_option("--k", ca.k, "Kernel size K");
  cost->add_option("--m", ca.m, "Scheme A bases M");
  cost->add_option("--sigma", ca.sigma, "GDF squeeze ratio");
  cost->add_option("--methods", ca.methods, "Comma-separated methods");
  cost->add_option("--out", ca.out, "Also write CSV here");
  cost->add_flag("--csv", ca.csv, "Print CSV instead of the table");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Time forward passes and write a timing CSV");
  bench->add_option("--methods", ba.methods, "Comma-separated methods");
  bench->add_option("--hw", ba.hw, "Spatial size HxW");
  bench->add_option("--c", ba.cs, "Channels (repeatable)");
  bench->add_option("--k", ba.ks, "Kernel sizes (repeatable)");
  bench->add_option("--m", ba.ms, "Scheme A bases (repeatable)");
  bench->add_option("--sigma", ba.sigma, "GDF squeeze ratio");
  bench->add_option("--repeats", ba.repeats, "Timed repeats (>= 11)");
  bench->add_option("--warmup", ba.warmup, "Untimed warmup runs");
  bench->add_option("--threads", ba.threads, "Row-parallel worker threads");
  bench->add_option("--seed", ba.seed, "Seed for inputs and weights");
  bench->add_option("--out", ba.out, "CSV path (default stdout)");
  bench->add_option("--dump-samples", ba.samples_out, "Write every raw timing sample here");

  TrainArgs ta;
  auto* train = app.add_subcommand("train-toy", "Train the toy network and write the loss trace");
  train->add_option("--fusion", ta.fusion, "add, concat, gdf, scheme_a, scheme_b or all");
  train->add_option("--iterations", ta.iterations, "SGD iterations");
  train->add_option("--scenes", ta.scenes, "Training scenes");
  train->add_option("--held-out", ta.held_out, "Held-out scenes for metrics");
  train->add_option("--size", ta.size, "Scene side length (even)");
  train->add_option("--density", ta.density, "Fraction of depth pixels kept in the input");
  train->add_option("--seed", ta.seed, "Seed for data and weights");
  train->add_option("--lr", ta.lr, "Learning rate");
  train->add_option("--momentum", ta.momentum, "Momentum");
  train->add_option("--m", ta.m, "Scheme A bases");
  train->add_option("--aggregation", ta.aggregation, "pixel_union or per_image_mean");
  train->add_option("--trace-out", ta.trace_out, "CSV of fusion,iter,loss");
  train->add_option("--summary-out", ta.summary_out, "CSV of final loss and held-out metrics");
  train->add_option("--checkpoint-dir", ta.checkpoint_dir, "Write DGDF1 checkpoints here");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen-data", "Write synthetic scenes (DGDF1 + PGM)");
  gen->add_option("--out", ga.out_dir, "Output directory")->required();
  gen->add_option("--count", ga.count, "Number of scenes");
  gen->add_option("--height", ga.h, "Height");
  gen->add_option("--width", ga.w, "Width");
  gen->add_option("--rects", ga.rects, "Boxes per scene (1..16)");
  gen->add_option("--density", ga.density, "Density of the sparse map");
  gen->add_option("--seed", ga.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const std::string cmdline = invocation(argc, argv);
  try {
    if (*verify) return run_verify(va);
    if (*cost) return run_cost(ca, cmdline);
    if (*bench) return run_bench(ba, cmdline);
    if (*train) return run_train(ta, cmdline);
    if (*gen) return run_gen(ga);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerifyFailed;
  }
  return kExitUsage;
}
