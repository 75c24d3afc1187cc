#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "monotone/approx.hpp"
#include "monotone/audit.hpp"
#include "monotone/construct.hpp"
#include "monotone/io.hpp"
#include "monotone/matching.hpp"

namespace monotone::cli {

namespace {

using nlohmann::json;

std::string widths_string(const std::vector<std::size_t>& widths) {
  return fmt::format("[{}]", fmt::join(widths, ","));
}

void diagnose(std::ostream& err, const Error& e) {
  json diag = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (auto pair = e.pair()) diag["pair"] = {pair->first, pair->second};
  err << "error: " << diag.dump() << '\n';
}

struct SynthArgs {
  std::string dataset;
  std::string ordered = "auto";
  bool trace = false;
  bool exact = false;
  std::string output;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  const auto samples = load_dataset_csv(a.dataset);
  const MonotoneDataset ds = validate_dataset(samples);
  const bool chain = a.ordered == "auto" && is_totally_ordered(ds);
  const Interpolant result = chain ? build_chain_interpolator(ds) : build_interpolator(ds);

  double max_error = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    max_error = std::max(max_error, std::abs(evaluate(result.network, ds.point(i)) - ds.label(i)));

  std::ostream& summary = a.output.empty() ? err : out;
  summary << "builder " << (chain ? "chain" : "general") << '\n';
  summary << "points " << ds.size() << '\n';
  summary << "dimension " << ds.dimension() << '\n';
  summary << "widths " << widths_string(result.network.hidden_widths()) << '\n';
  summary << "hidden_units " << result.network.hidden_units() << '\n';
  summary << "max_training_error " << format_double(max_error) << '\n';
  if (a.exact) {
    const ExactInterpolant exact =
        chain ? build_chain_interpolator_exact(ds) : build_interpolator_exact(ds);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
      if (evaluate(exact.network, ds.point(i)) != Rational(ds.label(i))) ++mismatches;
    summary << "exact_mismatches " << mismatches << '\n';
  }

  if (a.output.empty()) {
    json doc = network_to_json(result.network);
    if (a.trace) doc = {{"network", doc}, {"trace", trace_to_json(result.trace)}};
    out << doc.dump(1) << '\n';
  } else {
    save_network(a.output, result.network);
    if (a.trace) {
      const std::string path = a.output + ".trace.json";
      std::ofstream t(path);
      if (!t) throw Error(ErrorCode::Io, "cannot write " + path);
      t << trace_to_json(result.trace).dump(1) << '\n';
      summary << "trace " << path << '\n';
    }
  }
  return kOk;
}

struct EvalArgs {
  std::string network;
  std::string points;
  bool exact = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const ThresholdNetwork net = load_network(a.network);
  const auto rows = load_csv_rows(a.points);
  const std::size_t d = net.input_dimension();
  std::optional<ExactNetwork> exact;
  if (a.exact) exact = to_exact(net);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    // A trailing label column is ignored so training files evaluate directly.
    if (row.size() != d && row.size() != d + 1)
      throw Error(ErrorCode::DimensionMismatch,
                  fmt::format("row {} has {} columns, network expects {}", i, row.size(), d));
    const Point x(std::vector<double>(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(d)));
    if (exact)
      out << evaluate(*exact, x).str() << '\n';
    else
      out << format_double(evaluate(net, x)) << '\n';
  }
  return kOk;
}

struct AuditArgs {
  std::string check;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t samples = 1000;
  std::size_t d = 2;
  std::string network;
  std::string data;
  bool json_output = false;
  double lo = -1.0;
  double hi = 1.0;
};

int cmd_audit(const AuditArgs& a, std::ostream& out, std::ostream& err) {
  err << fmt::format("# audit check={} seed={} samples={} d={}\n", a.check, a.seed, a.samples, a.d);
  std::optional<ThresholdNetwork> net;
  if (!a.network.empty()) net = load_network(a.network);
  auto need_net = [&] {
    if (!net) throw Error(ErrorCode::InvalidArgument, "--check " + a.check + " needs --net");
    return *net;
  };

  AuditReport report;
  // a non-monotone input net is a validation error, not a falsification
  bool falsifies = true;
  if (a.check == "structure") {
    report = certify_monotone_structure(need_net());
    falsifies = false;
  } else if (a.check == "monotone") {
    const auto n = need_net();
    report = probe_monotonicity(n, a.lo, a.hi, a.samples, a.seed);
    falsifies = n.is_monotone();
  } else if (a.check == "convexity") {
    if (net) {
      report = relu_convexity_probe(*net, a.samples, a.seed, a.lo, a.hi);
      if (net->input_dimension() == 1) {
        const GapWitness g = sqrt_gap_witness(*net);
        report.details["sqrt_gap"] = g.gap;
        report.details["sqrt_gap_at"] = g.x;
      }
    } else {
      report = convexity_campaign(a.samples, a.seed);
    }
  } else if (a.check == "depth2") {
    report = net ? depth2_inequality_audit(*net, net->input_dimension())
                 : depth2_campaign(a.d, a.samples, a.seed);
  } else {
    if (net && !a.data.empty()) {
      report = chain_width_audit(*net, validate_dataset(load_dataset_csv(a.data)));
    } else if (net || !a.data.empty()) {
      throw Error(ErrorCode::InvalidArgument, "chain-width needs both --net and --data, or neither");
    } else {
      report = chain_width_campaign(a.samples, a.seed);
    }
  }

  if (a.json_output)
    out << to_json(report).dump(2) << '\n';
  else
    out << to_table(report);
  if (report.passed) return kOk;
  return falsifies ? kFalsified : kValidationError;
}

struct ApproxArgs {
  std::string fn;
  std::string table;
  std::size_t d = 1;
  double lipschitz = -1.0;
  double eps = 0.1;
  std::size_t probes = 10'000;
  std::uint64_t seed = kDefaultSeed;
  std::size_t budget = 1'000'000;
  std::string output;
};

int cmd_approx(const ApproxArgs& a, std::ostream& out, std::ostream& err) {
  NamedFunction f;
  std::vector<LabeledPoint> table;
  std::size_t d = a.d;
  if (!a.table.empty()) {
    table = load_dataset_csv(a.table);
    if (table.empty()) throw Error(ErrorCode::Schema, "tabulated function has no rows");
    d = table.front().x.dimension();
    if (a.lipschitz < 0.0)
      throw Error(ErrorCode::InvalidArgument, "--L is required with --table");
    f = {"table", tabulated_function(table), a.lipschitz};
  } else {
    f = builtin_function(a.fn, d);
    if (a.lipschitz >= 0.0) f.lipschitz = a.lipschitz;
  }
  err << fmt::format("# approx fn={} d={} L={} eps={} probes={} seed={} budget={}\n", f.name, d,
                     format_double(f.lipschitz), format_double(a.eps), a.probes, a.seed, a.budget);

  const Approximation approx = build_approximator(f.f, d, f.lipschitz, a.eps, a.budget);
  double sup_error = 0.0;
  json worst;
  std::size_t probes = 0;
  if (table.empty()) {
    const ProbeResult probe = probe_sup_error(approx.network, f.f, a.probes, a.seed);
    sup_error = probe.sup_error;
    probes = probe.probes;
    if (probe.worst.dimension() > 0)
      worst = std::vector<double>(probe.worst.coords().begin(), probe.worst.coords().end());
  } else {
    // The oracle is only defined on its rows, so those are the probes.
    for (const auto& row : table) {
      const double e = std::abs(evaluate(approx.network, row.x) - row.y);
      if (e >= sup_error) {
        sup_error = e;
        worst = std::vector<double>(row.x.coords().begin(), row.x.coords().end());
      }
    }
    probes = table.size();
  }

  const GridSpec& g = approx.grid;
  out << "function " << f.name << '\n';
  out << "dimension " << d << '\n';
  out << "lipschitz " << format_double(f.lipschitz) << '\n';
  out << "eps " << format_double(a.eps) << '\n';
  out << "delta " << format_double(g.delta) << '\n';
  out << "spacing " << format_double(g.spacing) << '\n';
  out << "points_per_axis " << g.points_per_axis() << '\n';
  out << "grid_points " << g.point_count() << '\n';
  out << "size_bound " << format_double(g.size_bound()) << '\n';
  out << "widths " << widths_string(approx.network.hidden_widths()) << '\n';
  out << "hidden_units " << approx.network.hidden_units() << '\n';
  out << "predicted_hidden_units " << g.predicted_hidden_units() << '\n';
  out << "empirical_lipschitz " << format_double(approx.empirical_lipschitz) << '\n';
  out << "probes " << probes << '\n';
  out << "sup_error " << format_double(sup_error) << '\n';
  out << "worst " << worst.dump() << '\n';

  if (!a.output.empty()) save_network(a.output, approx.network);
  if (approx.lipschitz_exceeded) {
    err << "warning: sampled difference quotients exceed the declared Lipschitz constant ("
        << format_double(approx.empirical_lipschitz) << " > " << format_double(f.lipschitz)
        << "); the error guarantee does not apply\n";
    return kOk;
  }
  return sup_error <= a.eps ? kOk : kFalsified;
}

struct MatchArgs {
  std::size_t n = 2;
  std::string p;
  std::string mode = "exact";
  double eps = 0.05;
  double fail_prob = 1e-6;
  std::uint64_t seed = kDefaultSeed;
  int q = 0;
  std::uint64_t r = 0;
  std::size_t exact_limit = kDefaultExactLimit;
};

bool parse_whole(std::string_view s, double& v) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

EdgeProbabilityMatrix parse_probabilities(const std::string& spec, std::size_t n) {
  double scalar = 0.0;
  if (parse_whole(spec, scalar)) return EdgeProbabilityMatrix::uniform(n, scalar);
  std::vector<double> entries;
  if (std::filesystem::exists(spec)) {
    for (const auto& row : load_csv_rows(spec)) entries.insert(entries.end(), row.begin(), row.end());
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      std::size_t stop = spec.find_first_of(",;", start);
      if (stop == std::string::npos) stop = spec.size();
      double v = 0.0;
      if (!parse_whole(std::string_view(spec).substr(start, stop - start), v))
        throw Error(ErrorCode::Schema, "--p is neither a number, a file, nor an inline matrix");
      entries.push_back(v);
      start = stop + 1;
    }
  }
  if (entries.size() != n * n)
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("--p has {} entries, expected {}", entries.size(), n * n));
  return EdgeProbabilityMatrix(n, std::move(entries));
}

int cmd_matchprob(const MatchArgs& a, std::ostream& out, std::ostream& err) {
  const EdgeProbabilityMatrix p = parse_probabilities(a.p, a.n);
  out << "mode " << a.mode << '\n';
  out << "n " << a.n << '\n';
  if (a.mode == "exact") {
    out << "value " << format_double(exact_matching_probability(p, a.exact_limit)) << '\n';
    return kOk;
  }
  EstimatorConfig cfg = default_parameters(a.n, a.eps, a.fail_prob, a.seed);
  if (a.q > 0) cfg.q = a.q;
  if (a.r > 0) cfg.r = a.r;
  cfg.validate();
  err << fmt::format("# matchprob seed={} q={} r={} delta={} eps={} fail-prob={}\n", cfg.seed, cfg.q,
                     cfg.r, format_double(cfg.delta), format_double(a.eps),
                     format_double(a.fail_prob));
  const MatchingEstimate est = estimate_matching_probability(p, cfg);
  out << "value " << format_double(est.value) << '\n';
  out << "successes " << est.successes << '\n';
  out << "samples " << est.samples << '\n';
  out << "q " << cfg.q << '\n';
  out << "r " << cfg.r << '\n';
  out << "delta " << format_double(cfg.delta) << '\n';
  out << "seed " << cfg.seed << '\n';
  out << "error_bound " << format_double(guaranteed_error_bound(a.n, cfg)) << '\n';
  out << "tight_error_bound " << format_double(tight_error_bound(a.n, cfg)) << '\n';
  out << "failure_probability " << format_double(failure_probability(cfg)) << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monotone threshold networks: interpolation, approximation, audits, matching"};
  app.name("monotone");
  app.set_config("--config", "", "Read options from a TOML/INI file; command-line flags win");
  app.require_subcommand(1, 1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Build an interpolating network for a dataset CSV");
  synth->add_option("dataset", synth_args.dataset, "CSV rows: coordinates then label")->required();
  synth->add_option("--ordered", synth_args.ordered, "Builder selection")
      ->check(CLI::IsMember({"auto", "force-general"}))
      ->capture_default_str();
  synth->add_flag("--trace", synth_args.trace, "Emit the construction trace");
  synth->add_flag("--exact", synth_args.exact, "Also check interpolation in rational arithmetic");
  synth->add_option("-o,--output", synth_args.output, "Network JSON path");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a network on a points CSV");
  eval->add_option("network", eval_args.network)->required();
  eval->add_option("points", eval_args.points)->required();
  eval->add_flag("--exact", eval_args.exact, "Print exact rational outputs");

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "Run a property audit");
  audit->add_option("--check", audit_args.check)
      ->required()
      ->check(CLI::IsMember({"structure", "monotone", "convexity", "depth2", "chain-width"}));
  audit->add_option("--seed", audit_args.seed)->capture_default_str();
  audit->add_option("--samples", audit_args.samples, "Probes, or networks for campaigns")
      ->capture_default_str();
  audit->add_option("--d", audit_args.d, "Input dimension for depth2 campaigns")->capture_default_str();
  audit->add_option("--net", audit_args.network, "Network JSON to audit");
  audit->add_option("--data", audit_args.data, "Chain dataset CSV for chain-width");
  audit->add_option("--lo", audit_args.lo, "Probe box lower corner")->capture_default_str();
  audit->add_option("--hi", audit_args.hi, "Probe box upper corner")->capture_default_str();
  audit->add_flag("--json", audit_args.json_output, "Emit JSON instead of a table");

  ApproxArgs approx_args;
  auto* approx = app.add_subcommand("approx", "Build a grid approximator of a monotone function");
  auto* fn_opt = approx->add_option("--fn", approx_args.fn,
                                    "linear, mean, min, max, sqrt[:eta], constant:c");
  auto* table_opt = approx->add_option("--table", approx_args.table, "Tabulated function CSV");
  fn_opt->excludes(table_opt);
  approx->add_option("--d", approx_args.d)->capture_default_str();
  approx->add_option("--L", approx_args.lipschitz, "Lipschitz constant (defaults to the declared one)");
  approx->add_option("--eps", approx_args.eps)->capture_default_str();
  approx->add_option("--probes", approx_args.probes)->capture_default_str();
  approx->add_option("--seed", approx_args.seed)->capture_default_str();
  approx->add_option("--budget", approx_args.budget, "Maximum grid points")->capture_default_str();
  approx->add_option("-o,--output", approx_args.output, "Network JSON path");

  MatchArgs match_args;
  auto* match = app.add_subcommand("matchprob", "Perfect-matching probability of G(p)");
  match->add_option("--n", match_args.n)->required();
  match->add_option("--p", match_args.p, "Scalar, inline row-major matrix, or CSV file")->required();
  match->add_option("--mode", match_args.mode)
      ->check(CLI::IsMember({"exact", "estimate"}))
      ->capture_default_str();
  match->add_option("--eps", match_args.eps)->capture_default_str();
  match->add_option("--fail-prob", match_args.fail_prob)->capture_default_str();
  match->add_option("--seed", match_args.seed)->capture_default_str();
  match->add_option("--q", match_args.q, "Override truncation bits");
  match->add_option("--r", match_args.r, "Override sample count");
  match->add_option("--exact-limit", match_args.exact_limit)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_args, out, err);
    if (eval->parsed()) return cmd_eval(eval_args, out);
    if (audit->parsed()) return cmd_audit(audit_args, out, err);
    if (approx->parsed()) {
      if (approx_args.fn.empty() && approx_args.table.empty())
        throw Error(ErrorCode::InvalidArgument, "approx needs --fn or --table");
      return cmd_approx(approx_args, out, err);
    }
    return cmd_matchprob(match_args, out, err);
  } catch (const Error& e) {
    diagnose(err, e);
    return e.is_validation() ? kValidationError : kIoError;
  }
}

}  // namespace monotone::cli
