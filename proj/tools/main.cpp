// SPDX-License-Identifier: MIT
//
// ence — nonclassical-correlation toolbox.
//
// Subcommands:
//   gen         write a named or random state to a density-matrix text file
//   measure     evaluate one measure on one state, JSON to stdout
//   sweep       evaluate measures along a parameter range, CSV out
//   detect      product-eigenbasis oracle + full measure table, JSON verdict
//   splittings  Qtilde per bipartite splitting with min/max/avg, JSON
//
// Exit codes: 0 success, 1 argument error, 2 invalid density matrix,
// 3 numerical failure, 4 I/O error.

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ence/ence.hpp"

namespace {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Input resolution
// ---------------------------------------------------------------------------

struct InputArgs {
  std::string state;             // named state or generator family
  std::string in_path;           // density-matrix file
  std::optional<double> p;       // pseudo_entangled parameter
  std::vector<int> dims;         // for maximally-mixed / random families
  std::uint64_t seed = 0;        // for random families
};

std::string normalize_name(std::string name) {
  for (char& c : name)
    if (c == '-') c = '_';
  if (name == "ps") return "pseudo_entangled";
  return name;
}

// Builds the state from --state/--in.  Random families are resolved here;
// everything else goes through the named-state constructor.
ence::DensityMatrix resolve_state(const InputArgs& args) {
  if (args.state.empty() == args.in_path.empty())
    throw ence::ArgumentError(
        "BadParameter: exactly one of --state and --in is required");

  if (!args.in_path.empty()) {
    if (args.p || !args.dims.empty())
      throw ence::ArgumentError(
          "BadParameter: --p/--dims apply to named states, not --in files");
    return ence::read_density_file(args.in_path);
  }

  const std::string name = normalize_name(args.state);
  if (name == "random") {
    std::vector<int> dims = args.dims.empty() ? std::vector<int>{2, 2} : args.dims;
    return ence::random_density(dims, args.seed);
  }
  if (name == "random_pe") {
    std::vector<int> dims = args.dims.empty() ? std::vector<int>{2, 2} : args.dims;
    if (dims.size() != 2)
      throw ence::ArgumentError("BadParameter: random-pe takes exactly two dims");
    return ence::random_pe_state(dims[0], dims[1], args.seed);
  }

  std::map<std::string, double> params;
  if (args.p) params["p"] = *args.p;
  if (!args.dims.empty()) {
    if (name != "maximally_mixed")
      throw ence::ArgumentError("BadParameter: --dims applies to maximally-mixed "
                                "and the random families only");
    if (args.dims.size() != 2)
      throw ence::ArgumentError("BadParameter: maximally-mixed takes exactly two dims");
    params["dim_a"] = args.dims[0];
    params["dim_b"] = args.dims[1];
  }
  return ence::make_named_state(ence::NamedStateSpec{name, std::move(params)});
}

std::string input_label(const InputArgs& args) {
  return args.in_path.empty() ? normalize_name(args.state) : args.in_path;
}

// ---------------------------------------------------------------------------
// Map / measure options
// ---------------------------------------------------------------------------

ence::EnceMapSpec map_from_args(const std::string& map_name, double x,
                                const std::string& side_name) {
  ence::Side side;
  if (side_name == "right")
    side = ence::Side::Right;
  else if (side_name == "left")
    side = ence::Side::Left;
  else
    throw ence::ArgumentError("BadParameter: --side must be right or left, got '" +
                              side_name + "'");

  if (map_name == "transpose") return ence::EnceMapSpec::transpose(side);
  if (map_name == "power") {
    ence::check_power_exponent(x);
    return ence::EnceMapSpec::power(x, side);
  }
  throw ence::ArgumentError("BadParameter: --map must be transpose or power, got '" +
                            map_name + "'");
}

ordered_json spectrum_json(const ence::RealVector& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v(k));
  return arr;
}

const char* side_string(ence::SideTag tag) {
  switch (tag) {
    case ence::SideTag::Right: return "right";
    case ence::SideTag::Left: return "left";
    case ence::SideTag::Average: return "average";
    case ence::SideTag::None: return "n/a";
  }
  return "n/a";
}

double detection_threshold(const CLI::Option* tol_opt, double tol_flag) {
  if (tol_opt->count() > 0) {
    if (!std::isfinite(tol_flag) || tol_flag < 0.0)
      throw ence::ArgumentError("BadParameter: --tol must be a nonnegative number");
    return tol_flag;
  }
  if (const char* env = std::getenv("ENCE_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !std::isfinite(v) || v < 0.0)
      throw ence::ArgumentError("BadParameter: ENCE_TOL is not a nonnegative number: '" +
                                std::string(env) + "'");
    return v;
  }
  return ence::tol::detect;
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

void run_gen(const InputArgs& input, const std::string& out_path) {
  if (input.state.empty())
    throw ence::ArgumentError("BadParameter: gen requires --state");
  ence::DensityMatrix rho = resolve_state(input);
  ence::write_density_file(out_path, rho);
}

void run_measure(const InputArgs& input, const std::string& measure_name,
                 const std::string& map_name, double x, const std::string& side,
                 const std::vector<double>& weights, const std::vector<double>& xs) {
  ence::DensityMatrix rho = resolve_state(input);
  ence::MeasureResult res;
  if (measure_name == "d") {
    res = ence::measure_D(rho, map_from_args(map_name, x, side));
  } else if (measure_name == "q") {
    res = ence::measure_Q(rho, map_from_args(map_name, x, side));
  } else if (measure_name == "qtilde") {
    res = ence::measure_Q_tilde(rho, map_from_args(map_name, x, "right"));
  } else if (measure_name == "weighted") {
    if (weights.size() != xs.size() + 1)
      throw ence::ArgumentError(
          "BadParameter: --weights must list one transpose weight plus one weight "
          "per --xs entry");
    ence::WeightedMeasureSpec spec;
    spec.terms.push_back({ence::EnceMapSpec::Kind::Transpose, 2.0, weights[0]});
    for (std::size_t k = 0; k < xs.size(); ++k)
      spec.terms.push_back({ence::EnceMapSpec::Kind::PowerMap, xs[k], weights[k + 1]});
    res = ence::weighted_measure(rho, spec);
  } else {
    throw ence::ArgumentError(
        "BadParameter: --measure must be d, q, qtilde or weighted, got '" +
        measure_name + "'");
  }

  ordered_json out;
  out["state"] = input_label(input);
  out["dims"] = rho.dims;
  out["map"] = res.measure == ence::MeasureKind::Weighted ? "weighted" : map_name;
  if (res.measure != ence::MeasureKind::Weighted &&
      res.map.kind == ence::EnceMapSpec::Kind::PowerMap)
    out["x"] = res.map.x;
  else
    out["x"] = nullptr;
  out["side"] = side_string(res.side);
  out["measure"] = measure_name;
  out["value"] = res.value;
  out["spectrum_in"] = spectrum_json(res.spectrum_in);
  out["spectrum_out"] = spectrum_json(res.spectrum_out);
  std::cout << out.dump(2) << '\n';
}

void write_sweep_row(std::ostream& os, double param, const ence::DensityMatrix& rho,
                     const ence::EnceMapSpec& base) {
  ence::EnceMapSpec right = base;
  right.side = ence::Side::Right;
  ence::EnceMapSpec left = base;
  left.side = ence::Side::Left;
  const double d = ence::measure_D(rho, right).value;
  const double qr = ence::measure_Q(rho, right).value;
  const double ql = ence::measure_Q(rho, left).value;
  os << ence::detail::format_double(param) << ','
     << ence::detail::format_double(d) << ','
     << ence::detail::format_double(qr) << ','
     << ence::detail::format_double(ql) << ','
     << ence::detail::format_double((qr + ql) / 2.0) << '\n';
}

void run_sweep(const InputArgs& input, const std::string& param,
               double from, double to, int steps, const std::string& map_name,
               bool map_given, double x, const std::string& out_path) {
  if (steps < 1)
    throw ence::ArgumentError("BadParameter: --steps must be at least 1");
  if (!std::isfinite(from) || !std::isfinite(to))
    throw ence::ArgumentError("BadParameter: sweep bounds must be finite");

  std::ostringstream body;
  body << "param,value_D,value_Q_R,value_Q_L,value_Qtilde\n";

  const auto sample = [&](int k) {
    return steps == 1 ? from : from + (to - from) * k / double(steps - 1);
  };

  if (param == "p") {
    if (input.state.empty() || normalize_name(input.state) != "pseudo_entangled")
      throw ence::ArgumentError(
          "BadParameter: --param p sweeps the pseudo-entangled family; "
          "use --state ps");
    if (input.p)
      throw ence::ArgumentError("BadParameter: --p conflicts with --param p");
    const ence::EnceMapSpec base = map_from_args(map_name, x, "right");
    for (int k = 0; k < steps; ++k) {
      const double pv = sample(k);
      const ence::DensityMatrix rho =
          ence::make_named_state("pseudo_entangled", {{"p", pv}});
      write_sweep_row(body, pv, rho, base);
    }
  } else if (param == "x") {
    if (map_given && map_name != "power")
      throw ence::ArgumentError("BadParameter: --param x requires the power map");
    const ence::DensityMatrix rho = resolve_state(input);
    for (int k = 0; k < steps; ++k) {
      const double xv = sample(k);
      ence::check_power_exponent(xv);
      write_sweep_row(body, xv, rho, ence::EnceMapSpec::power(xv));
    }
  } else {
    throw ence::ArgumentError("BadParameter: --param must be p or x, got '" + param +
                              "'");
  }

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw ence::IoError("IoError: cannot open '" + out_path + "' for writing");
    out << body.str();
    out.flush();
    if (!out) throw ence::IoError("IoError: write to '" + out_path + "' failed");
  }
}

void run_detect(const InputArgs& input, double x, double threshold) {
  ence::DensityMatrix rho = resolve_state(input);
  ence::check_power_exponent(x);
  const auto splittings = ence::enumerate_bipartitions(rho.subsystem_count());

  ordered_json rows = ordered_json::array();
  ordered_json witnesses = ordered_json::array();
  bool any_nope = false, any_indet = false;
  double max_measure = 0.0;

  for (const auto& split : splittings) {
    const ence::PEVerdict verdict = ence::pe_oracle_bipartite(rho, split);
    if (verdict.status == ence::PEVerdict::Status::NoPE) any_nope = true;
    if (verdict.status == ence::PEVerdict::Status::Indeterminate) any_indet = true;
    if (!verdict.witness.empty())
      witnesses.push_back(split.label() + ": " + verdict.witness);

    const ence::DensityMatrix grouped = ence::regroup_bipartite(rho, split.left);
    ordered_json row;
    row["split"] = split.label();
    row["left"] = split.left;
    row["right"] = split.right;
    const auto put = [&](const char* key, ence::MeasureResult res) {
      row[key] = res.value;
      max_measure = std::max(max_measure, res.value);
    };
    using ence::EnceMapSpec;
    using ence::Side;
    put("d_r_transpose", ence::measure_D(grouped, EnceMapSpec::transpose(Side::Right)));
    put("d_l_transpose", ence::measure_D(grouped, EnceMapSpec::transpose(Side::Left)));
    put("q_r_transpose", ence::measure_Q(grouped, EnceMapSpec::transpose(Side::Right)));
    put("q_l_transpose", ence::measure_Q(grouped, EnceMapSpec::transpose(Side::Left)));
    put("qtilde_transpose",
        ence::measure_Q_tilde(grouped, EnceMapSpec::transpose()));
    put("d_r_power", ence::measure_D(grouped, EnceMapSpec::power(x, Side::Right)));
    put("d_l_power", ence::measure_D(grouped, EnceMapSpec::power(x, Side::Left)));
    put("q_r_power", ence::measure_Q(grouped, EnceMapSpec::power(x, Side::Right)));
    put("q_l_power", ence::measure_Q(grouped, EnceMapSpec::power(x, Side::Left)));
    put("qtilde_power", ence::measure_Q_tilde(grouped, EnceMapSpec::power(x)));
    rows.push_back(std::move(row));
  }

  const char* oracle = any_nope ? "NoPE" : (any_indet ? "Indeterminate" : "HasPE");
  const char* verdict = (any_nope || max_measure > threshold)
                            ? "nonclassical"
                            : (!any_indet ? "classical" : "undetected");

  ordered_json out;
  out["oracle"] = oracle;
  out["witnesses"] = witnesses;
  out["measures"] = rows;
  out["verdict"] = verdict;
  std::cout << out.dump(2) << '\n';
}

void run_splittings(const InputArgs& input, const std::string& map_name, double x) {
  ence::DensityMatrix rho = resolve_state(input);
  const ence::EnceMapSpec map_spec = map_from_args(map_name, x, "right");
  const ence::AggregateResult agg =
      ence::aggregate_measure(rho, map_spec, ence::Aggregator::Avg);

  ordered_json rows = ordered_json::array();
  for (const auto& entry : agg.table) {
    ordered_json row;
    row["split"] = entry.splitting.label();
    row["left"] = entry.splitting.left;
    row["right"] = entry.splitting.right;
    row["qtilde"] = entry.value;
    rows.push_back(std::move(row));
  }
  ordered_json out;
  out["splittings"] = rows;
  out["min"] = agg.min;
  out["max"] = agg.max;
  out["avg"] = agg.avg;
  std::cout << out.dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect and quantify nonclassical correlation of quantum states"};
  app.require_subcommand(1);

  // Shared option state (each subcommand wires the subset it supports).
  InputArgs input;
  std::string measure_name = "qtilde";
  std::string map_name = "transpose";
  std::string side = "right";
  double x = 2.0;
  std::vector<double> weights{1.0, 1.0};
  std::vector<double> xs{2.0};
  std::string out_path;
  std::string sweep_param;
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_steps = 0;
  double tol_flag = 0.0;

  const auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--state", input.state,
                    "Named state (ps|pseudo-entangled, zero-plus, bell, classical-cc, "
                    "one-way-cc, tripartite-cex, maximally-mixed) or random family "
                    "(random, random-pe)");
    cmd->add_option("--in", input.in_path, "Density-matrix text file");
    cmd->add_option("--p", [&input](const CLI::results_t& vals) {
      char* end = nullptr;
      const double v = std::strtod(vals[0].c_str(), &end);
      if (end == vals[0].c_str() || *end != '\0') return false;
      input.p = v;
      return true;
    }, "Parameter p for the pseudo-entangled family")->expected(1);
    cmd->add_option("--dims", input.dims,
                    "Subsystem dimensions for maximally-mixed / random families");
    cmd->add_option("--seed", input.seed, "Seed for the random families");
  };
  const auto add_map = [&](CLI::App* cmd) {
    cmd->add_option("--map", map_name, "Map kind: transpose (default) or power");
    cmd->add_option("--x", x, "Power-map parameter (default 2; must avoid 0 and 1)");
  };

  CLI::App* gen = app.add_subcommand("gen", "Write a state to a file");
  add_input(gen);
  gen->add_option("--out", out_path, "Output path")->required();
  gen->callback([&] { run_gen(input, out_path); });

  CLI::App* measure = app.add_subcommand("measure", "Evaluate one measure, JSON out");
  add_input(measure);
  add_map(measure);
  measure->add_option("--measure", measure_name, "d, q, qtilde (default) or weighted");
  measure->add_option("--side", side, "Side for d/q: right (default) or left");
  measure->add_option("--weights", weights,
                      "Weighted measure: transpose weight, then one weight per --xs");
  measure->add_option("--xs", xs, "Weighted measure: power-map parameters");
  measure->callback(
      [&] { run_measure(input, measure_name, map_name, x, side, weights, xs); });

  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep, CSV out");
  add_input(sweep);
  auto* sweep_map_opt = sweep->add_option("--map", map_name,
                                          "Map kind for p sweeps (default transpose)");
  sweep->add_option("--x", x, "Power-map parameter for p sweeps");
  sweep->add_option("--param", sweep_param, "Sweep variable: p or x")->required();
  sweep->add_option("--from", sweep_from, "First sample")->required();
  sweep->add_option("--to", sweep_to, "Last sample")->required();
  sweep->add_option("--steps", sweep_steps, "Sample count")->required();
  sweep->add_option("--out", out_path, "CSV file (default: stdout)");
  sweep->callback([&] {
    run_sweep(input, sweep_param, sweep_from, sweep_to, sweep_steps, map_name,
              sweep_map_opt->count() > 0, x, out_path);
  });

  CLI::App* detect = app.add_subcommand(
      "detect", "Oracle verdict plus per-splitting measure table, JSON out");
  add_input(detect);
  detect->add_option("--x", x, "Power-map parameter for the measure table (default 2)");
  auto* tol_opt = detect->add_option(
      "--tol", tol_flag, "Detection threshold (default 1e-7; also via ENCE_TOL)");
  detect->callback(
      [&] { run_detect(input, x, detection_threshold(tol_opt, tol_flag)); });

  CLI::App* splittings = app.add_subcommand(
      "splittings", "Qtilde per bipartite splitting with aggregates, JSON out");
  add_input(splittings);
  add_map(splittings);
  splittings->callback([&] { run_splittings(input, map_name, x); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ence::ArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ence::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ence::NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ence::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
