#pragma once

// Command-line front end: `solve`, `sweep` and `conserved`.
//
// Exit codes: 0 success, 1 numerical failure (blow-up, singular matrix, no
// admissible shape), 2 usage or configuration error.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "molrbf/analysis.hpp"
#include "molrbf/discretization.hpp"
#include "molrbf/errors.hpp"
#include "molrbf/format.hpp"
#include "molrbf/gfkdv.hpp"
#include "molrbf/integrator.hpp"
#include "molrbf/kernels.hpp"
#include "molrbf/solutions.hpp"

namespace molrbf::cli {

using nlohmann::json;

enum ExitCode : int { kSuccess = 0, kNumericalFailure = 1, kUsageError = 2 };

class UsageError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// Numerical failure that is not a blow-up or singular factorization.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numeric shape or one of the named rules.
struct ShapeChoice {
  enum class Rule { Value, Hardy, Franke };
  Rule rule = Rule::Value;
  double value = 5451.0;

  static ShapeChoice parse(const std::string& text) {
    if (text == "hardy") return {Rule::Hardy, 0.0};
    if (text == "franke") return {Rule::Franke, 0.0};
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      throw UsageError("shape must be a number, 'hardy' or 'franke': '" + text + "'");
    }
    if (used != text.size()) throw UsageError("trailing characters in shape '" + text + "'");
    return {Rule::Value, v};
  }

  double resolve(const NodeSet& nodes) const {
    switch (rule) {
    case Rule::Hardy: return hardy_shape(nodes);
    case Rule::Franke: return franke_shape(nodes);
    case Rule::Value: break;
    }
    return value;
  }

  json to_json() const {
    if (rule == Rule::Hardy) return "hardy";
    if (rule == Rule::Franke) return "franke";
    return value;
  }
};

enum class Format { Csv, Json };

struct ShapeRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct RunConfig {
  Preset preset = Preset::Lax;
  Family kernel = Family::Ga;
  ShapeChoice shape{};
  double k = 0.001;
  double x0 = 0.0;
  double x_min = -6.0;
  double x_max = 6.0;
  std::size_t n = 121;
  double dt = 0.01;
  double t_end = 2.0;
  std::size_t snapshot_every = 10;
  std::string out = ".";
  Format format = Format::Csv;
  double cond_cap = 1e18;
  unsigned jobs = 0;
  // sweep only
  std::vector<double> shapes;
  std::optional<ShapeRange> shape_range;
};

inline json to_json(const RunConfig& c) {
  json j = {
      {"preset", std::string(to_string(c.preset))},
      {"kernel", std::string(to_string(c.kernel))},
      {"shape", c.shape.to_json()},
      {"k", c.k},
      {"x0", c.x0},
      {"x_min", c.x_min},
      {"x_max", c.x_max},
      {"n", c.n},
      {"dt", c.dt},
      {"t_end", c.t_end},
      {"snapshot_every", c.snapshot_every},
      {"out", c.out},
      {"format", c.format == Format::Csv ? "csv" : "json"},
      {"cond_cap", c.cond_cap},
      {"jobs", c.jobs},
  };
  if (!c.shapes.empty()) j["shapes"] = c.shapes;
  if (c.shape_range)
    j["shape_range"] = {{"min", c.shape_range->lo}, {"max", c.shape_range->hi}, {"count", c.shape_range->count}};
  return j;
}

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw UsageError("format must be csv or json, got '" + s + "'");
}

inline ShapeRange parse_shape_range(const std::string& text) {
  // min:max:count
  ShapeRange r;
  char sep1 = 0;
  char sep2 = 0;
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  if (!(in >> r.lo >> sep1 >> r.hi >> sep2 >> r.count) || sep1 != ':' || sep2 != ':' || !in.eof())
    throw UsageError("shape range must look like min:max:count, got '" + text + "'");
  return r;
}

/// Overlay the keys present in `j` onto `c`. A summary document is accepted
/// too: its "config" member is used.
inline void merge_json(RunConfig& c, const json& doc) {
  const json& j = doc.contains("config") ? doc.at("config") : doc;
  try {
    if (j.contains("preset")) c.preset = parse_preset(j.at("preset").get<std::string>());
    if (j.contains("kernel")) c.kernel = parse_family(j.at("kernel").get<std::string>());
    if (j.contains("shape")) {
      const auto& s = j.at("shape");
      c.shape = s.is_string() ? ShapeChoice::parse(s.get<std::string>())
                              : ShapeChoice{ShapeChoice::Rule::Value, s.get<double>()};
    }
    if (j.contains("k")) c.k = j.at("k").get<double>();
    if (j.contains("x0")) c.x0 = j.at("x0").get<double>();
    if (j.contains("x_min")) c.x_min = j.at("x_min").get<double>();
    if (j.contains("x_max")) c.x_max = j.at("x_max").get<double>();
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("t_end")) c.t_end = j.at("t_end").get<double>();
    if (j.contains("snapshot_every")) c.snapshot_every = j.at("snapshot_every").get<std::size_t>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("format")) c.format = parse_format(j.at("format").get<std::string>());
    if (j.contains("cond_cap")) c.cond_cap = j.at("cond_cap").get<double>();
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
    if (j.contains("shapes")) c.shapes = j.at("shapes").get<std::vector<double>>();
    if (j.contains("shape_range")) {
      const auto& r = j.at("shape_range");
      c.shape_range = ShapeRange{r.at("min").get<double>(), r.at("max").get<double>(),
                                 r.at("count").get<std::size_t>()};
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  RunConfig c;
  try {
    merge_json(c, json::parse(in));
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return c;
}

/// Everything a run needs, built and validated before any file is touched.
struct Setup {
  NodeSet nodes;
  GfKdvProblem problem;
  std::size_t steps = 0;
};

inline Setup prepare(const RunConfig& c) {
  try {
    if (c.snapshot_every == 0) throw UsageError("snapshot-every must be at least 1");
    if (!(c.cond_cap > 0.0)) throw UsageError("cond-cap must be positive");
    if (!(c.t_end >= 0.0)) throw UsageError("t-end must be nonnegative");
    NodeSet nodes = build_uniform_nodes(c.x_min, c.x_max, c.n);
    GfKdvProblem problem = preset(c.preset, c.k, c.x0, {c.x_min, c.x_max});
    const std::size_t steps = step_count(0.0, c.t_end, c.dt);
    if (c.shape.rule == ShapeChoice::Rule::Value) KernelSpec(c.kernel, c.shape.value);
    return {std::move(nodes), std::move(problem), steps};
  } catch (const UsageError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

inline std::filesystem::path ensure_out_dir(const RunConfig& c) {
  std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
  return f;
}

/// Table writer shared by all commands: CSV with a header row, or a JSON
/// array of row objects.
class TableWriter {
public:
  TableWriter(std::vector<std::string> columns, Format format)
      : columns_(std::move(columns)), format_(format) {}

  // Empty optional cells become empty CSV fields / JSON null.
  void add(const std::vector<std::optional<double>>& row) { rows_.push_back(row); }

  std::string extension() const { return format_ == Format::Csv ? ".csv" : ".json"; }

  void write(std::ostream& out) const {
    if (format_ == Format::Csv) {
      for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
      out << '\n';
      for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) out << ',';
          if (row[i]) out << format_double(*row[i]);
        }
        out << '\n';
      }
      return;
    }
    json arr = json::array();
    for (const auto& row : rows_) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (!row[i]) obj[columns_[i]] = nullptr;
        else if (std::isfinite(*row[i])) obj[columns_[i]] = *row[i];
        else obj[columns_[i]] = format_double(*row[i]);
      }
      arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << '\n';
  }

private:
  std::vector<std::string> columns_;
  Format format_;
  std::vector<std::vector<std::optional<double>>> rows_;
};

inline json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

/// `solve`: integrate, write the snapshots table and summary.json.
inline json run_solve(const RunConfig& c, std::ostream& log = std::cout) {
  const auto start = std::chrono::steady_clock::now();
  Setup s = prepare(c);
  const double shape = c.shape.resolve(s.nodes);
  KernelSpec spec = [&] {
    try {
      return KernelSpec(c.kernel, shape);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }();
  const Operators ops = assemble(s.nodes, spec);
  const Vector u0 = sample_initial(s.problem, s.nodes);
  const Trajectory tr = integrate(s.problem, ops, u0, 0.0, c.t_end, c.dt, c.snapshot_every);

  const auto dir = ensure_out_dir(c);
  TableWriter table({"t", "x", "u_numeric", "u_exact", "error"}, c.format);
  for (std::size_t m = 0; m < tr.times.size(); ++m) {
    const double t = tr.times[m];
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      const double u = tr.states[m](static_cast<Eigen::Index>(i));
      std::optional<double> ex;
      std::optional<double> err;
      if (s.problem.has_exact()) {
        ex = s.problem.exact(s.nodes[i], t);
        err = std::abs(u - *ex);
      }
      table.add({t, s.nodes[i], u, ex, err});
    }
  }
  {
    auto f = open_output(dir / ("snapshots" + table.extension()));
    table.write(f);
  }

  const double h = (c.x_max - c.x_min) / static_cast<double>(c.n - 1);
  json summary = {{"config", to_json(c)}, {"shape", shape}};
  if (s.problem.has_exact()) {
    Vector exact(u0.size());
    for (std::size_t i = 0; i < s.nodes.size(); ++i)
      exact(static_cast<Eigen::Index>(i)) = s.problem.exact(s.nodes[i], tr.final_time());
    const ErrorReport e = error_norms(tr.final_state(), exact, h);
    summary["max_error"] = e.max_error;
    summary["l2_error"] = e.l2_error;
    summary["rms_error"] = e.rms_error;
  }
  summary["condition_number"] = number_or_string(ops.condition());
  summary["ill_conditioned"] = ops.ill_conditioned();
  summary["fill_distance"] = ops.fill_distance();
  summary["steps"] = s.steps;
  summary["t_final"] = tr.final_time();
  summary["i1_initial"] = conserved_i1(tr.states.front(), s.nodes);
  summary["i2_initial"] = conserved_i2(tr.states.front(), s.nodes, ops, c.preset);
  summary["i1_final"] = conserved_i1(tr.final_state(), s.nodes);
  summary["i2_final"] = conserved_i2(tr.final_state(), s.nodes, ops, c.preset);
  summary["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    auto f = open_output(dir / "summary.json");
    f << summary.dump(2) << '\n';
  }
  if (ops.ill_conditioned())
    log << "warning: condition number " << format_double(ops.condition()) << " exceeds 1e18\n";
  if (summary.contains("max_error"))
    log << "max_error " << format_double(summary["max_error"].get<double>()) << "\n";
  return summary;
}

/// `sweep`: one row per candidate shape, selected shape printed.
inline SweepResult run_sweep(const RunConfig& c, std::ostream& log = std::cout) {
  Setup s = prepare(c);
  std::vector<double> shapes = c.shapes;
  if (c.shape_range) {
    try {
      const auto r = log_spaced(c.shape_range->lo, c.shape_range->hi, c.shape_range->count);
      shapes.insert(shapes.end(), r.begin(), r.end());
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }
  if (shapes.empty()) throw UsageError("sweep needs --shapes or --shape-range");
  for (double v : shapes)
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("sweep shapes must be positive");

  SweepOptions opt;
  opt.condition_cap = c.cond_cap;
  opt.jobs = c.jobs;
  SweepResult res = sweep_shape(s.problem, s.nodes, c.kernel, shapes, c.dt, c.t_end, opt);

  const auto dir = ensure_out_dir(c);
  TableWriter table({"shape", "max_error", "l2_error", "rms_error", "condition"}, c.format);
  for (const auto& r : res.rows) table.add({r.shape, r.max_error, r.l2_error, r.rms_error, r.condition});
  {
    auto f = open_output(dir / ("sweep" + table.extension()));
    table.write(f);
  }
  if (!res.selected) throw NumericalError("no candidate shape has finite error within the condition cap");
  log << "selected shape: " << format_double(*res.selected) << "\n";
  return res;
}

struct ConservedSeries {
  std::vector<double> t;
  std::vector<double> i1;
  std::vector<double> i2;
};

/// `conserved`: I1 and I2 at every snapshot plus relative drift.
inline ConservedSeries run_conserved(const RunConfig& c, std::ostream& log = std::cout) {
  Setup s = prepare(c);
  const double shape = c.shape.resolve(s.nodes);
  KernelSpec spec = [&] {
    try {
      return KernelSpec(c.kernel, shape);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }();
  const Operators ops = assemble(s.nodes, spec);
  const Trajectory tr =
      integrate(s.problem, ops, sample_initial(s.problem, s.nodes), 0.0, c.t_end, c.dt, c.snapshot_every);

  ConservedSeries out;
  TableWriter table({"t", "i1", "i2"}, c.format);
  for (std::size_t m = 0; m < tr.times.size(); ++m) {
    out.t.push_back(tr.times[m]);
    out.i1.push_back(conserved_i1(tr.states[m], s.nodes));
    out.i2.push_back(conserved_i2(tr.states[m], s.nodes, ops, c.preset));
    table.add({out.t.back(), out.i1.back(), out.i2.back()});
  }
  const auto dir = ensure_out_dir(c);
  {
    auto f = open_output(dir / ("conserved" + table.extension()));
    table.write(f);
  }
  auto drift = [](const std::vector<double>& v) {
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, std::abs(x - v.front()));
    return v.front() != 0.0 ? worst / std::abs(v.front()) : worst;
  };
  log << "i1 initial " << format_double(out.i1.front()) << " final " << format_double(out.i1.back())
      << " drift " << format_double(drift(out.i1)) << "\n";
  log << "i2 initial " << format_double(out.i2.front()) << " final " << format_double(out.i2.back())
      << " drift " << format_double(drift(out.i2)) << "\n";
  return out;
}

namespace detail {

struct Flags {
  std::string config, preset, kernel, shape, out, format, shape_range;
  double k = 0, x0 = 0, x_min = 0, x_max = 0, dt = 0, t_end = 0, cond_cap = 0;
  long long n = 0, snapshot_every = 0, jobs = 0;
  std::vector<double> shapes;
};

inline void add_run_options(CLI::App* app, Flags& f, bool sweep) {
  app->add_option("--config", f.config, "JSON config file (a summary.json also works)");
  app->add_option("--preset", f.preset, "lax | sk");
  app->add_option("--kernel", f.kernel, "mq | imq | ga");
  app->add_option("--shape", f.shape, "shape parameter, or hardy | franke");
  app->add_option("--k", f.k, "soliton wave number");
  app->add_option("--x0", f.x0, "initial crest position");
  app->add_option("--xmin", f.x_min, "left domain end");
  app->add_option("--xmax", f.x_max, "right domain end");
  app->add_option("--n", f.n, "number of nodes (>= 6)");
  app->add_option("--dt", f.dt, "time step");
  app->add_option("--t-end", f.t_end, "final time");
  app->add_option("--snapshot-every", f.snapshot_every, "record every n-th step");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--format", f.format, "csv | json table output");
  app->add_option("--cond-cap", f.cond_cap, "largest admissible condition number in sweeps");
  app->add_option("--jobs", f.jobs, "sweep worker threads (0 = all cores)");
  if (sweep) {
    app->add_option("--shapes", f.shapes, "explicit candidate list")->delimiter(',');
    app->add_option("--shape-range", f.shape_range, "log-spaced candidates min:max:count");
  }
}

inline RunConfig resolve_config(const CLI::App* app, const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config_file(f.config);
  auto given = [&](const char* name) { return app->count(name) > 0; };
  try {
    if (given("--preset")) c.preset = parse_preset(f.preset);
    if (given("--kernel")) c.kernel = parse_family(f.kernel);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (given("--shape")) c.shape = ShapeChoice::parse(f.shape);
  if (given("--k")) c.k = f.k;
  if (given("--x0")) c.x0 = f.x0;
  if (given("--xmin")) c.x_min = f.x_min;
  if (given("--xmax")) c.x_max = f.x_max;
  auto nonneg = [](long long v, const char* name) {
    if (v < 0) throw UsageError(std::string(name) + " must be nonnegative");
    return static_cast<std::size_t>(v);
  };
  if (given("--n")) c.n = nonneg(f.n, "--n");
  if (given("--dt")) c.dt = f.dt;
  if (given("--t-end")) c.t_end = f.t_end;
  if (given("--snapshot-every")) c.snapshot_every = nonneg(f.snapshot_every, "--snapshot-every");
  if (given("--out")) c.out = f.out;
  if (given("--format")) c.format = parse_format(f.format);
  if (given("--cond-cap")) c.cond_cap = f.cond_cap;
  if (given("--jobs")) c.jobs = static_cast<unsigned>(nonneg(f.jobs, "--jobs"));
  if (app->get_name() == "sweep") {
    if (given("--shapes")) c.shapes = f.shapes;
    if (given("--shape-range")) c.shape_range = parse_shape_range(f.shape_range);
  }
  return c;
}

} // namespace detail

/// Parse arguments and run. Never throws; returns an ExitCode.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Meshless RBF method-of-lines solver for fifth-order KdV solitons"};
  app.require_subcommand(1);
  detail::Flags solve_flags, sweep_flags, conserved_flags;
  auto* solve = app.add_subcommand("solve", "integrate one configuration");
  auto* sweep = app.add_subcommand("sweep", "brute-force shape parameter sweep");
  auto* conserved = app.add_subcommand("conserved", "conserved densities along a run");
  detail::add_run_options(solve, solve_flags, false);
  detail::add_run_options(sweep, sweep_flags, true);
  detail::add_run_options(conserved, conserved_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (solve->parsed()) run_solve(detail::resolve_config(solve, solve_flags), out);
    else if (sweep->parsed()) run_sweep(detail::resolve_config(sweep, sweep_flags), out);
    else if (conserved->parsed()) run_conserved(detail::resolve_config(conserved, conserved_flags), out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const BlowUpError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const SingularMatrixError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kSuccess;
}

} // namespace molrbf::cli
