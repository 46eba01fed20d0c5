// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "molrbf/molrbf.hpp"

#ifndef MOLRBF_CLI_PATH
#error "MOLRBF_CLI_PATH must name the CLI executable"
#endif

using namespace molrbf;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(4);
  s << std::scientific << v;
  return s.str();
}

std::string name(Preset p) { return std::string(to_string(p)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double final_max_error(const GfKdvProblem& p, const NodeSet& nodes, const Operators& ops, double dt, double t_end) {
  const auto tr = integrate(p, ops, sample_initial(p, nodes), 0.0, t_end, dt, step_count(0.0, t_end, dt));
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    worst = std::max(worst, std::abs(tr.final_state()(static_cast<Eigen::Index>(i)) - p.exact(nodes[i], t_end)));
  return worst;
}

void anchor(int id, Preset preset, bool check_condition) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = molrbf::preset(preset, 0.001, 0.0, {-6.0, 6.0});
  const auto nodes = build_uniform_nodes(-6.0, 6.0, 121);
  const auto ops = assemble(nodes, KernelSpec(Family::Ga, 5451.0));
  const double err = final_max_error(p, nodes, ops, 0.01, 2.0);
  const double secs = seconds_since(t0);
  bool ok = err <= 1e-15 && secs <= 5.0;
  std::string detail = "max error " + sci(err);
  if (check_condition) {
    ok = ok && std::abs(ops.condition() - 1.0) <= 1e-12;
    detail += ", cond " + sci(ops.condition());
  }
  detail += ", " + sci(secs) + " s";
  report(id, name(preset) + "/GA anchor", ok, detail);
}

void small_wave_number() {
  const auto nodes = build_uniform_nodes(-6.0, 6.0, 121);
  const auto shapes = log_spaced(100.0, 10000.0, 9);
  bool ok = true;
  std::string detail;
  for (Preset preset : {Preset::Lax, Preset::Sk}) {
    const auto p = molrbf::preset(preset, 1e-5, 0.0, {-6.0, 6.0});
    const auto r = sweep_shape(p, nodes, Family::Ga, shapes, 0.01, 2.0, {1e18, 0});
    double err = std::numeric_limits<double>::infinity();
    if (r.selected)
      for (const auto& row : r.rows)
        if (row.shape == *r.selected) err = row.max_error;
    ok = ok && r.selected && err <= 1e-18;
    detail += (detail.empty() ? "" : "; ") + name(preset) + " shape " +
              (r.selected ? sci(*r.selected) : std::string("none")) + " max error " + sci(err);
  }
  report(3, "small-k anchor", ok, detail);
}

void conserved() {
  const auto nodes = build_uniform_nodes(-6.0, 6.0, 121);
  const auto ops = assemble(nodes, KernelSpec(Family::Ga, 5451.0));
  struct Row {
    Preset preset;
    double i1, i2;
  };
  bool ok = true;
  std::string detail;
  for (const Row& row : {Row{Preset::Lax, 4.7999e-5, 2.5812e-16}, Row{Preset::Sk, 2.4000e-5, 3.2263e-17}}) {
    const auto p = preset(row.preset, 0.001, 0.0, {-6.0, 6.0});
    const auto tr = integrate(p, ops, sample_initial(p, nodes), 0.0, 2.0, 0.01, 1);
    const double i1 = conserved_i1(tr.states.front(), nodes);
    const double i2 = conserved_i2(tr.states.front(), nodes, ops, row.preset);
    double drift = 0.0;
    for (const auto& s : tr.states) drift = std::max(drift, std::abs(conserved_i1(s, nodes) - i1) / std::abs(i1));
    const double e1 = std::abs(i1 - row.i1) / row.i1;
    const double e2 = std::abs(i2 - row.i2) / row.i2;
    ok = ok && e1 <= 1e-4 && e2 <= 0.02 && drift <= 1e-6;
    detail += (detail.empty() ? "" : "; ") + name(row.preset) + " I1 " + sci(i1) + " (rel " + sci(e1) + ") I2 " +
              sci(i2) + " (rel " + sci(e2) + ") drift " + sci(drift);
  }
  report(4, "conserved quantities", ok, detail);
}

void kernel_derivatives() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_shape(-1.0, 1.0);
  std::uniform_real_distribution<double> rel_offset(0.2, 2.5);
  std::bernoulli_distribution flip(0.5);
  double worst = 0.0;
  int checked = 0;
  bool enough = true;
  for (Family f : {Family::Mq, Family::Imq, Family::Ga}) {
    for (int n = 1; n <= 5; ++n) {
      int accepted = 0;
      for (int attempt = 0; accepted < 20 && attempt < 2000; ++attempt) {
        const double c = std::pow(10.0, log_shape(rng)) * (f == Family::Ga ? 10.0 : 1.0);
        const KernelSpec spec(f, c);
        const double scale = f == Family::Ga ? 1.0 / std::sqrt(c) : c;
        const double s = (flip(rng) ? -1.0 : 1.0) * rel_offset(rng) * scale;
        const double analytic = kernel_derivative(spec, s, 0.0, n);
        if (std::abs(analytic) < 5e-2 * kernel_value(spec, 0.0) / std::pow(scale, n)) continue;
        using L = long double;
        auto phi = [&](L x) { return kernel_value<L>(spec, std::abs(x)); };
        const auto fd = static_cast<double>(central_difference<L>(phi, s, 0.04L * scale, n, 8));
        worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
        ++accepted;
        ++checked;
      }
      enough = enough && accepted == 20;
    }
  }
  report(5, "kernel derivatives", enough && worst <= 1e-6,
         std::to_string(checked) + " samples, worst relative error " + sci(worst));
}

void residual() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-6.0, 6.0);
  std::uniform_real_distribution<double> t(0.0, 2.0);
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 50; ++i) pts.emplace_back(x(rng), t(rng));
  const SolitonParams sp(0.001, 0.0);
  const double lax = pde_residual(Preset::Lax, sp, pts);
  const double sk = pde_residual(Preset::Sk, sp, pts);
  report(6, "exact-solution residual", lax <= 1e-18 && sk <= 1e-18, "lax " + sci(lax) + ", sk " + sci(sk));
}

void rk4_order() {
  auto error = [](double dt) {
    auto f = [](double u, double) { return -u; };
    double u = 1.0;
    const auto steps = step_count(0.0, 1.0, dt);
    for (std::size_t i = 0; i < steps; ++i) u = rk4_step(f, u, static_cast<double>(i) * dt, dt);
    return std::abs(u - std::exp(-1.0));
  };
  const double ratio = error(0.1) / error(0.05);
  report(7, "RK4 order", ratio >= 14.0 && ratio <= 18.0, "error ratio " + sci(ratio));
}

// Oracle (numpy, same grid): max |M1 sin - cos| = 9.4878e-2 for MQ c = 0.2.
void differentiation() {
  const auto nodes = build_uniform_nodes(-6.0, 6.0, 121);
  const auto mq = assemble(nodes, KernelSpec(Family::Mq, 0.2));
  Vector s(121), c(121);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    s(static_cast<Eigen::Index>(i)) = std::sin(nodes[i]);
    c(static_cast<Eigen::Index>(i)) = std::cos(nodes[i]);
  }
  const double sin_err = (mq.derivative(1) * s - c).cwiseAbs().maxCoeff();
  bool ok = std::abs(sin_err - 9.4878e-2) <= 1e-3 * 9.4878e-2;

  const double hardy = hardy_shape(nodes);
  double worst = 0.0;
  for (auto [family, shape] : std::vector<std::pair<Family, double>>{
           {Family::Mq, hardy}, {Family::Imq, hardy}, {Family::Ga, 20.0}, {Family::Ga, 5451.0}}) {
    const KernelSpec spec(family, shape);
    const auto ops = assemble(nodes, spec);
    for (int d = 1; d <= 5; ++d) {
      const Matrix b = collocation_matrix(nodes, spec, d);
      worst = std::max(worst, (ops.derivative(d) * ops.interpolation() - b).norm() / b.norm());
    }
  }
  ok = ok && worst <= 1e-10;
  report(8, "differentiation accuracy", ok,
         "MQ c=0.2 sin error " + sci(sin_err) + ", worst relative M_d A - B_d " + sci(worst));
}

void sweep_behavior() {
  const auto nodes = build_uniform_nodes(-6.0, 6.0, 121);
  std::vector<double> shapes;
  for (int j = -4; j <= 1; ++j) shapes.push_back(5451.0 * std::pow(10.0, j / 2.0));
  bool ok = true;
  std::string detail;
  for (Preset preset : {Preset::Lax, Preset::Sk}) {
    const auto p = molrbf::preset(preset, 0.001, 0.0, {-6.0, 6.0});
    const auto r = sweep_shape(p, nodes, Family::Ga, shapes, 0.01, 2.0, {1e18, 0});
    double at_table = 0.0, at_selected = std::numeric_limits<double>::infinity();
    for (const auto& row : r.rows) {
      if (row.shape == 5451.0) at_table = row.max_error;
      if (r.selected && row.shape == *r.selected) at_selected = row.max_error;
    }
    const bool high_one = std::abs(r.rows[4].condition - 1.0) <= 1e-12 && std::abs(r.rows[5].condition - 1.0) <= 1e-12;
    const bool low_above = r.rows[0].condition > 1.0 && r.rows[1].condition > 1.0;
    ok = ok && r.selected && at_selected <= at_table && high_one && low_above;
    detail += (detail.empty() ? "" : "; ") + name(preset) + " selected " +
              (r.selected ? sci(*r.selected) : std::string("none")) + " error " + sci(at_selected) + " vs " +
              sci(at_table) + ", cond " + sci(r.rows[0].condition) + " -> " + sci(r.rows[5].condition);
  }
  report(9, "sweep behavior", ok, detail);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

void determinism() {
  const fs::path base = fs::temp_directory_path() / "molrbf_acceptance_determinism";
  fs::remove_all(base);
  bool ran = true;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + MOLRBF_CLI_PATH + "\" solve --preset sk --out \"" +
                            (base / run).string() + "\" > /dev/null 2>&1";
    ran = ran && std::system(cmd.c_str()) == 0;
  }
  const std::string a = slurp(base / "a" / "snapshots.csv");
  const std::string b = slurp(base / "b" / "snapshots.csv");
  const bool ok = ran && !a.empty() && a == b;
  report(10, "determinism", ok, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different"));
  fs::remove_all(base);
}

} // namespace

int main() {
  const std::vector<std::function<void()>> criteria{
      [] { anchor(1, Preset::Lax, true); },
      [] { anchor(2, Preset::Sk, false); },
      small_wave_number,
      conserved,
      kernel_derivatives,
      residual,
      rk4_order,
      differentiation,
      sweep_behavior,
      determinism};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i) + 1, "criterion", false, std::string("exception: ") + e.what());
    }
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
