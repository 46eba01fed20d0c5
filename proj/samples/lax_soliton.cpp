// Integrates the Lax soliton with Gaussian collocation and prints the error
// norms and conserved densities at the final time.

#include <iostream>

#include "molrbf/molrbf.hpp"

int main() {
  using namespace molrbf;

  const auto problem = preset(Preset::Lax, 0.001, 0.0, {-6.0, 6.0});
  const auto nodes = build_uniform_nodes(-6.0, 6.0, 121);
  const auto ops = assemble(nodes, KernelSpec(Family::Ga, 5451.0));

  const Trajectory tr = integrate(problem, ops, sample_initial(problem, nodes), 0.0, 2.0, 0.01, 50);

  Vector exact(tr.final_state().size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    exact(static_cast<Eigen::Index>(i)) = problem.exact(nodes[i], tr.final_time());
  const auto e = error_norms(tr.final_state(), exact, *nodes.spacing());

  std::cout << "cond(A)   " << format_double(ops.condition()) << "\n"
            << "max error " << format_double(e.max_error) << "\n"
            << "L2 error  " << format_double(e.l2_error) << "\n"
            << "RMS error " << format_double(e.rms_error) << "\n";
  for (std::size_t m = 0; m < tr.times.size(); ++m)
    std::cout << "t=" << tr.times[m] << "  I1=" << format_double(conserved_i1(tr.states[m], nodes))
              << "  I2=" << format_double(conserved_i2(tr.states[m], nodes, ops, Preset::Lax)) << "\n";
}
