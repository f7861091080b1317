// Walks the lower-bound pipeline end to end: the constant c(a), the
// extremal function behind chi_a, and the chain P(t) >= t chi_a on a real
// sequence.

#include <iostream>

#include "disclab/disclab.hpp"

int main() {
  using namespace disclab;

  const auto best = optimize_constant(3.0, 4.0, 1e-10);
  std::cout << "a*            = " << format_real(best.a_star) << '\n'
            << "c(a*)         = " << format_real(best.c_star_lower) << '\n'
            << "chi_{a*}      = " << format_real(chi_lower_bound(best.a_star)) << '\n';

  const auto p = AdmissibleParams::make(best.a_star, 1);
  const auto strong = assemble_extremal(p, ExtremalMode::strong);
  const auto report = check_condition_A(strong.function, p);
  std::cout << "extremal f**  : " << strong.qprime_count << " Q' + " << strong.qdoubleprime_count
            << " Q'' parts, integral " << format_real(strong.integral) << ", strongly admissible "
            << (report.strongly_admissible() ? "yes" : "no") << '\n';

  const auto oracle = oracle_minimize(p, OracleFamily::structured, 64);
  std::cout << "oracle minimum: " << format_real(oracle.minimum) << " (real part counts)\n";

  const auto points = generate(VanDerCorput{2}, 1000);
  std::cout << "van der Corput, P(t) against t chi_a:\n";
  for (const auto& step : p_chain_check(points, best.a_star, 5))
    std::cout << "  t=" << step.t << " N=" << step.N << "  P=" << format_real(step.p)
              << "  bound=" << format_real(step.bound) << (step.pass ? "" : "  FAIL") << '\n';
}
