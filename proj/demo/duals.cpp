// Walks the q -> 1/q recipe on sum q^n/(-q;q)_{2n}: invert the Eulerian form, read off
// Appell-Lerch candidates from the partial theta side, fill in z and compare.

#include <iostream>

#include "qseries/descriptor.hpp"
#include "qseries/eval.hpp"

using namespace qseries;

int main() {
  const std::string eulerian = "sum(n>=0) q^n/poch(-q;q;2*n)";
  const std::string theta_side =
      "sum(n>=0) q^(12*n^2+n)*(1-q^(22*n+11)) + q*sum(n>=0) q^(12*n^2+7*n)*(1-q^(10*n+5))";

  std::cout << "f(q)      = " << to_string(evaluate(eulerian, 12)) << "\n";
  std::cout << "theta     = " << to_string(evaluate(theta_side, 12)) << "\n";

  const auto dual = invert_q(to_descriptor(eulerian));
  std::cout << "\nf(1/q)    : " << to_string(dual) << "\n";
  std::cout << "          = " << to_string(evaluate_descriptor(dual, 12)) << "\n";

  auto cands = heuristic_candidates(to_descriptor(theta_side));
  std::cout << "\ncandidates:\n";
  for (const auto& c : cands) std::cout << "  " << to_string(c) << "\n";

  // z is not predicted by the heuristic; these are the values that close the identity
  const ParamValue zs[] = {qpow(4), qpow(22), qpow(4), qpow(10)};
  for (std::size_t i = 0; i < cands.size(); ++i) cands[i].z = zs[i];
  const auto lhs = evaluate_descriptor(dual, 40);
  const auto rhs = evaluate_candidates(cands, 40);
  const auto cmp = equal_to_order(lhs, rhs, 40);
  std::cout << "\nwith z filled in:\n";
  for (const auto& c : cands) std::cout << "  " << to_string(c) << "\n";
  std::cout << "agree to q^40: " << (cmp.pass ? "yes" : "no") << "\n";
  return cmp.pass ? 0 : 1;
}
