// Tenth-order duals on the lattice q^(1/3): each dual, rescaled by q -> q^3, is a
// root-of-unity combination of another dual, written as a weighted 3-dissection.

#include <chrono>
#include <iostream>

#include "qseries/corpus.hpp"

using namespace qseries;

int main() {
  int failures = 0;
  for (const auto* r : list_identities("G6")) {
    if (!r->has_tag("corollary") && !r->has_tag("comparison")) continue;
    const auto rep = verify_record(*r);
    std::cout << (rep.pass() ? "ok   " : "FAIL ") << r->id << "  (order " << rep.order.str() << ", "
              << static_cast<long>(rep.millis) << " ms)\n";
    if (!rep.pass()) ++failures;
  }

  // the same computation by hand for the first one
  const std::string phi_d = corpus_detail::forms::phi_d, psi_d = corpus_detail::forms::psi_d;
  const Lattice lat{3};
  auto lhs = evaluate("q^(-2/3)*rescale(" + phi_d + "; 3)", 10, lat);
  auto rhs = evaluate("wdissect(rescale(" + psi_d + "; 1/3); 3; 0, -1, 1)", 10, lat);
  std::cout << "\nlhs = " << to_string(lhs) << "\nrhs = " << to_string(rhs) << "\n";
  return failures == 0 ? 0 : 1;
}
