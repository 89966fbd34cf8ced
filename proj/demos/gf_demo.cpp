// Decompose a map, print both generating functions, and evaluate the flag gf
// at the root-of-unity tuple.
#include <iostream>

#include "splitcount/splitcount.hpp"

int main() {
  using namespace splitcount;

  const Endofunction T = parse_endofunction("2 3 4 5 6 2");
  const FunctionalGraph g = decompose(T);

  std::cout << "T = " << T.to_string() << "\n";
  std::cout << "components: " << g.components.size() << ", cycle length "
            << g.components[0].cycle_len() << "\n";
  std::cout << "g_T(t) = " << invariant_gf(g).to_string() << "\n";

  const int d = 3;
  const MultiPoly flag = flag_gf(g, d);
  std::cout << "g_T(t1,t2,t3) = " << flag.to_string() << "\n";

  const CyclotomicInteger value = eval_at_roots(flag, d, 1);
  std::cout << "g_T(z, z^2, z^3) = " << value.to_string() << "\n";
  std::cout << "sigma(3;T) = " << sigma_fast(g, d).sigma.get_str() << "\n";
  return 0;
}
