#include "dilatelab/rational.hpp"

namespace dilatelab {

Rat rat_pow(const Rat& base, unsigned long exp) {
  Rat out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  out.canonicalize();
  return out;
}

std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

double rat_double(const Rat& q) { return q.get_d(); }

}  // namespace dilatelab
