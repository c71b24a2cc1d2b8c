#include "rehf/bases.hpp"

#include <cmath>

namespace rehf {

Bases::Bases(cplx p_, cplx q_, int r_, Truncation tr) : p(p_), q(q_), r(r_) {
  if (r < 1) throw domain_error("Bases: r must be a positive integer");
  if (p == cplx{} || q == cplx{} || std::abs(p) >= 1.0 || std::abs(q) >= 1.0)
    throw domain_error("Bases: need 0 < |p|, |q| < 1");
  pq = p * q;
  p_r = ipow(p, r);
  q_r = ipow(q, r);
  sqrt_pq = principal_sqrt(pq);
  sqrt_p_over_q = principal_sqrt(p / q);
  sqrt_q_over_p = 1.0 / sqrt_p_over_q;
  poch_p_r = qpochhammer_inf(p_r, p_r, tr);
  poch_q_r = qpochhammer_inf(q_r, q_r, tr);
}

Bases Bases::swapped() const {
  Bases b;
  b.p = q;
  b.q = p;
  b.r = r;
  b.pq = pq;
  b.p_r = q_r;
  b.q_r = p_r;
  b.sqrt_pq = sqrt_pq;
  b.sqrt_p_over_q = sqrt_q_over_p;
  b.sqrt_q_over_p = sqrt_p_over_q;
  b.poch_p_r = poch_q_r;
  b.poch_q_r = poch_p_r;
  return b;
}

}  // namespace rehf
