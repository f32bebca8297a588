#pragma once

#include <vector>

#include "sinespike/types.hpp"

namespace sinespike::detail {

// out_j = sum_t in_t e^{sign * i 2 pi t j / G}, t = 0..in.size()-1 folded modulo G.
std::vector<cplx> dft(const std::vector<cplx>& in, int G, int sign);

// Q(j/G) for Q(f) = sum_{l=1..n} q_l e^{-i 2 pi l f}; q holds q_1..q_n.
std::vector<cplx> eval_dual_grid(const CVector& q, int G);

// Q^{(order)}(f) at a single point by direct summation.
cplx eval_dual(const CVector& q, double f, int order = 0);

} // namespace sinespike::detail
