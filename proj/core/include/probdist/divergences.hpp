#pragma once

#include <string>

#include "probdist/measures.hpp"

namespace probdist {

// f-divergences of the form D_f(Q, P) = sum_x p(x) f(q(x) / p(x)), with
// generators f and conjugates f* taken from the classical table:
//
//   kind                 f(t)                        dom f*       f*(u)
//   TotalVariation       |t - 1| / 2                 [-1/2, 1/2]  u
//   KL                   t log t                     R            exp(u - 1)
//   ReverseKL            -log t                      R_-          -1 - log(-u)
//   GanJensenShannon     t log t - (t+1) log(t+1)    R_-          -log(1 - exp(u))
enum class FDivergenceKind { kTotalVariation, kKL, kReverseKL, kGanJensenShannon };

std::string to_string(FDivergenceKind kind);
FDivergenceKind parse_fdivergence(const std::string& name);

// Generator f(t) for t >= 0 (f(0) is the right limit, possibly +inf).
double f_generator(FDivergenceKind kind, double t);
// lim_{t -> inf} f(t) / t, the weight given to mass of Q outside supp(P).
double f_recession(FDivergenceKind kind);

bool in_conjugate_domain(FDivergenceKind kind, double u);
// Closed-form convex conjugate f*(u); throws DomainError outside dom f*.
double conjugate_eval(FDivergenceKind kind, double u);

// D_f(Q, P) - f(1) over the union of both supports, atoms identified by exact
// coordinate equality. Subtracting f(1) only matters for the GAN generator,
// whose f(1) = -log 4; it makes every kind vanish exactly when Q = P.
// Returns +inf when the divergence is infinite.
double f_divergence(FDivergenceKind kind, const DiscreteMeasure& q, const DiscreteMeasure& p);

// 1/2 sum |q_i - p_i| over the union support.
double total_variation(const DiscreteMeasure& q, const DiscreteMeasure& p);

}  // namespace probdist
