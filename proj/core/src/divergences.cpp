#include "probdist/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

#include "probdist/errors.hpp"

namespace probdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LexLess {
  bool operator()(const std::vector<double>& a, const std::vector<double>& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// Aligned masses (q_i, p_i) over the union of atoms.
std::vector<std::pair<double, double>> align(const DiscreteMeasure& q, const DiscreteMeasure& p) {
  if (q.dim() != p.dim()) {
    throw DimensionMismatch("divergence between measures of dimension " + std::to_string(q.dim()) +
                            " and " + std::to_string(p.dim()));
  }
  std::map<std::vector<double>, std::pair<double, double>, LexLess> acc;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const auto a = q.atom(i);
    acc[std::vector<double>(a.data(), a.data() + a.size())].first += q.weight(i);
  }
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const auto a = p.atom(j);
    acc[std::vector<double>(a.data(), a.data() + a.size())].second += p.weight(j);
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(acc.size());
  for (const auto& [key, masses] : acc) out.push_back(masses);
  return out;
}

// Perspective p f(q / p), extended to p = 0 by its limit.
double perspective(FDivergenceKind kind, double q, double p) {
  if (p > 0.0) {
    if (q == 0.0) return p * f_generator(kind, 0.0);
    return p * f_generator(kind, q / p);
  }
  if (q == 0.0) return 0.0;
  return q * f_recession(kind);
}

}  // namespace

std::string to_string(FDivergenceKind kind) {
  switch (kind) {
    case FDivergenceKind::kTotalVariation: return "tv";
    case FDivergenceKind::kKL: return "kl";
    case FDivergenceKind::kReverseKL: return "reverse-kl";
    case FDivergenceKind::kGanJensenShannon: return "gan-js";
  }
  return "?";
}

FDivergenceKind parse_fdivergence(const std::string& name) {
  if (name == "tv") return FDivergenceKind::kTotalVariation;
  if (name == "kl") return FDivergenceKind::kKL;
  if (name == "reverse-kl") return FDivergenceKind::kReverseKL;
  if (name == "gan-js") return FDivergenceKind::kGanJensenShannon;
  throw DomainError("unknown f-divergence '" + name + "'");
}

double f_generator(FDivergenceKind kind, double t) {
  if (t < 0.0) throw DomainError("f-divergence generator evaluated at negative ratio");
  switch (kind) {
    case FDivergenceKind::kTotalVariation: return 0.5 * std::abs(t - 1.0);
    case FDivergenceKind::kKL: return t == 0.0 ? 0.0 : t * std::log(t);
    case FDivergenceKind::kReverseKL: return t == 0.0 ? kInf : -std::log(t);
    case FDivergenceKind::kGanJensenShannon:
      return (t == 0.0 ? 0.0 : t * std::log(t)) - (t + 1.0) * std::log1p(t);
  }
  return 0.0;
}

double f_recession(FDivergenceKind kind) {
  switch (kind) {
    case FDivergenceKind::kTotalVariation: return 0.5;
    case FDivergenceKind::kKL: return kInf;
    case FDivergenceKind::kReverseKL: return 0.0;
    case FDivergenceKind::kGanJensenShannon: return 0.0;
  }
  return 0.0;
}

bool in_conjugate_domain(FDivergenceKind kind, double u) {
  switch (kind) {
    case FDivergenceKind::kTotalVariation: return u >= -0.5 && u <= 0.5;
    case FDivergenceKind::kKL: return std::isfinite(u);
    case FDivergenceKind::kReverseKL:
    case FDivergenceKind::kGanJensenShannon: return u < 0.0;
  }
  return false;
}

double conjugate_eval(FDivergenceKind kind, double u) {
  if (!in_conjugate_domain(kind, u)) {
    throw DomainError("u = " + std::to_string(u) + " outside dom f* for " + to_string(kind));
  }
  switch (kind) {
    case FDivergenceKind::kTotalVariation: return u;
    case FDivergenceKind::kKL: return std::exp(u - 1.0);
    case FDivergenceKind::kReverseKL: return -1.0 - std::log(-u);
    case FDivergenceKind::kGanJensenShannon: return -std::log1p(-std::exp(u));
  }
  return 0.0;
}

double f_divergence(FDivergenceKind kind, const DiscreteMeasure& q, const DiscreteMeasure& p) {
  double total = 0.0;
  for (const auto& [qi, pi] : align(q, p)) {
    total += perspective(kind, qi, pi);
    if (std::isinf(total)) return kInf;
  }
  // Sum of the normalized perspective; clamp rounding noise below zero.
  return std::max(0.0, total - f_generator(kind, 1.0));
}

double total_variation(const DiscreteMeasure& q, const DiscreteMeasure& p) {
  double total = 0.0;
  for (const auto& [qi, pi] : align(q, p)) total += std::abs(qi - pi);
  return 0.5 * total;
}

}  // namespace probdist
