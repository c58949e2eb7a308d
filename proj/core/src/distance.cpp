#include "probdist/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "probdist/kernels.hpp"
#include "probdist/transport.hpp"

namespace probdist {

std::string Distance::name() const {
  std::ostringstream os;
  if (kind_ == Kind::kEnergy) {
    os << "energy[" << metric_.name() << "]";
  } else {
    os << "W" << p_ << "[" << metric_.name() << "]";
  }
  return os.str();
}

double Distance::operator()(const DiscreteMeasure& q, const DiscreteMeasure& p) const {
  if (kind_ == Kind::kEnergy) return std::sqrt(std::max(0.0, energy_distance_sq(q, p, metric_)));
  return probdist::wasserstein(q, p, metric_, p_);
}

}  // namespace probdist
