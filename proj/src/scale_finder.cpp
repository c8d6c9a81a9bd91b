#include "magnify/scale_finder.hpp"

#include "magnify/error.hpp"

#include <cmath>
#include <sstream>

namespace magnify {

void ConvergenceSpec::validate() const {
  if (!(epsilon_prop > 0.0 && epsilon_prop < 1.0)) {
    throw Error(ErrorKind::invalid_input, "epsilon_prop must lie in (0, 1)");
  }
  if (!(t_tolerance > 0.0) || max_bracket_doublings <= 0 || max_bisections <= 0) {
    throw Error(ErrorKind::invalid_input, "convergence tolerances must be positive");
  }
}

ConvergencePoint find_convergence_scale(const DistanceMatrix& d, const ConvergenceSpec& spec,
                                        const KernelOptions& options) {
  spec.validate();
  const Eigen::Index n = d.size();
  if (n < 2) throw Error(ErrorKind::degenerate_space, "need at least two points to find t_conv");
  d.require_magnitude_ready();

  const double target = (1.0 - spec.epsilon_prop) * static_cast<double>(n);
  int evaluations = 0;
  auto eval = [&](double t) {
    ++evaluations;
    return magnitude_at(d, t, options);
  };

  // Invariant once bracketed: M(lo) < target <= M(hi).
  double lo = 0.0;
  double hi = 0.0;
  double m_hi = 0.0;
  double t = 1.0;
  double m = eval(t);
  if (m >= target) {
    hi = t;
    m_hi = m;
    int halvings = 0;
    for (;;) {
      if (halvings++ >= spec.max_bracket_doublings) {
        throw Error(ErrorKind::no_convergence, "magnitude stays above target while halving t");
      }
      t *= 0.5;
      m = eval(t);
      if (m < target) break;
      hi = t;
      m_hi = m;
    }
    lo = t;
  } else {
    lo = t;
    int doublings = 0;
    for (;;) {
      if (doublings++ >= spec.max_bracket_doublings) {
        std::ostringstream os;
        os << "target " << target << " not reached by t = " << t;
        throw Error(ErrorKind::no_convergence, os.str());
      }
      t *= 2.0;
      m = eval(t);
      if (m >= target) break;
      lo = t;
    }
    hi = t;
    m_hi = m;
  }

  for (int k = 0; k < spec.max_bisections && (hi - lo) > spec.t_tolerance * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double m_mid = eval(mid);
    if (m_mid >= target) {
      hi = mid;
      m_hi = m_mid;
    } else {
      lo = mid;
    }
  }
  return {hi, m_hi, evaluations};
}

}  // namespace magnify
