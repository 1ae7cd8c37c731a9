#include "lldpd/quadrature.hpp"

#include <string>

namespace lldpd {

QuadratureError::QuadratureError(double achieved, double requested)
    : std::runtime_error("adaptive quadrature did not converge: achieved error estimate " +
                         std::to_string(achieved) + " > requested " + std::to_string(requested)),
      achieved_(achieved),
      requested_(requested) {}

}  // namespace lldpd
