#include "resonance/numerics/summation.hpp"

namespace resonance::numerics {

double stable_sum(std::span<const double> terms) {
  CompensatedSum<double> acc;
  for (double x : terms) acc.add(x);
  return acc.value();
}

std::complex<double> stable_sum(std::span<const std::complex<double>> terms) {
  CompensatedComplexSum<double> acc;
  for (const auto& z : terms) acc.add(z);
  return acc.value();
}

}  // namespace resonance::numerics
