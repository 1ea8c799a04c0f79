// Small tour: radius, minimal translation and ranges for a few 2x2 pairs.

#include <iomanip>
#include <iostream>

#include "transrad/transrad.hpp"

using namespace transrad;

namespace {

void show(const char* name, const Matrix& t, const Matrix& a) {
  const OperatorPair pair(t, a, {});
  const RadiusResult r = radius(pair);
  const TranslationResult tr = minimal_translation(pair);
  std::cout << std::setw(22) << std::left << name << " M = " << std::setprecision(10) << r.value
            << "  |T - l0 A| = " << tr.min_norm << "  l0 = " << tr.lambda0
            << "  dist(0, W(A)) = " << pair.wrange_distance() << '\n';
}

}  // namespace

int main() {
  const Matrix id = Matrix::Identity(2, 2);
  Matrix jordan = Matrix::Zero(2, 2);
  jordan(0, 1) = 1.0;
  Matrix d1(2, 2);
  d1 << 1.0, 0.0, 0.0, -1.0;
  Matrix d2(2, 2);
  d2 << 1.0, 0.0, 0.0, 2.0;

  show("jordan, I", jordan, id);
  show("diag(1,-1), I", d1, id);
  show("diag(1,-1), diag(1,2)", d1, d2);
  show("I, diag(1,2)", id, d2);

  // Jordan block at A = I: radius 1, spectrum {0}, numerical radius 1/2.
  const Circle spec = spectrum_radius(jordan);
  const Circle nr = enclosing_circle(sample_numerical_range(jordan, 4000, 1));
  std::cout << "jordan spectrum circle radius " << spec.radius << ", sampled W(T) circle radius " << nr.radius
            << '\n';
  return 0;
}
