// Builds a few algebras and prints how they split into orthogonal factors.

#include <iostream>

#include "nlie/nlie.hpp"

using namespace nlie;

static void show(const char* name, const MetricNAlgebra& m) {
  const StructureReport r = structure_report(m);
  std::cout << "== " << name << "\n" << emit_report_text(r) << "\n";
}

int main() {
  show("simple 3-algebra, signs ++-+", simple(3, SignVector::parse("++-+")));
  show("lorentzian family n=4, m=2", theorem_family(4, 2));

  // A euclidean sum hidden by a change of basis.
  const MetricNAlgebra sum = direct_sum(simple(3, SignVector::all_plus(4)), abelian(3, BilinearForm::identity(2)));
  Matrix phi = Matrix::identity(6);
  // Rotation by (3/5, 4/5) mixing e1 with e5, still an isometry of the identity form.
  phi(0, 0) = Rational(3, 5);
  phi(0, 4) = Rational(-4, 5);
  phi(4, 0) = Rational(4, 5);
  phi(4, 4) = Rational(3, 5);
  show("s(3) + R^2, rotated", transport(sum, phi));
}
