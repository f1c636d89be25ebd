#include <random>

#include "doctest.h"
#include "holo/core.hpp"
#include "holo/errors.hpp"

using namespace holo;

namespace {

QubitKet qk(cplx a, cplx b) {
  QubitKet v;
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("embed_computational maps onto levels 0 and 2") {
  auto a = embed_computational(qk(1, 0)).amplitudes();
  CHECK(a(0) == cplx(1));
  CHECK(a(1) == cplx(0));
  CHECK(a(2) == cplx(0));
  CHECK(a(3) == cplx(0));

  auto b = embed_computational(qk(0, 1)).amplitudes();
  CHECK(b(2) == cplx(1));
  CHECK(b(0) == cplx(0));

  const double r = 1 / std::sqrt(2.0);
  auto c = embed_computational(qk(r, r)).amplitudes();
  CHECK(std::abs(c(0) - r) < 1e-15);
  CHECK(std::abs(c(2) - r) < 1e-15);
  CHECK(c(1) == cplx(0));
  CHECK(c(3) == cplx(0));
}

TEST_CASE("non-normalized inputs are rejected") {
  CHECK_THROWS_AS(embed_computational(qk(1, 1)), ValidationError);
  CHECK_THROWS_AS(StateVector(Ket4<double>::Ones()), ValidationError);
  CHECK_NOTHROW(embed_computational(qk(1.0 + 2e-13, 0)));
}

TEST_CASE("density matrix invariants") {
  Operator m = Operator::Identity() * 0.25;
  CHECK_NOTHROW(DensityMatrix{m});

  Operator bad_trace = Operator::Identity() * 0.3;
  CHECK_THROWS_AS(DensityMatrix{bad_trace}, ValidationError);

  Operator nonherm = m;
  nonherm(0, 1) = 1e-6;
  CHECK_THROWS_AS(DensityMatrix{nonherm}, ValidationError);

  Operator negative = Operator::Zero();
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{negative}, ValidationError);

  // Tiny negative eigenvalues inside the tolerance are accepted.
  Operator almost = Operator::Zero();
  almost(0, 0) = 1.0 + 5e-10;
  almost(1, 1) = -5e-10;
  CHECK_NOTHROW(DensityMatrix{almost});
}

TEST_CASE("state fidelity examples") {
  auto g = StateVector::basis(0);
  auto f = StateVector::basis(2);
  CHECK(state_fidelity(g, DensityMatrix::pure(g)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(state_fidelity(g, DensityMatrix::pure(f)) == doctest::Approx(0.0));
  CHECK(state_fidelity(g, DensityMatrix::maximally_mixed()) == doctest::Approx(0.25));
}

TEST_CASE("state fidelity of pure states is the squared overlap and phase blind") {
  std::mt19937 rng(7);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial) {
    Ket4<double> a, b;
    for (int i = 0; i < 4; ++i) {
      a(i) = cplx(n(rng), n(rng));
      b(i) = cplx(n(rng), n(rng));
    }
    a.normalize();
    b.normalize();
    StateVector psi(a), phi(b);
    double expect = std::norm(a.dot(b));
    CHECK(state_fidelity(psi, DensityMatrix::pure(phi)) == doctest::Approx(expect).epsilon(1e-12));
    StateVector rotated(Ket4<double>(a * std::polar(1.0, 1.234)));
    CHECK(state_fidelity(rotated, DensityMatrix::pure(phi)) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("computational leakage") {
  CHECK(computational_leakage(DensityMatrix::pure(StateVector::basis(0))) == 0.0);
  CHECK(computational_leakage(DensityMatrix::pure(StateVector::basis(1))) == 1.0);
  CHECK(computational_leakage(DensityMatrix::maximally_mixed()) == doctest::Approx(0.5));

  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  Operator x;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) x(i, j) = cplx(n(rng), n(rng));
  Operator m = x * x.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint()).eval();
  DensityMatrix rho(m);
  CHECK(std::abs(computational_leakage(rho) + rho.population(0) + rho.population(2) - 1.0) < 1e-10);
}

TEST_CASE("linear algebra helpers") {
  Operator h = Operator::Zero();
  h(0, 1) = cplx(0.3, 0.1);
  h(1, 0) = std::conj(h(0, 1));
  h(2, 2) = 0.7;
  Operator u = propagator(h, 2.0);
  CHECK(unitarity_error(u) < 1e-14);
  // exp(-i h t) for a diagonal entry
  CHECK(std::abs(u(2, 2) - std::polar(1.0, -1.4)) < 1e-14);

  QubitOperator m;
  m << 2.0, 0.0, 0.0, cplx(0, 0.5);
  QubitOperator p = polar_unitary(m);
  CHECK(std::abs(p(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(p(1, 1) - kI) < 1e-14);
}
