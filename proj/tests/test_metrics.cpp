#include "doctest.h"
#include "holo/errors.hpp"
#include "holo/metrics.hpp"

using namespace holo;

namespace {

Operator embed_block(const QubitOperator& b) {
  Operator u = Operator::Zero();
  u(0, 0) = b(0, 0);
  u(0, 2) = b(0, 1);
  u(2, 0) = b(1, 0);
  u(2, 2) = b(1, 1);
  u(1, 1) = 1.0;
  u(3, 3) = 1.0;
  return u;
}

SearchConfig quick_search(int budget) {
  SearchConfig c;
  c.budget = budget;
  c.search_states = 9;
  c.final_states = 41;
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("initial-state family") {
  CHECK(theta_sample(0, 8) == 0.0);
  CHECK(theta_sample(2, 8) == doctest::Approx(kPi / 2));
  CHECK(theta_sample(7, 8) < 2 * kPi);
  QubitKet s = theta_state(kPi / 3);
  CHECK(s(0).real() == doctest::Approx(0.5));
  CHECK(s(1).real() == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK_THROWS_AS(theta_sample(0, 0), ValidationError);
}

TEST_CASE("perfect propagator scores one") {
  for (auto g : {GateSpec::z(), GateSpec::hadamard(), GateSpec{0.7, 1.2, 2.5}}) {
    QubitOperator t = target_unitary(g);
    auto r = score_unitary(embed_block(t), t, 101);
    CHECK(r.f_g == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.leakage_rate == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    auto rp = score_unitary(embed_block(std::polar(1.0, 0.77) * t), t, 101);
    CHECK(rp.f_g == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("a wrong gate scores below one") {
  QubitOperator t = target_unitary(GateSpec::hadamard());
  auto r = score_unitary(embed_block(QubitOperator::Identity()), t, 101);
  CHECK(r.f_g < 0.9);
  // Identity vs Hadamard: mean |<psi|H|psi>|^2 over the real great circle is 1/2.
  CHECK(r.f_g == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gate fidelity is insensitive to the state-grid density") {
  TimeGrid grid{30.0, 600};
  auto dev = DeviceParams::paper_sim();
  auto g = GateSpec::hadamard();
  auto a = gate_fidelity(g, dev, {}, grid, 1001);
  auto b = gate_fidelity(g, dev, {}, grid, 2001);
  CHECK(std::abs(a.f_g - b.f_g) < 1e-5);
  CHECK(a.n_states == 1001);
  CHECK(a.f_s_named.count("plus") == 1);
  CHECK(a.f_s_named.count("zero") == 1);
}

TEST_CASE("closed channel and unitary scoring agree") {
  TimeGrid grid;
  auto dev = DeviceParams::paper_sim();
  dev.gamma1 = dev.gamma2 = 0.0;
  auto g = GateSpec::hadamard();
  auto env = build_drive(g, CorrectionParams::op(-0.3, 0.0), dev, grid);
  auto t = target_unitary(g);
  auto a = score_channel(evolve_channel(env, dev, grid, true), t, 101);
  auto b = score_unitary(evolve_unitary(env, dev, grid, true).u_full, t, 101);
  CHECK(a.f_g == doctest::Approx(b.f_g).epsilon(1e-9));
  CHECK(a.leakage_rate == doctest::Approx(b.leakage_rate).epsilon(1e-7));
}

TEST_CASE("named states") {
  CHECK(std::abs(named_state("plus")(1) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(named_state("one")(1) - 1.0) < 1e-15);
  CHECK_THROWS_AS(named_state("psi"), ConfigurationError);
}

TEST_CASE("error budget") {
  TimeGrid grid{30.0, 600};
  auto dev = DeviceParams::paper_sim();
  auto b = error_budget(GateSpec::hadamard(), dev, grid, {}, 101);
  CHECK(b.leakage_share + b.decoherence_share == doctest::Approx(100.0));
  CHECK(b.leakage_share > b.decoherence_share);

  dev.gamma1 = dev.gamma2 = 0.0;
  auto c = error_budget(GateSpec::hadamard(), dev, grid, {}, 101);
  CHECK(c.decoherence_infidelity == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(c.decoherence_share == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
}

TEST_CASE("optimizer never returns less than the baseline") {
  TimeGrid grid{30.0, 600};
  auto dev = DeviceParams::paper_sim();
  auto r = optimize(GateSpec::z(), dev, CorrectionKind::op, grid, quick_search(40));
  CHECK(r.best_f_g >= r.baseline_f_g);
  CHECK(r.evaluations <= 40);
  CHECK(r.search_trace.size() == size_t(r.evaluations));
  // Pulse 0 is off for the Z gate, so its weight stays frozen.
  for (const auto& p : r.search_trace) CHECK(p.params.beta1 == 0.0);
  CHECK(r.best_params.kind == CorrectionKind::op);
}

TEST_CASE("optimizer flags a budget too small to improve") {
  TimeGrid grid{30.0, 600};
  auto dev = DeviceParams::paper_sim();
  auto r = optimize(GateSpec::hadamard(), dev, CorrectionKind::op, grid, quick_search(2));
  CHECK(r.status == OptimizationStatus::warning);
  CHECK(r.best_f_g == r.baseline_f_g);
  CHECK_FALSE(r.message.empty());
  CHECK_THROWS_AS(optimize(GateSpec::z(), dev, CorrectionKind::none, grid), ValidationError);
}

TEST_CASE("optimizer is deterministic across worker counts") {
  TimeGrid grid{30.0, 600};
  auto dev = DeviceParams::paper_sim();
  auto c1 = quick_search(30);
  auto c3 = c1;
  c3.workers = 3;
  auto a = optimize(GateSpec::hadamard(), dev, CorrectionKind::drag, grid, c1);
  auto b = optimize(GateSpec::hadamard(), dev, CorrectionKind::drag, grid, c3);
  CHECK(a.best_f_g == b.best_f_g);
  CHECK(a.best_params.v1 == b.best_params.v1);
  CHECK(a.best_params.eta_g_override == b.best_params.eta_g_override);
}

TEST_CASE("sweep keeps going past failing rows") {
  TimeGrid grid{30.0, 600};
  auto dev = DeviceParams::paper_sim();
  auto rows = sweep(GateSpec::z(), dev, CorrectionKind::op, SweepVariable::tau, {40.0, -5.0, 20.0},
                    grid, quick_search(6));
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].ok);
  CHECK_FALSE(rows[0].error.empty());
  CHECK(rows[1].value == 20.0);
  CHECK(rows[1].ok);
  CHECK(rows[2].ok);
  CHECK(rows[1].opt_f_g >= rows[1].baseline_f_g);
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
}
