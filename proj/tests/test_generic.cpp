#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <tenscert/generic.hpp>

using namespace tenscert;

TEST_CASE("headline cases") {
  GenericConfig config;

  const auto v555 = check_generic(Shape({5, 5, 5}), 9, config);
  CHECK(v555.outcome == GenericOutcome::Proved);
  CHECK(v555.hessian_rank == 12);
  CHECK(v555.target == 12);
  CHECK(v555.ell == 8);
  CHECK(v555.attempts <= 3);

  const auto v443 = check_generic(Shape({4, 4, 3}), 5, config);
  CHECK(v443.outcome == GenericOutcome::KnownException);
  REQUIRE(v443.exception.has_value());
  CHECK(v443.exception->kind == ExceptionKind::Defective);
  CHECK(v443.attempts == 0);  // the catalog short-circuits

  const auto v444 = check_generic(Shape({4, 4, 4}), 6, config);
  CHECK(v444.outcome == GenericOutcome::KnownException);
  REQUIRE(v444.exception.has_value());
  CHECK(v444.exception->kind == ExceptionKind::Sporadic);

  const auto v8332 = check_generic(Shape({8, 3, 3, 2}), 11, config);
  CHECK(v8332.outcome == GenericOutcome::ProvedWeaklyDefectivePath);
  CHECK(v8332.path == HessianPath::WeaklyDefective);
  CHECK(v8332.ell == 1);
  CHECK(v8332.hessian_rank == 10);
  CHECK(v8332.target == 10);
}

TEST_CASE("defective shapes fail the defectivity gate even without the catalog") {
  GenericConfig config;
  config.use_exception_catalog = false;
  for (std::uint64_t seed : {0ull, 99ull, 12345ull}) {
    config.seed = seed;
    const auto v = check_generic(Shape({4, 4, 3}), 5, config);
    CHECK(v.outcome == GenericOutcome::DefectiveSuspected);
    for (const auto& a : v.attempt_log) {
      CHECK(a.gate_failed);
      CHECK(a.kernel_rows > v.ell);
    }
  }
}

TEST_CASE("the sporadic (2,2,2,2,2) at rank 5 stays inconclusive") {
  GenericConfig config;
  config.use_exception_catalog = false;
  for (std::uint64_t seed : {0ull, 7ull}) {
    config.seed = seed;
    const auto v = check_generic(Shape({2, 2, 2, 2, 2}), 5, config);
    CHECK(v.outcome == GenericOutcome::Inconclusive);
    CHECK_FALSE(v.reason.empty());
    // the schedule is exhausted: retries at the base prime, one escalation
    CHECK(v.attempts == 4);
    REQUIRE(v.attempt_log.size() == 4);
    CHECK(v.attempt_log[0].prime == 127);
    CHECK(v.attempt_log[2].prime == 127);
    CHECK(v.attempt_log[3].prime == 8191);
    CHECK(v.prime == 8191);
  }
}

TEST_CASE("verdicts are deterministic including attempt counts") {
  GenericConfig config;
  config.seed = 31337;
  const Shape shape({4, 4, 4});
  const auto a = check_generic(shape, 5, config);
  const auto b = check_generic(shape, 5, config);
  CHECK(a.outcome == b.outcome);
  CHECK(a.attempts == b.attempts);
  CHECK(a.prime == b.prime);
  CHECK(a.hessian_rank == b.hessian_rank);
  REQUIRE(a.attempt_log.size() == b.attempt_log.size());
  for (std::size_t i = 0; i < a.attempt_log.size(); ++i) {
    CHECK(a.attempt_log[i].seed == b.attempt_log[i].seed);
    CHECK(a.attempt_log[i].kernel_rows == b.attempt_log[i].kernel_rows);
    CHECK(a.attempt_log[i].hessian_ranks == b.attempt_log[i].hessian_ranks);
  }
}

TEST_CASE("rank validation") {
  GenericConfig config;
  CHECK_THROWS_AS(check_generic(Shape({5, 5, 5}), 10, config), InvalidRank);
  CHECK_THROWS_AS(check_generic(Shape({5, 5, 5}), 0, config), InvalidRank);
  CHECK_NOTHROW(check_generic(Shape({5, 5, 5}), 1, config));
}

TEST_CASE("all-points mode also proves and checks every point") {
  GenericConfig config;
  config.all_points = true;
  const auto v = check_generic(Shape({3, 3, 3}), 3, config);
  CHECK(v.outcome == GenericOutcome::Proved);
  REQUIRE(!v.attempt_log.empty());
  CHECK(v.attempt_log.back().hessian_ranks.size() == 3);
  for (long long r : v.attempt_log.back().hessian_ranks) CHECK(r == v.target);
}

// A proof over GF(q) forces the same certificate over the rationals: the
// modular matrices are entrywise reductions of the lifted integer ones, and a
// full-rank reduction pins the exact rank from below.
TEST_CASE("finite-field proofs lift to exact proofs") {
  const std::vector<std::vector<int>> shapes{{2, 2, 2},    {3, 2, 2},    {3, 3, 2},
                                             {3, 3, 3},    {4, 3, 2},    {4, 4, 2},
                                             {4, 4, 4},    {2, 2, 2, 2}, {5, 4, 3},
                                             {5, 5, 5}};
  PrimeField F(8191);
  RationalField R;
  for (const auto& dims : shapes) {
    const Shape shape(dims);
    const auto q = derive(shape);
    const long long r = q.rbar;
    // lift the sampled modular points to integers, run both pipelines
    const auto fpoints = sample_points(F, dims, r, 4242, true);
    std::vector<RankOnePoint<Rational>> rpoints;
    for (const auto& p : fpoints) {
      RankOnePoint<Rational> lifted;
      for (const auto& f : p.factors) {
        std::vector<Rational> g;
        for (const auto& x : f) g.push_back(Rational(static_cast<long long>(x.value())));
        lifted.factors.push_back(std::move(g));
      }
      rpoints.push_back(std::move(lifted));
    }

    const auto fassembly = assemble(F, shape, fpoints, true);
    const auto fkernel = hyperplane_kernel(F, fassembly);
    if (fkernel.status != KernelStatus::Ok) continue;
    const auto mode = classify_hessian_target(shape, fassembly.expected_ell);
    const auto fhess = canonical_hessian(F, fkernel.coeffs, dims);
    if (!hessian_verdict(fhess, mode).proved) continue;

    // the exact run over the same lifted points must certify as well
    const auto rassembly = assemble(R, shape, rpoints, true);
    const auto rkernel = hyperplane_kernel(R, rassembly);
    CHECK(rkernel.status == KernelStatus::Ok);
    const auto rhess = canonical_hessian(R, rkernel.coeffs, dims);
    CHECK(hessian_verdict(rhess, mode).proved);
  }
}
