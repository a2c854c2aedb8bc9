#include <doctest.h>

#include <string>

#include "sqv/theory.hpp"

using namespace sqv;

namespace {

const char* kSample = R"(# two-site mixed theory
N 2
A 2 -1
A -1 2
kernel local 4 1.3
kernel local 3 0.7
externals 0 1
)";

}  // namespace

TEST_CASE("theory parsing") {
  Theory t = parse_theory(kSample);
  CHECK(t.n_sites() == 2);
  CHECK(t.n_external() == 2);
  CHECK(t.op.matrix()(0, 1) == doctest::Approx(-1.0));
  REQUIRE(t.kernels.size() == 2);
  CHECK(t.kernel_for_arity(4)->coupling == doctest::Approx(1.3));
  CHECK(t.kernel_for_arity(3)->coupling == doctest::Approx(0.7));
  CHECK(t.kernel_for_arity(5) == nullptr);
  CHECK(t.kernel_arities() == std::vector<int>{3, 4});
}

TEST_CASE("theory parse errors carry line numbers") {
  try {
    parse_theory("N 1\nA 1\nkernel local four 1.0\nexternals 0\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigParse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_theory("A 1\nexternals 0\n"), Error);
  CHECK_THROWS_AS(parse_theory("N 1\nA 1 2\nexternals 0\n"), Error);
  CHECK_THROWS_AS(parse_theory("N 1\nA 1\nexternals 3\n"), Error);
  CHECK_THROWS_AS(parse_theory("N 1\nA 1\nbogus 1\nexternals 0\n"), Error);
}

TEST_CASE("theory round trip through text") {
  Theory t = parse_theory(kSample);
  Theory back = parse_theory(theory_to_text(t));
  CHECK((back.op.matrix() - t.op.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.kernels.size() == t.kernels.size());
  CHECK(back.external_sites == t.external_sites);
}

TEST_CASE("duplicate arity and site range are rejected") {
  CHECK_THROWS_AS(parse_theory("N 1\nA 1\nkernel local 4 1\nkernel local 4 2\nexternals 0\n"),
                  Error);
  Theory t = parse_theory("N 2\nA 1 0 0 1\nexternals 0\n");
  t.external_sites.push_back(7);
  CHECK_THROWS_AS(t.check(), Error);
}

TEST_CASE("dense kernels: cyclic check and full symmetrization") {
  // cyclically symmetric rank-3 tensor on two sites that is not fully
  // symmetric: value 1 on cyclic orbit of (0,0,1), value 2 on (0,1,1) orbit
  std::vector<double> cyc(8, 0.0);
  auto at = [&](int a, int b, int c) -> double& { return cyc[4 * a + 2 * b + c]; };
  at(0, 0, 1) = 1;
  at(0, 1, 0) = 1;
  at(1, 0, 0) = 1;
  at(0, 1, 1) = 2;
  at(1, 1, 0) = 2;
  at(1, 0, 1) = 2;
  VertexKernel k = VertexKernel::dense(3, 2, cyc);
  // fully symmetrized storage: any permutation of an index tuple agrees
  CHECK(k.value({0, 0, 1}, 2) == doctest::Approx(1.0));
  CHECK(k.value({1, 0, 0}, 2) == doctest::Approx(1.0));
  CHECK(k.value({0, 1, 0}, 2) == doctest::Approx(1.0));

  // breaking cyclic symmetry must be rejected
  std::vector<double> broken = cyc;
  broken[4 * 0 + 2 * 0 + 1] = 3.0;  // (0,0,1) no longer matches (0,1,0)
  CHECK_THROWS_AS(VertexKernel::dense(3, 2, broken), Error);

  CHECK_THROWS_AS(VertexKernel::dense(3, 2, std::vector<double>(7, 0.0)), Error);
}

TEST_CASE("unit couplings") {
  Theory t = parse_theory(kSample);
  Theory unit = t.with_unit_couplings();
  CHECK(unit.kernel_for_arity(4)->coupling == doctest::Approx(1.0));
  CHECK(unit.kernel_for_arity(3)->coupling == doctest::Approx(1.0));
  CHECK(t.kernel_for_arity(4)->coupling == doctest::Approx(1.3));
}

TEST_CASE("local kernel value") {
  VertexKernel k = VertexKernel::local(4, 2.5);
  CHECK(k.value({1, 1, 1, 1}, 2) == doctest::Approx(2.5));
  CHECK(k.value({1, 0, 1, 1}, 2) == doctest::Approx(0.0));
}
