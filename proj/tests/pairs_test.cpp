#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "support/random_isometry.hpp"
#include "woldlab/catalog.hpp"
#include "woldlab/errors.hpp"
#include "woldlab/pairs.hpp"

using namespace woldlab;

namespace {

int dense_rank(const Eigen::MatrixXcd& m) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  int r = 0;
  while (r < svd.singularValues().size() && svd.singularValues()(r) > 1e-7) ++r;
  return r;
}

Eigen::MatrixXcd columns(const std::vector<BasisIndex>& w, const std::vector<HVector>& vs) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<int>(w.size()), static_cast<int>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k)
    for (std::size_t i = 0; i < w.size(); ++i) m(static_cast<int>(i), static_cast<int>(k)) = vs[k].at(w[i]);
  return m;
}

// V on a finite lane of size n given by a unitary matrix, plus a shift lane.
StructuredIsometry unitary_plus_shift(const Eigen::MatrixXcd& u) {
  StructuredIsometry::Columns cols;
  for (int k = 0; k < u.cols(); ++k) {
    HVector c;
    for (int i = 0; i < u.rows(); ++i) c.add({0, i}, u(i, k));
    cols.emplace(BasisIndex{0, k}, c);
  }
  return StructuredIsometry::make({{0, DomainKind::finite, u.rows(), "u"}, {1, DomainKind::naturals, 0, "e"}}, cols,
                                  {{1, 0, 1, 1, {}, 1.0}}, "U+S");
}

StructuredIsometry power(const StructuredIsometry& v, int k) {
  StructuredIsometry out = v;
  for (int i = 1; i < k; ++i) out = compose(out, v);
  return out;
}

double reducing(const StructuredIsometry& v, const std::vector<HVector>& basis, std::int64_t window) {
  return reducing_defect(v, basis, v.window(window));
}

}  // namespace

TEST_CASE("subspace intersection matches the rank formula") {
  std::mt19937_64 rng(61);
  const StructuredIsometry lanes = StructuredIsometry::make({{0, DomainKind::finite, 10, ""}}, [] {
    StructuredIsometry::Columns c;
    for (int p = 0; p < 10; ++p) c.emplace(BasisIndex{0, p}, HVector::basis({0, p}));
    return c;
  }(), {});
  const auto w = lanes.window(10);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> dim(0, 6);
    std::vector<HVector> shared;
    const int s = dim(rng) / 2;
    for (int k = 0; k < s; ++k) shared.push_back(woldlab::testing::random_vector(w, 10, rng));
    auto build = [&] {
      std::vector<HVector> v = shared;
      const int extra = dim(rng) / 2;
      for (int k = 0; k < extra; ++k) v.push_back(woldlab::testing::random_vector(w, 3, rng));
      return orthonormalize(v);
    };
    const auto a = build();
    const auto b = build();
    const auto both = intersect(a, b);
    Eigen::MatrixXcd ab(10, static_cast<int>(a.size() + b.size()));
    ab << columns(w, a), columns(w, b);
    const int expected = dense_rank(columns(w, a)) + dense_rank(columns(w, b)) - dense_rank(ab);
    CHECK(static_cast<int>(both.size()) == expected);
    CHECK(is_orthonormal(both, 1e-9));
    const Subspace sa(a);
    const Subspace sb(b);
    for (const HVector& x : both) {
      CHECK(sa.residual(x) < 1e-7);
      CHECK(sb.residual(x) < 1e-7);
    }
  }
  const std::vector<HVector> e01{HVector::basis({0, 0}), HVector::basis({0, 1})};
  const std::vector<HVector> e12{HVector::basis({0, 1}), HVector::basis({0, 2})};
  const auto c = intersect(e01, e12);
  REQUIRE(c.size() == 1);
  CHECK(distance(c[0], HVector::basis({0, 1})) < 1e-12);
}

TEST_CASE("pair suite") {
  const StructuredIsometry s2 = shift_power(2);
  const StructuredIsometry s3 = shift_power(3);
  CHECK(commutes(s2, s3, 64).is_true());
  const Certificate dc = doubly_commutes(s2, s3, 64);
  CHECK(dc.is_false());
  CHECK(std::get<BasisIndex>(dc.witness()) == BasisIndex{0, 0});
  CHECK(weak_bishift_classify(s2, s3, 64).is_true());
  const PairReport r = pair_decompose(s2, s3, 64);
  CHECK(r.uu.subspace.is_zero());
  CHECK(r.us.subspace.is_zero());
  CHECK(r.su.subspace.is_zero());
  CHECK(r.ws.subspace.dimension() == 64);

  CHECK(doubly_commutes(grid_horizontal(), grid_vertical(), 64).is_true());

  const Certificate bb = weak_bishift_classify(bilateral_shift(), bilateral_shift(), 64);
  CHECK(bb.is_false());
  CHECK(bb.exact());

  const PairReport b = pair_decompose(bilateral_shift(), bilateral_shift(), 32);
  CHECK(b.uu.subspace.dimension() == 32);
  CHECK(b.ws.subspace.is_zero());

  CHECK_THROWS_AS((void)pair_decompose(cycle_plus_shift(2), example_fixed_plus_shift(), 16), Error);
}

TEST_CASE("mixed pair parts") {
  // (B + S, B + I)
  const StructuredIsometry v1 = bilateral_plus_shift();
  const StructuredIsometry v2 = StructuredIsometry::make(
      {{0, DomainKind::integers, 0, "b"}, {1, DomainKind::naturals, 0, "e"}}, {},
      {{0, 0, 0, 1, {}, 1.0}, {1, 0, 1, 0, {}, 1.0}}, "B+I");
  REQUIRE(commutes(v1, v2, 32).is_true());
  const PairReport r = pair_decompose(v1, v2, 32);
  CHECK(r.uu.subspace.dimension() == 32);
  CHECK(r.su.subspace.dimension() == 32);
  CHECK(r.us.subspace.is_zero());
  CHECK(r.ws.subspace.is_zero());
  CHECK(max_cross_inner(r.uu.subspace.generators(), r.su.subspace.generators()) < 1e-12);
  const Certificate wb = weak_bishift_classify(v1, v2, 32);
  CHECK(wb.is_false());
}

TEST_CASE("h0_plus reduces both operators") {
  const StructuredIsometry v = example_fixed_plus_shift();
  const CertifiedSubspace same = h0_plus(v, v, Subspace({HVector::basis({0, 0})}), 64);
  CHECK(same.certificate.is_true());
  CHECK(same.certificate.exact());
  REQUIRE(same.subspace.dimension() == 1);
  CHECK(distance(same.subspace.generators()[0], HVector::basis({0, 0})) < 1e-12);

  const StructuredIsometry c3 = cycle_plus_shift(3);
  const CertifiedSubspace grown = h0_plus(c3, power(c3, 2), Subspace({HVector::basis({0, 0})}), 64);
  CHECK(grown.certificate.is_true());
  CHECK(grown.subspace.dimension() == 3);
  CHECK_THROWS_AS((void)h0_plus(c3, c3, Subspace({HVector::basis({1, 0})}), 64), Refused);

  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const StructuredIsometry v1 = unitary_plus_shift(woldlab::testing::random_unitary(n, rng));
    const StructuredIsometry v2 = power(v1, std::uniform_int_distribution<int>(1, 3)(rng));
    const HVector g = woldlab::testing::random_vector(v1.window(0), 2, rng);
    const CertifiedSubspace h = h0_plus(v1, v2, Subspace({g * (1.0 / g.norm())}), 32);
    CHECK(h.certificate.is_true());
    CHECK(reducing(v1, h.subspace.generators(), 32) < 1e-9);
    CHECK(reducing(v2, h.subspace.generators(), 32) < 1e-9);
    for (const HVector& x : h.subspace.generators()) {
      CHECK(distance(apply(v1, apply_adjoint(v1, x)), x) < 1e-9);
      CHECK(h.subspace.residual(apply_adjoint(v1, x)) < 1e-9);
    }
  }
}

TEST_CASE("exhaustion of H_0") {
  const Exhaustion ss = exhaust_h0(shift(), shift(), 8, 64);
  CHECK(ss.iterations == 0);
  CHECK(ss.removed.empty());
  CHECK(ss.certificate.is_true());

  const Exhaustion v = exhaust_h0(example_fixed_plus_shift(), example_fixed_plus_shift(), 8, 64);
  CHECK(v.iterations == 1);
  REQUIRE(v.removed.size() == 1);
  CHECK(distance(v.removed[0], HVector::basis({0, 0})) < 1e-12);
  CHECK(v.certificate.is_true());
  // what is left is spanned by wandering vectors of V1
  for (const HVector& x : v.h1.generators()) CHECK(is_wandering(example_fixed_plus_shift(), x).is_true());
}

TEST_CASE("joint kernels") {
  CHECK(joint_kernel(shift_power(2), shift_power(3), 64, 16).empty());
  const StructuredIsometry identity =
      StructuredIsometry::make({{0, DomainKind::naturals, 0, ""}}, {}, {{0, 0, 0, 0, {}, 1.0}}, "I");
  const auto k = joint_kernel(shift_power(2), identity, 64, 16);
  REQUIRE(k.size() == 2);
  for (const HVector& x : k) CHECK(apply_adjoint(shift_power(2), x).is_zero());
  CHECK(joint_kernel(bilateral_shift(), bilateral_shift(), 16, 16).empty());
}

TEST_CASE("remark: the commutant preserves wandering vectors") {
  std::mt19937_64 rng(71);
  for (const auto& e : fixtures()) {
    const CatalogItem item = e.build();
    const auto* p = std::get_if<OperatorPair>(&item);
    if (p == nullptr) continue;
    CAPTURE(e.name);
    const auto window = p->v1.window(12);
    int certified = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const HVector x = woldlab::testing::random_vector(window, 3, rng);
      if (!is_wandering(p->v1, x, 64).is_true()) continue;
      ++certified;
      CHECK(is_wandering(p->v1, apply(p->v2, x), 64).is_true());
    }
  }
}

TEST_CASE("completely non doubly commuting search") {
  CHECK(is_completely_non_doubly_commuting(shift_power(2), shift_power(3), 32).is_true());
  CHECK_FALSE(is_completely_non_doubly_commuting(shift_power(2), shift_power(3), 32).exact());
  const Certificate b = is_completely_non_doubly_commuting(bilateral_shift(), bilateral_shift(), 32);
  CHECK(b.is_false());
  const Certificate f = is_completely_non_doubly_commuting(example_fixed_plus_shift(), example_fixed_plus_shift(), 32);
  CHECK(f.is_false());
}
