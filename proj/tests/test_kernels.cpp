#include <doctest.h>

#include <cmath>
#include <cstring>

#include "kanbench/numeric/kernels.hpp"
#include "kanbench/numeric/rng.hpp"

using namespace kanbench;
using namespace kanbench::kernels;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2, 2);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Sizes straddle every vector width and remainder path.
constexpr std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100};

}  // namespace

TEST_CASE("scalar is always available and listed first") {
  const auto isas = available();
  REQUIRE(!isas.empty());
  CHECK(isas.front() == Isa::scalar);
  CHECK(table_for(Isa::scalar) == &scalar::table);
  CHECK(isa_name(Isa::avx2) == "avx2");
}

TEST_CASE("scalar reference kernels") {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  CHECK(scalar::table.dot(a.data(), b.data(), 3) == 32);

  std::vector<double> y{1, 1, 1};
  scalar::table.axpy(2, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});

  // [[1,2,3],[4,5,6]] (1,2,3) accumulated onto (10,20)
  const std::vector<double> m{1, 2, 3, 4, 5, 6};
  std::vector<double> out{10, 20};
  scalar::table.gemv(m.data(), 2, 3, a.data(), out.data());
  CHECK(out == std::vector<double>{24, 52});

  std::vector<double> outt(3, 0.0);
  const std::vector<double> x2{1, -1};
  scalar::table.gemv_t(m.data(), 2, 3, x2.data(), outt.data());
  CHECK(outt == std::vector<double>{-3, -3, -3});

  std::vector<double> r(6, 0.0);
  scalar::table.rank1_update(0.5, x2.data(), 2, a.data(), 3, r.data());
  CHECK(r == std::vector<double>{0.5, 1, 1.5, -0.5, -1, -1.5});
}

TEST_CASE("scalar adam kernel takes the bias-corrected first step") {
  std::vector<double> p{0.0}, g{1.0}, m{0.0}, v{0.0};
  const AdamCoefficients c{0.9, 0.999, 0.01, 1e-8, 1 - 0.9, 1 - 0.999};
  scalar::table.adam_update(p.data(), g.data(), m.data(), v.data(), 1, c);
  CHECK(p[0] == doctest::Approx(-0.01).epsilon(1e-6));
  CHECK(m[0] == doctest::Approx(0.1));
  CHECK(v[0] == doctest::Approx(0.001));
}

TEST_CASE("every available variant matches the scalar reference") {
  Rng rng(99);
  for (const Isa isa : available()) {
    const KernelTable* t = table_for(isa);
    REQUIRE(t != nullptr);
    CAPTURE(isa_name(isa));
    for (const std::size_t n : kSizes) {
      CAPTURE(n);
      const auto a = random_vector(rng, n), b = random_vector(rng, n);

      const double ref = scalar::table.dot(a.data(), b.data(), n);
      double mag = 0;
      for (std::size_t i = 0; i < n; ++i) mag += std::fabs(a[i] * b[i]);
      CHECK(std::fabs(t->dot(a.data(), b.data(), n) - ref) <= 1e-14 * (mag + 1));

      auto y1 = random_vector(rng, n);
      auto y2 = y1;
      scalar::table.axpy(0.75, a.data(), y1.data(), n);
      t->axpy(0.75, a.data(), y2.data(), n);
      CHECK(bit_equal(y1, y2));

      for (const std::size_t rows : {std::size_t{1}, std::size_t{3}, std::size_t{6}}) {
        const auto mat = random_vector(rng, rows * n);
        const auto xr = random_vector(rng, rows);

        auto g1 = random_vector(rng, rows);
        auto g2 = g1;
        scalar::table.gemv(mat.data(), rows, n, a.data(), g1.data());
        t->gemv(mat.data(), rows, n, a.data(), g2.data());
        for (std::size_t r = 0; r < rows; ++r) CHECK(std::fabs(g1[r] - g2[r]) <= 1e-13 * (n + 1));

        auto h1 = random_vector(rng, n);
        auto h2 = h1;
        scalar::table.gemv_t(mat.data(), rows, n, xr.data(), h1.data());
        t->gemv_t(mat.data(), rows, n, xr.data(), h2.data());
        CHECK(bit_equal(h1, h2));

        auto r1 = mat;
        auto r2 = mat;
        scalar::table.rank1_update(-1.25, xr.data(), rows, a.data(), n, r1.data());
        t->rank1_update(-1.25, xr.data(), rows, a.data(), n, r2.data());
        CHECK(bit_equal(r1, r2));
      }

      auto p1 = random_vector(rng, n), m1 = random_vector(rng, n), v1 = random_vector(rng, n);
      for (auto& v : v1) v = std::fabs(v);
      auto p2 = p1, m2 = m1, v2 = v1;
      const AdamCoefficients c{0.9, 0.999, 3e-3, 1e-8, 1 - std::pow(0.9, 7), 1 - std::pow(0.999, 7)};
      scalar::table.adam_update(p1.data(), b.data(), m1.data(), v1.data(), n, c);
      t->adam_update(p2.data(), b.data(), m2.data(), v2.data(), n, c);
      CHECK(bit_equal(p1, p2));
      CHECK(bit_equal(m1, m2));
      CHECK(bit_equal(v1, v2));
    }
  }
}

TEST_CASE("span helpers route through the active table") {
  const std::vector<double> a{1, 2}, b{3, 4};
  CHECK(kernels::dot(a, b) == 11);
  std::vector<double> y{0, 0};
  kernels::axpy(2, a, y);
  CHECK(y == std::vector<double>{2, 4});
}
