#include <doctest.h>

#include <cmath>
#include <random>

#include "partinv/linalg.hpp"
#include "support/oracles.hpp"

using namespace partinv;
using namespace partinv::linalg;

namespace {

Matrix random_matrix(Index rows, Index cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) a(i, j) = normal(gen);
  }
  return a;
}

Vector random_vector(Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(gen);
  return v;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("least_squares on the identity returns y") {
  const Matrix a = Matrix::Identity(4, 4);
  Vector y(4);
  y << 1, 2, 3, 4;
  const Vector x = least_squares(a, y);
  CHECK((x - y).norm() == doctest::Approx(0.0));
}

TEST_CASE("least_squares projects onto orthonormal columns") {
  Matrix a = Matrix::Zero(4, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  Vector y(4);
  y << 5, 7, 0, 0;
  const Vector x = least_squares(a, y);
  REQUIRE(x.size() == 2);
  CHECK(x(0) == doctest::Approx(5.0));
  CHECK(x(1) == doctest::Approx(7.0));
}

TEST_CASE("least_squares matches Gaussian elimination on the normal equations") {
  const Matrix a = random_matrix(8, 3, 101);
  Vector truth(3);
  truth << 1, -2, 3;
  const Vector y = a * truth;
  const Vector x = least_squares(a, y);
  CHECK((x - truth).norm() < 1e-9);
  const Vector x_ref = oracles::normal_equations_solve(a, y);
  CHECK((x - x_ref).norm() < 1e-9);
}

TEST_CASE("least_squares rejects bad input") {
  const Matrix a = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(least_squares(a, Vector::Zero(4)), std::invalid_argument);
  Matrix bad = a;
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(least_squares(bad, Vector::Zero(3)), std::invalid_argument);
  Vector bad_y = Vector::Zero(3);
  bad_y(0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(least_squares(a, bad_y), std::invalid_argument);
}

TEST_CASE("qr_least_squares agrees with the SVD route") {
  for (unsigned seed : {11u, 12u, 13u, 14u}) {
    const Matrix a = random_matrix(10, 6, seed);
    const Vector y = random_vector(10, seed + 100);
    CHECK((qr_least_squares(a, y) - least_squares(a, y)).norm() < 1e-9);
  }
  // rank-deficient: duplicated column, both must return the min-norm solution
  Matrix a = random_matrix(8, 4, 55);
  a.col(3) = a.col(1);
  const Vector y = random_vector(8, 56);
  const Vector x_svd = least_squares(a, y);
  const Vector x_qr = qr_least_squares(a, y);
  CHECK((a * x_svd - a * x_qr).norm() < 1e-9);
  CHECK(x_qr.norm() == doctest::Approx(x_svd.norm()).epsilon(1e-8));
}

TEST_CASE("richardson on the identity converges in one step") {
  const Matrix a = Matrix::Identity(5, 5);
  const Vector y = random_vector(5, 7);
  RichardsonOptions opts;
  opts.relaxation = 1.0;
  const RichardsonResult res = richardson_least_squares(a, y, opts);
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK((res.x - y).norm() < 1e-12);
}

TEST_CASE("richardson error contracts by 1 - w*sigma^2 per coordinate") {
  // diag(1, 0.5) embedded in a 4x2 frame; with w = 1 the slow mode contracts
  // by 0.75 per step
  Matrix a = Matrix::Zero(4, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 0.5;
  Vector truth(2);
  truth << 2.0, -3.0;
  const Vector y = a * truth;

  double prev_err = truth(1);  // error of coordinate 1 at x = 0
  for (int iters = 1; iters <= 8; ++iters) {
    RichardsonOptions opts;
    opts.relaxation = 1.0;
    opts.max_iterations = iters;
    opts.tolerance = 0.0;  // run exactly `iters` updates
    const RichardsonResult res = richardson_least_squares(a, y, opts);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == iters);
    CHECK(res.x(0) == doctest::Approx(truth(0)));  // sigma = 1 converges at once
    const double err = std::abs(res.x(1) - truth(1));
    CHECK(err == doctest::Approx(prev_err * 0.75).epsilon(1e-10));
    prev_err = err;
  }
}

TEST_CASE("richardson agrees with least_squares") {
  const Matrix a = random_matrix(6, 2, 21);
  const Vector y = random_vector(6, 22);
  const Vector x_ls = least_squares(a, y);
  const RichardsonResult res = richardson_least_squares(a, y);
  REQUIRE(res.converged);
  CHECK((res.x - x_ls).norm() < 1e-6 * std::max(1.0, x_ls.norm()));
  CHECK((res.x - x_ls).norm() <= 10.0 * 1e-12 * x_ls.norm() + 1e-14);
}

TEST_CASE("richardson and least_squares agree over 100 random instances") {
  std::mt19937 gen(31);
  std::uniform_int_distribution<int> rows_dist(4, 12);
  for (int inst = 0; inst < 100; ++inst) {
    const Index rows = rows_dist(gen);
    const Index cols = 2 + (inst % 3);
    const Matrix a = random_matrix(rows, cols, 1000 + inst);
    if (min_singular_value(a) < 0.1) continue;  // keep the iteration count sane
    const Vector y = random_vector(rows, 2000 + inst);
    const Vector x_ls = least_squares(a, y);
    const RichardsonResult res = richardson_least_squares(a, y);
    REQUIRE(res.converged);
    CHECK((res.x - x_ls).norm() <= 10.0 * 1e-12 * x_ls.norm() + 1e-13);
  }
}

TEST_CASE("svd of diag(3,1)") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const SvdFactors f = svd(a);
  CHECK(f.singular_values(0) == doctest::Approx(3.0));
  CHECK(f.singular_values(1) == doctest::Approx(1.0));
  CHECK(f.numeric_rank == 2);
}

TEST_CASE("svd of the all-ones matrix finds rank one") {
  const Matrix a = Matrix::Ones(2, 2);
  const SvdFactors f = svd(a);
  CHECK(f.singular_values(0) == doctest::Approx(2.0));
  CHECK(f.singular_values(1) == doctest::Approx(0.0));
  CHECK(f.numeric_rank == 1);
}

TEST_CASE("svd factors are orthogonal and reconstruct") {
  const Matrix a = random_matrix(5, 3, 77);
  const SvdFactors f = svd(a);
  const Index r = f.singular_values.size();
  CHECK((f.u.transpose() * f.u - Matrix::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((f.v.transpose() * f.v - Matrix::Identity(r, r)).cwiseAbs().maxCoeff() < 1e-10);
  const Matrix rec = f.u * f.singular_values.asDiagonal() * f.v.transpose();
  CHECK((a - rec).norm() < 1e-10 * a.norm());
  CHECK(std::is_sorted(f.singular_values.data(), f.singular_values.data() + r,
                       std::greater<double>()));
}

TEST_CASE("svd sign convention makes leading entries positive") {
  for (unsigned seed : {31u, 32u, 33u}) {
    const SvdFactors f = svd(random_matrix(6, 4, seed));
    for (Index j = 0; j < f.u.cols(); ++j) {
      for (Index i = 0; i < f.u.rows(); ++i) {
        if (f.u(i, j) != 0.0) {
          CHECK(f.u(i, j) > 0.0);
          break;
        }
      }
    }
  }
}

TEST_CASE("singular value wrappers") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  CHECK(spectral_norm(d) == doctest::Approx(3.0));
  CHECK(min_singular_value(d) == doctest::Approx(1.0));
  CHECK(min_nonzero_singular_value(d) == doctest::Approx(1.0));

  const Matrix ones = Matrix::Ones(2, 2);
  CHECK(spectral_norm(ones) == doctest::Approx(2.0));
  CHECK(min_singular_value(ones) == doctest::Approx(0.0));
  CHECK(min_nonzero_singular_value(ones) == doctest::Approx(2.0));

  const Matrix a = random_matrix(6, 4, 88);
  CHECK(spectral_norm(a) == doctest::Approx(oracles::power_sigma_max(a)).epsilon(1e-6));
  CHECK(power_iteration_sigma_max(a, 200) == doctest::Approx(spectral_norm(a)).epsilon(1e-6));
}

TEST_CASE("normalize_columns") {
  Matrix a(3, 1);
  a << 3, 4, 0;
  const Matrix n = normalize_columns(a);
  CHECK(n(0, 0) == doctest::Approx(0.6));
  CHECK(n(1, 0) == doctest::Approx(0.8));
  CHECK(n(2, 0) == doctest::Approx(0.0));

  const Matrix id = Matrix::Identity(4, 4);
  CHECK((normalize_columns(id) - id).norm() == doctest::Approx(0.0));

  const Matrix r = normalize_columns(random_matrix(8, 5, 91));
  for (Index j = 0; j < r.cols(); ++j) CHECK(std::abs(r.col(j).norm() - 1.0) < 1e-12);

  Matrix z = random_matrix(3, 3, 92);
  z.col(2).setZero();
  CHECK_THROWS_WITH_AS(normalize_columns(z) /* column index in message */,
                       doctest::Contains("column 2"), std::invalid_argument);
}

TEST_CASE("least_squares optimality against random candidates") {
  std::mt19937 gen(61);
  std::normal_distribution<double> normal;
  const Matrix a = random_matrix(9, 4, 62);
  const Vector y = random_vector(9, 63);
  const Vector x_ls = least_squares(a, y);
  const double best = (y - a * x_ls).norm();
  for (int c = 0; c < 100; ++c) {
    Vector x(4);
    for (Index i = 0; i < 4; ++i) x(i) = x_ls(i) + normal(gen);
    CHECK(best <= (y - a * x).norm() + 1e-9);
  }
}

TEST_CASE("least_squares inverts well-conditioned systems exactly") {
  for (unsigned seed : {71u, 72u, 73u, 74u, 75u}) {
    const Matrix a = random_matrix(10, 5, seed);
    if (min_singular_value(a) <= 1e-6) continue;
    const Vector x = random_vector(5, seed + 500);
    CHECK((least_squares(a, a * x) - x).norm() < 1e-9);
  }
}

TEST_CASE("columns and scatter") {
  const Matrix a = random_matrix(4, 5, 81);
  const Matrix b = columns(a, {0, 2, 4});
  CHECK(b.cols() == 3);
  CHECK((b.col(1) - a.col(2)).norm() == doctest::Approx(0.0));
  CHECK_THROWS_AS(columns(a, {5}), std::invalid_argument);

  Vector vals(2);
  vals << 1.5, -2.5;
  const Vector s = scatter(vals, {1, 3}, 5);
  CHECK(s(0) == 0.0);
  CHECK(s(1) == 1.5);
  CHECK(s(3) == -2.5);
  CHECK_THROWS_AS(scatter(vals, {1}, 5), std::invalid_argument);
}

}  // TEST_SUITE
