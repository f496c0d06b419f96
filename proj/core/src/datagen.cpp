#include "matreg/datagen.hpp"

#include "matreg/csv.hpp"
#include "matreg/model.hpp"

#include <cmath>

namespace matreg {

Index gamma_scheme_groups(GammaScheme scheme) {
  return scheme == GammaScheme::S3 ? 20 : 10;
}

Matrix gen_shape_matrix(ShapeKind kind, Index m, Index q) {
  if (m < 8 || q < 8) throw std::invalid_argument("gen_shape_matrix: grid must be at least 8x8");
  Matrix mask = Matrix::Zero(m, q);
  const double side = static_cast<double>(std::min(m, q));
  const double cr = (static_cast<double>(m) - 1.0) / 2.0;
  const double cc = (static_cast<double>(q) - 1.0) / 2.0;
  switch (kind) {
    case ShapeKind::Square: {
      const Index half = std::min(m, q) / 2;
      const Index r0 = (m - half) / 2, c0 = (q - half) / 2;
      mask.block(r0, c0, half, half).setOnes();
      break;
    }
    case ShapeKind::Circle: {
      const double radius = side / 4.0;
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < q; ++j) {
          const double dr = static_cast<double>(i) - cr;
          const double dc = static_cast<double>(j) - cc;
          if (dr * dr + dc * dc <= radius * radius) mask(i, j) = 1.0;
        }
      break;
    }
    case ShapeKind::Triangle: {
      // Isoceles: apex at the top of the centered half-height band, base of
      // width side/2 at its bottom row.
      const Index height = std::min(m, q) / 2;
      const Index r0 = (m - height) / 2;
      for (Index i = 0; i < height; ++i) {
        const double f = height > 1 ? static_cast<double>(i) / static_cast<double>(height - 1) : 1.0;
        const double half_width = f * side / 4.0;
        for (Index j = 0; j < q; ++j)
          if (std::abs(static_cast<double>(j) - cc) <= half_width) mask(r0 + i, j) = 1.0;
      }
      break;
    }
    case ShapeKind::Heart: {
      // (x^2 + y^2 - 1)^3 - x^2 y^3 <= 0 scaled to a side/2 bounding box.
      const double box = side / 2.0;
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < q; ++j) {
          const double x = 3.0 * (static_cast<double>(j) - cc) / box;
          const double y = -3.0 * (static_cast<double>(i) - cr) / box;
          const double a = x * x + y * y - 1.0;
          if (a * a * a - x * x * y * y * y <= 0.0) mask(i, j) = 1.0;
        }
      break;
    }
  }
  return mask;
}

Matrix gen_lowrank_matrix(Index m, Index q, Index r, double s, std::mt19937_64& rng) {
  if (r < 1 || r > std::min(m, q))
    throw std::invalid_argument("gen_lowrank_matrix: need 1 <= r <= min(m,q)");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("gen_lowrank_matrix: need 0 < s < 1");
  const double pi = std::sqrt(1.0 - std::pow(1.0 - s, 1.0 / static_cast<double>(r)));
  std::bernoulli_distribution bern(pi);
  Matrix b1(m, r), b2(q, r);
  for (Index j = 0; j < r; ++j)
    for (Index i = 0; i < m; ++i) b1(i, j) = bern(rng) ? 1.0 : 0.0;
  for (Index j = 0; j < r; ++j)
    for (Index i = 0; i < q; ++i) b2(i, j) = bern(rng) ? 1.0 : 0.0;
  return b1 * b2.transpose();
}

Vector gen_gamma(GammaScheme scheme, Index p, std::mt19937_64& rng) {
  const Index g = gamma_scheme_groups(scheme);
  if (p < g * 10) throw std::invalid_argument("gen_gamma: need p >= 10 * number of groups");
  const GroupPartition part = GroupPartition::contiguous(p, g);
  Vector gamma = Vector::Zero(p);
  switch (scheme) {
    case GammaScheme::S1:
      for (const auto& group : part.groups) {
        std::uniform_int_distribution<size_t> pick(0, group.size() - 1);
        gamma[group[pick(rng)]] = 5.0;
      }
      break;
    case GammaScheme::S2:
      for (const auto& group : part.groups)
        for (size_t j = 0; j < 10; ++j) gamma[group[j]] = 1.0;
      break;
    case GammaScheme::S3:
      // Alternating +-1 in the leading ten slots of the first ten groups;
      // groups 11..20 stay zero.
      for (size_t l = 0; l < 10; ++l)
        for (size_t j = 0; j < 10; ++j) gamma[part.groups[l][j]] = (j % 2 == 0) ? 1.0 : -1.0;
      break;
  }
  return gamma;
}

DesignData gen_samples(const Matrix& B, const Vector& gamma, Index n, double noise_sd,
                       std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("gen_samples: need n >= 1");
  const Index m = B.rows(), q = B.cols(), p = gamma.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  DesignData data;
  data.mat_rows = m;
  data.mat_cols = q;
  data.x_design.resize(n, m * q);
  data.z_design.resize(n, p);
  data.response.resize(n);
  const Vector vb = vec_map(B);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m * q; ++j) data.x_design(i, j) = normal(rng);
    for (Index j = 0; j < p; ++j) data.z_design(i, j) = normal(rng);
    double signal = data.x_design.row(i).dot(vb) + data.z_design.row(i).dot(gamma);
    data.response[i] = signal + (noise_sd > 0.0 ? noise_sd * normal(rng) : 0.0);
  }
  return data;
}

DesignData load_csv_dataset(const std::string& path_y, const std::string& path_z,
                            const std::string& path_x, Index m, Index q) {
  const CsvTable ty = read_csv(path_y);
  const CsvTable tz = read_csv(path_z);
  const CsvTable tx = read_csv(path_x);

  if (ty.n_cols() != 1)
    throw std::runtime_error("load_csv_dataset: '" + path_y + "' must have a single column");
  if (tx.n_cols() != m * q)
    throw std::runtime_error("load_csv_dataset: '" + path_x + "' has " +
                             std::to_string(tx.n_cols()) + " columns, expected m*q = " +
                             std::to_string(m * q));
  const Index n = ty.n_rows();
  if (tz.n_rows() != n || tx.n_rows() != n)
    throw std::runtime_error("load_csv_dataset: row counts disagree ('" + path_y + "': " +
                             std::to_string(n) + ", '" + path_z + "': " +
                             std::to_string(tz.n_rows()) + ", '" + path_x + "': " +
                             std::to_string(tx.n_rows()) + ")");

  DesignData data;
  data.mat_rows = m;
  data.mat_cols = q;
  data.response = csv_to_matrix(ty, path_y).col(0);
  data.z_design = csv_to_matrix(tz, path_z);
  data.x_design = csv_to_matrix(tx, path_x);
  data.validate();
  return data;
}

}  // namespace matreg
