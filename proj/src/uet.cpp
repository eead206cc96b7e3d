#include "choidyn/uet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "choidyn/rng.hpp"

namespace choidyn {

namespace {

constexpr double kBlockTol = 1e-12;

void require_unitary(const Mat& m, const std::string& name) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(name + " must be square");
  const Mat gram = m * m.adjoint();
  if (max_abs(gram - Mat::Identity(m.rows(), m.cols())) > kBlockTol * double(m.rows()))
    throw std::invalid_argument(name + " is not unitary");
}

}  // namespace

int QStructure::side() const {
  int n = 0;
  if (q_plus) n += int(q_plus->rows());
  if (q_minus) n += int(q_minus->rows());
  for (const auto& pair : off_pairs) n += 2 * int(pair.x.rows());
  return n;
}

Mat assemble_Q(const QStructure& spec) {
  const int side = spec.side();
  if (side == 0) throw std::invalid_argument("assemble_Q: empty structure");
  Mat q = Mat::Zero(side, side);
  int at = 0;
  if (spec.q_plus) {
    const Mat& p = *spec.q_plus;
    require_unitary(p, "q_plus");
    if (max_abs(p - p.transpose()) > kBlockTol)
      throw std::invalid_argument("q_plus is not complex symmetric");
    q.block(at, at, p.rows(), p.rows()) = p;
    at += int(p.rows());
  }
  if (spec.q_minus) {
    const Mat& m = *spec.q_minus;
    require_unitary(m, "q_minus");
    if (max_abs(m + m.transpose()) > kBlockTol)
      throw std::invalid_argument("q_minus is not skew-symmetric");
    q.block(at, at, m.rows(), m.rows()) = m;
    at += int(m.rows());
  }
  for (std::size_t i = 0; i < spec.off_pairs.size(); ++i) {
    const auto& [lambda, x] = spec.off_pairs[i];
    const std::string name = "off_pairs[" + std::to_string(i) + "]";
    require_unitary(x, name + ".x");
    if (std::abs(std::abs(lambda) - 1.0) > kBlockTol)
      throw std::invalid_argument(name + ": |lambda| = 1 is forced by unitarity of Q");
    if (std::abs(lambda - 1.0) <= kBlockTol || std::abs(lambda + 1.0) <= kBlockTol)
      throw std::invalid_argument(name + ": lambda must differ from +1 and -1");
    const int d = int(x.rows());
    q.block(at, at + d, d, d) = lambda * x.transpose();
    q.block(at + d, at, d, d) = x;
    at += 2 * d;
  }
  require_unitary(q, "assembled Q");
  return q;
}

bool is_uet_pair(const Mat& t, const Mat& q, double tol) {
  if (t.rows() != t.cols() || q.rows() != q.cols() || t.rows() != q.rows())
    throw std::invalid_argument("is_uet_pair: sides do not match");
  const double scale = std::max(1.0, max_abs(t) * max_abs(q));
  return max_abs(t * q - q * t.transpose()) <= tol * scale;
}

Mat project_T_sector(const Mat& m, const Mat& q_block) {
  if (m.rows() != m.cols() || q_block.rows() != q_block.cols() || m.rows() != q_block.rows())
    throw std::invalid_argument("project_T_sector: sides do not match");
  const Mat qqbar = q_block * q_block.conjugate();
  const Mat id = Mat::Identity(m.rows(), m.cols());
  const bool sym = max_abs(qqbar - id) <= 1e-10 * double(m.rows());
  const bool skew = max_abs(qqbar + id) <= 1e-10 * double(m.rows());
  if (!sym && !skew)
    throw std::invalid_argument(
        "project_T_sector: block is not a symmetric or skew-symmetric unitary");
  const Mat t = 0.5 * (m + q_block * m.transpose() * q_block.adjoint());
  if (max_abs(t - q_block * t.transpose() * q_block.adjoint()) >
      1e-10 * std::max(1.0, max_abs(t)))
    throw std::runtime_error("project_T_sector: symmetrized block fails T = Q T^t Q^*");
  return t;
}

namespace {

Mat random_sectorwise(const QStructure& spec, std::mt19937_64& rng) {
  const int side = spec.side();
  Mat y = Mat::Zero(side, side);
  int at = 0;
  if (spec.q_plus) {
    const int d = int(spec.q_plus->rows());
    y.block(at, at, d, d) = project_T_sector(random_complex_matrix(d, d, rng), *spec.q_plus);
    at += d;
  }
  if (spec.q_minus) {
    const int d = int(spec.q_minus->rows());
    y.block(at, at, d, d) = project_T_sector(random_complex_matrix(d, d, rng), *spec.q_minus);
    at += d;
  }
  for (const auto& [lambda, x] : spec.off_pairs) {
    const int d = int(x.rows());
    const Mat a = random_complex_matrix(d, d, rng);
    y.block(at, at, d, d) = a;
    y.block(at + d, at + d, d, d) = x * a.transpose() * x.adjoint();
    at += 2 * d;
  }
  return y;
}

}  // namespace

CuetTuple generate_cuet_tuple(const QStructure& spec, int count, std::uint64_t seed,
                              int psd_prefix) {
  if (count < 0 || psd_prefix < 0 || psd_prefix > count)
    throw std::invalid_argument("generate_cuet_tuple: needs 0 <= psd_prefix <= count");
  CuetTuple tuple;
  tuple.witness = assemble_Q(spec);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    Mat y = random_sectorwise(spec, rng);
    if (i < psd_prefix) {
      // Hermitization and shifting both preserve Y = Q Y^t Q^*.
      y = 0.5 * (y + Mat(y.adjoint()));
      const double lowest = min_hermitian_eigenvalue(y);
      y += (std::abs(lowest) + 1e-6) * Mat::Identity(y.rows(), y.cols());
    }
    tuple.matrices.push_back(std::move(y));
  }
  if (!cuet_check(tuple, 1e-10))
    throw std::runtime_error("generate_cuet_tuple: generated tuple fails its own check");
  return tuple;
}

bool cuet_check(const CuetTuple& tuple, double tol) {
  for (const Mat& y : tuple.matrices) {
    const Mat image = tuple.witness * y.transpose() * tuple.witness.adjoint();
    if (max_abs(y - image) > tol * std::max(1.0, max_abs(y))) return false;
  }
  return true;
}

Mat block_conjugation_transpose(const std::vector<std::vector<Mat>>& blocks, const Mat& u) {
  require_unitary(u, "witness");
  const int n = int(blocks.size());
  const int d = int(u.rows());
  Mat conjugated(n * d, n * d);
  double scale = 1.0;
  for (int j = 0; j < n; ++j) {
    if (int(blocks[j].size()) != n)
      throw std::invalid_argument("block_conjugation_transpose: grid is not square");
    for (int k = 0; k < n; ++k) {
      const Mat& block = blocks[j][k];
      if (block.rows() != d || block.cols() != d)
        throw std::invalid_argument("block_conjugation_transpose: block side mismatch");
      scale = std::max(scale, max_abs(block));
      conjugated.block(j * d, k * d, d, d) = u.adjoint() * block * u;
    }
  }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (max_abs(conjugated.block(j * d, k * d, d, d) - blocks[j][k].transpose()) >
          1e-10 * scale)
        throw std::runtime_error(
            "block_conjugation_transpose: blocks are not CUET under this witness");
  return conjugated;
}

Mat reversal_permutation(int n) {
  Mat r = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) r(j, n - 1 - j) = 1.0;
  return r;
}

PptConstruction construct_ppt(int n, const QStructure& q, std::uint64_t seed,
                              bool zero_tuple) {
  if (n < 2) throw std::invalid_argument("construct_ppt: needs n >= 2");
  const int d = q.side();
  const int m = n * (n + 1) / 2;

  PptConstruction out;
  if (zero_tuple) {
    out.witness = assemble_Q(q);
    out.tuple.assign(m, Mat::Zero(d, d));
  } else {
    CuetTuple tuple = generate_cuet_tuple(q, m, seed, n);
    out.witness = std::move(tuple.witness);
    out.tuple = std::move(tuple.matrices);
  }

  Mat b = Mat::Zero(n * d, n * d);
  for (int j = 0; j < n; ++j) b.block(j * d, j * d, d, d) = out.tuple[j];
  int next = n;
  for (int p = 0; p < n; ++p)
    for (int r = p + 1; r < n; ++r) {
      b.block(p * d, r * d, d, d) = out.tuple[next];
      b.block(r * d, p * d, d, d) = out.tuple[next].adjoint();
      ++next;
    }

  const double lowest = min_hermitian_eigenvalue(b);
  out.a0 = std::max(0.0, -lowest);
  out.shift = out.a0 + 1e-6 * std::max(1.0, max_abs(b));
  out.matrix = b + out.shift * Mat::Identity(n * d, n * d);

  out.eigenvalues = hermitian_eigenvalues(out.matrix);
  out.pt_eigenvalues = hermitian_eigenvalues(partial_transpose(out.matrix, {n, d}));
  const double floor = -1e-10 * std::max(1.0, max_abs(out.matrix));
  if (out.eigenvalues(0) < floor)
    throw std::runtime_error("construct_ppt: shifted matrix has negative eigenvalue " +
                             std::to_string(out.eigenvalues(0)));
  if (out.pt_eigenvalues(0) < floor)
    throw std::runtime_error(
        "construct_ppt: partial transpose has negative eigenvalue " +
        std::to_string(out.pt_eigenvalues(0)));
  return out;
}

}  // namespace choidyn
