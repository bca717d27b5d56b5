#include "srrk/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "srrk/error.hpp"
#include "srrk/rng.hpp"

namespace srrk {

namespace {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// in-place radix-2 Cooley-Tukey; `inverse` conjugates the twiddles.
// No scaling here; callers apply 1/sqrt(n) to keep transforms unitary.
void fft_radix2(std::span<Complex> a, bool inverse) {
  const std::size_t n = a.size();
  if (!is_power_of_two(n)) throw Error(ErrorCode::unsupported_size, "fft needs power-of-two n");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const Complex wl{std::cos(ang), std::sin(ang)};
    for (std::size_t i = 0; i < n; i += len) {
      Complex w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// orthonormal DCT-II of a real signal through a length-2n FFT
void dct2(std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  Vector ext(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    ext[j] = x[j];
    ext[2 * n - 1 - j] = x[j];
  }
  fft_radix2(ext, false);
  const double c0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ck = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = -std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
    const Complex tw{std::cos(ang), std::sin(ang)};
    y[k] = 0.5 * (tw * ext[k]).real() * (k == 0 ? c0 : ck);
  }
}

// orthonormal DCT-III (the transpose of dct2)
void dct3(std::span<const double> y, std::span<double> x) {
  const std::size_t n = y.size();
  const double c0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ck = std::sqrt(2.0 / static_cast<double>(n));
  Vector g(2 * n, Complex{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
    g[k] = (k == 0 ? c0 : ck) * y[k] * Complex{std::cos(ang), std::sin(ang)};
  }
  fft_radix2(g, true);
  for (std::size_t j = 0; j < n; ++j) x[j] = g[j].real();
}

// real-orthogonal transform split over the real and imaginary parts
void dct_complex(std::span<const Complex> x, std::span<Complex> y, bool inverse) {
  const std::size_t n = x.size();
  std::vector<double> re(n), im(n), tre(n), tim(n);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = x[i].real();
    im[i] = x[i].imag();
  }
  if (inverse) {
    dct3(re, tre);
    dct3(im, tim);
  } else {
    dct2(re, tre);
    dct2(im, tim);
  }
  for (std::size_t i = 0; i < n; ++i) y[i] = Complex{tre[i], tim[i]};
}

// reflection x -= (2 v^T x / ||v||^2) v with a real direction v
void reflect(std::span<Complex> x, const std::vector<double>& v, double two_over_vv) {
  Complex c{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) c += v[i] * x[i];
  c *= two_over_vv;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * v[i];
}

Vector sample_spectrum(const SpectrumSpec& spec, std::size_t n, Rng& rng) {
  Vector diag(n);
  switch (spec.kind) {
    case SpectrumSpec::Kind::equispaced_transform: {
      if (!spec.function.eval)
        throw Error(ErrorCode::invalid_argument, "equispaced spectrum needs a function");
      for (std::size_t i = 0; i < n; ++i) {
        const double a =
            n == 1 ? spec.a_lo
                   : spec.a_lo + (spec.a_hi - spec.a_lo) * static_cast<double>(i) /
                                     static_cast<double>(n - 1);
        diag[i] = Complex{spec.function.eval(Complex{a, 0.0}).real(), 0.0};
      }
      break;
    }
    case SpectrumSpec::Kind::clustered_gaussian: {
      if (spec.centers.size() != spec.spreads.size() || spec.centers.size() != spec.sizes.size())
        throw Error(ErrorCode::invalid_argument, "cluster arrays must have equal length");
      std::size_t total = 0;
      for (std::size_t s : spec.sizes) total += s;
      if (total != n)
        throw Error(ErrorCode::invalid_argument, "cluster sizes must sum to n");
      std::size_t at = 0;
      for (std::size_t c = 0; c < spec.centers.size(); ++c) {
        if (spec.spreads[c] <= 0.0)
          throw Error(ErrorCode::invalid_argument, "cluster spreads must be positive");
        for (std::size_t i = 0; i < spec.sizes[c]; ++i)
          diag[at++] = Complex{spec.centers[c] + spec.spreads[c] * rng.normal(), 0.0};
      }
      break;
    }
    case SpectrumSpec::Kind::custom_list: {
      if (spec.values.size() != n)
        throw Error(ErrorCode::invalid_argument, "custom spectrum length must equal n");
      std::copy(spec.values.begin(), spec.values.end(), diag.begin());
      break;
    }
  }
  return diag;
}

}  // namespace

void SyntheticOperator::apply_transform(std::span<const Complex> x, std::span<Complex> y) const {
  std::copy(x.begin(), x.end(), y.begin());
  switch (transform) {
    case TransformKind::fft: {
      fft_radix2(y, false);
      const double s = 1.0 / std::sqrt(static_cast<double>(n));
      for (Complex& v : y) v *= s;
      break;
    }
    case TransformKind::dct:
      dct_complex(x, y, false);
      break;
    case TransformKind::random_orthogonal:
      for (std::size_t i = reflectors.size(); i-- > 0;) {
        double vv = 0.0;
        for (double v : reflectors[i]) vv += v * v;
        reflect(y, reflectors[i], 2.0 / vv);
      }
      break;
  }
}

void SyntheticOperator::apply_inverse_transform(std::span<const Complex> x,
                                                std::span<Complex> y) const {
  std::copy(x.begin(), x.end(), y.begin());
  switch (transform) {
    case TransformKind::fft: {
      fft_radix2(y, true);
      const double s = 1.0 / std::sqrt(static_cast<double>(n));
      for (Complex& v : y) v *= s;
      break;
    }
    case TransformKind::dct:
      dct_complex(x, y, true);
      break;
    case TransformKind::random_orthogonal:
      for (std::size_t i = 0; i < reflectors.size(); ++i) {
        double vv = 0.0;
        for (double v : reflectors[i]) vv += v * v;
        reflect(y, reflectors[i], 2.0 / vv);
      }
      break;
  }
}

void SyntheticOperator::apply(std::span<const Complex> x, std::span<Complex> y) const {
  Vector t(n);
  apply_transform(x, t);
  for (std::size_t i = 0; i < n; ++i) {
    Complex v = planted[i] * t[i];
    if (!superdiag.empty() && i + 1 < n) v += superdiag[i] * t[i + 1];
    t[i] = v;
  }
  // t was consumed left to right, so the bidiagonal product is done in place
  apply_inverse_transform(t, y);
}

double SyntheticOperator::spectral_scale() const {
  double s = 0.0;
  for (const Complex& z : planted) s = std::max(s, std::abs(z));
  return s;
}

std::shared_ptr<SyntheticOperator> synthetic_operator(const SyntheticSpec& spec) {
  if (spec.n == 0) throw Error(ErrorCode::invalid_argument, "synthetic operator needs n > 0");
  if ((spec.transform == TransformKind::fft || spec.transform == TransformKind::dct) &&
      !is_power_of_two(spec.n))
    throw Error(ErrorCode::unsupported_size, "fast transforms need power-of-two n");

  auto op = std::make_shared<SyntheticOperator>();
  op->n = spec.n;
  op->transform = spec.transform;

  Rng rng(spec.seed);
  op->planted = sample_spectrum(spec.spectrum, spec.n, rng);

  if (spec.spectrum.superdiagonal_variance > 0.0) {
    const double sigma = std::sqrt(spec.spectrum.superdiagonal_variance);
    op->superdiag.resize(spec.n - 1);
    for (double& g : op->superdiag) g = sigma * rng.normal();
  }

  if (spec.transform == TransformKind::random_orthogonal) {
    op->reflectors.resize(spec.reflectors);
    for (auto& v : op->reflectors) {
      v.resize(spec.n);
      for (double& x : v) x = rng.normal();
    }
  }

  bool real_diag = true;
  for (const Complex& z : op->planted) real_diag = real_diag && z.imag() == 0.0;
  op->hermitian = op->superdiag.empty() && real_diag;
  return op;
}

LinearOperator make_operator(std::shared_ptr<const SyntheticOperator> op) {
  LinearOperator lin;
  lin.n = op->n;
  lin.hermitian = op->hermitian;
  lin.apply = [op](std::span<const Complex> x, std::span<Complex> y) { op->apply(x, y); };
  if (op->hermitian) lin.apply_adjoint = lin.apply;
  return lin;
}

void SparseMatrix::apply(std::span<const Complex> x, std::span<Complex> y) const {
  for (std::size_t i = 0; i < rows; ++i) {
    Complex s{0.0, 0.0};
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
}

void SparseMatrix::apply_adjoint(std::span<const Complex> x, std::span<Complex> y) const {
  std::fill(y.begin(), y.end(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      y[col_idx[k]] += values[k] * x[i];
}

namespace {

SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                           std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& t,
                           bool sum_duplicates) {
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b)
                                            : std::get<1>(a) < std::get<1>(b);
  });
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  for (std::size_t i = 0; i < t.size();) {
    const auto r = std::get<0>(t[i]);
    const auto c = std::get<1>(t[i]);
    double v = std::get<2>(t[i]);
    std::size_t j = i + 1;
    while (j < t.size() && std::get<0>(t[j]) == r && std::get<1>(t[j]) == c) {
      if (sum_duplicates) v += std::get<2>(t[j]);
      ++j;
    }
    m.col_idx.push_back(c);
    m.values.push_back(v);
    ++m.row_ptr[r + 1];
    i = j;
  }
  for (std::size_t i = 0; i < rows; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  return m;
}

}  // namespace

SparseMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);

  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::parse_error, "empty file " + path);
  ++lineno;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  for (auto* s : {&object, &format, &field, &symmetry})
    std::transform(s->begin(), s->end(), s->begin(),
                   [](unsigned char c) { return std::tolower(c); });
  if (banner != "%%MatrixMarket" || object != "matrix")
    throw Error(ErrorCode::parse_error, "line 1: not a MatrixMarket matrix header");
  if (format != "coordinate")
    throw Error(ErrorCode::unsupported_field, "only coordinate format is supported");
  if (field == "complex")
    throw Error(ErrorCode::unsupported_field, "complex matrices are not supported");
  if (field != "real" && field != "integer" && field != "pattern")
    throw Error(ErrorCode::unsupported_field, "unsupported field " + field);
  const bool pattern = field == "pattern";
  bool symmetric = false;
  if (symmetry == "symmetric")
    symmetric = true;
  else if (symmetry != "general")
    throw Error(ErrorCode::unsupported_field, "unsupported symmetry " + symmetry);

  // skip comments, then the size line
  std::size_t rows = 0, cols = 0, nnz = 0;
  for (;;) {
    if (!std::getline(in, line))
      throw Error(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": missing sizes");
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream sizes(line);
    if (!(sizes >> rows >> cols >> nnz))
      throw Error(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": bad size line");
    break;
  }

  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets;
  triplets.reserve(symmetric ? 2 * nnz : nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!std::getline(in, line))
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(lineno + 1) + ": unexpected end of file");
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
      --k;
      continue;
    }
    std::istringstream entry(line);
    std::size_t i = 0, j = 0;
    double v = 1.0;
    if (!(entry >> i >> j) || (!pattern && !(entry >> v)))
      throw Error(ErrorCode::parse_error, "line " + std::to_string(lineno) + ": bad entry");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw Error(ErrorCode::parse_error,
                  "line " + std::to_string(lineno) + ": index out of range");
    triplets.emplace_back(static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1),
                          v);
    if (symmetric && i != j)
      triplets.emplace_back(static_cast<std::uint32_t>(j - 1), static_cast<std::uint32_t>(i - 1),
                            v);
  }
  return from_triplets(rows, cols, triplets, true);
}

void write_matrix_market(const std::string& path, const SparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows << " " << m.cols << " " << m.nnz() << "\n";
  char buf[64];
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%zu %u %.17g\n", i + 1, m.col_idx[k] + 1, m.values[k]);
      out << buf;
    }
}

SparseMatrix graph_laplacian(const SparseMatrix& adjacency) {
  if (adjacency.rows != adjacency.cols)
    throw Error(ErrorCode::non_square, "graph Laplacian needs a square adjacency");
  const std::size_t n = adjacency.rows;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets;
  std::vector<std::uint32_t> neighbors;
  for (std::size_t i = 0; i < n; ++i) {
    neighbors.clear();
    for (std::size_t k = adjacency.row_ptr[i]; k < adjacency.row_ptr[i + 1]; ++k) {
      const std::uint32_t j = adjacency.col_idx[k];
      if (j == i || adjacency.values[k] == 0.0) continue;  // drop loops
      neighbors.push_back(j);
    }
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
    triplets.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i),
                          static_cast<double>(neighbors.size()));
    for (std::uint32_t j : neighbors)
      triplets.emplace_back(static_cast<std::uint32_t>(i), j, -1.0);
  }
  return from_triplets(n, n, triplets, false);
}

LinearOperator make_operator(std::shared_ptr<const SparseMatrix> m, bool hermitian) {
  if (m->rows != m->cols) throw Error(ErrorCode::non_square, "operator needs a square matrix");
  LinearOperator lin;
  lin.n = m->rows;
  lin.hermitian = hermitian;
  lin.apply = [m](std::span<const Complex> x, std::span<Complex> y) { m->apply(x, y); };
  lin.apply_adjoint = [m](std::span<const Complex> x, std::span<Complex> y) {
    m->apply_adjoint(x, y);
  };
  return lin;
}

DenseMatrix materialize(const LinearOperator& op) {
  DenseMatrix a(op.n, op.n);
  Vector e(op.n, Complex{0.0, 0.0});
  for (std::size_t j = 0; j < op.n; ++j) {
    e[j] = 1.0;
    op.apply(e, a.col(j));
    e[j] = 0.0;
  }
  return a;
}

}  // namespace srrk
