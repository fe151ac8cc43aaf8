#include "relaybf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace relaybf::linalg {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const Complex d = a(i, j) - std::conj(a(j, i));
      if (std::abs(d) > kHermitianTol * scale) {
        throw std::invalid_argument("HermitianMatrix: input is not Hermitian");
      }
    }
  }
  m_ = 0.5 * (a + a.adjoint());
  m_.diagonal() = m_.diagonal().real().cast<Complex>();
}

HermitianMatrix HermitianMatrix::project(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("HermitianMatrix: matrix must be square");
  }
  HermitianMatrix h;
  h.m_ = 0.5 * (a + a.adjoint());
  h.m_.diagonal() = h.m_.diagonal().real().cast<Complex>();
  return h;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& a) {
  return ComplexVector(Eigen::Map<const ComplexVector>(a.data(), a.size()));
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  return ComplexMatrix(Eigen::Map<const ComplexMatrix>(v.data(), rows, cols));
}

namespace {

// Rotate each eigenvector so its largest-modulus entry is real positive.
void canonicalize_phases(ComplexMatrix& vecs) {
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
      const double m = std::abs(vecs(i, j));
      if (m > best + 1e-15) {
        best = m;
        imax = i;
      }
    }
    const Complex pivot = vecs(imax, j);
    if (std::abs(pivot) > 0) {
      vecs.col(j) *= std::conj(pivot) / std::abs(pivot);
    }
  }
}

bool lex_less(const ComplexMatrix& vecs, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
    const double ra = vecs(i, a).real();
    const double rb = vecs(i, b).real();
    if (ra != rb) return ra < rb;
  }
  return false;
}

}  // namespace

HermEig herm_eig(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.mat());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigendecomposition failed");
  }
  const Eigen::Index n = h.dim();
  HermEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order; reverse to descending.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  canonicalize_phases(out.vectors);
  // Deterministic order within groups of exactly-equal eigenvalues.
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (out.values(a) != out.values(b)) return out.values(a) > out.values(b);
    return lex_less(out.vectors, a, b);
  });
  HermEig sorted;
  sorted.values.resize(n);
  sorted.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sorted.values(k) = out.values(order[static_cast<size_t>(k)]);
    sorted.vectors.col(k) = out.vectors.col(order[static_cast<size_t>(k)]);
  }
  return sorted;
}

double herm_eig_residual(const HermitianMatrix& h, const HermEig& e) {
  const ComplexMatrix recon =
      e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
  return (recon - h.mat()).cwiseAbs().maxCoeff();
}

RealMatrix embed_real(const HermitianMatrix& h) {
  const Eigen::Index n = h.dim();
  RealMatrix x(2 * n, 2 * n);
  const RealMatrix re = h.mat().real();
  const RealMatrix im = h.mat().imag();
  x.topLeftCorner(n, n) = re;
  x.bottomRightCorner(n, n) = re;
  x.topRightCorner(n, n) = -im;
  x.bottomLeftCorner(n, n) = im;
  return x;
}

HermitianMatrix unembed_real(const RealMatrix& x) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0) {
    throw std::invalid_argument("unembed_real: need square matrix of even dimension");
  }
  const Eigen::Index n = x.rows() / 2;
  const RealMatrix re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  const RealMatrix im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  ComplexMatrix a(n, n);
  a.real() = re;
  a.imag() = im;
  return HermitianMatrix::project(a);
}

Complex quad_form(const ComplexVector& w, const ComplexMatrix& a) {
  if (w.size() != a.rows() || a.rows() != a.cols()) {
    throw std::invalid_argument("quad_form: dimension mismatch");
  }
  return (w.adjoint() * a * w)(0, 0);
}

double real_quad_form(const ComplexVector& w, const HermitianMatrix& a) {
  return quad_form(w, a.mat()).real();
}

ComplexMatrix sqrt_psd(const HermitianMatrix& g) {
  HermEig e = herm_eig(g);
  RealVector s = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * s.asDiagonal() * e.vectors.adjoint();
}

ComplexMatrix null_space_basis(const HermitianMatrix& psd, double rel_tol) {
  HermEig e = herm_eig(psd);
  const double cutoff = rel_tol * std::max(e.values.size() > 0 ? e.values(0) : 0.0, 1.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) <= cutoff) keep.push_back(k);
  }
  ComplexMatrix basis(psd.dim(), static_cast<Eigen::Index>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) {
    basis.col(static_cast<Eigen::Index>(j)) = e.vectors.col(keep[j]);
  }
  return basis;
}

}  // namespace relaybf::linalg
