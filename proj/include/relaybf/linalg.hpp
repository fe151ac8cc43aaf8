#pragma once

#include <Eigen/Dense>
#include <complex>

namespace relaybf::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Relative tolerance for accepting a matrix as Hermitian.
inline constexpr double kHermitianTol = 1e-12;
// Reconstruction tolerance for eigendecompositions, relative to the scale of
// the input.
inline constexpr double kReconstructTol = 1e-10;

// Value-semantic wrapper that guarantees exact conjugate symmetry.
//
// Construction checks that the input is Hermitian entrywise to kHermitianTol
// (relative) and then stores the symmetrized matrix (A + A^H)/2 with real
// diagonal, so downstream code can rely on the invariant bit-for-bit.
// Throws std::invalid_argument when the check fails.
class HermitianMatrix {
public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& a);

  // Skips the symmetry check and force-projects (A + A^H)/2. For callers that
  // assemble a Hermitian matrix from parts and only risk rounding-level
  // asymmetry.
  static HermitianMatrix project(const ComplexMatrix& a);

  const ComplexMatrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

private:
  ComplexMatrix m_;
};

// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Column-major stacking of a into a vector of length rows*cols.
ComplexVector vec(const ComplexMatrix& a);

// Inverse of vec: reshape v into a rows x cols matrix, column-major.
// Throws std::invalid_argument if v.size() != rows*cols.
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

struct HermEig {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns, unit norm, ordered to match values
};

// Full eigendecomposition of a Hermitian matrix. Eigenvalues are sorted
// descending; ties (and the inherent phase freedom) are broken
// deterministically: each eigenvector is rotated so its largest-modulus entry
// is real positive, and exactly-equal eigenvalues are ordered
// lexicographically by the real parts of their eigenvector entries.
HermEig herm_eig(const HermitianMatrix& h);

// Max |V diag(values) V^H - H| over entries, for reconstruction checks.
double herm_eig_residual(const HermitianMatrix& h, const HermEig& e);

// Real symmetric embedding [[Re A, -Im A], [Im A, Re A]] of a Hermitian A.
// Satisfies Tr(embed(A) embed(B)) = 2 Tr(A B) for Hermitian A, B.
RealMatrix embed_real(const HermitianMatrix& h);

// Inverse of embed_real for a real symmetric matrix of even dimension 2n:
// averages the two diagonal n x n blocks into Re A and the off-diagonal
// blocks into Im A. Exact on matrices in the range of embed_real and the
// trace-preserving projection otherwise.
HermitianMatrix unembed_real(const RealMatrix& x);

// Quadratic form w^H A w (complex in general).
Complex quad_form(const ComplexVector& w, const ComplexMatrix& a);

// w^H A w for Hermitian A: returns the real part (the imaginary part is
// rounding noise by symmetry).
double real_quad_form(const ComplexVector& w, const HermitianMatrix& a);

// Hermitian square root of a PSD matrix; eigenvalues below zero are clipped.
ComplexMatrix sqrt_psd(const HermitianMatrix& g);

// Orthonormal basis (columns) of the eigenspace of a Hermitian PSD matrix
// with eigenvalues <= rel_tol * max(eigenvalue, 1). Returns an n x 0 matrix
// when the matrix is (numerically) positive definite.
ComplexMatrix null_space_basis(const HermitianMatrix& psd, double rel_tol = 1e-10);

}  // namespace relaybf::linalg
