// qmat.hpp
// Dense complex linear algebra and quantum-state primitives: tensor products,
// partial traces, Hermitian eigendecomposition, trace distance, unitary evolution.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace tw::qmat {

using cx = std::complex<double>;

// Dimension/layout mismatches between operands.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input violates a numerical contract (non-Hermitian, non-unitary, not a state, ...).
class ContractViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense square complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(int dim);
    static CMatrix identity(int dim);
    static CMatrix from_rows(const std::vector<std::vector<cx>>& rows);

    int dim() const { return dim_; }
    cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
    const cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

    CMatrix adjoint() const;
    cx trace() const;
    double max_abs() const;              // max-entry norm
    double hermiticity_defect() const;   // max |A - A†|
    bool all_finite() const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cx s);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(cx s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);  // matrix product

private:
    int dim_ = 0;
    std::vector<cx> a_;
};

double max_abs_diff(const CMatrix& a, const CMatrix& b);

// Unitarity defect ||U†U - I||max.
double unitarity_defect(const CMatrix& u);

// Kronecker product; the left factor carries the slower-varying index.
CMatrix tensor(const CMatrix& a, const CMatrix& b);

// Ordered tensor-factor dimensions fixing the index convention
// (leftmost factor = slowest index).
struct SubsystemLayout {
    std::vector<int> dims;

    SubsystemLayout() = default;
    SubsystemLayout(std::initializer_list<int> d) : dims(d) { validate(); }
    explicit SubsystemLayout(std::vector<int> d) : dims(std::move(d)) { validate(); }

    int total_dim() const;
    size_t factors() const { return dims.size(); }
    void validate() const;

    bool operator==(const SubsystemLayout& o) const { return dims == o.dims; }
};

struct DensityReport {
    double hermiticity_defect = 0;
    double trace_defect = 0;     // |tr - 1|
    double min_eigenvalue = 0;
    bool pass = false;
};

// Measures how far a candidate matrix is from being a valid density operator.
DensityReport validate_density(const CMatrix& m, double tol);

// Hermitian, unit-trace, positive-semidefinite matrix with an attached
// subsystem layout. Invariants are enforced at construction.
class DensityOperator {
public:
    DensityOperator(CMatrix m, SubsystemLayout layout, double herm_tol = 1e-10);

    const CMatrix& mat() const { return mat_; }
    const SubsystemLayout& layout() const { return layout_; }
    double herm_tol() const { return herm_tol_; }
    int dim() const { return mat_.dim(); }

    // Same matrix reinterpreted with a compatible factor grouping.
    DensityOperator with_layout(SubsystemLayout l) const;

private:
    CMatrix mat_;
    SubsystemLayout layout_;
    double herm_tol_;
};

DensityReport validate_density(const DensityOperator& rho, double tol);

struct HermitianSpectrum {
    std::vector<double> eigenvalues;  // ascending
    CMatrix eigenvectors;             // orthonormal columns, paired with eigenvalues
};

// Cyclic Jacobi diagonalization of a Hermitian matrix.
// Off-diagonal threshold 1e-12 (relative), at most 100 sweeps.
HermitianSpectrum hermitian_eigensystem(const CMatrix& h);

// D(rho, sigma) = (1/2) * sum |eigenvalues of rho - sigma|, clamped to [0,1].
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

// Reduced state on the kept factors (original order preserved).
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);

// rho^(k) ⊗ rho^(rest) with every factor kept in its original slot.
DensityOperator product_of_marginals(const DensityOperator& rho, int factor);

// U rho U† with U checked unitary to 1e-9.
DensityOperator evolve(const DensityOperator& rho, const CMatrix& u);

// exp(-i H t) through the spectral decomposition of H.
CMatrix hermitian_propagator(const CMatrix& h, double t);

}  // namespace tw::qmat
