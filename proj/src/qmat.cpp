#include "tw/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tw::qmat {

CMatrix::CMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
    if (dim <= 0) throw DimensionError("matrix dimension must be positive");
}

CMatrix CMatrix::identity(int dim) {
    CMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::from_rows(const std::vector<std::vector<cx>>& rows) {
    const int n = static_cast<int>(rows.size());
    CMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw DimensionError("from_rows: matrix must be square");
        for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

cx CMatrix::trace() const {
    cx t = 0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::max_abs() const {
    double m = 0;
    for (const cx& v : a_) m = std::max(m, std::abs(v));
    return m;
}

double CMatrix::hermiticity_defect() const {
    double m = 0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

bool CMatrix::all_finite() const {
    for (const cx& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (o.dim_ != dim_) throw DimensionError("matrix addition: dimension mismatch");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (o.dim_ != dim_) throw DimensionError("matrix subtraction: dimension mismatch");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(cx s) {
    for (cx& v : a_) v *= s;
    return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionError("matrix product: dimension mismatch");
    const int n = a.dim_;
    CMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cx aik = a(i, k);
            if (aik == cx{}) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("max_abs_diff: dimension mismatch");
    double m = 0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

double unitarity_defect(const CMatrix& u) {
    return max_abs_diff(u.adjoint() * u, CMatrix::identity(u.dim()));
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
    const int da = a.dim(), db = b.dim();
    CMatrix c(da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            const cx aij = a(i, j);
            if (aij == cx{}) continue;
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l) c(i * db + k, j * db + l) = aij * b(k, l);
        }
    return c;
}

int SubsystemLayout::total_dim() const {
    int d = 1;
    for (int f : dims) d *= f;
    return d;
}

void SubsystemLayout::validate() const {
    if (dims.empty()) throw DimensionError("subsystem layout must be non-empty");
    for (int f : dims)
        if (f <= 0) throw DimensionError("subsystem factor dimensions must be positive");
}

DensityReport validate_density(const CMatrix& m, double tol) {
    DensityReport r;
    r.hermiticity_defect = m.hermiticity_defect();
    r.trace_defect = std::abs(m.trace() - cx{1.0});
    if (!m.all_finite()) {
        r.pass = false;
        r.min_eigenvalue = -std::numeric_limits<double>::infinity();
        return r;
    }
    // symmetrize before the spectral check so mild Hermiticity defects
    // do not confuse the eigensolver
    CMatrix h = m;
    for (int i = 0; i < h.dim(); ++i)
        for (int j = 0; j < h.dim(); ++j)
            h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    auto spec = hermitian_eigensystem(h);
    r.min_eigenvalue = spec.eigenvalues.front();
    r.pass = r.hermiticity_defect <= tol && r.trace_defect <= tol && r.min_eigenvalue >= -tol;
    return r;
}

DensityReport validate_density(const DensityOperator& rho, double tol) {
    return validate_density(rho.mat(), tol);
}

DensityOperator::DensityOperator(CMatrix m, SubsystemLayout layout, double herm_tol)
    : mat_(std::move(m)), layout_(std::move(layout)), herm_tol_(herm_tol) {
    layout_.validate();
    if (layout_.total_dim() != mat_.dim())
        throw DimensionError("density operator: layout product does not match matrix dimension");
    if (!mat_.all_finite()) throw ContractViolation("density operator: non-finite entries");
    auto r = validate_density(mat_, herm_tol_);
    if (!r.pass)
        throw ContractViolation(
            "density operator invariant violated: hermiticity defect " +
            std::to_string(r.hermiticity_defect) + ", trace defect " +
            std::to_string(r.trace_defect) + ", min eigenvalue " +
            std::to_string(r.min_eigenvalue));
}

DensityOperator DensityOperator::with_layout(SubsystemLayout l) const {
    l.validate();
    if (l.total_dim() != mat_.dim())
        throw DimensionError("with_layout: layout product does not match matrix dimension");
    DensityOperator out = *this;
    out.layout_ = std::move(l);
    return out;
}

HermitianSpectrum hermitian_eigensystem(const CMatrix& h) {
    const int n = h.dim();
    if (n == 0) throw DimensionError("eigensystem of empty matrix");
    const double scale = std::max(1.0, h.max_abs());
    if (!h.all_finite()) throw ContractViolation("eigensystem: non-finite entries");
    if (h.hermiticity_defect() > 1e-8 * scale)
        throw ContractViolation("eigensystem: input is not Hermitian");

    // exact symmetrization; the iteration then preserves Hermiticity
    CMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    CMatrix v = CMatrix::identity(n);

    const double thresh = 1e-12 * scale;
    const int max_sweeps = 100;
    bool converged = (n == 1);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= thresh) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= thresh * 1e-2) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cx phase = apq / mag;
                // rotation angle zeroing the (p,q) entry of the phase-rotated
                // real 2x2 block [[app, mag], [mag, aqq]]
                const double tau = (aqq - app) / (2.0 * mag);
                double t;  // smaller-magnitude root of t^2 - 2 tau t - 1 = 0
                if (tau >= 0)
                    t = -1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // unitary J: J[p][p]=c, J[p][q]=-s, J[q][p]=conj(phase)*s, J[q][q]=conj(phase)*c
                const cx jqp = std::conj(phase) * s;
                const cx jqq = std::conj(phase) * c;
                // A <- J† A J, columns then rows
                for (int k = 0; k < n; ++k) {
                    const cx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * c + akq * jqp;
                    a(k, q) = akp * (-s) + akq * jqq;
                }
                for (int k = 0; k < n; ++k) {
                    const cx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(jqp) * aqk;
                    a(q, k) = -s * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (int k = 0; k < n; ++k) {
                    const cx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * c + vkq * jqp;
                    v(k, q) = vkp * (-s) + vkq * jqq;
                }
            }
        }
    }
    if (!converged) {
        double off = 0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off > thresh) throw ContractViolation("eigensystem: Jacobi sweeps did not converge");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    HermitianSpectrum spec;
    spec.eigenvalues.resize(n);
    spec.eigenvectors = CMatrix(n);
    for (int col = 0; col < n; ++col) {
        spec.eigenvalues[col] = a(order[col], order[col]).real();
        for (int row = 0; row < n; ++row) spec.eigenvectors(row, col) = v(row, order[col]);
    }
    return spec;
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw DimensionError("trace_distance: dimension mismatch");
    CMatrix diff = rho.mat() - sigma.mat();
    auto spec = hermitian_eigensystem(diff);
    double sum = 0;
    for (double ev : spec.eigenvalues) sum += std::abs(ev);
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

namespace {

// per-factor strides for the row-major mixed-radix index
std::vector<int> layout_strides(const SubsystemLayout& layout) {
    const int k = static_cast<int>(layout.dims.size());
    std::vector<int> stride(k, 1);
    for (int i = k - 2; i >= 0; --i) stride[i] = stride[i + 1] * layout.dims[i + 1];
    return stride;
}

// base offsets of all mixed-radix values over the given subset of factors
std::vector<int> enumerate_offsets(const SubsystemLayout& layout, const std::vector<int>& subset) {
    const auto stride = layout_strides(layout);
    std::vector<int> offsets{0};
    for (int f : subset) {
        std::vector<int> next;
        next.reserve(offsets.size() * layout.dims[f]);
        for (int base : offsets)
            for (int d = 0; d < layout.dims[f]; ++d) next.push_back(base + d * stride[f]);
        offsets.swap(next);
    }
    return offsets;
}

}  // namespace

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
    const auto& layout = rho.layout();
    const int nf = static_cast<int>(layout.factors());
    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (kept.empty()) throw DimensionError("partial_trace: keep set must be non-empty");
    for (int f : kept)
        if (f < 0 || f >= nf) throw DimensionError("partial_trace: factor index out of range");

    std::vector<int> traced;
    for (int f = 0; f < nf; ++f)
        if (!std::binary_search(kept.begin(), kept.end(), f)) traced.push_back(f);

    std::vector<int> kept_dims;
    for (int f : kept) kept_dims.push_back(layout.dims[f]);
    const auto kept_off = enumerate_offsets(layout, kept);
    const auto traced_off = enumerate_offsets(layout, traced);

    const int dk = static_cast<int>(kept_off.size());
    CMatrix out(dk);
    const CMatrix& in = rho.mat();
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            cx sum = 0;
            for (int m : traced_off) sum += in(kept_off[i] + m, kept_off[j] + m);
            out(i, j) = sum;
        }
    return DensityOperator(std::move(out), SubsystemLayout(kept_dims), rho.herm_tol());
}

DensityOperator product_of_marginals(const DensityOperator& rho, int factor) {
    const auto& layout = rho.layout();
    const int nf = static_cast<int>(layout.factors());
    if (factor < 0 || factor >= nf)
        throw DimensionError("product_of_marginals: factor index out of range");
    if (nf < 2) throw DimensionError("product_of_marginals: need at least two factors");

    DensityOperator sys = partial_trace(rho, {factor});
    std::vector<int> rest;
    for (int f = 0; f < nf; ++f)
        if (f != factor) rest.push_back(f);
    DensityOperator env = partial_trace(rho, rest);

    const auto stride = layout_strides(layout);
    const auto sys_off = enumerate_offsets(layout, {factor});
    const auto rest_off = enumerate_offsets(layout, rest);

    const int n = rho.dim();
    CMatrix out(n);
    const int ds = layout.dims[factor];
    const int dr = static_cast<int>(rest_off.size());
    for (int is = 0; is < ds; ++is)
        for (int js = 0; js < ds; ++js) {
            const cx sv = sys.mat()(is, js);
            for (int ir = 0; ir < dr; ++ir)
                for (int jr = 0; jr < dr; ++jr)
                    out(sys_off[is] + rest_off[ir], sys_off[js] + rest_off[jr]) =
                        sv * env.mat()(ir, jr);
        }
    return DensityOperator(std::move(out), layout, rho.herm_tol());
}

DensityOperator evolve(const DensityOperator& rho, const CMatrix& u) {
    if (u.dim() != rho.dim()) throw DimensionError("evolve: dimension mismatch");
    if (unitarity_defect(u) > 1e-9) throw ContractViolation("evolve: operator is not unitary");
    CMatrix out = u * rho.mat() * u.adjoint();
    return DensityOperator(std::move(out), rho.layout(), rho.herm_tol());
}

CMatrix hermitian_propagator(const CMatrix& h, double t) {
    auto spec = hermitian_eigensystem(h);
    const int n = h.dim();
    CMatrix u(n);
    // V exp(-i Lambda t) V†
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx sum = 0;
            for (int k = 0; k < n; ++k) {
                const cx ph = std::exp(cx(0, -spec.eigenvalues[k] * t));
                sum += spec.eigenvectors(i, k) * ph * std::conj(spec.eigenvectors(j, k));
            }
            u(i, j) = sum;
        }
    return u;
}

}  // namespace tw::qmat
