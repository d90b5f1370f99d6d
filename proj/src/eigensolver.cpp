#include "abtunnel/eigensolver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace abtunnel {

namespace {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

std::mutex& fftw_plan_mutex()
{
    static std::mutex m;
    return m;
}

// Solves (c (-Delta_D) + tau) z = r on the node grid: a DST-I diagonalizes
// the Dirichlet Laplacian exactly.
class SineSolver {
public:
    SineSolver(int nx, int ny, double c, double tau) : nx_(nx), ny_(ny)
    {
        const std::size_t n = static_cast<std::size_t>(nx) * ny;
        buf_ = fftw_alloc_real(n);
        tmp_ = fftw_alloc_real(n);
        {
            std::lock_guard<std::mutex> lock(fftw_plan_mutex());
            plan_ = fftw_plan_r2r_2d(ny, nx, buf_, tmp_, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
            back_ = fftw_plan_r2r_2d(ny, nx, tmp_, buf_, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
        }
        inv_.resize(n);
        const double norm = 4.0 * (nx + 1.0) * (ny + 1.0);
        for (int l = 0; l < ny; ++l) {
            const double ly = 2.0 - 2.0 * std::cos(std::numbers::pi * (l + 1) / (ny + 1.0));
            for (int k = 0; k < nx; ++k) {
                const double lx = 2.0 - 2.0 * std::cos(std::numbers::pi * (k + 1) / (nx + 1.0));
                inv_[static_cast<std::size_t>(l) * nx + k] = 1.0 / ((c * (lx + ly) + tau) * norm);
            }
        }
    }
    ~SineSolver()
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan_);
        fftw_destroy_plan(back_);
        fftw_free(buf_);
        fftw_free(tmp_);
    }
    SineSolver(const SineSolver&) = delete;
    SineSolver& operator=(const SineSolver&) = delete;

    void apply(const cplx* r, cplx* z)
    {
        const std::size_t n = inv_.size();
        for (int part = 0; part < 2; ++part) {
            for (std::size_t a = 0; a < n; ++a) buf_[a] = part == 0 ? r[a].real() : r[a].imag();
            fftw_execute(plan_);
            for (std::size_t a = 0; a < n; ++a) tmp_[a] *= inv_[a];
            fftw_execute(back_);
            for (std::size_t a = 0; a < n; ++a) {
                if (part == 0)
                    z[a] = cplx(buf_[a], 0.0);
                else
                    z[a] += cplx(0.0, buf_[a]);
            }
        }
    }

private:
    int nx_, ny_;
    double* buf_ = nullptr;
    double* tmp_ = nullptr;
    fftw_plan plan_{}, back_{};
    std::vector<double> inv_;
};

// Returns T with (Q T)^H (Q T) = I, dropping directions whose scaled Gram
// eigenvalue falls below drop (SVQB).
CMat svqb(const CMat& Q, double drop = 1e-14)
{
    const Eigen::Index m = Q.cols();
    CMat G = Q.adjoint() * Q;
    G = 0.5 * (G + G.adjoint()).eval();
    Eigen::VectorXd d(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double g = G(i, i).real();
        d(i) = g > 0.0 ? 1.0 / std::sqrt(g) : 0.0;
    }
    const CMat Gs = d.asDiagonal() * G * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<CMat> es(Gs);
    const Eigen::VectorXd& th = es.eigenvalues();
    const double tmax = th.cwiseAbs().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < m; ++i)
        if (th(i) > drop * tmax) keep.push_back(i);
    CMat T(m, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        T.col(static_cast<Eigen::Index>(c)) = d.asDiagonal() * es.eigenvectors().col(keep[c]) / std::sqrt(th(keep[c]));
    return T;
}

double orth_defect(const CMat& Q)
{
    return (Q.adjoint() * Q - CMat::Identity(Q.cols(), Q.cols())).norm();
}

}  // namespace

LatticeEigenpairs solve_lowest_k(const SparseHermitian& H, int k, double tol, const LobpcgOptions& opt)
{
    if (k < 1 || k > 8) throw std::invalid_argument("solve_lowest_k: k must lie in 1..8");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_lowest_k: tol must be positive");
    const Eigen::Index n = static_cast<Eigen::Index>(H.dimension());
    const Eigen::Index b = std::min<Eigen::Index>(k + std::max(opt.extra, 0), n);

    double vmin = 0.0;
    for (std::size_t a = 0; a < H.dimension(); ++a) vmin = std::min(vmin, H.diag[a] - 4.0 * H.c);
    const double shift = opt.shift >= 0.0 ? opt.shift : -vmin;

    auto op = [&](const CMat& x, CMat& y) {
        if (opt.parallel)
            apply_hamiltonian_omp(H, x, y, shift);
        else
            apply_hamiltonian_serial(H, x, y, shift);
    };

    std::unique_ptr<SineSolver> sine;
    if (opt.precond == Preconditioner::laplacian) sine = std::make_unique<SineSolver>(H.nx, H.ny, H.c, shift);
    auto precondition = [&](const CMat& r) {
        CMat w(r.rows(), r.cols());
        switch (opt.precond) {
        case Preconditioner::none: w = r; break;
        case Preconditioner::diagonal:
            for (Eigen::Index j = 0; j < r.cols(); ++j)
                for (Eigen::Index a = 0; a < n; ++a)
                    w(a, j) = r(a, j) / (H.diag[static_cast<std::size_t>(a)] + shift);
            break;
        case Preconditioner::laplacian:
            for (Eigen::Index j = 0; j < r.cols(); ++j) sine->apply(r.col(j).data(), w.col(j).data());
            break;
        }
        return w;
    };

    // Seeded Gaussian start block.
    std::mt19937_64 gen(opt.seed);
    std::normal_distribution<double> nd;
    CMat X(n, b);
    for (Eigen::Index j = 0; j < b; ++j)
        for (Eigen::Index a = 0; a < n; ++a) X(a, j) = cplx(nd(gen), nd(gen));
    X = X * svqb(X);
    CMat HX;
    op(X, HX);

    Eigen::VectorXd lambda(b);
    auto rayleigh_ritz = [&](const CMat& S, const CMat& HS, CMat& C) {
        CMat A = S.adjoint() * HS;
        A = 0.5 * (A + A.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMat> es(A);
        C = es.eigenvectors().leftCols(b);
        lambda = es.eigenvalues().head(b);
    };
    {
        CMat C;
        rayleigh_ritz(X, HX, C);
        X = X * C;
        HX = HX * C;
    }

    CMat P(n, 0), HP(n, 0);
    LatticeEigenpairs out;
    auto residual_norms = [&](const CMat& x, const CMat& hx) {
        Eigen::VectorXd r(b);
        for (Eigen::Index j = 0; j < b; ++j) r(j) = (hx.col(j) - lambda(j) * x.col(j)).norm();
        return r;
    };

    int it = 0;
    for (; it < opt.max_iter; ++it) {
        if (it > 0 && it % 25 == 0) {
            // Refresh the implicit products and the basis.
            X = X * svqb(X);
            op(X, HX);
            CMat C;
            rayleigh_ritz(X, HX, C);
            X = X * C;
            HX = HX * C;
        }
        const CMat R = HX - X * lambda.asDiagonal();
        Eigen::VectorXd res(b);
        for (Eigen::Index j = 0; j < b; ++j) res(j) = R.col(j).norm();
        if (opt.progress) opt.progress(it, res.head(k).maxCoeff());
        if (res.head(k).maxCoeff() <= tol) {
            op(X, HX);
            if (residual_norms(X, HX).head(k).maxCoeff() <= tol) {
                out.converged = true;
                break;
            }
            continue;
        }

        CMat W = precondition(R);
        W -= X * (X.adjoint() * W);
        W = W * svqb(W);
        CMat HW;
        op(W, HW);

        CMat Q(n, W.cols() + P.cols()), HQ(n, W.cols() + P.cols());
        Q << W, P;
        HQ << HW, HP;
        for (int pass = 0; pass < 2; ++pass) {
            const CMat coef = X.adjoint() * Q;
            Q -= X * coef;
            HQ -= HX * coef;
            CMat T = svqb(Q);
            Q = Q * T;
            HQ = HQ * T;
            if (orth_defect(Q) < 1e-10) break;
        }

        CMat S(n, b + Q.cols()), HS(n, b + Q.cols());
        S << X, Q;
        HS << HX, HQ;
        CMat C;
        rayleigh_ritz(S, HS, C);
        const CMat Cq = C.bottomRows(Q.cols());
        P = Q * Cq;
        HP = HQ * Cq;
        X = S * C;
        HX = HS * C;
    }

    out.iterations = it;
    op(X, HX);
    const Eigen::VectorXd res = residual_norms(X, HX);
    out.vectors = X.leftCols(k);
    for (int j = 0; j < k; ++j) {
        out.vectors.col(j).normalize();
        out.eigenvalues.push_back(lambda(j) - shift);
        out.residuals.push_back(res(j));
    }
    if (!out.converged && opt.throw_on_failure)
        throw std::runtime_error("solve_lowest_k: no convergence in " + std::to_string(opt.max_iter) +
                                 " iterations (max residual " + std::to_string(res.head(k).maxCoeff()) + ")");
    return out;
}

}  // namespace abtunnel
