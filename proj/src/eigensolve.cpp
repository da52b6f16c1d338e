#include "dwell/eigensolve.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace dwell {

namespace {

using Factor = Eigen::SimplicialLDLT<SymmetricSparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

SymmetricSparseMatrix shifted(const SymmetricSparseMatrix& h, const SymmetricSparseMatrix& m,
                              double shift)
{
    SymmetricSparseMatrix a = h - shift * m;
    a.makeCompressed();
    return a;
}

// Returns false when the factorization broke down or hit a zero pivot.
bool factorize(Factor& factor, const SymmetricSparseMatrix& a)
{
    factor.compute(a);
    if (factor.info() != Eigen::Success) return false;
    const auto& d = factor.vectorD();
    const double scale = d.cwiseAbs().maxCoeff();
    return d.cwiseAbs().minCoeff() > 1e-14 * scale;
}

double inf_norm(const SymmetricSparseMatrix& a)
{
    Vector rows = Vector::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SymmetricSparseMatrix::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
    }
    return rows.maxCoeff();
}

// Thick-restart Lanczos for the largest eigenvalues of A = (H - s M)^-1 M,
// which is self-adjoint in the M inner product. Vectors in `locked` (with
// their M-images) are projected out of every Krylov vector.
class ShiftInvertLanczos {
public:
    ShiftInvertLanczos(const SymmetricSparseMatrix& m, const Factor& factor, const SolverOptions& options)
        : m_(m), factor_(factor), options_(options), rng_(options.seed)
    {
    }

    struct Ritz {
        std::vector<double> theta;
        Eigen::MatrixXd vectors;
        std::size_t restarts = 0;
        bool converged = false;
    };

    Ritz run(std::size_t nev, std::size_t subspace, const Eigen::MatrixXd& locked,
             const Eigen::MatrixXd& locked_m, double theta_tol)
    {
        const long n = m_.rows();
        const long mdim = static_cast<long>(subspace);
        Eigen::MatrixXd v(n, mdim + 1);
        Eigen::MatrixXd mv(n, mdim + 1);
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(mdim, mdim);

        Vector start = random_vector(n);
        if (!orthonormalize(start, v, mv, 0, locked, locked_m, v.col(0), mv.col(0))) {
            throw std::runtime_error("Lanczos start vector is degenerate");
        }

        long kept = 0;
        Ritz out;
        for (std::size_t restart = 0; restart <= options_.max_restarts; ++restart) {
            out.restarts = restart;
            double beta = 0.0;
            for (long j = kept; j < mdim; ++j) {
                Vector w = factor_.solve(mv.col(j));
                ++applications;
                const double alpha = mv.col(j).dot(w);
                t(j, j) = alpha;
                w -= alpha * v.col(j);
                if (j > kept) w -= t(j - 1, j) * v.col(j - 1);
                const bool ok = orthonormalize(w, v, mv, j + 1, locked, locked_m, v.col(j + 1), mv.col(j + 1), &beta);
                if (!ok) {
                    // Invariant subspace: continue from a fresh direction.
                    Vector fresh = random_vector(n);
                    orthonormalize(fresh, v, mv, j + 1, locked, locked_m, v.col(j + 1), mv.col(j + 1));
                    beta = 0.0;
                }
                if (j + 1 < mdim) {
                    t(j, j + 1) = beta;
                    t(j + 1, j) = beta;
                }
            }

            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            // Descending order: largest theta first.
            std::vector<long> order(static_cast<std::size_t>(mdim));
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](long a, long b) { return es.eigenvalues()[a] > es.eigenvalues()[b]; });

            std::size_t nconv = 0;
            for (std::size_t i = 0; i < nev; ++i) {
                const long c = order[i];
                const double theta = es.eigenvalues()[c];
                const double est = std::abs(beta * es.eigenvectors()(mdim - 1, c));
                if (est <= theta_tol * std::abs(theta)) ++nconv;
                else break;
            }

            if (nconv >= nev || restart == options_.max_restarts) {
                out.converged = nconv >= nev;
                const long keep = static_cast<long>(nev);
                Eigen::MatrixXd y(mdim, keep);
                out.theta.clear();
                for (long i = 0; i < keep; ++i) {
                    y.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
                    out.theta.push_back(es.eigenvalues()[order[static_cast<std::size_t>(i)]]);
                }
                out.vectors = v.leftCols(mdim) * y;
                return out;
            }

            // Thick restart with the leading Ritz vectors.
            const long keep = std::min<long>(mdim - 8, static_cast<long>(nev) +
                                                            (mdim - static_cast<long>(nev)) / 3);
            Eigen::MatrixXd y(mdim, keep);
            for (long i = 0; i < keep; ++i) y.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
            Eigen::MatrixXd new_v = v.leftCols(mdim) * y;
            Eigen::MatrixXd new_mv = mv.leftCols(mdim) * y;
            v.leftCols(keep) = new_v;
            mv.leftCols(keep) = new_mv;
            v.col(keep) = v.col(mdim);
            mv.col(keep) = mv.col(mdim);
            t.setZero();
            for (long i = 0; i < keep; ++i) {
                t(i, i) = es.eigenvalues()[order[static_cast<std::size_t>(i)]];
                const double s = beta * y(mdim - 1, i);
                t(i, keep) = s;
                t(keep, i) = s;
            }
            // The arrow couplings are also removed by the full
            // reorthogonalization in the next step.
            kept = keep;
        }
        return out;
    }

    std::size_t applications = 0;

private:
    Vector random_vector(long n)
    {
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        Vector x(n);
        for (long i = 0; i < n; ++i) x[i] = dist(rng_);
        return x;
    }

    // Orthogonalizes w against columns [0, count) of v and the locked block
    // (twice, classical Gram-Schmidt in the M inner product), then normalizes.
    bool orthonormalize(Vector& w, const Eigen::MatrixXd& v, const Eigen::MatrixXd& mv, long count,
                        const Eigen::MatrixXd& locked, const Eigen::MatrixXd& locked_m,
                        Eigen::Ref<Vector> out_v, Eigen::Ref<Vector> out_mv, double* norm = nullptr)
    {
        Vector mw = m_ * w;
        const double before = std::sqrt(std::max(0.0, w.dot(mw)));
        for (int pass = 0; pass < 2; ++pass) {
            if (locked.cols() > 0) {
                const Vector c = locked_m.transpose() * w;
                w -= locked * c;
            }
            if (count > 0) {
                const Vector c = mv.leftCols(count).transpose() * w;
                w -= v.leftCols(count) * c;
            }
        }
        mw = m_ * w;
        const double len = std::sqrt(std::max(0.0, w.dot(mw)));
        if (norm) *norm = len;
        if (!(len > 1e-12 * std::max(before, 1e-300))) return false;
        out_v = w / len;
        out_mv = mw / len;
        return true;
    }

    const SymmetricSparseMatrix& m_;
    const Factor& factor_;
    SolverOptions options_;
    std::mt19937 rng_;
};

}  // namespace

std::size_t count_below(const SymmetricSparseMatrix& h, const SymmetricSparseMatrix& m, double threshold)
{
    Factor factor;
    double tau = threshold;
    for (int attempt = 0; attempt < 8; ++attempt) {
        if (factorize(factor, shifted(h, m, tau))) {
            const auto& d = factor.vectorD();
            return static_cast<std::size_t>((d.array() < 0.0).count());
        }
        tau = threshold - 1e-12 * (1 << attempt) * std::max(1.0, std::abs(threshold));
    }
    throw std::runtime_error("inertia count: factorization failed near the threshold");
}

std::vector<EigenPair> solve_lowest(const SymmetricSparseMatrix& h, const SymmetricSparseMatrix& m,
                                    std::size_t count, const SolverOptions& options, SolverReport* report)
{
    const std::size_t n = static_cast<std::size_t>(h.rows());
    if (h.rows() != h.cols() || m.rows() != h.rows() || m.cols() != h.cols()) {
        throw std::invalid_argument("solve_lowest: H and M must be square of equal size");
    }
    if (count == 0 || count >= n) throw std::invalid_argument("solve_lowest: need 0 < K < dimension");

    // Shift strictly below the spectrum: try 0, walk down until the inertia
    // is zero, then bisect back up towards the lowest eigenvalue.
    Factor factor;
    auto all_above = [&](double tau) {
        return factorize(factor, shifted(h, m, tau)) && (factor.vectorD().array() < 0.0).count() == 0;
    };
    double shift = 0.0;
    if (!all_above(shift)) {
        double high = shift;
        double step = 1e-2;
        bool placed = false;
        for (int attempt = 0; attempt < 60 && !placed; ++attempt) {
            high = shift;
            shift -= step;
            step *= 4.0;
            placed = all_above(shift);
        }
        if (!placed) throw ConvergenceError("could not place a shift below the spectrum", {});
        for (int it = 0; it < 40 && (high - shift) > 0.05 * std::max(std::abs(shift), 1e-3); ++it) {
            const double mid = 0.5 * (shift + high);
            if (all_above(mid)) shift = mid;
            else high = mid;
        }
        if (!all_above(shift)) throw ConvergenceError("shifted matrix cannot be factorized", {});
    }

    const double h_norm = inf_norm(h);
    const std::size_t wanted = std::min(count + 1, n - 1);
    std::size_t subspace = options.subspace;
    if (subspace == 0) subspace = std::max(2 * wanted + 40, wanted + 80);
    subspace = std::min(subspace, n - 1);
    if (subspace < wanted + 10) {
        // Too small for a useful Krylov space: solve densely.
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(h), Eigen::MatrixXd(m)};
        if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolve failed", {});
        std::vector<EigenPair> out;
        for (std::size_t i = 0; i < count; ++i) {
            EigenPair p;
            p.energy = es.eigenvalues()[static_cast<long>(i)];
            p.coefficients = es.eigenvectors().col(static_cast<long>(i));
            p.coefficients /= std::sqrt(p.coefficients.dot(m * p.coefficients));
            long idx = 0;
            p.coefficients.cwiseAbs().maxCoeff(&idx);
            if (p.coefficients[idx] < 0.0) p.coefficients = -p.coefficients;
            p.residual_norm = (h * p.coefficients - p.energy * (m * p.coefficients)).norm();
            out.push_back(std::move(p));
        }
        if (report) {
            report->shift = shift;
            const double threshold = 0.5 * (out.back().energy + es.eigenvalues()[static_cast<long>(count)]);
            report->inertia_below = count_below(h, m, threshold);
        }
        return out;
    }

    ShiftInvertLanczos lanczos(m, factor, options);
    std::vector<EigenPair> found;
    Eigen::MatrixXd locked(static_cast<long>(n), 0);
    Eigen::MatrixXd locked_m(static_cast<long>(n), 0);
    std::size_t restarts = 0;
    std::size_t inertia = 0;

    double theta_tol = 1e-10;
    std::size_t need = wanted;
    for (int pass = 0; pass < 6; ++pass) {
        const std::size_t sub = std::min(std::max(2 * need + 40, need + 80), n - 1 - static_cast<std::size_t>(locked.cols()));
        auto ritz = lanczos.run(need, sub, locked, locked_m, theta_tol);
        restarts += ritz.restarts;

        std::vector<EigenPair> batch;
        bool residual_ok = true;
        for (std::size_t i = 0; i < ritz.theta.size(); ++i) {
            EigenPair p;
            p.energy = shift + 1.0 / ritz.theta[i];
            p.coefficients = ritz.vectors.col(static_cast<long>(i));
            const double norm = std::sqrt(p.coefficients.dot(m * p.coefficients));
            p.coefficients /= norm;
            p.residual_norm = (h * p.coefficients - p.energy * (m * p.coefficients)).norm();
            if (p.residual_norm > options.tolerance * h_norm * p.coefficients.norm() && i < need) {
                residual_ok = false;
            }
            batch.push_back(std::move(p));
        }
        if (!ritz.converged || !residual_ok) {
            if (theta_tol > 1e-14 && ritz.converged) {
                theta_tol *= 1e-2;
                continue;
            }
            found.insert(found.end(), batch.begin(), batch.end());
            std::sort(found.begin(), found.end(), [](const EigenPair& a, const EigenPair& b) { return a.energy < b.energy; });
            std::ostringstream msg;
            msg << "eigensolver did not converge " << need << " pairs after " << restarts << " restarts";
            throw ConvergenceError(msg.str(), std::move(found));
        }

        found.insert(found.end(), batch.begin(), batch.end());
        std::sort(found.begin(), found.end(), [](const EigenPair& a, const EigenPair& b) { return a.energy < b.energy; });

        // Certify: no eigenvalue below the midpoint of the K-th and K+1-th may be missing.
        if (found.size() < wanted) {
            need = wanted - found.size();
        } else {
            const double threshold = 0.5 * (found[count - 1].energy + found[count].energy);
            inertia = count_below(h, m, threshold);
            const std::size_t have = static_cast<std::size_t>(std::count_if(
                found.begin(), found.end(), [&](const EigenPair& p) { return p.energy < threshold; }));
            if (inertia <= have) break;
            need = inertia - have + 1;
        }
        // Lock everything found so far and search its complement.
        locked.resize(static_cast<long>(n), static_cast<long>(found.size()));
        for (std::size_t i = 0; i < found.size(); ++i) locked.col(static_cast<long>(i)) = found[i].coefficients;
        locked_m = m * locked;
        if (pass == 5) throw ConvergenceError("inertia check failed: eigenvalues missing", std::move(found));
    }

    found.resize(count);
    for (auto& p : found) {
        long idx = 0;
        p.coefficients.cwiseAbs().maxCoeff(&idx);
        if (p.coefficients[idx] < 0.0) p.coefficients = -p.coefficients;
    }
    if (report) {
        report->shift = shift;
        report->restarts = restarts;
        report->operator_applications = lanczos.applications;
        report->inertia_below = inertia;
    }
    return found;
}

double certified_resolution(const std::vector<EigenPair>& pairs)
{
    double worst = 0.0;
    for (const auto& p : pairs) worst = std::max(worst, p.residual_norm);
    return worst;
}

}  // namespace dwell
