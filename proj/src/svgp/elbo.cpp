#include "bathyslam/svgp/elbo.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "bathyslam/core/errors.hpp"

namespace bathyslam {

namespace {

constexpr double kJitterScale = 1e-6;
constexpr double kVarFloor = 1e-12;

// Jittered inducing covariance and its factorization, shared by the ELBO and
// the posterior.
struct InducingGram {
    Eigen::MatrixXd A;     // K_ss + jitter * I
    Eigen::MatrixXd dist;  // pairwise distances over Z
    Eigen::LLT<Eigen::MatrixXd> llt;
};

InducingGram factorize_inducing(const SvgpModel& model) {
    InducingGram g;
    g.A = kernel_matrix(model.inducing.Z, model.inducing.Z, model.kernel, &g.dist);
    g.A.diagonal().array() += kJitterScale * model.kernel.signal_var();
    g.llt.compute(g.A);
    if (g.llt.info() != Eigen::Success) {
        throw NumericalError(
            "inducing covariance not positive definite after jitter (rcond=" +
            std::to_string(g.llt.rcond()) +
            ", lengthscale=" + std::to_string(model.kernel.lengthscale()) + ")");
    }
    return g;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double kl_terms(const SvgpModel& model, const InducingGram& gram, const Eigen::VectorXd& a) {
    const auto& L = model.variational.L;
    const int s = model.inducing_count();
    // tr(A^-1 Sigma) = |C^-1 L|_F^2 with C the Cholesky factor of A.
    const Eigen::MatrixXd t =
        gram.llt.matrixL().solve(L);
    const double trace_term = t.squaredNorm();
    const double quad_term = model.variational.mu.dot(a);
    const double log_det_a = log_det_from_llt(gram.llt);
    const double log_det_sigma = 2.0 * L.diagonal().array().log().sum();
    return 0.5 * (trace_term + quad_term - s + log_det_a - log_det_sigma);
}

}  // namespace

double kl_to_prior(const SvgpModel& model) {
    const InducingGram gram = factorize_inducing(model);
    const Eigen::VectorXd a = gram.llt.solve(model.variational.mu);
    return kl_terms(model, gram, a);
}

double elbo_minibatch(const SvgpModel& model, const std::vector<TrainingPoint>& batch,
                      std::size_t total_count, ElboGradients* grads, const GradBlocks& blocks) {
    const int s = model.inducing_count();
    const auto m_size = static_cast<Eigen::Index>(batch.size());
    if (batch.empty()) throw DataError("elbo_minibatch: batch is empty");
    if (total_count < batch.size()) {
        throw DataError("elbo_minibatch: total count smaller than batch");
    }

    Mat2x x(m_size, 2);
    Eigen::VectorXd y(m_size);
    for (Eigen::Index i = 0; i < m_size; ++i) {
        x.row(i) = batch[static_cast<std::size_t>(i)].x.transpose();
        y(i) = batch[static_cast<std::size_t>(i)].y;
    }

    const double sig2 = model.kernel.signal_var();
    const double ell = model.kernel.lengthscale();
    const double noise2 = model.kernel.noise_var();
    const double scale = static_cast<double>(total_count) / static_cast<double>(m_size);

    const InducingGram gram = factorize_inducing(model);
    const Eigen::VectorXd a = gram.llt.solve(model.variational.mu);

    Eigen::MatrixXd dist_su;
    const Eigen::MatrixXd k_su = kernel_matrix(model.inducing.Z, x, model.kernel, &dist_su);
    const Eigen::MatrixXd b = gram.llt.solve(k_su);                       // S x M
    const Eigen::MatrixXd sigma_b = model.variational.L *
                                    (model.variational.L.transpose() * b);  // Sigma * B

    const Eigen::VectorXd mean = k_su.transpose() * a;
    Eigen::VectorXd var = (sig2 - (k_su.array() * b.array()).colwise().sum() +
                           (b.array() * sigma_b.array()).colwise().sum())
                              .transpose();
    var = var.cwiseMax(kVarFloor);

    const Eigen::VectorXd resid = y - mean;
    const double expected_loglik =
        -0.5 * static_cast<double>(m_size) * std::log(2.0 * M_PI * noise2) -
        (resid.squaredNorm() + var.sum()) / (2.0 * noise2);

    const double kl = kl_terms(model, gram, a);
    const double elbo = scale * expected_loglik - kl;
    if (!grads) return elbo;

    // ----- gradients -----
    const bool want_kernel = blocks.kernel;
    const bool want_z = blocks.inducing;
    const bool want_var = blocks.variational;

    grads->log_signal_var = 0.0;
    grads->log_lengthscale = 0.0;
    grads->log_noise_var = 0.0;
    grads->Z = Mat2x::Zero(s, 2);
    grads->mu = Eigen::VectorXd::Zero(s);
    grads->L = Eigen::MatrixXd::Zero(s, s);

    const Eigen::VectorXd gm = resid / noise2;       // dE_i/dm_i
    const double gv = -0.5 / noise2;                 // dE_i/dv_i, same for all i

    if (want_var) {
        grads->mu = scale * (b * gm) - a;

        // dF/dSigma = scale * gv * B B^T - 0.5 (A^-1 - Sigma^-1); chain to L.
        const Eigen::MatrixXd w = gram.llt.solve(Eigen::MatrixXd::Identity(s, s));
        Eigen::MatrixXd sigma_inv = model.variational.L.transpose()
                                        .triangularView<Eigen::Upper>()
                                        .solve(model.variational.L.triangularView<Eigen::Lower>()
                                                   .solve(Eigen::MatrixXd::Identity(s, s)));
        Eigen::MatrixXd g_sigma = scale * gv * (b * b.transpose()) - 0.5 * (w - sigma_inv);
        grads->L = (2.0 * g_sigma * model.variational.L)
                       .triangularView<Eigen::Lower>();
    }

    if (want_kernel || want_z) {
        const Eigen::MatrixXd w = gram.llt.solve(Eigen::MatrixXd::Identity(s, s));
        const Eigen::MatrixXd sigma = model.variational.sigma();
        const Eigen::MatrixXd t1 = gram.llt.solve(sigma);           // A^-1 Sigma
        const Eigen::MatrixXd p = gram.llt.solve(t1.transpose());   // A^-1 Sigma A^-1
        const Eigen::MatrixXd cm = gram.llt.solve(sigma_b);         // A^-1 Sigma B

        // Adjoint of A (symmetrized) and of K_su.
        const Eigen::VectorXd u = b * gm;
        Eigen::MatrixXd a_bar = -0.5 * scale * (u * a.transpose() + a * u.transpose());
        a_bar.noalias() += (scale * gv) * (b * b.transpose());
        {
            const Eigen::MatrixXd cb = cm * b.transpose();
            a_bar.noalias() -= (scale * gv) * (cb + cb.transpose());
        }
        a_bar += 0.5 * (p + a * a.transpose() - w);

        const Eigen::MatrixXd k_bar =
            scale * (a * gm.transpose() + 2.0 * gv * (cm - b));

        if (want_kernel) {
            // Every kernel-derived entry scales with sigma^2 (jitter included).
            grads->log_signal_var = (a_bar.array() * gram.A.array()).sum() +
                                    (k_bar.array() * k_su.array()).sum() +
                                    scale * gv * static_cast<double>(m_size) * sig2;
            grads->log_lengthscale =
                ((a_bar.array() * gram.A.array() * gram.dist.array()).sum() +
                 (k_bar.array() * k_su.array() * dist_su.array()).sum()) /
                ell;
            grads->log_noise_var =
                scale * (-0.5 * static_cast<double>(m_size) +
                         (resid.squaredNorm() + var.sum()) / (2.0 * noise2));
        }

        if (want_z) {
            // dk(z_p, w)/dz_p = -k / (ell * r) * (z_p - w); zero at r = 0
            // (the Matern 1/2 kink, and the jittered diagonal).
            for (int pi = 0; pi < s; ++pi) {
                Vec2 g = Vec2::Zero();
                for (int q = 0; q < s; ++q) {
                    const double r = gram.dist(pi, q);
                    if (r <= 0.0) continue;
                    const double coef =
                        -2.0 * a_bar(pi, q) * gram.A(pi, q) / (ell * r);
                    g += coef * (model.inducing.Z.row(pi) - model.inducing.Z.row(q)).transpose();
                }
                for (Eigen::Index i = 0; i < m_size; ++i) {
                    const double r = dist_su(pi, i);
                    if (r <= 0.0) continue;
                    const double coef = -k_bar(pi, i) * k_su(pi, i) / (ell * r);
                    g += coef * (model.inducing.Z.row(pi) - x.row(i)).transpose();
                }
                grads->Z.row(pi) = g.transpose();
            }
        }
    }

    return elbo;
}

PosteriorPrediction posterior(const SvgpModel& model, const Mat2x& queries) {
    if (queries.rows() < 1) throw DataError("posterior: no query points");
    const InducingGram gram = factorize_inducing(model);
    const Eigen::VectorXd a = gram.llt.solve(model.variational.mu);

    const Eigen::MatrixXd k_sq = kernel_matrix(model.inducing.Z, queries, model.kernel);
    const Eigen::MatrixXd b = gram.llt.solve(k_sq);                       // S x Q
    const Eigen::MatrixXd lt_b = model.variational.L.transpose() * b;

    PosteriorPrediction out;
    out.mean = k_sq.transpose() * a;
    Eigen::VectorXd raw = (model.kernel.signal_var() -
                           (k_sq.array() * b.array()).colwise().sum() +
                           lt_b.array().square().colwise().sum())
                              .transpose();
    out.min_raw_variance = raw.minCoeff();
    out.variance = raw.cwiseMax(PosteriorPrediction::kVarianceFloor);
    return out;
}

}  // namespace bathyslam
