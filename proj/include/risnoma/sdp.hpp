// SPDX-License-Identifier: Apache-2.0
//
// risnoma - energy-efficient RIS-assisted NOMA downlink for LEO satellites
// Copyright (c) 2026 the risnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "risnoma/common.hpp"

namespace risnoma::sdp {

/// Affine functional of a Hermitian matrix through one rank-one quadratic
/// form: a(Xi) = scale * h^H Xi h + offset.
struct QuadraticAtom {
    Eigen::VectorXcd h;
    double scale = 1.0;
    double offset = 0.0;

    double value(const Eigen::MatrixXcd& xi) const
    {
        return scale * std::real(h.dot(xi * h)) + offset;
    }

    /// Largest value over {Xi PSD, diag = 1}: phase alignment gives
    /// h^H Xi h = (sum |h_m|)^2, the rank-one maximizer.
    double elliptope_max() const
    {
        const double s = h.cwiseAbs().sum();
        return scale * s * s + offset;
    }
};

/// One concave objective term weight * ln(atom value).
struct LogTerm {
    QuadraticAtom arg;
    double weight = 1.0;
};

/// Linear objective contribution coef * h^H Xi h.
struct LinearAtom {
    Eigen::VectorXcd h;
    double coef = 0.0;
};

/// maximize  sum_k w_k ln(a_k(Xi)) + sum_r coef_r h_r^H Xi h_r
///           + <linear, Xi> + constant
/// s.t.      a_q(Xi) >= 0 for every inequality atom,
///           diag(Xi) = 1,  Xi Hermitian PSD  (m x m).
///
/// Log weights must be positive and every log/inequality scale nonnegative;
/// an inequality whose scale is nonpositive must be resolved by the caller.
/// Rank-one linear parts belong in linear_atoms (their sign structure
/// tightens the optimality certificate); `linear` holds anything else.
struct Problem {
    Eigen::Index m = 0;
    std::vector<LogTerm> logs;
    std::vector<QuadraticAtom> ineqs;
    std::vector<LinearAtom> linear_atoms;
    Eigen::MatrixXcd linear;  // Hermitian remainder; empty means zero
    double constant = 0.0;

    bool has_linear() const { return linear.size() > 0; }
};

enum class Status { optimal, near_optimal, infeasible };

struct Result {
    Eigen::MatrixXcd xi;
    double objective = 0.0;    // at the returned point, constant included
    double upper_bound = 0.0;  // certified bound on the true optimum
    double gap = 0.0;
    Status status = Status::optimal;
    int newton_steps = 0;
};

struct Options {
    double gap_tol = 1e-8;  // relative duality-gap target
    double barrier_mu = 20.0;
    int max_newton = 800;
    double stage_decrement = 0.30;
    double warm_start_gap = 0.0;  // >0: assume the start is this close (relative)
};

namespace detail {

inline void unit_diag_hermitize(Eigen::MatrixXcd& x)
{
    x = 0.5 * (x + x.adjoint()).eval();
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, i) = 1.0;
}

inline double inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    return a.conjugate().cwiseProduct(b).sum().real();
}

/// Barrier state at one iterate: atom values, objective, ln det.
struct Eval {
    bool ok = false;
    double f = 0.0;       // objective (no constant)
    double barrier = 0.0; // ln det + inequality logs
    std::vector<double> log_args;
    std::vector<double> ineq_args;
};

inline Eval evaluate(const Problem& pb, const Eigen::MatrixXcd& xi,
                     const Eigen::LLT<Eigen::MatrixXcd>& llt)
{
    Eval e;
    if (llt.info() != Eigen::Success) return e;
    double lndet = 0.0;
    for (Eigen::Index i = 0; i < pb.m; ++i)
        lndet += 2.0 * std::log(std::real(llt.matrixLLT()(i, i)));
    e.barrier = lndet;
    for (const auto& lt : pb.logs) {
        const double a = lt.arg.value(xi);
        if (a <= 0.0) return e;
        e.log_args.push_back(a);
        e.f += lt.weight * std::log(a);
    }
    for (const auto& q : pb.ineqs) {
        const double a = q.value(xi);
        if (a <= 0.0) return e;
        e.ineq_args.push_back(a);
        e.barrier += std::log(a);
    }
    for (const auto& la : pb.linear_atoms)
        e.f += la.coef * std::real(la.h.dot(xi * la.h));
    if (pb.has_linear()) e.f += inner(pb.linear, xi);
    e.ok = true;
    return e;
}

/// Concavity certificate at a feasible point: f(Y) <= f(X) + <grad f(X), Y-X>
/// for every Y, and the elliptope maximum of the gradient form decomposes
/// over the rank-one atoms, each bounded by coef * (sum |h_m|)^2 (coef > 0)
/// or by zero (coef < 0, since the quadratic form is nonnegative). A dense
/// remainder is bounded entrywise because |Y_mn| <= 1 on the elliptope.
inline double gradient_upper_bound(const Problem& pb, const Eigen::MatrixXcd& xi,
                                   const std::vector<double>& log_args, double f_at_xi)
{
    double bound = f_at_xi;
    size_t idx = 0;
    auto add_atom = [&](const Eigen::VectorXcd& h, double coef) {
        const double at_xi = std::real(h.dot(xi * h));
        const double s = h.cwiseAbs().sum();
        const double over_elliptope = (coef > 0) ? coef * s * s : 0.0;
        bound += over_elliptope - coef * at_xi;
    };
    for (const auto& lt : pb.logs)
        add_atom(lt.arg.h, lt.weight * lt.arg.scale / log_args[idx++]);
    for (const auto& la : pb.linear_atoms) add_atom(la.h, la.coef);
    if (pb.has_linear())
        bound += pb.linear.cwiseAbs().sum() - inner(pb.linear, xi);
    return bound;
}

/// Curvature atoms of the Newton operator: weight * <h h^H, .> h h^H,
/// deduplicated by direction so the Woodbury block stays well conditioned.
struct AtomSet {
    std::vector<Eigen::VectorXcd> vectors;
    std::vector<double> weights;

    void add(const Eigen::VectorXcd& h, double w)
    {
        if (w <= 0.0) return;
        for (size_t j = 0; j < vectors.size(); ++j) {
            if (vectors[j].size() == h.size() &&
                (vectors[j] - h).squaredNorm() <= 1e-24 * (1.0 + h.squaredNorm())) {
                weights[j] += w;
                return;
            }
        }
        vectors.push_back(h);
        weights.push_back(w);
    }
};

} // namespace detail

/// Find a strictly feasible unit-diagonal start. Tries the warm start (if
/// any) blended toward the identity, then the identity, then phase-aligned
/// rank-one mixtures aimed at the inequality atoms.
inline bool feasible_start(const Problem& pb, const Eigen::MatrixXcd* warm,
                           Eigen::MatrixXcd& out)
{
    const Eigen::Index m = pb.m;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);

    auto strictly_ok = [&](const Eigen::MatrixXcd& xi) {
        Eigen::LLT<Eigen::MatrixXcd> llt(xi);
        if (llt.info() != Eigen::Success) return false;
        for (const auto& lt : pb.logs) {
            const double cap = std::abs(lt.arg.offset) + std::abs(lt.arg.elliptope_max());
            if (lt.arg.value(xi) <= 1e-12 * (cap + 1e-300)) return false;
        }
        for (const auto& q : pb.ineqs) {
            const double cap = std::abs(q.offset) + std::abs(q.elliptope_max());
            if (q.value(xi) <= 1e-9 * (cap + 1e-300)) return false;
        }
        return true;
    };

    std::vector<Eigen::MatrixXcd> candidates;
    if (warm && warm->rows() == m) {
        for (double theta : {1e-3, 1e-2, 0.1, 0.3})
            candidates.push_back(((1.0 - theta) * (*warm) + theta * eye).eval());
    }
    candidates.push_back(eye);

    // Rank-one points aligned with each atom direction, plus pairwise mixes.
    std::vector<Eigen::VectorXcd> aligned;
    for (const auto& q : pb.ineqs) {
        Eigen::VectorXcd xi_vec(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const auto hk = q.h[k];
            xi_vec[k] = (std::abs(hk) > 0) ? hk / std::abs(hk) : 1.0;
        }
        aligned.push_back(xi_vec);
    }
    for (size_t a = 0; a < aligned.size(); ++a) {
        const Eigen::MatrixXcd ra = aligned[a] * aligned[a].adjoint();
        for (double theta : {0.05, 0.2, 0.5})
            candidates.push_back(((1.0 - theta) * ra + theta * eye).eval());
        for (size_t b = a + 1; b < aligned.size(); ++b) {
            const Eigen::MatrixXcd rb = aligned[b] * aligned[b].adjoint();
            for (double w : {0.25, 0.5, 0.75})
                for (double theta : {0.05, 0.2})
                    candidates.push_back(
                        ((1.0 - theta) * (w * ra + (1.0 - w) * rb) + theta * eye).eval());
        }
    }

    for (auto& c : candidates) {
        detail::unit_diag_hermitize(c);
        if (strictly_ok(c)) {
            out = c;
            return true;
        }
    }
    return false;
}

/// Log-barrier interior-point maximization. The Newton system is solved
/// through the inverse of the PSD-barrier Hessian (X S X) corrected by a
/// small Woodbury block for the rank-one curvature atoms; the duals of the
/// unit-diagonal constraints come from an m x m real SPD solve.
inline Result maximize(const Problem& pb, const Eigen::MatrixXcd* warm_start = nullptr,
                       const Options& opt = Options{})
{
    Result res;
    const Eigen::Index m = pb.m;
    require(m >= 1, "sdp::maximize: matrix dimension must be >= 1");
    for (const auto& lt : pb.logs)
        require(lt.weight > 0 && lt.arg.scale >= 0, "sdp::maximize: malformed log term");

    // Definitive infeasibility certificates first.
    for (const auto& q : pb.ineqs) {
        require(q.scale > 0, "sdp::maximize: inequality scale must be positive");
        if (q.elliptope_max() < 0.0) {
            res.status = Status::infeasible;
            return res;
        }
    }

    if (m == 1) {
        // diag(Xi) = 1 pins the single entry.
        Eigen::MatrixXcd xi = Eigen::MatrixXcd::Ones(1, 1);
        res.xi = xi;
        for (const auto& q : pb.ineqs)
            if (q.value(xi) < -1e-12 * (std::abs(q.offset) + 1.0)) {
                res.status = Status::infeasible;
                return res;
            }
        double f = pb.constant;
        for (const auto& lt : pb.logs) f += lt.weight * std::log(lt.arg.value(xi));
        for (const auto& la : pb.linear_atoms) f += la.coef * std::real(la.h.dot(xi * la.h));
        if (pb.has_linear()) f += detail::inner(pb.linear, xi);
        res.objective = res.upper_bound = f;
        res.status = Status::optimal;
        return res;
    }

    Eigen::MatrixXcd xi;
    if (!feasible_start(pb, warm_start, xi)) {
        res.status = Status::infeasible;
        return res;
    }

    const double nu_bar = double(m) + double(pb.ineqs.size());
    Eigen::LLT<Eigen::MatrixXcd> llt(xi);
    detail::Eval ev = detail::evaluate(pb, xi, llt);
    // The gap target tracks the largest objective magnitude seen so far, so
    // a start far below the optimum cannot shrink the absolute tolerance.
    double f_scale = 1.0 + std::abs(ev.f + pb.constant);
    auto t_final = [&]() { return nu_bar / (opt.gap_tol * f_scale); };

    const double start_gap = (opt.warm_start_gap > 0) ? opt.warm_start_gap : 0.5;
    double t = nu_bar / (start_gap * f_scale);

    int newton = 0;
    bool finished = false;
    while (!finished && newton < opt.max_newton) {
        const bool last_stage = t >= t_final() * (1.0 - 1e-12);

        for (; newton < opt.max_newton; ++newton) {
            // Gradient of t*f + barrier.
            Eigen::MatrixXcd xi_inv = llt.solve(Eigen::MatrixXcd::Identity(m, m));
            Eigen::MatrixXcd grad = xi_inv;
            if (pb.has_linear()) grad += t * pb.linear;
            for (const auto& la : pb.linear_atoms)
                grad += (t * la.coef) * (la.h * la.h.adjoint());
            detail::AtomSet atoms;
            {
                size_t idx = 0;
                for (const auto& lt : pb.logs) {
                    const double a = ev.log_args[idx++];
                    grad += (t * lt.weight * lt.arg.scale / a) * (lt.arg.h * lt.arg.h.adjoint());
                    atoms.add(lt.arg.h, t * lt.weight * lt.arg.scale * lt.arg.scale / (a * a));
                }
                idx = 0;
                for (const auto& q : pb.ineqs) {
                    const double a = ev.ineq_args[idx++];
                    grad += (q.scale / a) * (q.h * q.h.adjoint());
                    atoms.add(q.h, q.scale * q.scale / (a * a));
                }
            }

            // Woodbury data for N^{-1}.
            const size_t J = atoms.vectors.size();
            std::vector<Eigen::VectorXcd> p(J);
            for (size_t j = 0; j < J; ++j) p[j] = xi * atoms.vectors[j];
            Eigen::MatrixXd kmat(J, J);
            for (size_t j = 0; j < J; ++j)
                for (size_t l = 0; l < J; ++l)
                    kmat(j, l) = std::norm(atoms.vectors[j].dot(p[l]));
            for (size_t j = 0; j < J; ++j) kmat(j, j) += 1.0 / atoms.weights[j];
            Eigen::LDLT<Eigen::MatrixXd> kf;
            if (J > 0) kf.compute(kmat);

            auto apply_ninv = [&](const Eigen::MatrixXcd& s) {
                Eigen::MatrixXcd y = xi * s * xi;
                if (J == 0) return y;
                Eigen::VectorXd rhs(J);
                for (size_t j = 0; j < J; ++j) rhs[j] = std::real(p[j].dot(s * p[j]));
                const Eigen::VectorXd coef = kf.solve(rhs);
                for (size_t j = 0; j < J; ++j) y -= coef[j] * (p[j] * p[j].adjoint());
                return y;
            };

            const Eigen::MatrixXcd ninv_grad = apply_ninv(grad);

            // Duals of the unit-diagonal constraints.
            Eigen::MatrixXd tmat = xi.cwiseAbs2();
            if (J > 0) {
                Eigen::MatrixXd d(m, J);
                for (size_t j = 0; j < J; ++j) d.col(j) = p[j].cwiseAbs2();
                tmat -= d * kf.solve(d.transpose());
            }
            const Eigen::VectorXd rhs = ninv_grad.diagonal().real();
            Eigen::LDLT<Eigen::MatrixXd> tf(tmat);
            Eigen::VectorXd nu = tf.solve(rhs);

            Eigen::MatrixXcd delta =
                ninv_grad - apply_ninv(nu.asDiagonal().toDenseMatrix().cast<std::complex<double>>());
            delta = 0.5 * (delta + delta.adjoint()).eval();
            delta.diagonal().setZero();

            double dec2 = detail::inner(delta, grad);
            if (!(dec2 > 0)) dec2 = 0.0;
            const double dec = std::sqrt(dec2);
            if (dec <= (last_stage ? 0.01 : opt.stage_decrement)) break;

            // Step length: stay inside every affine domain, keep PSD, then
            // backtrack on the merit t*f + barrier.
            double alpha = 1.0;
            {
                size_t idx = 0;
                for (const auto& lt : pb.logs) {
                    const double dir = lt.arg.scale * std::real(lt.arg.h.dot(delta * lt.arg.h));
                    const double a = ev.log_args[idx++];
                    if (dir < 0) alpha = std::min(alpha, -0.95 * a / dir);
                }
                idx = 0;
                for (const auto& q : pb.ineqs) {
                    const double dir = q.scale * std::real(q.h.dot(delta * q.h));
                    const double a = ev.ineq_args[idx++];
                    if (dir < 0) alpha = std::min(alpha, -0.95 * a / dir);
                }
            }
            if (dec > 1.0) alpha = std::min(alpha, 1.0 / dec);

            const double merit0 = t * ev.f + ev.barrier;
            bool stepped = false;
            for (int bt = 0; bt < 60; ++bt) {
                Eigen::MatrixXcd trial = xi + alpha * delta;
                detail::unit_diag_hermitize(trial);
                Eigen::LLT<Eigen::MatrixXcd> tl(trial);
                if (tl.info() == Eigen::Success) {
                    const detail::Eval te = detail::evaluate(pb, trial, tl);
                    if (te.ok && t * te.f + te.barrier >= merit0 + 0.25 * alpha * dec2 - 1e-12) {
                        xi.swap(trial);
                        llt = std::move(tl);
                        ev = te;
                        f_scale = std::max(f_scale, 1.0 + std::abs(ev.f + pb.constant));
                        stepped = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!stepped) break; // numerically stuck at this stage
        }

        if (last_stage && t >= t_final() * (1.0 - 1e-12)) {
            finished = true;
        } else {
            t = std::min(t * opt.barrier_mu, t_final());
        }
    }

    res.xi = xi;
    res.objective = ev.f + pb.constant;
    res.gap = nu_bar / t;
    res.upper_bound = std::max(
        res.objective,
        detail::gradient_upper_bound(pb, xi, ev.log_args, ev.f) + pb.constant);
    res.newton_steps = newton;
    res.status = (finished || res.gap <= opt.gap_tol * f_scale * 4.0) ? Status::optimal
                                                                      : Status::near_optimal;
    return res;
}

} // namespace risnoma::sdp
