#include "rislab/env.hpp"

#include <cmath>
#include <stdexcept>

namespace rislab {

CMatrix RisPhases::as_column() const {
    CMatrix t(theta.size(), 1);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        t(i, 0) = theta[i];
    }
    return t;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double achievable_rate(const CMatrix& h_bar, const TransmitCovariance& q, double sigma2) {
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("achievable_rate: noise power must be positive");
    }
    if (h_bar.cols() != q.q.rows()) {
        throw std::invalid_argument("achievable_rate: channel/covariance dimension mismatch");
    }
    const std::size_t k = h_bar.rows();
    CMatrix x = matmul(matmul(h_bar, q.q), conj_transpose(h_bar));
    x *= Complex(1.0 / sigma2, 0.0);
    // Symmetrize to strip roundoff skew before adding the identity.
    CMatrix xh = conj_transpose(x);
    x += xh;
    x *= Complex(0.5, 0.0);
    x += CMatrix::identity(k);
    return logdet_capacity(x);
}

std::pair<TransmitCovariance, RisPhases> project_action(const EnvAction& action, std::size_t m,
                                                        double power_budget) {
    const std::size_t q_block = 2 * m * m;
    if (action.raw.size() <= q_block || (action.raw.size() - q_block) % 2 != 0) {
        throw std::invalid_argument("project_action: raw length " +
                                    std::to_string(action.raw.size()) +
                                    " does not decompose as 2M^2 + 2N with M = " +
                                    std::to_string(m));
    }
    const std::size_t n = (action.raw.size() - q_block) / 2;

    RisPhases phases;
    phases.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = action.raw[q_block + i];
        const double im = action.raw[q_block + n + i];
        const double mod = std::hypot(re, im);
        if (mod > 1e-300) {
            phases.theta[i] = Complex(re / mod, im / mod);
        } else {
            phases.theta[i] = Complex(1.0, 0.0); // degenerate (0,0) rule
        }
    }

    RealVector a_enc(action.raw.begin(), action.raw.begin() + q_block);
    CMatrix a = realvec_to_complex(a_enc, m, m);
    CMatrix aah = matmul(a, conj_transpose(a));
    const double tr = trace(aah).real();
    TransmitCovariance cov;
    if (tr > 1e-300) {
        aah *= Complex(power_budget / tr, 0.0);
        cov.q = std::move(aah);
    } else {
        cov.q = CMatrix::identity(m);
        cov.q *= Complex(power_budget / static_cast<double>(m), 0.0);
    }
    return {std::move(cov), std::move(phases)};
}

EnvAction encode_feasible_action(const TransmitCovariance& q, const RisPhases& theta) {
    const std::size_t m = q.q.rows();
    HermitianEig eig = hermitian_eig(q.q);
    CMatrix root(m, m);
    // V diag(sqrt(lambda)) V^H, clipping tiny negative eigenvalues.
    for (std::size_t i = 0; i < m; ++i) {
        const double lam = std::max(0.0, eig.eigenvalues[i]);
        const double s = std::sqrt(lam);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                root(r, c) += s * eig.eigenvectors(r, i) * std::conj(eig.eigenvectors(c, i));
            }
        }
    }
    EnvAction action;
    action.raw = complex_to_realvec(root);
    action.raw.reserve(action.raw.size() + 2 * theta.size());
    for (const Complex& t : theta.theta) {
        action.raw.push_back(t.real());
    }
    for (const Complex& t : theta.theta) {
        action.raw.push_back(t.imag());
    }
    return action;
}

TransmitCovariance waterfill(const CMatrix& h_bar, double power_budget, double sigma2) {
    if (!(power_budget > 0.0) || !(sigma2 > 0.0)) {
        throw std::invalid_argument("waterfill: power and noise must be positive");
    }
    if (frob_norm_sq(h_bar) <= 0.0) {
        throw std::invalid_argument("waterfill: channel is all-zero");
    }
    const std::size_t m = h_bar.cols();
    CMatrix gram = matmul(conj_transpose(h_bar), h_bar);
    gram *= Complex(1.0 / sigma2, 0.0);
    HermitianEig eig = hermitian_eig(gram);

    const double gamma_max = eig.eigenvalues.front();
    std::vector<double> gamma;
    gamma.reserve(m);
    for (double g : eig.eigenvalues) {
        gamma.push_back(g > gamma_max * 1e-15 ? g : 0.0);
    }

    auto allocated = [&](double mu) {
        double total = 0.0;
        for (double g : gamma) {
            if (g > 0.0) {
                total += std::max(0.0, mu - 1.0 / g);
            }
        }
        return total;
    };

    double lo = 0.0;
    double hi = power_budget;
    for (double g : gamma) {
        if (g > 0.0) {
            hi = std::max(hi, power_budget + 1.0 / g);
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-18 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (allocated(mid) < power_budget) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double mu = 0.5 * (lo + hi);

    std::vector<double> powers(m, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (gamma[i] > 0.0) {
            powers[i] = std::max(0.0, mu - 1.0 / gamma[i]);
            total += powers[i];
        }
    }
    if (total > 0.0) {
        const double fix = power_budget / total; // absorb bisection residue
        for (double& p : powers) {
            p *= fix;
        }
    }

    CMatrix q(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        if (powers[i] <= 0.0) {
            continue;
        }
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                q(r, c) +=
                    powers[i] * eig.eigenvectors(r, i) * std::conj(eig.eigenvectors(c, i));
            }
        }
    }
    return {std::move(q)};
}

std::pair<EnvState, double> env_step(const EnvState& state, const EnvAction& action,
                                     const ChannelOracle& oracle, const EnvConfig& cfg) {
    const std::size_t m = state.q.q.rows();
    auto [q_next, theta_next] = project_action(action, m, cfg.power_budget_w);
    const CMatrix h_bar = oracle(theta_next);
    const double rate = achievable_rate(h_bar, q_next, cfg.noise_power_w);
    EnvState next;
    next.q = std::move(q_next);
    next.theta = std::move(theta_next);
    next.rate_bits = rate;
    next.loc_bs = state.loc_bs;
    next.loc_ris = state.loc_ris;
    next.loc_ue = state.loc_ue;
    return {std::move(next), rate};
}

Vec3 perturb_location(const Vec3& u, double eta_target, const UeArea& area, RngStream& rng) {
    if (eta_target < 0.0) {
        throw std::invalid_argument("perturb_location: eta must be non-negative");
    }
    if (eta_target == 0.0) {
        return u;
    }
    const double r = eta_target * norm(area.center);
    const auto omega = rng.unit_vector3();
    return {u.x + r * omega[0], u.y + r * omega[1], u.z + r * omega[2]};
}

namespace {

double scale_coord(double v, double lo, double hi) {
    if (!(hi > lo)) {
        return 0.0;
    }
    return 2.0 * (v - lo) / (hi - lo) - 1.0;
}

void push_loc(RealVector& out, const Vec3& v, const StateEncoding& enc) {
    if (enc.normalize_locations) {
        out.push_back(scale_coord(v.x, enc.box_lo.x, enc.box_hi.x));
        out.push_back(scale_coord(v.y, enc.box_lo.y, enc.box_hi.y));
        out.push_back(scale_coord(v.z, enc.box_lo.z, enc.box_hi.z));
    } else {
        out.push_back(v.x);
        out.push_back(v.y);
        out.push_back(v.z);
    }
}

} // namespace

RealVector encode_state(const EnvState& state, const StateEncoding& enc) {
    RealVector out = complex_to_realvec(state.q.q);
    out.reserve(out.size() + 2 * state.theta.size() + 10);
    for (const Complex& t : state.theta.theta) {
        out.push_back(t.real());
    }
    for (const Complex& t : state.theta.theta) {
        out.push_back(t.imag());
    }
    out.push_back(state.rate_bits);
    push_loc(out, state.loc_bs, enc);
    push_loc(out, state.loc_ris, enc);
    push_loc(out, state.loc_ue, enc);
    return out;
}

std::size_t state_dim(std::size_t m, std::size_t n) { return 2 * m * m + 2 * n + 10; }
std::size_t action_dim(std::size_t m, std::size_t n) { return 2 * m * m + 2 * n; }

} // namespace rislab
