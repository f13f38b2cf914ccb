#include "ffa/rating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ffa {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Scaled complementary error function exp(y^2)*erfc(y) for y >= 0.
// Direct product below y=25 (no overflow there), asymptotic series above.
double erfcx_pos(double y) {
    if (y <= 25.0) return std::exp(y * y) * std::erfc(y);
    double inv2 = 1.0 / (2.0 * y * y);
    double sum = 1.0, term = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(2.0 * k - 1.0) * inv2;
        sum += term;
    }
    return sum / (y * std::sqrt(M_PI));
}

}  // namespace

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Acklam's rational approximation, polished with one Halley step.
double norm_cdf_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("norm_cdf_inv domain");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00, 2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double e = norm_cdf(x) - p;
    double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    return x - u / (1 + 0.5 * x * u);
}

double RatingConfig::epsilon() const {
    double p = std::clamp(p_draw, 1e-12, 1.0 - 1e-12);
    return norm_cdf_inv((1.0 + p) / 2.0) * kSqrt2 * beta;
}

double v_exceeds(double t, double alpha) {
    double x = t - alpha;
    if (x >= 0.0) return norm_pdf(x) / norm_cdf(x);
    // phi(x)/Phi(x) = sqrt(2/pi) / erfcx(-x/sqrt(2)); exact for any tail depth.
    return std::sqrt(2.0 / M_PI) / erfcx_pos(-x / kSqrt2);
}

double w_exceeds(double t, double alpha) {
    double x = t - alpha;
    double v = v_exceeds(t, alpha);
    return v * (v + x);
}

double v_within(double t, double alpha) {
    if (t < 0.0) return -v_within(-t, alpha);
    if (alpha <= 0.0) return -t;
    // Everything expressed through the stable hazard v(x) = phi(x)/Phi(x):
    // Phi(x) = phi(x)/v(x), phi(-a-t)/phi(a-t) = exp(-2*a*t).
    double d = alpha - t;               // upper endpoint relative to the mean
    double s = -alpha - t;              // lower endpoint
    double e = std::exp(-2.0 * alpha * t);  // <= 1 for t >= 0
    double vd = v_exceeds(d, 0.0), vs = v_exceeds(s, 0.0);
    double denom = 1.0 / vd - e / vs;       // Z / phi(d)
    if (denom <= 0.0) return alpha - t;     // fully degenerate tail
    return (e - 1.0) / denom;
}

double w_within(double t, double alpha) {
    if (t < 0.0) t = -t;
    if (alpha <= 0.0) return 1.0;
    double d = alpha - t;
    double s = -alpha - t;
    double e = std::exp(-2.0 * alpha * t);
    double vd = v_exceeds(d, 0.0), vs = v_exceeds(s, 0.0);
    double denom = 1.0 / vd - e / vs;
    if (denom <= 0.0) return 1.0;
    double v = (e - 1.0) / denom;
    double w = v * v + (d - s * e) / denom;
    return std::clamp(w, 0.0, 1.0);
}

std::pair<Rating, Rating> update_two_player(const Rating& winner, const Rating& loser,
                                            const RatingConfig& config, bool is_draw) {
    double sw2 = winner.sigma * winner.sigma + config.tau * config.tau;
    double sl2 = loser.sigma * loser.sigma + config.tau * config.tau;
    double c2 = 2.0 * config.beta * config.beta + sw2 + sl2;
    double c = std::sqrt(c2);
    double t = (winner.mu - loser.mu) / c;
    double eps = config.epsilon() / c;
    double v, w;
    if (is_draw) {
        v = v_within(t, eps);
        w = w_within(t, eps);
    } else {
        v = v_exceeds(t, eps);
        w = w_exceeds(t, eps);
    }
    Rating nw, nl;
    nw.mu = winner.mu + (sw2 / c) * v;
    nl.mu = loser.mu - (sl2 / c) * v;
    nw.sigma = std::sqrt(sw2 * (1.0 - (sw2 / c2) * w));
    nl.sigma = std::sqrt(sl2 * (1.0 - (sl2 / c2) * w));
    return {nw, nl};
}

// --- rank-chain factor graph ----------------------------------------------

namespace {

// Gaussian in precision form. pi == 0 encodes "no information".
struct G {
    double pi = 0.0;
    double tau = 0.0;

    static G from_mu_sigma2(double mu, double sigma2) {
        return {1.0 / sigma2, mu / sigma2};
    }
    double mu() const { return pi > 0 ? tau / pi : 0.0; }
    double sigma() const { return pi > 0 ? std::sqrt(1.0 / pi) : INFINITY; }
    G operator*(const G& o) const { return {pi + o.pi, tau + o.tau}; }
    G operator/(const G& o) const { return {pi - o.pi, tau - o.tau}; }
};

double delta_between(const G& a, const G& b) {
    return std::max(std::abs(a.mu() - b.mu()), std::abs(a.sigma() - b.sigma()));
}

// One variable of the chain with named incoming messages.
struct PerfVar {
    G lik;        // from the skill likelihood factor
    G from_left;  // from sum factor i-1 (this var is its right term)
    G from_right; // from sum factor i (this var is its left term)
    G value() const { return lik * from_left * from_right; }
};

struct DiffVar {
    G from_sum;
    G from_trunc;
    G value() const { return from_sum * from_trunc; }
};

}  // namespace

FfaUpdateResult update_ffa(const std::vector<Rating>& ratings, const RankedOutcome& outcome,
                           const RatingConfig& config) {
    const size_t n = ratings.size();
    if (n < 2) throw std::invalid_argument("update_ffa needs at least 2 participants");
    if (outcome.ranks.size() != n)
        throw std::invalid_argument("outcome size does not match participant count");
    for (int r : outcome.ranks)
        if (r < 1 || r > static_cast<int>(n))
            throw std::invalid_argument("ranks must lie in [1, participant_count]");

    // Chain order: by rank, stable in participant index.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return outcome.ranks[a] < outcome.ranks[b];
    });

    const double beta2 = config.beta * config.beta;
    const double eps = config.epsilon();

    std::vector<G> prior(n);
    std::vector<PerfVar> perf(n);
    for (size_t i = 0; i < n; ++i) {
        const Rating& r = ratings[order[i]];
        double s2 = r.sigma * r.sigma + config.tau * config.tau;
        prior[i] = G::from_mu_sigma2(r.mu, s2);
        // Likelihood down: perf message N(mu, s2 + beta^2).
        perf[i].lik = G::from_mu_sigma2(r.mu, s2 + beta2);
    }

    const size_t d = n - 1;
    std::vector<DiffVar> diff(d);
    std::vector<bool> is_draw(d);
    for (size_t k = 0; k < d; ++k)
        is_draw[k] = outcome.ranks[order[k]] == outcome.ranks[order[k + 1]];

    // Sum factor k ties diff_k = perf_k - perf_{k+1}. Messages are derived
    // from cavity distributions (value with this factor's message removed).
    auto sum_down = [&](size_t k) {
        G left = perf[k].value() / perf[k].from_right;
        G right = perf[k + 1].value() / perf[k + 1].from_left;
        if (left.pi <= 0 || right.pi <= 0) return;  // no information yet
        double s2 = 1.0 / left.pi + 1.0 / right.pi;
        diff[k].from_sum = G::from_mu_sigma2(left.mu() - right.mu(), s2);
    };
    auto sum_up_left = [&](size_t k) {
        G dv = diff[k].value() / diff[k].from_sum;
        G right = perf[k + 1].value() / perf[k + 1].from_left;
        if (dv.pi <= 0 || right.pi <= 0) return;
        double s2 = 1.0 / dv.pi + 1.0 / right.pi;
        perf[k].from_right = G::from_mu_sigma2(dv.mu() + right.mu(), s2);
    };
    auto sum_up_right = [&](size_t k) {
        G dv = diff[k].value() / diff[k].from_sum;
        G left = perf[k].value() / perf[k].from_right;
        if (dv.pi <= 0 || left.pi <= 0) return;
        double s2 = 1.0 / dv.pi + 1.0 / left.pi;
        perf[k + 1].from_left = G::from_mu_sigma2(left.mu() - dv.mu(), s2);
    };
    auto truncate = [&](size_t k) {
        G cavity = diff[k].from_sum;  // only other neighbor of the diff var
        double sqrt_pi = std::sqrt(cavity.pi);
        double targ = cavity.tau / sqrt_pi;
        double earg = eps * sqrt_pi;
        double v, w;
        if (is_draw[k]) {
            v = v_within(targ, earg);
            w = w_within(targ, earg);
        } else {
            v = v_exceeds(targ, earg);
            w = w_exceeds(targ, earg);
        }
        G old_value = diff[k].value();
        G marginal{cavity.pi / (1.0 - w), (cavity.tau + sqrt_pi * v) / (1.0 - w)};
        diff[k].from_trunc = marginal / cavity;
        return delta_between(marginal, old_value);
    };

    FfaUpdateResult out;
    out.converged = false;
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        double delta = 0.0;
        for (size_t k = 0; k < d; ++k) {  // left to right
            sum_down(k);
            delta = std::max(delta, truncate(k));
            sum_up_right(k);
        }
        for (size_t k = d; k-- > 0;) {  // right to left
            sum_down(k);
            delta = std::max(delta, truncate(k));
            sum_up_left(k);
        }
        out.iterations = iter + 1;
        if (delta < config.tol) {
            out.converged = true;
            break;
        }
    }

    // Likelihood up: skill posterior = prior message x upward message.
    out.ratings.resize(n);
    for (size_t i = 0; i < n; ++i) {
        G cavity = perf[i].value() / perf[i].lik;
        double a = 1.0 / (1.0 + beta2 * cavity.pi);
        G up{a * cavity.pi, a * cavity.tau};
        G post = prior[i] * up;
        out.ratings[order[i]] = {post.mu(), post.sigma()};
    }
    return out;
}

double leaderboard_score(const Rating& r, double k) { return r.mu - k * r.sigma; }

}  // namespace ffa
