#pragma once

#include <string>
#include <vector>

namespace ffa {

struct RatingConfig {
    double mu0 = 25.0;
    double sigma0 = 25.0 / 3.0;
    double beta = 25.0 / 6.0;      // performance noise
    double tau = 25.0 / 300.0;     // dynamics noise, added per update
    double p_draw = 0.10;
    double tol = 1e-4;             // message-passing convergence
    int max_iterations = 100;

    // Draw margin derived from the draw probability for two single-player
    // sides: eps = Phi^{-1}((1+p)/2) * sqrt(2) * beta.
    double epsilon() const;
};

struct Rating {
    double mu = 25.0;
    double sigma = 25.0 / 3.0;
};

// One participant's place in a ranked free-for-all outcome. Equal ranks
// denote draws; ranks form a weak ordering starting at 1.
struct RankedOutcome {
    std::vector<int> ranks;  // ranks[i] is participant i's rank
};

struct FfaUpdateResult {
    std::vector<Rating> ratings;
    bool converged = true;
    int iterations = 0;
};

// Standard normal helpers (stable across the full double range).
double norm_pdf(double x);
double norm_cdf(double x);
double norm_cdf_inv(double p);

// Truncated-Gaussian moment corrections. Exceeds-case: mean shift
// v = phi(t-a)/Phi(t-a) and variance factor w = v*(v + t - a); asymptotic
// fallback keeps both finite for arbitrarily negative t-a.
double v_exceeds(double t, double alpha);
double w_exceeds(double t, double alpha);
// Draw-case corrections for truncation to |d| <= alpha.
double v_within(double t, double alpha);
double w_within(double t, double alpha);

// Closed-form two-entity update; serves as the oracle for the factor
// graph. Returns (winner, loser) posteriors; with is_draw the labels are
// arbitrary.
std::pair<Rating, Rating> update_two_player(const Rating& winner, const Rating& loser,
                                            const RatingConfig& config, bool is_draw);

// Rank-chain factor graph over all participants with message passing to
// convergence. Throws std::invalid_argument on malformed outcomes.
FfaUpdateResult update_ffa(const std::vector<Rating>& ratings, const RankedOutcome& outcome,
                           const RatingConfig& config);

// Conservative display score mu - k*sigma.
double leaderboard_score(const Rating& r, double k = 3.0);

}  // namespace ffa
