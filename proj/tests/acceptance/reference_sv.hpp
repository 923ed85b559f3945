#ifndef IRVOL_TESTS_REFERENCE_SV_HPP
#define IRVOL_TESTS_REFERENCE_SV_HPP

// Textbook regular-spacing SV model, written without the library's gap-time
// machinery. Used as the oracle for the unit-gap case.

#include <Eigen/Dense>

#include <cstdint>

#include "irvol/random.hpp"

namespace reference {

struct SvPath {
  Eigen::VectorXd h;
  Eigen::VectorXd r;
};

/// h_1 ~ N(mu, s^2 / (1 - phi^2)), h_t = mu + phi (h_{t-1} - mu) + s z_t, r_t = e^{h_t / 2} e_t.
/// Each step consumes the state draw before the return draw.
SvPath simulate(double mu, double phi, double sigma, Eigen::Index length, irvol::Rng& rng);

struct SvDraws {
  Eigen::VectorXd mu, phi, sigma;
};

/// Metropolis-within-Gibbs for the regular SV posterior with
/// mu ~ N(0, 10), (phi + 1) / 2 ~ Beta(20, 1.5) restricted to phi in (0, 1),
/// 1 / sigma^2 ~ Gamma(2.5, rate 0.025). mu and sigma^2 are drawn from their
/// conjugate full conditionals; phi and each h_t by fixed-width random walks.
SvDraws fit(const Eigen::VectorXd& r, Eigen::Index iterations, Eigen::Index burn_in, Eigen::Index thin,
            std::uint64_t seed);

}  // namespace reference

#endif  // IRVOL_TESTS_REFERENCE_SV_HPP
