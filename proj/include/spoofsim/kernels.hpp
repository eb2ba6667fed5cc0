// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The spoofsim Authors
#pragma once

#include <complex>

namespace spoofsim {

using cd = std::complex<double>;

// sin(pi x) / (pi x), equal to 1 at x = 0.
double sinc(double x);

// Dirichlet kernel sin(n x) / (n sin x); poles at multiples of pi take their limits.
double dirichlet(int n, double x);

// Transmit array factor a^H(theta1) a(theta2) for an n_tx-element half-wavelength ULA.
cd tx_factor(double theta1, double theta2, int n_tx);

// Per-receive-antenna factor sqrt(n_rx) b_{n_r}(theta2) a^H(theta2) a(theta1), n_r = 1..n_rx.
cd rx_tx_factor(double theta1, double theta2, int n_r, int n_tx);

}  // namespace spoofsim
