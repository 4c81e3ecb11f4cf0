#pragma once

// Umbrella header for the whole library.
//
// Layers, bottom up:
//   linalg   - complex matrices, Jacobi eigensolvers, matrix log,
//              ladder/displacement operators, Gauss-Hermite rules
//   sim      - deterministic per-stream RNG
//   qstate   - truncated displaced thermal states, relative entropy
//              (closed form and numeric)
//   measure  - heterodyne outcome model, sampling, estimation
//   predict  - conjugate prior/posterior, predictive constructions
//   risk     - closed-form average risks, Monte Carlo estimators
//   io       - config parsing, CSV/manifest emission, content hashing

#include "gqpred/complex_matrix.hpp"
#include "gqpred/hermitian_eig.hpp"
#include "gqpred/psd_log.hpp"
#include "gqpred/operators.hpp"
#include "gqpred/gauss_hermite.hpp"
#include "gqpred/rng.hpp"
#include "gqpred/states.hpp"
#include "gqpred/rel_entropy.hpp"
#include "gqpred/heterodyne.hpp"
#include "gqpred/bayes.hpp"
#include "gqpred/predictive.hpp"
#include "gqpred/risk.hpp"
#include "gqpred/monte_carlo.hpp"
#include "gqpred/verification.hpp"
#include "gqpred/sha1.hpp"
#include "gqpred/io.hpp"
#include "gqpred/selftest.hpp"
