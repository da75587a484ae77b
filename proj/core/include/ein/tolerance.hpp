#pragma once

namespace ein {

// Two-level tolerance: `tau` decides equality of computed quantities,
// `band` decides relation boundaries (null vs. chronological, on-plane, ...).
struct Tolerance {
  double tau = 1e-9;
  double band = 1e-6;

  // Throws PreconditionError unless 0 < tau < band < 1.
  void validate() const;
};

}  // namespace ein
