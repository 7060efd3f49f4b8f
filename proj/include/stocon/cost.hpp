#pragma once

// Move costs. Synchronous moves are priced from their firing probability,
// non-synchronous moves at a flat cost.

#include <cmath>
#include <string>

#include "stocon/error.hpp"
#include "stocon/sync_product.hpp"

namespace stocon {

enum class ProfileKind { Stochastic, Deterministic, LowerBound };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Stochastic: return "stochastic";
    case ProfileKind::Deterministic: return "deterministic";
    case ProfileKind::LowerBound: return "lower-bound";
  }
  return "?";
}

inline ProfileKind parse_profile_kind(const std::string& s) {
  if (s == "stochastic") return ProfileKind::Stochastic;
  if (s == "deterministic") return ProfileKind::Deterministic;
  if (s == "lower-bound") return ProfileKind::LowerBound;
  throw DomainError("unknown profile '" + s + "' (expected stochastic, deterministic or lower-bound)");
}

struct CostProfile {
  ProfileKind kind = ProfileKind::Stochastic;
  double tau_model_move_cost = 0.0;
  double nonsync_cost = 1.0;

  void validate() const {
    if (!(tau_model_move_cost >= 0.0) || !std::isfinite(tau_model_move_cost))
      throw DomainError("tau model move cost must be a finite nonnegative number");
    if (!(nonsync_cost >= 0.0) || !std::isfinite(nonsync_cost))
      throw DomainError("non-synchronous move cost must be a finite nonnegative number");
  }
};

/// 1 - exp(1 - 1/w): 0 at w = 1, tending to 1 as w -> 0+.
inline double eq1_cost(double w) {
  if (!(w > 0.0 && w <= 1.0)) throw DomainError("firing probability outside (0,1]: " + std::to_string(w));
  return 0.0 - std::expm1(1.0 - 1.0 / w);  // +0.0 at w = 1
}

inline double sync_cost(const CostProfile& profile, double weight) {
  switch (profile.kind) {
    case ProfileKind::Stochastic: return eq1_cost(weight);
    case ProfileKind::Deterministic:
    case ProfileKind::LowerBound: return 0.0;
  }
  return 0.0;
}

inline double move_cost(const ProductTransition& t, const CostProfile& profile) {
  switch (t.kind) {
    case MoveKind::Sync:
      if (!t.weight) throw Error("internal: synchronous move " + t.id + " has no weight");
      return sync_cost(profile, *t.weight);
    case MoveKind::LogMove: return profile.nonsync_cost;
    case MoveKind::ModelMove:
      if (t.model_label && t.model_label->is_tau()) return profile.tau_model_move_cost;
      return profile.nonsync_cost;
  }
  return profile.nonsync_cost;
}

}  // namespace stocon
