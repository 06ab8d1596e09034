#ifndef PIDD_PID_HPP
#define PIDD_PID_HPP

#include <optional>
#include <string>

#include "pidd/conditions.hpp"
#include "pidd/information.hpp"
#include "pidd/systems.hpp"

namespace pidd {

enum class Provenance { ClosedForm, Oracle };
enum class JointAssumption { ConditionalIndependence, UserSupplied };

std::string provenance_name(Provenance p);
std::string joint_assumption_name(JointAssumption j);

struct PidResult {
  InfoValue ui_y, ui_z, ri, si;
  InfoValue i_my, i_mz, i_myz;
  Direction direction = Direction::Neither;
  Provenance provenance = Provenance::ClosedForm;
  JointAssumption joint_assumption = JointAssumption::ConditionalIndependence;
  // Residuals of the three decomposition identities, re-evaluated after
  // assembly (joint identity, then the Y and Z marginal identities).
  double joint_identity_residual = 0.0;
  double y_identity_residual = 0.0;
  double z_identity_residual = 0.0;
};

// Closed-form PID unlocked by a zero unique-information direction:
// with UI(M;Z\Y)=0, RI = I(M;Z), UI(M;Y\Z) = I(M;Y) - I(M;Z),
// SI = I(M;Y,Z) - I(M;Y); mirrored for the other direction. `joint`
// overrides the conditional-independence coupling for I(M;Y,Z) only.
PidResult closed_form_pid(const PoissonSystemSpec& spec, double epsilon,
                          const JointPmf* joint = nullptr);
PidResult closed_form_pid(const MultinomialSystemSpec& spec, double epsilon,
                          const JointPmf* joint = nullptr);

// Shared assembly + invariant re-verification. Closed-form provenance
// enforces the 1e-9 identity/nonnegativity bands; oracle provenance reports
// them without raising.
PidResult assemble_pid(const InfoValue& i_my, const InfoValue& i_mz,
                       const InfoValue& i_myz, Direction direction,
                       Provenance provenance, JointAssumption assumption);

// Assembly from one numerically solved UI term (oracle provenance):
// ui_value is UI(M;Z\Y) when ui_side == Side::Z, else UI(M;Y\Z).
PidResult assemble_pid_from_ui(const InfoValue& i_my, const InfoValue& i_mz,
                               const InfoValue& i_myz, double ui_value, Side ui_side,
                               JointAssumption assumption);

}  // namespace pidd

#endif  // PIDD_PID_HPP
