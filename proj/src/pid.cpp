#include "pidd/pid.hpp"

#include <cmath>
#include <string>

namespace pidd {

std::string provenance_name(Provenance p) {
  return p == Provenance::ClosedForm ? "closed_form" : "oracle";
}

std::string joint_assumption_name(JointAssumption j) {
  return j == JointAssumption::ConditionalIndependence ? "conditional_independence"
                                                       : "user_supplied";
}

namespace {

constexpr double kIdentityBand = 1e-9;

double clamp_term(double v, Provenance prov, const char* label) {
  if (v >= 0.0) return v;
  if (prov == Provenance::ClosedForm && v < -kIdentityBand) {
    throw NumericalIntegrityError(std::string(label) +
                                  " fell below the -1e-9 band: " + std::to_string(v));
  }
  return prov == Provenance::ClosedForm ? 0.0 : v;
}

void fill_residuals(PidResult& r) {
  r.joint_identity_residual =
      r.i_myz.bits - (r.ui_y.bits + r.ui_z.bits + r.ri.bits + r.si.bits);
  r.y_identity_residual = r.i_my.bits - (r.ui_y.bits + r.ri.bits);
  r.z_identity_residual = r.i_mz.bits - (r.ui_z.bits + r.ri.bits);
}

void enforce_closed_form_bands(const PidResult& r) {
  if (std::abs(r.joint_identity_residual) > kIdentityBand ||
      std::abs(r.y_identity_residual) > kIdentityBand ||
      std::abs(r.z_identity_residual) > kIdentityBand) {
    throw NumericalIntegrityError("PID identities violated beyond the 1e-9 band");
  }
}

}  // namespace

PidResult assemble_pid(const InfoValue& i_my, const InfoValue& i_mz, const InfoValue& i_myz,
                       Direction direction, Provenance provenance,
                       JointAssumption assumption) {
  if (direction == Direction::Neither) {
    throw ConditionsInconclusiveError(
        "assemble_pid: conditions inconclusive, no closed form; run the oracle instead");
  }
  PidResult r;
  r.i_my = i_my;
  r.i_mz = i_mz;
  r.i_myz = i_myz;
  r.direction = direction;
  r.provenance = provenance;
  r.joint_assumption = assumption;

  const double pair_bound = i_my.truncation_bound + i_mz.truncation_bound;
  if (direction == Direction::UiZZero) {
    r.ui_z = {0.0, 0.0};
    r.ri = {i_mz.bits, i_mz.truncation_bound};
    // Data processing along the certified chain guarantees I(M;Y) >= I(M;Z).
    r.ui_y = {clamp_term(i_my.bits - i_mz.bits, provenance, "UI(M;Y\\Z)"), pair_bound};
    r.si = {clamp_term(i_myz.bits - i_my.bits, provenance, "SI"),
            i_myz.truncation_bound + i_my.truncation_bound};
  } else if (direction == Direction::UiYZero) {
    r.ui_y = {0.0, 0.0};
    r.ri = {i_my.bits, i_my.truncation_bound};
    r.ui_z = {clamp_term(i_mz.bits - i_my.bits, provenance, "UI(M;Z\\Y)"), pair_bound};
    r.si = {clamp_term(i_myz.bits - i_mz.bits, provenance, "SI"),
            i_myz.truncation_bound + i_mz.truncation_bound};
  } else {  // Both: the two chains force both unique terms to zero.
    if (provenance == Provenance::ClosedForm &&
        std::abs(i_my.bits - i_mz.bits) > kIdentityBand) {
      throw NumericalIntegrityError(
          "assemble_pid: both-direction verdict but I(M;Y) != I(M;Z)");
    }
    r.ui_y = {0.0, 0.0};
    r.ui_z = {0.0, 0.0};
    r.ri = {i_my.bits, i_my.truncation_bound};
    r.si = {clamp_term(i_myz.bits - i_my.bits, provenance, "SI"),
            i_myz.truncation_bound + i_my.truncation_bound};
  }
  fill_residuals(r);
  if (provenance == Provenance::ClosedForm) enforce_closed_form_bands(r);
  return r;
}

PidResult assemble_pid_from_ui(const InfoValue& i_my, const InfoValue& i_mz,
                               const InfoValue& i_myz, double ui_value, Side ui_side,
                               JointAssumption assumption) {
  PidResult r;
  r.i_my = i_my;
  r.i_mz = i_mz;
  r.i_myz = i_myz;
  r.provenance = Provenance::Oracle;
  r.joint_assumption = assumption;
  r.direction = ui_side == Side::Z ? Direction::UiZZero : Direction::UiYZero;
  if (ui_side == Side::Z) {
    r.ui_z = {ui_value, 0.0};
    r.ri = {i_mz.bits - ui_value, i_mz.truncation_bound};
    r.ui_y = {i_my.bits - r.ri.bits, i_my.truncation_bound + i_mz.truncation_bound};
  } else {
    r.ui_y = {ui_value, 0.0};
    r.ri = {i_my.bits - ui_value, i_my.truncation_bound};
    r.ui_z = {i_mz.bits - r.ri.bits, i_my.truncation_bound + i_mz.truncation_bound};
  }
  r.si = {i_myz.bits - r.ui_y.bits - r.ui_z.bits - r.ri.bits,
          i_myz.truncation_bound + i_my.truncation_bound + i_mz.truncation_bound};
  fill_residuals(r);
  return r;
}

namespace {

PidResult closed_form_impl(Direction direction, const JointPmf& pair_y,
                           const JointPmf& pair_z, const JointPmf& full,
                           JointAssumption assumption) {
  const InfoValue i_my = mutual_information(pair_y, {0}, {1});
  const InfoValue i_mz = mutual_information(pair_z, {0}, {1});
  const InfoValue i_myz = mutual_information(full, {0}, {1, 2});
  return assemble_pid(i_my, i_mz, i_myz, direction, Provenance::ClosedForm, assumption);
}

void check_user_joint(const JointPmf* joint) {
  if (joint) {
    require(joint->axes.size() == 3, "closed_form_pid: user joint must have axes (M,Y,Z)");
    joint->validate();
  }
}

}  // namespace

PidResult closed_form_pid(const PoissonSystemSpec& spec, double epsilon,
                          const JointPmf* joint) {
  check_user_joint(joint);
  const Direction direction = check_poisson(spec).direction;
  const JointPmf pair_y = pairwise_joint(spec, Side::Y, epsilon);
  const JointPmf pair_z = pairwise_joint(spec, Side::Z, epsilon);
  const JointPmf full =
      joint ? *joint : full_joint_conditionally_independent(spec, epsilon);
  return closed_form_impl(direction, pair_y, pair_z, full,
                          joint ? JointAssumption::UserSupplied
                                : JointAssumption::ConditionalIndependence);
}

PidResult closed_form_pid(const MultinomialSystemSpec& spec, double epsilon,
                          const JointPmf* joint) {
  (void)epsilon;  // exact supports
  check_user_joint(joint);
  const Direction direction = check_multinomial(spec).direction;
  const JointPmf pair_y = pairwise_joint(spec, Side::Y);
  const JointPmf pair_z = pairwise_joint(spec, Side::Z);
  const JointPmf full = joint ? *joint : full_joint_conditionally_independent(spec);
  return closed_form_impl(direction, pair_y, pair_z, full,
                          joint ? JointAssumption::UserSupplied
                                : JointAssumption::ConditionalIndependence);
}

}  // namespace pidd
