#pragma once

// Reference values computed outside this library and frozen here.
// Extended precision: mpmath at 40 digits. Quadrature: scipy dblquad,
// tests/oracles/q_reference.py.

namespace frozen {

inline constexpr double kAngleNearParallel = 9.999999999999999666666666666666686666667e-9;  // atan(1e-8)
inline constexpr double kLogisticDerivAt100 = -3.720075976020835962959695803863118337357e-44;
inline constexpr double kLogisticAtMinus10 = 10.0000453988992168646467694878293071056;

inline constexpr double kGaussianBand01 = 0.2533471031357997;  // Phi^-1(0.6)
inline constexpr double kQ4At001 = 0.23045635759706445;        // 0.724 / pi

// Population logistic risk of Q(0.01).
inline constexpr double kRiskQ001At30_0 = 0.2889243753798727;
inline constexpr double kRiskQ001At30_3 = 0.256912280271322;
inline constexpr double kRiskQ001At5_m2 = 0.4785822910390817;

// Population hinge risk of Q at u = (1, 0): opt * sqrt(2) / 2.
inline constexpr double kHingeQ001AtU = 0.007071067811865475244;
inline constexpr double kHingeQ400AtU = 0.001767766952966362;

}  // namespace frozen
