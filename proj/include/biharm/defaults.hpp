#pragma once

// Every tunable default in one place. Command-line flags override these.

namespace biharm::defaults {

inline constexpr const char* kToolVersion = "0.1.0";

// Integration.
inline constexpr double kRelTol = 1e-12;
inline constexpr double kAbsTol = 1e-12;
inline constexpr double kMaxStep = 0.1;
inline constexpr double kBlowupNorm = 1e8;
inline constexpr double kMaxSpan = 25.0;
inline constexpr double kEventRefineTol = 1e-10;
inline constexpr long kMaxSteps = 5'000'000;

// Unstable manifold and shooting.
inline constexpr double kEps0 = 1e-3;
inline constexpr double kHeteroclinicTol = 1e-3;
inline constexpr double kThetaTol = 1e-10;
inline constexpr double kBracketOffset = 0.05;
inline constexpr int kGridPoints = 200;

// Energy audits: the norm cap keeps the energy O(1e6) so an absolute
// defect is meaningful.
inline constexpr double kEnergyBlowupNorm = 1e3;
inline constexpr int kEnergyOrbits = 20;
inline constexpr double kEnergySpan = 10.0;

// Winding profile.
inline constexpr double kWindingOffset = 0.2;

// Certificates.
inline constexpr int kSplitDepth = 6;
inline constexpr double kMinWidth = 1e-5;
inline constexpr double kMinWidthCoarse = 1e-4;  // V8, V9
inline constexpr long kSublevelDenominator = 1024;

}  // namespace biharm::defaults
