#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "caustics/mpoly.hpp"
#include "caustics/projective.hpp"

namespace caustics {

/// Deterministic 64-bit generator (additive-counter mix).  All randomized
/// numeric routines draw from one of these so identical seeds reproduce
/// identical results bit for bit.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform integer in [lo, hi], both inclusive (requires lo <= hi).
  long uniform_int(long lo, long hi);
  /// Independent child stream for slice `index`; does not disturb this
  /// stream, so per-slice work is order-independent.
  Rng split(std::uint64_t index) const;

private:
  std::uint64_t state_;
};

/// All complex roots of sum_k coeffs[k] t^k by simultaneous (Durand-Kerner)
/// iteration: deterministic starts, at most 200 rounds, every root polished
/// until |p(root)| <= 1e-12 * (1 + sum_k |c_k| |root|^k).  Near-zero leading
/// coefficients are trimmed relative to the largest coefficient first.
/// Throws NumericError when the iteration fails to reach the target or the
/// input is identically zero.  Constants return an empty list.
std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> coeffs);

/// A floating-point point of the curve, scaled so the largest-magnitude
/// homogeneous coordinate has modulus 1.
struct NumericPoint {
  std::array<std::complex<double>, 3> coords{};
  /// |F| at the normalized coordinates.
  double residual = 0.0;
};

/// n random points on V(f) away from the non-reflective locus: for random
/// complex x-slices in the z = 1 chart, solves the univariate slice to
/// residual 1e-12, keeps roots with |F| < 1e-10 after normalization and
/// |F_x^2 + F_y^2| > 1e-8 (so tangents are never isotropic and points never
/// singular).  Deterministic per seed; slice k uses the split stream k.
/// Throws NumericError when 10n slices fail to produce n points.
std::vector<NumericPoint> sample_curve(const MPoly& f, int n, std::uint64_t seed);

enum class BirationalityVerdict { injective, collision_found, inconclusive };
const char* verdict_name(BirationalityVerdict v);

/// Two distinct curve points whose reflected lines coincide numerically.
struct CollisionPair {
  NumericPoint first;
  NumericPoint second;
  std::array<std::complex<double>, 3> first_line{};
  std::array<std::complex<double>, 3> second_line{};
};

struct BirationalityReport {
  /// Samples that survived the base-locus filter and entered the scan.
  int sample_count = 0;
  /// Clusters of reflected lines at tolerance `tol` (<= sample_count).
  int distinct_images = 0;
  /// Confirmed reflected-line coincidences (list capped at 200 pairs).
  std::vector<CollisionPair> collisions;
  BirationalityVerdict verdict = BirationalityVerdict::inconclusive;
  /// Confirmed coincidences of the envelope-point images in the same pass; a
  /// fully collapsed envelope counts every pair.
  long phi_collisions = 0;
};

/// Samples n points of V(f), pushes them through the reflected-line map for
/// `source`, and scans all pairs for coinciding images.  A pair within `tol`
/// (on coordinates normalized by the largest modulus) counts only after a
/// re-normalized agreement at 1e-10 confirms the two lines really coincide.
/// The envelope-point images are scanned the same way into phi_collisions.
/// Verdict: injective when no confirmed pair, collision_found otherwise,
/// inconclusive when over half the samples hit the base locus.
BirationalityReport birationality_test(const MPoly& f, const ProjPoint& source,
                                       int n, std::uint64_t seed, double tol);

/// Axis-aligned sampling window [x0, x1] x [y0, y1].
struct Window {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
};

/// Polyline in the image plane (affine u/w, v/w coordinates).
struct TraceSegment {
  std::vector<std::array<double, 2>> points;
};

/// Real trace of the reflective envelope: walks `resolution` vertical slices
/// of the window, collects real points of V(f) (real coefficients required),
/// maps them through the envelope-point map, keeps images that are finite and
/// real to 1e-6, and threads them into polylines along the slice parameter.
/// Branches are matched by vertical order; a segment breaks when the branch
/// count changes, the image leaves the real affine plane, or the image jumps
/// by more than a third of the window diagonal.  Single-point segments are
/// dropped.  Throws NumericError when no slice meets the curve.
std::vector<TraceSegment> real_trace(const MPoly& f, const ProjPoint& source,
                                     const Window& window, int resolution);

/// CSV serialization: header "x,y,segment_id", one row per vertex.
std::string trace_csv(const std::vector<TraceSegment>& segments);
/// Minimal SVG: one path per segment, viewBox matching the window (y up).
std::string trace_svg(const std::vector<TraceSegment>& segments, const Window& window);

}  // namespace caustics
