#include "caustics/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "caustics/errors.hpp"
#include "caustics/maps.hpp"

namespace caustics {

namespace {

using Complex = std::complex<double>;
using Triple = std::array<Complex, 3>;

constexpr double kRootResidual = 1e-12;
constexpr int kRootRounds = 200;
constexpr double kCurveResidual = 1e-10;
constexpr double kReflectiveFloor = 1e-8;
constexpr double kConfirmTol = 1e-10;
constexpr double kRealImageTol = 1e-6;
constexpr std::size_t kCollisionCap = 200;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double poly_eval_abs(const std::vector<Complex>& c, double r) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * r + std::abs(c[k]);
  return acc;
}

Complex poly_eval(const std::vector<Complex>& c, const Complex& z) {
  Complex acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

/// Largest coordinate modulus; the normalization scale for triples.
double max_modulus(const Triple& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

/// Divide by the largest-modulus coordinate: the canonical projective
/// representative (that coordinate becomes exactly 1, phases align, so two
/// triples agree projectively iff the normalized coordinates agree).  False
/// when the whole triple is numerically zero (a base point of the map).
bool normalize_triple(Triple& v) {
  int lead = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(v[k]) > std::abs(v[lead])) lead = k;
  if (std::abs(v[lead]) < 1e-13) return false;
  const Complex pivot = v[lead];
  for (Complex& c : v) c /= pivot;
  return true;
}

double triple_distance(const Triple& a, const Triple& b) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

/// Projective agreement check at `tol`: renormalizes both triples by the
/// coordinate where `a` peaks, so near-cancellation in the first
/// normalization cannot fake or hide a coincidence.
bool lines_agree(const Triple& a, const Triple& b, double tol) {
  int lead = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(a[k]) > std::abs(a[lead])) lead = k;
  if (std::abs(a[lead]) < 1e-13 || std::abs(b[lead]) < 1e-13) return false;
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(a[k] / a[lead] - b[k] / b[lead]));
  return m < tol;
}

std::array<Complex, 6> pad6(const Triple& m) {
  return {m[0], m[1], m[2], Complex(0.0), Complex(0.0), Complex(0.0)};
}

/// |F_x^2 + F_y^2| at m: zero exactly on the non-reflective locus
/// (singular points and isotropic tangents).
double reflectivity(const MPoly& fx, const MPoly& fy, const Triple& m) {
  Complex gx = fx.eval_complex(pad6(m));
  Complex gy = fy.eval_complex(pad6(m));
  return std::abs(gx * gx + gy * gy);
}

void append_csv(std::string& out, const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  out += buf;
}

}  // namespace

std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  return mix64(state_);
}

double Rng::uniform() {
  return double(next() >> 11) * 0x1.0p-53;
}

long Rng::uniform_int(long lo, long hi) {
  if (lo > hi) throw ArithmeticError("uniform_int requires lo <= hi");
  std::uint64_t span = std::uint64_t(hi - lo) + 1;
  return lo + long(next() % span);
}

Rng Rng::split(std::uint64_t index) const {
  return Rng(mix64(state_ ^ mix64(index + 0x632BE59BD9B4E019ull)));
}

std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs) {
  double biggest = 0.0;
  for (const Complex& c : coeffs) biggest = std::max(biggest, std::abs(c));
  if (biggest == 0.0) throw NumericError("root finding on the zero polynomial");
  while (!coeffs.empty() && std::abs(coeffs.back()) <= 1e-14 * biggest) coeffs.pop_back();
  if (coeffs.empty()) throw NumericError("root finding on the zero polynomial");
  const int n = int(coeffs.size()) - 1;
  if (n == 0) return {};
  const Complex lead = coeffs.back();
  for (Complex& c : coeffs) c /= lead;
  if (n == 1) return {-coeffs[0]};

  // Fujiwara-style bound keeps the deterministic starting circle near the
  // outermost root.
  double radius = 0.0;
  for (int k = 0; k < n; ++k) {
    double a = std::abs(coeffs[std::size_t(k)]);
    if (a > 0.0) radius = std::max(radius, std::pow(a, 1.0 / double(n - k)));
  }
  radius = 1.0 + 2.0 * radius;

  std::vector<Complex> z(static_cast<std::size_t>(n));
  const Complex seed(0.4, 0.9);
  Complex spin = 1.0;
  for (auto& zk : z) {
    spin *= seed;
    zk = radius * spin;
  }

  for (int round = 0; round < kRootRounds; ++round) {
    bool converged = true;
    for (int j = 0; j < n; ++j) {
      Complex& zj = z[std::size_t(j)];
      Complex p = poly_eval(coeffs, zj);
      if (std::abs(p) > kRootResidual * (1.0 + poly_eval_abs(coeffs, std::abs(zj))))
        converged = false;
      Complex denom = 1.0;
      for (int k = 0; k < n; ++k)
        if (k != j) denom *= zj - z[std::size_t(k)];
      if (std::abs(denom) < 1e-300) {
        zj += (j + 1) * 1e-7;
        converged = false;
        continue;
      }
      zj -= p / denom;
    }
    if (converged) return z;
  }
  for (const Complex& zj : z) {
    if (std::abs(poly_eval(coeffs, zj)) >
        kRootResidual * (1.0 + poly_eval_abs(coeffs, std::abs(zj))))
      throw NumericError("root iteration did not reach the residual target");
  }
  return z;
}

std::vector<NumericPoint> sample_curve(const MPoly& f, int n, std::uint64_t seed) {
  if (f.is_constant()) throw DegenerateError("curve sampling requires a nonconstant polynomial");
  if (!f.is_homogeneous_in({VX, VY, VZ}))
    throw DegenerateError("curve sampling requires a homogeneous curve in x, y, z");
  if (n <= 0) return {};

  const std::vector<MPoly> slice_coeffs = f.coeffs_in(VY);
  const MPoly fx = f.derivative(VX);
  const MPoly fy = f.derivative(VY);
  const Rng base(seed);

  std::vector<NumericPoint> out;
  out.reserve(std::size_t(n));
  for (int slice = 0; slice < 10 * n && int(out.size()) < n; ++slice) {
    Rng r = base.split(std::uint64_t(slice));
    const Complex x0(-1.5 + 3.0 * r.uniform(), -1.5 + 3.0 * r.uniform());
    std::vector<Complex> c;
    c.reserve(slice_coeffs.size());
    for (const MPoly& ck : slice_coeffs)
      c.push_back(ck.eval_complex({x0, Complex(0.0), Complex(1.0), Complex(0.0),
                                   Complex(0.0), Complex(0.0)}));
    std::vector<Complex> roots;
    try {
      roots = polynomial_roots(std::move(c));
    } catch (const NumericError&) {
      continue;  // ill-conditioned slice; the next one is independent
    }
    for (const Complex& y0 : roots) {
      double lambda = std::max({std::abs(x0), std::abs(y0), 1.0});
      Triple m{x0 / lambda, y0 / lambda, 1.0 / lambda};
      double residual = std::abs(f.eval_complex(pad6(m)));
      if (residual >= kCurveResidual) continue;
      if (reflectivity(fx, fy, m) <= kReflectiveFloor) continue;
      out.push_back({m, residual});
      if (int(out.size()) == n) break;
    }
  }
  if (int(out.size()) < n)
    throw NumericError("curve offered too few accessible reflective points");
  return out;
}

const char* verdict_name(BirationalityVerdict v) {
  switch (v) {
    case BirationalityVerdict::injective: return "injective";
    case BirationalityVerdict::collision_found: return "collision_found";
    default: return "inconclusive";
  }
}

BirationalityReport birationality_test(const MPoly& f, const ProjPoint& source,
                                       int n, std::uint64_t seed, double tol) {
  const std::vector<NumericPoint> samples = sample_curve(f, n, seed);
  const RationalMapP2 rho = reflected_line_map(f, source);
  std::optional<RationalMapP2> phi;
  try {
    phi = caustic_map(f, source);
  } catch (const DegenerateError&) {
    // Envelope map vanishes identically on the curve: a total collapse.
  }

  std::vector<NumericPoint> kept;
  std::vector<Triple> lines;
  std::vector<Triple> envelopes;
  std::vector<char> env_ok;
  kept.reserve(samples.size());
  for (const NumericPoint& s : samples) {
    Triple img = rho.apply_complex(s.coords);
    if (!normalize_triple(img)) continue;  // base point of the reflected-line map
    Triple env{};
    bool ok = false;
    if (phi) {
      env = phi->apply_complex(s.coords);
      ok = normalize_triple(env);
    }
    kept.push_back(s);
    lines.push_back(img);
    envelopes.push_back(env);
    env_ok.push_back(ok ? 1 : 0);
  }

  BirationalityReport report;
  report.sample_count = int(kept.size());
  if (int(kept.size()) < std::max(2, n / 2)) {
    report.verdict = BirationalityVerdict::inconclusive;
    return report;
  }

  std::vector<std::size_t> representatives;
  for (std::size_t j = 0; j < kept.size(); ++j) {
    bool fresh = true;
    for (std::size_t r : representatives)
      if (triple_distance(lines[j], lines[r]) < tol) {
        fresh = false;
        break;
      }
    if (fresh) representatives.push_back(j);
  }
  report.distinct_images = int(representatives.size());

  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      if (triple_distance(kept[a].coords, kept[b].coords) < 1e-9) continue;
      if (env_ok[a] && env_ok[b] && triple_distance(envelopes[a], envelopes[b]) < tol &&
          lines_agree(envelopes[a], envelopes[b], kConfirmTol))
        ++report.phi_collisions;
      if (triple_distance(lines[a], lines[b]) >= tol) continue;
      if (!lines_agree(lines[a], lines[b], kConfirmTol)) continue;
      if (report.collisions.size() < kCollisionCap)
        report.collisions.push_back({kept[a], kept[b], lines[a], lines[b]});
    }
  }
  if (!phi) {
    long used = long(kept.size());
    report.phi_collisions = used * (used - 1) / 2;
  }
  report.verdict = report.collisions.empty() ? BirationalityVerdict::injective
                                             : BirationalityVerdict::collision_found;
  return report;
}

std::vector<TraceSegment> real_trace(const MPoly& f, const ProjPoint& source,
                                     const Window& window, int resolution) {
  if (resolution < 2) throw DegenerateError("trace resolution must be at least 2");
  if (!(window.x1 > window.x0) || !(window.y1 > window.y0))
    throw DegenerateError("trace window must have positive extent");
  if (!f.is_homogeneous_in({VX, VY, VZ}))
    throw DegenerateError("trace requires a homogeneous curve in x, y, z");
  for (const auto& t : f.terms())
    if (sgn(t.coeff.im()) != 0)
      throw DegenerateError("trace requires a curve with real coefficients");

  const RationalMapP2 phi = caustic_map(f, source);
  const std::vector<MPoly> slice_coeffs = f.coeffs_in(VY);
  const MPoly fx = f.derivative(VX);
  const MPoly fy = f.derivative(VY);
  const double diag = std::hypot(window.x1 - window.x0, window.y1 - window.y0);
  const double jump_break = diag / 3.0;

  std::vector<TraceSegment> segments;
  // Per-branch open segment index, -1 when the branch has no open segment.
  std::vector<int> open;
  std::size_t prev_branches = 0;
  bool met_curve = false;

  for (int step = 0; step < resolution; ++step) {
    const double x0 = window.x0 + (window.x1 - window.x0) * double(step) / double(resolution - 1);
    std::vector<Complex> c;
    c.reserve(slice_coeffs.size());
    for (const MPoly& ck : slice_coeffs)
      c.push_back(ck.eval_complex({Complex(x0), Complex(0.0), Complex(1.0),
                                   Complex(0.0), Complex(0.0), Complex(0.0)}));
    std::vector<double> ys;
    try {
      for (const Complex& y : polynomial_roots(std::move(c))) {
        if (std::abs(y.imag()) > 1e-8 * (1.0 + std::abs(y.real()))) continue;
        double yr = y.real();
        if (yr < window.y0 || yr > window.y1) continue;
        double lambda = std::max({std::abs(x0), std::abs(yr), 1.0});
        Triple m{x0 / lambda, yr / lambda, 1.0 / lambda};
        if (reflectivity(fx, fy, m) <= kReflectiveFloor) continue;
        ys.push_back(yr);
      }
    } catch (const NumericError&) {
      ys.clear();  // slice skipped; branches re-thread below
    }
    std::sort(ys.begin(), ys.end());
    if (!ys.empty()) met_curve = true;

    if (ys.size() != prev_branches) {
      open.assign(ys.size(), -1);
      prev_branches = ys.size();
    }
    for (std::size_t k = 0; k < ys.size(); ++k) {
      double lambda = std::max({std::abs(x0), std::abs(ys[k]), 1.0});
      Triple m{x0 / lambda, ys[k] / lambda, 1.0 / lambda};
      Triple img = phi.apply_complex(m);
      double scale = max_modulus(img);
      bool good = scale > 1e-13 && std::abs(img[2]) > 1e-9 * scale;
      double px = 0.0, py = 0.0;
      if (good) {
        Complex u = img[0] / img[2];
        Complex v = img[1] / img[2];
        good = std::abs(u.imag()) < kRealImageTol * (1.0 + std::abs(u.real())) &&
               std::abs(v.imag()) < kRealImageTol * (1.0 + std::abs(v.real()));
        px = u.real();
        py = v.real();
      }
      if (!good) {
        open[k] = -1;
        continue;
      }
      if (open[k] >= 0) {
        const auto& last = segments[std::size_t(open[k])].points.back();
        if (std::hypot(px - last[0], py - last[1]) > jump_break) open[k] = -1;
      }
      if (open[k] < 0) {
        open[k] = int(segments.size());
        segments.emplace_back();
      }
      segments[std::size_t(open[k])].points.push_back({px, py});
    }
  }
  if (!met_curve) throw NumericError("no real curve points inside the window");

  std::vector<TraceSegment> out;
  for (TraceSegment& s : segments)
    if (s.points.size() >= 2) out.push_back(std::move(s));
  return out;
}

std::string trace_csv(const std::vector<TraceSegment>& segments) {
  std::string out = "x,y,segment_id\n";
  for (std::size_t id = 0; id < segments.size(); ++id) {
    for (const auto& p : segments[id].points) {
      append_csv(out, "%.12g", p[0]);
      out += ',';
      append_csv(out, "%.12g", p[1]);
      out += ',';
      out += std::to_string(id);
      out += '\n';
    }
  }
  return out;
}

std::string trace_svg(const std::vector<TraceSegment>& segments, const Window& window) {
  const double w = window.x1 - window.x0;
  const double h = window.y1 - window.y0;
  char head[256];
  std::snprintf(head, sizeof head,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6g %.6g %.6g %.6g\">\n"
                "<g fill=\"none\" stroke=\"black\" stroke-width=\"%.6g\">\n",
                window.x0, -window.y1, w, h, 0.004 * std::hypot(w, h));
  std::string out = head;
  for (const TraceSegment& s : segments) {
    out += "<path d=\"";
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      char buf[80];
      std::snprintf(buf, sizeof buf, "%c%.6g %.6g", k == 0 ? 'M' : 'L', s.points[k][0],
                    -s.points[k][1]);
      if (k) out += ' ';
      out += buf;
    }
    out += "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace caustics
