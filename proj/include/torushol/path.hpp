#pragma once

#include <cmath>
#include <complex>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"
#include "torushol/theta.hpp"

namespace torushol {

struct LineSeg {
  cplx from{};
  cplx to{};
};

struct ArcSeg {
  cplx center{};
  double radius{0.0};
  double angle0{0.0};  // radians
  double angle1{0.0};
};

using Segment = std::variant<LineSeg, ArcSeg>;

inline cplx segment_point(const Segment& seg, double t) {
  if (const auto* line = std::get_if<LineSeg>(&seg)) {
    return line->from + t * (line->to - line->from);
  }
  const auto& arc = std::get<ArcSeg>(seg);
  const double ang = arc.angle0 + t * (arc.angle1 - arc.angle0);
  return arc.center + arc.radius * std::exp(kI * ang);
}

inline cplx segment_velocity(const Segment& seg, double t) {
  if (const auto* line = std::get_if<LineSeg>(&seg)) {
    return line->to - line->from;
  }
  const auto& arc = std::get<ArcSeg>(seg);
  const double ang = arc.angle0 + t * (arc.angle1 - arc.angle0);
  return arc.radius * kI * (arc.angle1 - arc.angle0) * std::exp(kI * ang);
}

/// A piecewise-smooth loop, written as its lift to the plane: segments chain
/// continuously and the final endpoint returns to the basepoint modulo the
/// period lattice Z + iZ of the coefficients (straight generators end one
/// lattice vector away from where they start).
struct PathSpec {
  std::string label;
  cplx basepoint{};
  std::vector<Segment> segments;

  bool closed(double eps = 1e-9) const {
    if (segments.empty()) return false;
    if (std::abs(segment_point(segments.front(), 0.0) - basepoint) > eps) return false;
    for (std::size_t i = 1; i < segments.size(); ++i) {
      if (std::abs(segment_point(segments[i], 0.0) - segment_point(segments[i - 1], 1.0)) > eps)
        return false;
    }
    return lattice_distance(segment_point(segments.back(), 1.0) - basepoint) < eps;
  }

  /// Sampled distance to the singular locus o + Z + iZ.
  double min_puncture_distance(int samples_per_segment = 256) const {
    double best = 1e300;
    for (const auto& seg : segments) {
      for (int i = 0; i <= samples_per_segment; ++i) {
        const double t = static_cast<double>(i) / samples_per_segment;
        best = std::min(best, puncture_distance(segment_point(seg, t)));
      }
    }
    return best;
  }

  PathSpec reversed() const {
    PathSpec out;
    out.label = label + "^-1";
    out.basepoint = segments.empty() ? basepoint : segment_point(segments.back(), 1.0);
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
      if (const auto* line = std::get_if<LineSeg>(&*it)) {
        out.segments.push_back(LineSeg{line->to, line->from});
      } else {
        const auto& arc = std::get<ArcSeg>(*it);
        out.segments.push_back(ArcSeg{arc.center, arc.radius, arc.angle1, arc.angle0});
      }
    }
    return out;
  }

  /// Concatenation "this first, then next"; the second lift is translated to
  /// start where the first one ends.
  PathSpec then(const PathSpec& next) const {
    PathSpec out = *this;
    out.label = label + ";" + next.label;
    const cplx offset = segment_point(segments.back(), 1.0) - next.basepoint;
    for (Segment seg : next.segments) {
      if (auto* line = std::get_if<LineSeg>(&seg)) {
        line->from += offset;
        line->to += offset;
      } else {
        std::get<ArcSeg>(seg).center += offset;
      }
      out.segments.push_back(seg);
    }
    return out;
  }

  static PathSpec polyline(std::string label, const std::vector<cplx>& pts) {
    PathSpec p;
    p.label = std::move(label);
    if (pts.size() < 2) throw PathError("polyline needs at least two points");
    p.basepoint = pts.front();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      p.segments.push_back(LineSeg{pts[i], pts[i + 1]});
    }
    return p;
  }
};

/// Straight representatives of the standard generators, based at q = 0.
inline PathSpec loop_alpha() { return PathSpec::polyline("alpha", {0.0, 1.0}); }
inline PathSpec loop_beta() { return PathSpec::polyline("beta", {0.0, cplx{0.0, 1.0}}); }
inline PathSpec loop_alpha_hat() { return PathSpec::polyline("alphahat", {0.0, 2.0}); }
inline PathSpec loop_beta_hat() { return PathSpec::polyline("betahat", {0.0, cplx{0.0, 2.0}}); }

/// Loop based at `base` running straight to the circle of radius r about
/// `center`, once counterclockwise around it, and straight back.
inline PathSpec loop_circle_about(cplx center, double radius, cplx base = 0.0,
                                  std::string label = "circle") {
  PathSpec p;
  p.label = std::move(label);
  p.basepoint = base;
  const cplx dir = (base == center) ? cplx{1.0, 0.0} : (base - center) / std::abs(base - center);
  const cplx start = center + radius * dir;
  const double ang = std::arg(dir);
  p.segments.push_back(LineSeg{base, start});
  p.segments.push_back(ArcSeg{center, radius, ang, ang + 2.0 * kPi});
  p.segments.push_back(LineSeg{start, base});
  return p;
}

// ---------------------------------------------------------------------------
// Plain-text loop corpus. One record per loop:
//
//   loop <label>
//   base <re> <im>
//   line <re0> <im0> <re1> <im1>
//   arc <center_re> <center_im> <radius> <angle0> <angle1>
//   end
//
// '#' starts a comment; blank lines are ignored. Angles in radians.
// ---------------------------------------------------------------------------

inline std::vector<PathSpec> parse_loop_corpus(std::istream& in) {
  std::vector<PathSpec> out;
  PathSpec current;
  bool open = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    const auto fail = [&](const std::string& msg) {
      throw PathError("loop corpus line " + std::to_string(lineno) + ": " + msg);
    };
    if (tok == "loop") {
      if (open) fail("nested loop record");
      current = PathSpec{};
      if (!(ss >> current.label)) fail("missing label");
      open = true;
    } else if (tok == "base") {
      double re = 0.0, im = 0.0;
      if (!open || !(ss >> re >> im)) fail("bad base");
      current.basepoint = {re, im};
    } else if (tok == "line") {
      double r0, i0, r1, i1;
      if (!open || !(ss >> r0 >> i0 >> r1 >> i1)) fail("bad line segment");
      current.segments.push_back(LineSeg{{r0, i0}, {r1, i1}});
    } else if (tok == "arc") {
      double cr, ci, rad, a0, a1;
      if (!open || !(ss >> cr >> ci >> rad >> a0 >> a1)) fail("bad arc segment");
      current.segments.push_back(ArcSeg{{cr, ci}, rad, a0, a1});
    } else if (tok == "end") {
      if (!open) fail("end without loop");
      out.push_back(current);
      open = false;
    } else {
      fail("unknown directive '" + tok + "'");
    }
  }
  if (open) throw PathError("loop corpus: unterminated record '" + current.label + "'");
  return out;
}

inline void write_loop_corpus(std::ostream& os, const std::vector<PathSpec>& loops) {
  os.precision(17);
  for (const auto& p : loops) {
    os << "loop " << p.label << "\n";
    os << "base " << p.basepoint.real() << " " << p.basepoint.imag() << "\n";
    for (const auto& seg : p.segments) {
      if (const auto* line = std::get_if<LineSeg>(&seg)) {
        os << "line " << line->from.real() << " " << line->from.imag() << " "
           << line->to.real() << " " << line->to.imag() << "\n";
      } else {
        const auto& arc = std::get<ArcSeg>(seg);
        os << "arc " << arc.center.real() << " " << arc.center.imag() << " " << arc.radius
           << " " << arc.angle0 << " " << arc.angle1 << "\n";
      }
    }
    os << "end\n";
  }
}

}  // namespace torushol
