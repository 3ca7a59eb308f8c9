#include "crof/surface.hpp"

#include "crof/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

namespace crof {

namespace {

double falling_power(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

class PolynomialParser {
 public:
  explicit PolynomialParser(std::string_view text) : s_(text) {}

  std::map<std::pair<int, int>, double> parse() {
    std::map<std::pair<int, int>, double> terms;
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1.0 : 1.0;
        ++pos_;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [coef, px, py] = term();
      if (px + py > 4) fail("monomial degree above 4");
      terms[{px, py}] += sign * coef;
      skip();
    }
    return terms;
  }

 private:
  std::tuple<double, int, int> term() {
    double coef = 1.0;
    int px = 0, py = 0;
    bool any = false;
    while (pos_ < s_.size()) {
      skip();
      if (pos_ == s_.size()) break;
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coef *= number();
      } else if (c == 'x' || c == 'y') {
        ++pos_;
        int power = 1;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '^') {
          ++pos_;
          skip();
          power = static_cast<int>(number());
          if (power < 0) fail("negative exponent");
        }
        (c == 'x' ? px : py) += power;
      } else {
        break;
      }
      any = true;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) break;
    }
    if (!any) fail("expected a term");
    return {coef, px, py};
  }

  double number() {
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("bad number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    raise(ErrorCode::ParseError,
          "polynomial '" + std::string(s_) + "' at column " + std::to_string(pos_) + ": " + why);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
      raise(ErrorCode::ParseError, "bad number '" + std::string(item) + "'");
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

Polynomial2::Polynomial2(std::map<std::pair<int, int>, double> terms) : terms_(std::move(terms)) {}

Polynomial2 Polynomial2::parse(std::string_view text) { return Polynomial2(PolynomialParser(text).parse()); }

double Polynomial2::eval(int dx, int dy, double x, double y) const {
  double sum = 0.0;
  for (const auto& [powers, c] : terms_) {
    const auto [px, py] = powers;
    if (px < dx || py < dy) continue;
    sum += c * falling_power(px, dx) * falling_power(py, dy) * std::pow(x, px - dx) *
           std::pow(y, py - dy);
  }
  return sum;
}

std::string Polynomial2::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [powers, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    if (powers.first > 0) os << "*x^" << powers.first;
    if (powers.second > 0) os << "*y^" << powers.second;
  }
  if (first) os << "0";
  return os.str();
}

SmoothSurface SmoothSurface::sphere(const Eigen::Vector3d& center, double radius) {
  if (!(radius > 0.0)) raise(ErrorCode::InvalidArgument, "sphere radius must be positive");
  SmoothSurface s;
  s.kind_ = Kind::Sphere;
  s.center_ = center;
  s.radius_ = radius;
  return s;
}

SmoothSurface SmoothSurface::ellipsoid(const Eigen::Vector3d& semi_axes) {
  if (!(semi_axes.minCoeff() > 0.0)) raise(ErrorCode::InvalidArgument, "semi-axes must be positive");
  SmoothSurface s;
  s.kind_ = Kind::Ellipsoid;
  s.axes_ = semi_axes;
  return s;
}

SmoothSurface SmoothSurface::monge(Polynomial2 height) {
  SmoothSurface s;
  s.kind_ = Kind::Monge;
  s.height_ = std::move(height);
  return s;
}

SmoothSurface SmoothSurface::parse(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos)
    raise(ErrorCode::ParseError, "surface spec needs '<kind>:<parameters>'");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  if (kind == "sphere") {
    const auto v = parse_numbers(rest);
    if (v.size() != 1) raise(ErrorCode::ParseError, "sphere expects one radius");
    return sphere(Eigen::Vector3d::Zero(), v[0]);
  }
  if (kind == "ellipsoid") {
    const auto v = parse_numbers(rest);
    if (v.size() != 3) raise(ErrorCode::ParseError, "ellipsoid expects three semi-axes");
    return ellipsoid({v[0], v[1], v[2]});
  }
  if (kind == "monge") return monge(Polynomial2::parse(rest));
  raise(ErrorCode::ParseError, "unknown surface kind '" + std::string(kind) + "'");
}

MongeDerivatives SmoothSurface::monge_at(double x, double y) const {
  const Polynomial2& h = height_;
  return {h.eval(0, 0, x, y), h.eval(1, 0, x, y), h.eval(0, 1, x, y),
          h.eval(2, 0, x, y), h.eval(1, 1, x, y), h.eval(0, 2, x, y)};
}

Eigen::Vector3d SmoothSurface::project(const Eigen::Vector3d& p) const {
  switch (kind_) {
    case Kind::Sphere: {
      const Eigen::Vector3d d = p - center_;
      const double n = d.norm();
      if (n == 0.0) return center_ + Eigen::Vector3d(radius_, 0.0, 0.0);
      return center_ + d * (radius_ / n);
    }
    case Kind::Monge:
      return {p.x(), p.y(), height_(p.x(), p.y())};
    case Kind::Ellipsoid: {
      // Closest point x_i = a_i^2 p_i / (a_i^2 + t) where t solves
      // F(t) = sum (a_i p_i / (a_i^2 + t))^2 - 1 = 0, F decreasing.
      const Eigen::Vector3d a2 = axes_.cwiseProduct(axes_);
      const Eigen::Vector3d ap = axes_.cwiseProduct(p);
      auto F = [&](double t) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += std::pow(ap[i] / (a2[i] + t), 2);
        return s - 1.0;
      };
      auto dF = [&](double t) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += -2.0 * ap[i] * ap[i] / std::pow(a2[i] + t, 3);
        return s;
      };
      double lo = -a2.minCoeff();
      double hi = ap.norm();
      // Nudge the lower bound inside the domain until F(lo) > 0.
      double step = 1e-3 * a2.minCoeff();
      double probe = lo + step;
      int guard = 0;
      while (F(probe) <= 0.0 && guard++ < 60) {
        step *= 0.5;
        probe = lo + step;
      }
      if (F(probe) <= 0.0 || F(hi) > 0.0)
        raise(ErrorCode::ProjectionDiverged, "no bracket for the ellipsoid projection");
      lo = probe;
      double t = std::clamp(0.0, lo, hi);
      for (int it = 0; it < 200; ++it) {
        const double f = F(t);
        if (f > 0.0) lo = t;
        else hi = t;
        double next = t - f / dF(t);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t)) || hi - lo < 1e-300) {
          t = next;
          Eigen::Vector3d x;
          for (int i = 0; i < 3; ++i) x[i] = a2[i] * p[i] / (a2[i] + t);
          // Final radial correction removes the remaining residual.
          const double r = std::sqrt(x.cwiseQuotient(axes_).squaredNorm());
          return x / r;
        }
        t = next;
      }
      raise(ErrorCode::ProjectionDiverged, "ellipsoid projection did not converge");
    }
  }
  return p;
}

double SmoothSurface::residual(const Eigen::Vector3d& p) const {
  switch (kind_) {
    case Kind::Sphere: return std::abs((p - center_).norm() - radius_);
    case Kind::Ellipsoid: return std::abs(std::sqrt(p.cwiseQuotient(axes_).squaredNorm()) - 1.0);
    case Kind::Monge: return std::abs(p.z() - height_(p.x(), p.y()));
  }
  return 0.0;
}

TriMesh project_to_surface(const TriMesh& mesh, const SmoothSurface& surface) {
  Positions V = mesh.vertices();
  for (Eigen::Index v = 0; v < V.rows(); ++v)
    V.row(v) = surface.project(V.row(v).transpose()).transpose();
  return mesh.with_vertices(std::move(V));
}

double max_surface_residual(const TriMesh& mesh, const SmoothSurface& surface) {
  double r = 0.0;
  for (Eigen::Index v = 0; v < mesh.vertices().rows(); ++v)
    r = std::max(r, surface.residual(mesh.vertices().row(v).transpose()));
  return r;
}

}  // namespace crof
