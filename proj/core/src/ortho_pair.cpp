#include "snc/ortho_pair.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "snc/errors.hpp"

namespace snc {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double sum(const std::vector<double>& a) { return std::accumulate(a.begin(), a.end(), 0.0); }

void remove_mean(std::vector<double>& a) {
  const double m = sum(a) / static_cast<double>(a.size());
  for (double& x : a) x -= m;
}

bool normalize(std::vector<double>& a) {
  const double norm = std::sqrt(dot(a, a));
  if (!(norm > 1e-300)) return false;
  for (double& x : a) x /= norm;
  return true;
}

void require_dimension(int n, int min_n, const char* what) {
  if (n < min_n) {
    throw DomainError(std::string(what) + ": n must be >= " + std::to_string(min_n));
  }
}

}  // namespace

std::string to_string(PairMode mode) { return mode == PairMode::sphere ? "sphere" : "diagonal"; }

PairMode parse_pair_mode(const std::string& text) {
  if (text == "sphere") return PairMode::sphere;
  if (text == "diagonal") return PairMode::diagonal;
  throw ValidationError("unknown pair mode '" + text + "' (expected sphere or diagonal)");
}

std::string OrthoPair::check(const std::vector<double>& eta1, const std::vector<double>& eta2,
                             PairMode mode) {
  std::ostringstream msg;
  msg.precision(17);
  if (eta1.size() != eta2.size()) {
    msg << "eta1 and eta2 have different lengths (" << eta1.size() << " vs " << eta2.size() << ")";
    return msg.str();
  }
  if (eta1.size() < 2) return "dimension must be >= 2";
  for (double x : eta1)
    if (!std::isfinite(x)) return "eta1 has a non-finite entry";
  for (double x : eta2)
    if (!std::isfinite(x)) return "eta2 has a non-finite entry";
  const double n1 = std::sqrt(dot(eta1, eta1));
  const double n2 = std::sqrt(dot(eta2, eta2));
  const double ip = dot(eta1, eta2);
  if (std::abs(n1 - 1.0) > kTolerance) {
    msg << "|eta1| = " << n1 << " is not 1";
    return msg.str();
  }
  if (std::abs(n2 - 1.0) > kTolerance) {
    msg << "|eta2| = " << n2 << " is not 1";
    return msg.str();
  }
  if (std::abs(ip) > kTolerance) {
    msg << "<eta1, eta2> = " << ip << " is not 0";
    return msg.str();
  }
  if (mode == PairMode::diagonal) {
    if (eta1.size() < 4) return "diagonal mode requires n >= 4";
    const double s1 = sum(eta1);
    const double s2 = sum(eta2);
    if (std::abs(s1) > kTolerance) {
      msg << "sum(eta1) = " << s1 << " is not 0 (diagonal mode)";
      return msg.str();
    }
    if (std::abs(s2) > kTolerance) {
      msg << "sum(eta2) = " << s2 << " is not 0 (diagonal mode)";
      return msg.str();
    }
  }
  return {};
}

OrthoPair::OrthoPair(std::vector<double> eta1, std::vector<double> eta2, PairMode mode)
    : eta1_(std::move(eta1)), eta2_(std::move(eta2)), mode_(mode) {
  if (auto problem = check(eta1_, eta2_, mode_); !problem.empty()) {
    throw ValidationError("invalid orthonormal pair: " + problem);
  }
}

OrthoPair OrthoPair::canonical(int n, int i, int j) { return sphere_with_overlap(n, 0.0, i, j); }

OrthoPair OrthoPair::rotated(int n, int i, int j) {
  require_dimension(n, 2, "OrthoPair::rotated");
  std::vector<double> a(n, 0.0), b(n, 0.0);
  const double h = std::numbers::sqrt2 / 2.0;
  a.at(i) = h;
  a.at(j) = h;
  b.at(i) = h;
  b.at(j) = -h;
  return {std::move(a), std::move(b), PairMode::sphere};
}

OrthoPair OrthoPair::sphere_with_overlap(int n, double t, int i, int j) {
  require_dimension(n, 2, "OrthoPair::sphere_with_overlap");
  if (!(t >= 0.0 && t <= 0.5)) throw RangeError("sphere overlap must lie in [0, 1/2]");
  if (i == j) throw DomainError("OrthoPair: coordinates must differ");
  // t = sin^2(2 phi) / 2.
  const double phi = 0.5 * std::asin(std::min(1.0, std::sqrt(2.0 * t)));
  std::vector<double> a(n, 0.0), b(n, 0.0);
  a.at(i) = std::cos(phi);
  a.at(j) = std::sin(phi);
  b.at(i) = -std::sin(phi);
  b.at(j) = std::cos(phi);
  return {std::move(a), std::move(b), PairMode::sphere};
}

OrthoPair OrthoPair::diagonal_xi_bar(int n, int first) { return diagonal_with_overlap(n, 0.0, first); }

OrthoPair OrthoPair::diagonal_xi(int n, int first) {
  require_dimension(n, 4, "OrthoPair::diagonal_xi");
  std::vector<double> a(n, 0.0), b(n, 0.0);
  const double s[4] = {0.5, -0.5, 0.5, -0.5};
  const double r[4] = {0.5, -0.5, -0.5, 0.5};
  for (int k = 0; k < 4; ++k) {
    a.at(first + k) = s[k];
    b.at(first + k) = r[k];
  }
  return {std::move(a), std::move(b), PairMode::diagonal};
}

OrthoPair OrthoPair::diagonal_with_overlap(int n, double t, int first) {
  require_dimension(n, 4, "OrthoPair::diagonal_with_overlap");
  if (!(t >= 0.0 && t <= 0.25)) throw RangeError("diagonal overlap must lie in [0, 1/4]");
  // u1 = (e1 - e2)/sqrt2, u2 = (e3 - e4)/sqrt2; rotate by phi with
  // t = sin^2(2 phi) / 4.
  const double phi = 0.5 * std::asin(std::min(1.0, std::sqrt(4.0 * t)));
  const double c = std::cos(phi) / std::numbers::sqrt2;
  const double s = std::sin(phi) / std::numbers::sqrt2;
  std::vector<double> a(n, 0.0), b(n, 0.0);
  a.at(first + 0) = c;
  a.at(first + 1) = -c;
  a.at(first + 2) = s;
  a.at(first + 3) = -s;
  b.at(first + 0) = -s;
  b.at(first + 1) = s;
  b.at(first + 2) = c;
  b.at(first + 3) = -c;
  return {std::move(a), std::move(b), PairMode::diagonal};
}

OrthoPair OrthoPair::random(int n, PairMode mode, Xoshiro256pp& rng) {
  require_dimension(n, mode == PairMode::diagonal ? 4 : 2, "OrthoPair::random");
  std::vector<double> a(n), b(n);
  for (;;) {
    for (double& x : a) x = rng.normal();
    for (double& x : b) x = rng.normal();
    if (orthonormalize(a, b, mode)) break;
  }
  return {std::move(a), std::move(b), mode};
}

OrthoPair OrthoPair::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n()) throw DomainError("permutation has wrong length");
  std::vector<bool> seen(perm.size(), false);
  for (int k : perm) {
    if (k < 0 || k >= n() || seen[k]) throw DomainError("not a permutation of 0..n-1");
    seen[k] = true;
  }
  std::vector<double> a(n()), b(n());
  for (int i = 0; i < n(); ++i) {
    a[i] = eta1_.at(perm[i]);
    b[i] = eta2_.at(perm[i]);
  }
  return {std::move(a), std::move(b), mode_};
}

double overlap_t(const std::vector<double>& a, const std::vector<double>& b) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i] * a[i] * b[i] * b[i];
  return t;
}

double overlap_t(const OrthoPair& pair) { return overlap_t(pair.eta1(), pair.eta2()); }

bool orthonormalize(std::vector<double>& a, std::vector<double>& b, PairMode mode) {
  if (mode == PairMode::diagonal) {
    remove_mean(a);
    remove_mean(b);
  }
  if (!normalize(a)) return false;
  // Two passes of Gram-Schmidt keep <a, b> at rounding level.
  for (int pass = 0; pass < 2; ++pass) {
    const double ip = dot(a, b);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= ip * a[i];
  }
  if (mode == PairMode::diagonal) {
    // a has zero mean, so b keeps a zero mean up to rounding; clean it anyway.
    remove_mean(b);
  }
  return normalize(b);
}

}  // namespace snc
