#include "radialft/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <map>
#include <sstream>

#include "radialft/error.hpp"

namespace radialft {

DerivativeValue numeric_derivative(const std::function<double(double)>& f, int k, double t, double h0, double lo,
                                   double hi) {
  if (k < 1) throw DomainError("numeric_derivative: order must be >= 1");
  const double room = std::min(t - lo, hi - t);
  double h = std::min(h0, 2.0 * room / k * 0.999);
  if (!(h > 0.0)) throw DomainError("numeric_derivative: no room for a central stencil");
  std::vector<double> binom(static_cast<std::size_t>(k + 1), 1.0);
  for (int j = 1; j <= k; ++j) binom[static_cast<std::size_t>(j)] = binom[static_cast<std::size_t>(j - 1)] * (k - j + 1) / j;
  auto diff = [&](double step) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
      s += sgn * binom[static_cast<std::size_t>(j)] * f(t + (0.5 * k - j) * step);
    }
    return s / std::pow(step, k);
  };
  // Ridders' extrapolation of the O(h^2) central difference.
  constexpr int kTab = 10;
  constexpr double kCon = 1.4;
  constexpr double kCon2 = kCon * kCon;
  double a[kTab][kTab];
  a[0][0] = diff(h);
  double best = a[0][0];
  double err = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kTab; ++i) {
    h /= kCon;
    a[0][i] = diff(h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = a[j][i];
      }
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
  }
  DerivativeValue out;
  out.value = best;
  out.err_est = err;
  out.closed_form = false;
  out.precision_warning = err > 1e-6 * std::max(std::abs(best), 1e-300);
  return out;
}

std::pair<double, double> stencil_bounds(const Evaluable& f, double t) {
  double lo = 0.0;
  double hi = f.support_end && t < *f.support_end ? *f.support_end : 1e300;
  if (f.kink) {
    if (t < *f.kink) hi = std::min(hi, *f.kink);
    else if (t > *f.kink) lo = *f.kink;
  }
  return {lo, hi};
}

namespace profiles {

std::string family_name(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::exponential: return "exponential";
    case Family::bochner_riesz: return "bochner_riesz";
    case Family::example1: return "example1";
    case Family::example2: return "example2";
    case Family::remark3: return "remark3";
    case Family::belinskii: return "belinskii";
    case Family::tabulated: return "tabulated";
    case Family::custom: return "custom";
  }
  return "unknown";
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

class ProfileImpl {
 public:
  virtual ~ProfileImpl() = default;
  virtual Family family() const = 0;
  virtual std::string name() const { return family_name(family()); }
  virtual std::vector<double> params() const { return {}; }
  virtual double eval(double t) const = 0;
  virtual double eval_reflected(double u) const { return eval(*support_end() - u); }
  virtual int max_closed() const { return 0; }
  virtual double closed_derivative(int, double) const { return 0.0; }
  virtual std::optional<double> support_end() const { return std::nullopt; }
  virtual double end_exponent() const { return 0.0; }
  virtual bool jump_at_end() const { return false; }
  virtual double decay_scale() const { return support_end().value_or(1.0); }
  virtual std::optional<double> tail_power() const { return std::nullopt; }
  virtual std::optional<double> kink() const { return std::nullopt; }
  virtual std::optional<bool> lac(int) const { return true; }
  virtual std::vector<std::string> warnings(int) const { return {}; }
  virtual std::string render() const { return "family=" + family_name(family()); }
};

namespace {

// Sums of c t^e (1 - t^a)^b, closed under differentiation.
struct Term {
  double c;
  double e;
  double b;
};

class PowerTerms {
 public:
  PowerTerms(double a, std::vector<Term> base) : a_(a) { orders_.push_back(std::move(base)); }

  const std::vector<Term>& order(int k) const {
    while (static_cast<int>(orders_.size()) <= k) {
      std::vector<Term> next;
      for (const Term& tm : orders_.back()) {
        if (tm.e != 0.0) add(next, {tm.c * tm.e, tm.e - 1.0, tm.b});
        if (tm.b != 0.0) add(next, {-tm.c * a_ * tm.b, tm.e + a_ - 1.0, tm.b - 1.0});
      }
      orders_.push_back(std::move(next));
    }
    return orders_[static_cast<std::size_t>(k)];
  }

  // w = 1 - t^a supplied by the caller so it can be formed accurately.
  double eval(int k, double t, double w) const {
    double s = 0.0;
    for (const Term& tm : order(k)) {
      const double wb = tm.b == 0.0 ? 1.0 : std::pow(w, tm.b);
      const double te = tm.e == 0.0 ? 1.0 : std::pow(t, tm.e);
      s += tm.c * te * wb;
    }
    return s;
  }

  double a() const { return a_; }

 private:
  static void add(std::vector<Term>& v, Term t) {
    for (Term& x : v) {
      if (std::abs(x.e - t.e) < 1e-12 && std::abs(x.b - t.b) < 1e-12) {
        x.c += t.c;
        return;
      }
    }
    v.push_back(t);
  }
  double a_;
  mutable std::vector<std::vector<Term>> orders_;
};

constexpr int kMaxClosedOrder = 12;

double one_minus_pow(double t, double a) { return -std::expm1(a * std::log(t)); }
double one_minus_pow_reflected(double u, double a) { return -std::expm1(a * std::log1p(-u)); }

class Gaussian final : public ProfileImpl {
 public:
  Family family() const override { return Family::gaussian; }
  double eval(double t) const override { return std::exp(-0.5 * t * t); }
  int max_closed() const override { return kMaxClosedOrder; }
  double closed_derivative(int k, double t) const override {
    // (-1)^k He_k(t) e^(-t^2/2)
    double h0 = 1.0, h1 = t;
    if (k == 0) h1 = h0;
    for (int j = 1; j < k; ++j) {
      const double h2 = t * h1 - j * h0;
      h0 = h1;
      h1 = h2;
    }
    return ((k % 2 == 0) ? 1.0 : -1.0) * h1 * std::exp(-0.5 * t * t);
  }
  double decay_scale() const override { return 9.0; }
};

class Exponential final : public ProfileImpl {
 public:
  Family family() const override { return Family::exponential; }
  double eval(double t) const override { return std::exp(-t); }
  int max_closed() const override { return kMaxClosedOrder; }
  double closed_derivative(int k, double t) const override { return ((k % 2 == 0) ? 1.0 : -1.0) * std::exp(-t); }
  double decay_scale() const override { return 40.0; }
};

// (1 - t^a)^beta on [0, 1]; also the Bochner-Riesz profile with a = 2.
class Example1 final : public ProfileImpl {
 public:
  Example1(double a, double beta, bool bochner_riesz)
      : a_(a), beta_(beta), br_(bochner_riesz), terms_(a, {{1.0, 0.0, beta}}) {}
  Family family() const override { return br_ ? Family::bochner_riesz : Family::example1; }
  std::vector<double> params() const override {
    if (br_) return {beta_};
    return {a_, beta_};
  }
  double eval(double t) const override {
    if (t >= 1.0) return 0.0;
    if (t <= 0.0) return 1.0;
    return std::pow(one_minus_pow(t, a_), beta_);
  }
  double eval_reflected(double u) const override {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return std::pow(one_minus_pow_reflected(u, a_), beta_);
  }
  int max_closed() const override { return kMaxClosedOrder; }
  double closed_derivative(int k, double t) const override {
    if (t >= 1.0) return 0.0;
    return terms_.eval(k, t, one_minus_pow(t, a_));
  }
  std::optional<double> support_end() const override { return 1.0; }
  double end_exponent() const override { return beta_; }
  bool jump_at_end() const override { return beta_ == 0.0; }
  std::optional<bool> lac(int order) const override { return beta_ > order; }
  std::vector<std::string> warnings(int n) const override {
    if (beta_ <= 0.5 * (n - 1))
      return {std::string(br_ ? "delta" : "beta") + " <= (n-1)/2: integrability claims void"};
    return {};
  }
  std::string render() const override {
    if (br_) return "family=bochner_riesz delta=" + fmt(beta_);
    return "family=example1 alpha=" + fmt(a_) + " beta=" + fmt(beta_);
  }

 private:
  double a_;
  double beta_;
  bool br_;
  PowerTerms terms_;
};

// (1 - (1 - t^a)^beta_+) / t^r.
class Example2 final : public ProfileImpl {
 public:
  Example2(double a, double beta, double r)
      : a_(a), beta_(beta), r_(r), inner_(a, {{1.0, -r, 0.0}, {-1.0, -r, beta}}), outer_(a, {{1.0, -r, 0.0}}) {}
  Family family() const override { return Family::example2; }
  std::vector<double> params() const override { return {a_, beta_, r_}; }
  double eval(double t) const override {
    if (t >= 1.0) return std::pow(t, -r_);
    if (t <= 0.0) return a_ > r_ ? 0.0 : std::numeric_limits<double>::infinity();
    const double w = one_minus_pow(t, a_);
    return -std::expm1(beta_ * std::log(w)) * std::pow(t, -r_);
  }
  int max_closed() const override { return kMaxClosedOrder; }
  double closed_derivative(int k, double t) const override {
    if (t >= 1.0) return outer_.eval(k, t, 0.0);
    return inner_.eval(k, t, one_minus_pow(t, a_));
  }
  double decay_scale() const override { return 1.0; }
  std::optional<double> tail_power() const override { return r_; }
  std::optional<double> kink() const override { return 1.0; }
  std::optional<bool> lac(int order) const override { return beta_ > order; }
  std::vector<std::string> warnings(int n) const override {
    if (beta_ <= 0.5 * (n - 1)) return {"beta <= (n-1)/2: integrability claims void"};
    return {};
  }
  std::string render() const override {
    return "family=example2 alpha=" + fmt(a_) + " beta=" + fmt(beta_) + " r=" + fmt(r_);
  }

 private:
  double a_;
  double beta_;
  double r_;
  PowerTerms inner_;
  PowerTerms outer_;
};

constexpr double kLogLogClamp = std::numeric_limits<double>::min();

class Remark3 final : public ProfileImpl {
 public:
  Family family() const override { return Family::remark3; }
  double eval(double t) const override {
    if (t >= 1.0) return 0.0;
    t = std::max(t, kLogLogClamp);
    return std::sin(std::log(1.0 - std::log(t)));
  }
  double eval_reflected(double u) const override {
    if (u <= 0.0) return 0.0;
    return std::sin(std::log1p(-std::log1p(-u)));
  }
  int max_closed() const override { return 2; }
  double closed_derivative(int k, double t) const override {
    if (t >= 1.0) return 0.0;
    t = std::max(t, kLogLogClamp);
    const double big_l = 1.0 - std::log(t);
    const double ll = std::log(big_l);
    if (k == 1) return -std::cos(ll) / (t * big_l);
    const double tl = t * big_l;
    return (std::cos(ll) * (big_l - 1.0) - std::sin(ll)) / tl / tl;
  }
  std::optional<double> support_end() const override { return 1.0; }
  double end_exponent() const override { return 1.0; }
  std::optional<bool> lac(int order) const override { return order == 0; }
};

class Belinskii final : public ProfileImpl {
 public:
  Family family() const override { return Family::belinskii; }
  double eval(double t) const override {
    if (t >= 1.0) return 0.0;
    t = std::max(t, kLogLogClamp);
    return sinc(std::log(1.0 - std::log(t)));
  }
  int max_closed() const override { return 1; }
  double closed_derivative(int, double t) const override {
    if (t >= 1.0) return 0.0;
    t = std::max(t, kLogLogClamp);
    const double big_l = 1.0 - std::log(t);
    const double x = std::log(big_l);
    const double dsinc = std::abs(x) < 1e-3 ? -x / 3.0 + x * x * x / 30.0
                                            : (x * std::cos(x) - std::sin(x)) / (x * x);
    return -dsinc / (t * big_l);
  }
  std::optional<double> support_end() const override { return 1.0; }
  bool jump_at_end() const override { return true; }
  std::optional<bool> lac(int) const override { return false; }

 private:
  static double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }
};

class Tabulated final : public ProfileImpl {
 public:
  Tabulated(std::vector<std::pair<double, double>> knots, std::string source) : source_(std::move(source)) {
    if (knots.size() < 2) throw DomainError("tabulated profile: need at least 2 knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second))
        throw DomainError("tabulated profile: non-finite knot");
      if (knots[i].first < 0.0) throw DomainError("tabulated profile: t must be >= 0");
      if (i > 0 && !(knots[i].first > knots[i - 1].first))
        throw DomainError("tabulated profile: t must be strictly increasing");
      x_.push_back(knots[i].first);
      y_.push_back(knots[i].second);
    }
    // Fritsch-Carlson monotone slopes (harmonic-mean form).
    const std::size_t m = x_.size();
    std::vector<double> h(m - 1), d(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
      h[i] = x_[i + 1] - x_[i];
      d[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    std::vector<double> s(m);
    s[0] = d[0];
    s[m - 1] = d[m - 2];
    for (std::size_t i = 1; i + 1 < m; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        s[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        s[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
      }
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      c2_.push_back((3.0 * d[i] - 2.0 * s[i] - s[i + 1]) / h[i]);
      c3_.push_back((s[i] + s[i + 1] - 2.0 * d[i]) / (h[i] * h[i]));
    }
    slope_ = std::move(s);
  }
  Family family() const override { return Family::tabulated; }
  double eval(double t) const override { return piece(0, t); }
  int max_closed() const override { return kMaxClosedOrder; }
  double closed_derivative(int k, double t) const override { return piece(k, t); }
  std::optional<double> support_end() const override { return x_.back(); }
  double end_exponent() const override { return y_.back() == 0.0 ? 1.0 : 0.0; }
  bool jump_at_end() const override { return y_.back() != 0.0; }
  std::optional<bool> lac(int) const override { return std::nullopt; }
  std::string render() const override { return "family=tabulated file=" + source_; }
  const std::vector<double>& knots_t() const { return x_; }
  const std::vector<double>& knots_f() const { return y_; }

 private:
  double piece(int k, double t) const {
    if (t > x_.back()) return 0.0;
    if (t <= x_.front()) return k == 0 ? y_.front() : 0.0;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
    if (i + 1 >= x_.size()) i = x_.size() - 2;
    const double dx = t - x_[i];
    const double c0 = y_[i], c1 = slope_[i], c2 = c2_[i], c3 = c3_[i];
    switch (k) {
      case 0: return c0 + dx * (c1 + dx * (c2 + dx * c3));
      case 1: return c1 + dx * (2.0 * c2 + 3.0 * dx * c3);
      case 2: return 2.0 * c2 + 6.0 * dx * c3;
      case 3: return 6.0 * c3;
      default: return 0.0;
    }
  }
  std::vector<double> x_, y_, slope_, c2_, c3_;
  std::string source_;
};

class Custom final : public ProfileImpl {
 public:
  Custom(std::string name, std::function<double(double)> f, std::function<double(int, double)> d, int max_d,
         std::optional<double> end, double scale)
      : name_(std::move(name)), f_(std::move(f)), d_(std::move(d)), max_d_(d_ ? max_d : 0), end_(end), scale_(scale) {}
  Family family() const override { return Family::custom; }
  std::string name() const override { return name_; }
  double eval(double t) const override {
    if (end_ && t > *end_) return 0.0;
    return f_(t);
  }
  int max_closed() const override { return max_d_; }
  double closed_derivative(int k, double t) const override {
    if (end_ && t > *end_) return 0.0;
    return d_(k, t);
  }
  std::optional<double> support_end() const override { return end_; }
  double decay_scale() const override { return end_.value_or(scale_); }
  std::optional<bool> lac(int) const override { return std::nullopt; }
  std::string render() const override { return "family=custom name=" + name_; }

 private:
  std::string name_;
  std::function<double(double)> f_;
  std::function<double(int, double)> d_;
  int max_d_;
  std::optional<double> end_;
  double scale_;
};

}  // namespace

RadialProfile RadialProfile::gaussian() { return RadialProfile(std::make_shared<Gaussian>()); }
RadialProfile RadialProfile::exponential() { return RadialProfile(std::make_shared<Exponential>()); }

RadialProfile RadialProfile::bochner_riesz(double delta) {
  if (!(delta >= 0.0)) throw DomainError("bochner_riesz: delta must be >= 0");
  return RadialProfile(std::make_shared<Example1>(2.0, delta, true));
}

RadialProfile RadialProfile::example1(double a, double beta) {
  if (!(a > 0.0)) throw DomainError("example1: alpha must be > 0");
  if (!(beta >= 0.0)) throw DomainError("example1: beta must be >= 0");
  return RadialProfile(std::make_shared<Example1>(a, beta, false));
}

RadialProfile RadialProfile::example2(double a, double beta, double r) {
  if (!(r > 0.0)) throw DomainError("example2: r must be > 0");
  if (!(a > r)) throw DomainError("example2: alpha must be > r");
  if (!(beta >= 0.0)) throw DomainError("example2: beta must be >= 0");
  return RadialProfile(std::make_shared<Example2>(a, beta, r));
}

RadialProfile RadialProfile::remark3() { return RadialProfile(std::make_shared<Remark3>()); }
RadialProfile RadialProfile::belinskii() { return RadialProfile(std::make_shared<Belinskii>()); }

RadialProfile RadialProfile::tabulated(std::vector<std::pair<double, double>> knots, std::string source) {
  return RadialProfile(std::make_shared<Tabulated>(std::move(knots), std::move(source)));
}

RadialProfile RadialProfile::tabulated_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("tabulated profile: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("tabulated profile: empty file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,f0") throw ParseError("tabulated profile: header must be 't,f0'");
  std::vector<std::pair<double, double>> knots;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    double t = 0.0, f = 0.0;
    if (comma == std::string::npos) throw ParseError("tabulated profile: line " + std::to_string(lineno) + ": expected 't,f0'");
    const char* b = line.data();
    auto r1 = std::from_chars(b, b + comma, t);
    auto r2 = std::from_chars(b + comma + 1, b + line.size(), f);
    if (r1.ec != std::errc() || r1.ptr != b + comma || r2.ec != std::errc() || r2.ptr != b + line.size())
      throw ParseError("tabulated profile: line " + std::to_string(lineno) + ": malformed number");
    knots.emplace_back(t, f);
  }
  return tabulated(std::move(knots), path);
}

RadialProfile RadialProfile::custom(std::string name, std::function<double(double)> f,
                                    std::function<double(int, double)> derivative, int max_derivative,
                                    std::optional<double> support_end, double scale) {
  return RadialProfile(std::make_shared<Custom>(std::move(name), std::move(f), std::move(derivative), max_derivative,
                                                support_end, scale));
}

Family RadialProfile::family() const { return impl_->family(); }
std::string RadialProfile::name() const { return impl_->name(); }
std::vector<double> RadialProfile::params() const { return impl_->params(); }

double RadialProfile::eval(double t) const {
  if (!(t >= 0.0)) throw DomainError("profile eval: t must be >= 0");
  return impl_->eval(t);
}

double RadialProfile::eval_reflected(double u) const {
  if (!impl_->support_end()) throw DomainError("eval_reflected: profile has unbounded support");
  return impl_->eval_reflected(u);
}

bool RadialProfile::has_closed_derivative(int k) const { return k >= 1 && k <= impl_->max_closed(); }

DerivativeValue RadialProfile::derivative(int k, double t) const {
  if (k < 1) throw DomainError("profile derivative: order must be >= 1");
  if (has_closed_derivative(k)) return {impl_->closed_derivative(k, t), 0.0, true, false};
  // Differentiate the highest closed derivative numerically where possible.
  const int base = std::min(impl_->max_closed(), k - 1);
  std::function<double(double)> g = [this, base](double s) {
    return base == 0 ? impl_->eval(s) : impl_->closed_derivative(base, s);
  };
  Evaluable where;
  where.support_end = impl_->support_end();
  where.kink = impl_->kink();
  const auto [lo, hi] = stencil_bounds(where, t);
  const double h0 = 0.05 * std::max(std::min(t, 1.0), 1e-6);
  return numeric_derivative(g, k - base, t, h0, lo, hi);
}

std::optional<double> RadialProfile::support_end() const { return impl_->support_end(); }
double RadialProfile::end_exponent() const { return impl_->end_exponent(); }
bool RadialProfile::jump_at_end() const { return impl_->jump_at_end(); }
double RadialProfile::decay_scale() const { return impl_->decay_scale(); }
std::optional<double> RadialProfile::tail_power() const { return impl_->tail_power(); }
std::optional<bool> RadialProfile::locally_absolutely_continuous(int order) const { return impl_->lac(order); }
std::vector<std::string> RadialProfile::claim_warnings(int n) const { return impl_->warnings(n); }
std::string RadialProfile::render() const { return impl_->render(); }

bool RadialProfile::operator==(const RadialProfile& other) const {
  if (family() == Family::custom || other.family() == Family::custom) return impl_ == other.impl_;
  return render() == other.render();
}

Evaluable RadialProfile::evaluable() const {
  Evaluable e;
  auto impl = impl_;
  e.f = [impl](double t) { return impl->eval(t); };
  const RadialProfile self = *this;
  e.derivative = [self](int k, double t) { return self.derivative(k, t).value; };
  e.max_derivative = kMaxClosedOrder;
  e.support_end = impl->support_end();
  e.end_exponent = impl->end_exponent();
  e.scale = impl->decay_scale();
  e.tail_power = impl->tail_power();
  e.kink = impl->kink();
  return e;
}

RadialProfile parse_profile(const std::string& spec) {
  std::map<std::string, std::string> kv;
  std::string token;
  std::string normalized = spec;
  std::replace(normalized.begin(), normalized.end(), ';', ' ');
  std::istringstream in(normalized);
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("profile: expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    if (kv.count(key)) throw ParseError("profile: duplicate key '" + key + "'");
    kv[key] = token.substr(eq + 1);
  }
  if (!kv.count("family")) throw ParseError("profile: missing 'family='");
  const std::string fam = kv["family"];
  kv.erase("family");

  auto number = [&](const std::string& key) -> double {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("profile: family '" + fam + "' requires '" + key + "='");
    double v = 0.0;
    const std::string& s = it->second;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ParseError("profile: '" + key + "' is not a number: '" + s + "'");
    kv.erase(it);
    return v;
  };
  auto finish = [&](RadialProfile p) {
    if (!kv.empty()) throw ParseError("profile: unexpected key '" + kv.begin()->first + "' for family '" + fam + "'");
    return p;
  };
  auto constrained = [&](auto make) {
    try {
      return make();
    } catch (const DomainError& e) {
      throw ConditionViolation(std::string("profile constraint violated: ") + e.what());
    }
  };

  if (fam == "gaussian") return finish(RadialProfile::gaussian());
  if (fam == "exponential") return finish(RadialProfile::exponential());
  if (fam == "remark3") return finish(RadialProfile::remark3());
  if (fam == "belinskii") return finish(RadialProfile::belinskii());
  if (fam == "bochner_riesz") {
    const double d = number("delta");
    return finish(constrained([&] { return RadialProfile::bochner_riesz(d); }));
  }
  if (fam == "example1") {
    const double a = number("alpha");
    const double b = number("beta");
    return finish(constrained([&] { return RadialProfile::example1(a, b); }));
  }
  if (fam == "example2") {
    const double a = number("alpha");
    const double b = number("beta");
    const double r = number("r");
    return finish(constrained([&] { return RadialProfile::example2(a, b, r); }));
  }
  if (fam == "tabulated") {
    auto it = kv.find("file");
    if (it == kv.end()) throw ParseError("profile: family 'tabulated' requires 'file='");
    const std::string path = it->second;
    kv.erase(it);
    return finish(RadialProfile::tabulated_file(path));
  }
  throw ParseError("profile: unknown family '" + fam + "'");
}

}  // namespace profiles
}  // namespace radialft
