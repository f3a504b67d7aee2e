#pragma once

#include <mpfr.h>

#include <cmath>
#include <cstdlib>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfpp/errors.hpp"

namespace tfpp {

/// Outcome of a reference computation: value, certified absolute error bound
/// for the extended-precision computation behind it (the double `value` is
/// that result correctly rounded), and the work spent producing it.
struct OracleResult {
  double value;
  double certified_error;
  long terms_or_points;
};

namespace detail {

class MpfrReal {
public:
  explicit MpfrReal(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~MpfrReal() { mpfr_clear(v_); }
  MpfrReal(const MpfrReal&) = delete;
  MpfrReal& operator=(const MpfrReal&) = delete;
  mpfr_ptr get() { return v_; }

private:
  mpfr_t v_;
};

}  // namespace detail

/// Reference evaluation of E_{alpha,zeta}(z) by the defining power series at
/// adaptive precision sized to the cancellation scale X = |z|^(1/alpha)
/// (roughly X*log10(e) digits cancel before the sum settles). Refuses, rather
/// than degrading, outside its certified range: |z| > 30, or points whose
/// cancellation demands more than 1200 digits of headroom.
///
/// For rational alpha = p/q (q <= 64) the gamma factors advance by an exact
/// rising-factorial ladder, one gamma evaluation per residue class; this is
/// what makes the deep-cancellation points affordable. Requires zeta > 0.
inline OracleResult ml_highprec(double alpha, double zeta, double z, double target_err) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::domain_error("ml_highprec: requires 0 < alpha <= 1");
  if (!(zeta > 0.0)) throw std::domain_error("ml_highprec: requires zeta > 0");
  if (!(target_err > 0.0)) throw std::domain_error("ml_highprec: requires target_err > 0");
  if (z > 0.0) throw std::domain_error("ml_highprec: requires z <= 0");
  if (-z > 30.0) throw RefusalError("ml_highprec: refuses |z| > 30");

  const double X = z == 0.0 ? 0.0 : std::pow(-z, 1.0 / alpha);
  const double digits = X * 0.43429448190325176 + 45.0;
  if (digits > 1200.0)
    throw RefusalError("ml_highprec: refuses, would need " + std::to_string(int(digits)) +
                       " digits (cap 1200)");
  const mpfr_prec_t prec = mpfr_prec_t(digits * 3.3219280948873623) + 64;

  // Rational-alpha detection for the gamma ladder. The ladder computes at
  // exactly p/q, so it is only taken when the incoming double IS the rounding
  // of p/q; anything else goes through per-term gamma at the double itself.
  long q = 0, pnum = 0;
  for (long qq = 1; qq <= 64; ++qq) {
    double aq = alpha * double(qq);
    double pr = std::nearbyint(aq);
    if (std::abs(aq - pr) < 1e-9 && pr >= 1.0 && pr / double(qq) == alpha) {
      q = qq;
      pnum = long(pr);
      break;
    }
  }

  const long k_cap = 400000;
  const long k_hump = long(X / alpha) + 8;

  detail::MpfrReal sum(prec), sum_abs(prec), zpow(prec), term(prec), tmp(prec), arg(prec);
  mpfr_set_zero(sum.get(), 1);
  mpfr_set_zero(sum_abs.get(), 1);
  mpfr_set_d(zpow.get(), 1.0, MPFR_RNDN);

  // per-residue-class gamma ladder state (exact arguments via p/q)
  std::deque<detail::MpfrReal> gam;
  std::vector<long> level;  // class c currently holds Gamma(alpha*(c + q*level[c]) + zeta)
  if (q > 0) {
    for (long c = 0; c < q; ++c) {
      gam.emplace_back(prec);
      mpfr_set_si(arg.get(), pnum * c, MPFR_RNDN);
      mpfr_div_si(arg.get(), arg.get(), q, MPFR_RNDN);
      mpfr_add_d(arg.get(), arg.get(), zeta, MPFR_RNDN);
      mpfr_gamma(gam.back().get(), arg.get(), MPFR_RNDN);
      level.push_back(0);
    }
  }

  double prev_mag = HUGE_VAL;
  double tail = HUGE_VAL;
  long terms = 0;
  int settled = 0;
  for (long k = 0; k < k_cap; ++k) {
    if (q > 0) {
      long c = k % q;
      long lev = k / q;
      if (lev > level[c]) {  // advance Gamma(x) -> Gamma(x + pnum) by rising factorial
        for (long step = level[c]; step < lev; ++step) {
          for (long i = 0; i < pnum; ++i) {
            mpfr_set_si(arg.get(), pnum * (c + q * step) + i * q, MPFR_RNDN);
            mpfr_div_si(arg.get(), arg.get(), q, MPFR_RNDN);
            mpfr_add_d(arg.get(), arg.get(), zeta, MPFR_RNDN);
            mpfr_mul(gam[std::size_t(c)].get(), gam[std::size_t(c)].get(), arg.get(),
                     MPFR_RNDN);
          }
        }
        level[c] = lev;
      }
      mpfr_div(term.get(), zpow.get(), gam[std::size_t(c)].get(), MPFR_RNDN);
    } else {
      // argument assembled in extended precision: alpha and zeta are exact
      // doubles, and alpha*k must not be rounded through a double
      mpfr_set_d(arg.get(), alpha, MPFR_RNDN);
      mpfr_mul_si(arg.get(), arg.get(), k, MPFR_RNDN);
      mpfr_add_d(arg.get(), arg.get(), zeta, MPFR_RNDN);
      mpfr_gamma(tmp.get(), arg.get(), MPFR_RNDN);
      mpfr_div(term.get(), zpow.get(), tmp.get(), MPFR_RNDN);
    }
    mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
    mpfr_abs(tmp.get(), term.get(), MPFR_RNDN);
    mpfr_add(sum_abs.get(), sum_abs.get(), tmp.get(), MPFR_RNDN);
    mpfr_mul_d(zpow.get(), zpow.get(), z, MPFR_RNDN);
    terms = k + 1;

    double mag = mpfr_get_d(tmp.get(), MPFR_RNDN);
    if (k > k_hump) {
      double r = prev_mag > 0.0 ? mag / prev_mag : 0.0;
      if (mag < target_err * 1e-6 && r < 0.5) {
        if (++settled >= 3) {
          tail = mag * r / (1.0 - r);
          break;
        }
      } else {
        settled = 0;
      }
    }
    prev_mag = mag;
  }
  if (tail == HUGE_VAL)
    throw RefusalError("ml_highprec: series did not settle within term budget");

  double value = mpfr_get_d(sum.get(), MPFR_RNDN);
  // Rounding bound for the extended-precision accumulation: sum_abs can exceed
  // the double range even when the sum itself is O(1), so scale it down while
  // still in extended precision. certified_error bounds |partial sum - true
  // value|; the returned double is that sum correctly rounded, which adds at
  // most half an ulp on top and is not the oracle's concern.
  detail::MpfrReal scaled(prec);
  mpfr_mul_2si(scaled.get(), sum_abs.get(), -long(prec - 16), MPFR_RNDN);
  double rounding = mpfr_get_d(scaled.get(), MPFR_RNDN);
  double certified = tail + rounding;
  if (certified > target_err)
    throw AccuracyError("ml_highprec: certified only " + detail::fmt_sci(certified), certified);
  return {value, certified, terms};
}

}  // namespace tfpp
