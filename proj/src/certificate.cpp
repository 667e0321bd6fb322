#include "expsplit/certificate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "expsplit/errors.hpp"

namespace expsplit {

std::string_view to_string(Concept c) {
  switch (c) {
    case Concept::ES: return "ES";
    case Concept::UES: return "UES";
    case Concept::ED: return "ED";
    case Concept::UED: return "UED";
    case Concept::SES: return "SES";
    case Concept::USES: return "USES";
    case Concept::SED: return "SED";
    case Concept::USED: return "USED";
  }
  return "ES";
}

std::string_view to_string(CertForm f) { return f == CertForm::strong ? "strong" : "restricted"; }

Concept parse_concept(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
  for (Concept c : kAllConcepts) {
    if (to_string(c) == upper) return c;
  }
  throw ConfigError("unknown concept '" + std::string(text) + "' (expected ES, UES, ED, UED, SES, USES, SED, USED)");
}

CertForm parse_form(std::string_view text) {
  if (text == "restricted") return CertForm::restricted;
  if (text == "strong") return CertForm::strong;
  throw ConfigError("unknown certificate form '" + std::string(text) + "' (expected restricted or strong)");
}

bool is_uniform(Concept c) {
  return c == Concept::UES || c == Concept::UED || c == Concept::USES || c == Concept::USED;
}

bool is_dichotomy(Concept c) {
  return c == Concept::ED || c == Concept::UED || c == Concept::SED || c == Concept::USED;
}

bool is_strong(Concept c) {
  return c == Concept::SES || c == Concept::USES || c == Concept::SED || c == Concept::USED;
}

namespace {

Concept make_concept(bool strong, bool uniform, bool dichotomy) {
  if (strong) {
    if (dichotomy) return uniform ? Concept::USED : Concept::SED;
    return uniform ? Concept::USES : Concept::SES;
  }
  if (dichotomy) return uniform ? Concept::UED : Concept::ED;
  return uniform ? Concept::UES : Concept::ES;
}

}  // namespace

Concept restricted_counterpart(Concept c) { return make_concept(false, is_uniform(c), is_dichotomy(c)); }
Concept strong_counterpart(Concept c) { return make_concept(true, is_uniform(c), is_dichotomy(c)); }

void validate(const Certificate& cert) {
  const auto fail = [&](const std::string& what) {
    throw ConfigError("invalid " + std::string(to_string(cert.notion)) + " certificate: " + what);
  };
  for (double v : {cert.log2_N, cert.log2_c, cert.log2_a, cert.log2_b}) {
    if (!std::isfinite(v)) fail("constants must be finite");
  }
  if (cert.log2_N < 0) fail("N must be >= 1");
  if (cert.log2_c < 0) fail("c must be >= 1");
  if (!(cert.log2_a < cert.log2_b)) fail("growth rates need a < b");
  if (is_uniform(cert.notion) && cert.log2_c != 0) fail("uniform concepts need c = 1");
  if (is_dichotomy(cert.notion) && !(cert.log2_a < 0 && cert.log2_b > 0)) fail("dichotomies need a < 1 < b");
  if (is_strong(cert.notion) != (cert.form == CertForm::strong)) {
    fail("strong concepts use the strong form and restricted concepts the restricted form");
  }
}

DichotomyForm dichotomy_normal_form(const Certificate& cert) {
  if (!(cert.log2_a < 0 && cert.log2_b > 0)) throw DomainError("not a dichotomy certificate (needs a < 1 < b)");
  return {cert.log2_N, cert.log2_c, std::max(cert.log2_a, -cert.log2_b)};
}

Certificate from_dichotomy_form(const DichotomyForm& d, Concept notion, CertForm form) {
  return {notion, d.log2_N, d.log2_c, d.log2_d, -d.log2_d, form};
}

ExponentialForm exponential_form(const Certificate& cert) {
  constexpr double ln2 = std::numbers::ln2;
  return {cert.log2_a * ln2, cert.log2_b * ln2, cert.log2_c * ln2, std::exp2(cert.log2_N)};
}

Certificate from_exponential_form(const ExponentialForm& e, Concept notion, CertForm form) {
  constexpr double ln2 = std::numbers::ln2;
  return {notion, std::log2(e.N), e.gamma / ln2, e.alpha / ln2, e.beta / ln2, form};
}

namespace {

void check_bound(const ExpBoundCertificate& bound) {
  if (!(bound.log2_M >= 0 && bound.log2_p >= 0)) throw DomainError("exponential bound needs M >= 1 and p >= 1");
}

}  // namespace

Certificate transport_projection(const Certificate& cert, const ExpBoundCertificate& bound) {
  check_bound(bound);
  if (cert.form != CertForm::restricted) throw DomainError("transport_projection needs a restricted certificate");
  Certificate out = cert;
  out.log2_N = cert.log2_N + 2 + 2 * bound.log2_M;
  out.log2_c = cert.log2_c + 2 * bound.log2_p;
  if (out.log2_c > 0) out.notion = make_concept(false, false, is_dichotomy(cert.notion));
  return out;
}

Certificate strengthen(const Certificate& cert, const ExpBoundCertificate& bound) {
  check_bound(bound);
  if (cert.form != CertForm::restricted) throw DomainError("strengthen needs a restricted certificate");
  Certificate out = cert;
  out.log2_N = cert.log2_N + bound.log2_M;
  out.log2_c = cert.log2_c + bound.log2_p;
  out.form = CertForm::strong;
  out.notion = make_concept(true, is_uniform(cert.notion) && out.log2_c == 0, is_dichotomy(cert.notion));
  return out;
}

Weakened weaken(const Certificate& cert) {
  if (cert.form != CertForm::strong) throw DomainError("weaken needs a strong certificate");
  Weakened out;
  out.cert = cert;
  out.cert.form = CertForm::restricted;
  out.cert.notion = restricted_counterpart(cert.notion);
  out.bound = {cert.log2_N, cert.log2_c};
  return out;
}

}  // namespace expsplit
