#pragma once

#include <array>
#include <string>
#include <string_view>

#include "expsplit/projections.hpp"

namespace expsplit {

enum class Concept { ES, UES, ED, UED, SES, USES, SED, USED };
enum class CertForm { restricted, strong };

inline constexpr std::array<Concept, 8> kAllConcepts = {Concept::ES,  Concept::UES,  Concept::ED,  Concept::UED,
                                                        Concept::SES, Concept::USES, Concept::SED, Concept::USED};

std::string_view to_string(Concept c);
std::string_view to_string(CertForm f);
/// Accepts the short names in any case ("ES", "uses", ...).
Concept parse_concept(std::string_view text);
CertForm parse_form(std::string_view text);

bool is_uniform(Concept c);
bool is_dichotomy(Concept c);
bool is_strong(Concept c);
/// The restricted notion with the same uniformity and dichotomy flags.
Concept restricted_counterpart(Concept c);
/// The strong notion with the same uniformity and dichotomy flags.
Concept strong_counterpart(Concept c);

/// Splitting constants (N, c, a, b) in log2 form.
struct Certificate {
  Concept notion = Concept::ES;
  double log2_N = 0.0;
  double log2_c = 0.0;
  double log2_a = 0.0;
  double log2_b = 1.0;
  CertForm form = CertForm::restricted;
};

/// Throws ConfigError when the constants break the notion's constraints:
/// N >= 1, c >= 1, a < b; c = 1 for uniform, a < 1 < b for dichotomy, and
/// the strong form exactly for strong concepts.
void validate(const Certificate& cert);

/// Dichotomy constants (N, c, d) with d = max(a, 1/b), the smallest rate
/// bounding both parts.
struct DichotomyForm {
  double log2_N = 0.0;
  double log2_c = 0.0;
  double log2_d = 0.0;
};

/// Throws DomainError unless log2_a < 0 < log2_b.
DichotomyForm dichotomy_normal_form(const Certificate& cert);

/// The (a, b) = (d, 1/d) splitting certificate of a dichotomy form.
Certificate from_dichotomy_form(const DichotomyForm& d, Concept notion, CertForm form);

/// Natural-log constants alpha = ln a, beta = ln b, gamma = ln c and N.
struct ExponentialForm {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double N = 1.0;
};

ExponentialForm exponential_form(const Certificate& cert);
Certificate from_exponential_form(const ExponentialForm& e, Concept notion, CertForm form);

/// Constants for a projection sequence R with Range R_n = Range P_n, given
/// ||P_n|| + ||R_n|| <= M p^n: N1 = 4 M^2 N, c1 = p^2 c. Uniform concepts
/// stay uniform only when p = 1.
Certificate transport_projection(const Certificate& cert, const ExpBoundCertificate& bound);

/// Strong form from a restricted one and a bound M p^n on ||P_n|| and ||Q_n||:
/// N1 = M N, c1 = p c.
Certificate strengthen(const Certificate& cert, const ExpBoundCertificate& bound);

struct Weakened {
  Certificate cert;           // same constants, restricted form
  ExpBoundCertificate bound;  // (M, p) = (N, c)
};

Weakened weaken(const Certificate& cert);

}  // namespace expsplit
