#include "majkit/radical.hpp"

#include "majkit/error.hpp"

namespace majkit {

std::vector<RadicalTerm> radical_sum_canonical(const std::vector<RadicalTerm>& terms) {
  std::vector<RadicalTerm> classes;  // (accumulated coeff, representative radicand)
  for (const RadicalTerm& t : terms) {
    if (t.radicand.sign() < 0) raise(Errc::bad_params, "negative radicand");
    if (t.coeff.is_zero() || t.radicand.is_zero()) continue;
    bool placed = false;
    for (RadicalTerm& cls : classes) {
      Rat root;
      if (is_perfect_square(t.radicand / cls.radicand, &root)) {
        cls.coeff += t.coeff * root;  // c*sqrt(x) = c*sqrt(x/rep)*sqrt(rep)
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({t.coeff, t.radicand});
  }
  std::vector<RadicalTerm> out;
  for (RadicalTerm& cls : classes)
    if (!cls.coeff.is_zero()) out.push_back(std::move(cls));
  return out;
}

bool radical_sum_is_zero(const std::vector<RadicalTerm>& terms) {
  return radical_sum_canonical(terms).empty();
}

}  // namespace majkit
