#ifndef FERMAT_UNIPOLY_HPP
#define FERMAT_UNIPOLY_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermat {

using Cplx = std::complex<double>;

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};
struct DerivativeVanishes : std::runtime_error {
    explicit DerivativeVanishes(const std::string& what) : std::runtime_error(what) {}
};
struct IllConditioned : std::runtime_error {
    explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};
struct ResidualTooLarge : std::runtime_error {
    explicit ResidualTooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// Dense univariate polynomial with complex coefficients, ascending degree.
/// Trailing coefficients below 1e-10 x (max coefficient modulus) are trimmed
/// on construction, so degree() always points at a meaningful leading term.
class UniPoly {
  public:
    UniPoly() : coeffs_{Cplx(0.0, 0.0)} {}
    explicit UniPoly(std::vector<Cplx> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(Cplx(0.0, 0.0));
        trim();
    }

    static constexpr double kTrimRel = 1e-10;

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Cplx>& coeffs() const { return coeffs_; }
    Cplx coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[k] : Cplx(0.0, 0.0);
    }
    Cplx lead() const { return coeffs_.back(); }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Cplx(0.0, 0.0); }

    double max_coeff_modulus() const;

    UniPoly derivative() const;
    UniPoly operator*(const UniPoly& other) const;
    UniPoly operator+(const UniPoly& other) const;

  private:
    void trim();
    std::vector<Cplx> coeffs_;
};

/// Horner evaluation.
Cplx poly_eval(const UniPoly& p, Cplx z);

/// Backward-error scale of p at z: sum |a_k| |z|^k. A root candidate r is
/// acceptable when |p(r)| < tol * eval_scale(p, r).
double eval_scale(const UniPoly& p, Cplx z);

/// All complex roots with multiplicity via Aberth-Ehrlich simultaneous
/// iteration. Initial guesses sit on a perturbed circle at the Fujiwara root
/// bound; the perturbation is seeded deterministically. On stagnation the
/// unconverged approximations are re-perturbed and iteration resumes.
/// Throws NonConvergence (with residual report) if that never settles.
std::vector<Cplx> poly_roots(const UniPoly& p, double tol = 1e-12);

/// Newton refinement from z0. Throws DerivativeVanishes when |p'| drops below
/// deriv_floor times its local scale -- callers treat that as collision
/// evidence. Trackers that deliberately refine near-coincident roots pass a
/// much smaller floor.
Cplx newton_refine(const UniPoly& p, Cplx z0, double tol = 1e-13, double deriv_floor = 1e-6);

/// Sylvester-matrix resultant by partially pivoted elimination.
/// Convention: res(p, q) = lead(p)^deg(q) * prod_i q(root_i(p)).
Cplx resultant(const UniPoly& p, const UniPoly& q);

/// disc(p) = (-1)^(n(n-1)/2) res(p, p') / lead(p), n = deg p >= 2.
Cplx discriminant(const UniPoly& p);

/// Least-squares polynomial fit with degree bound. All samples must be
/// reproduced to 1e-8 relative, else ResidualTooLarge. Degenerate node sets
/// raise IllConditioned.
UniPoly interpolate(const std::vector<std::pair<Cplx, Cplx>>& samples, int degree_bound);

}  // namespace fermat

#endif
