#include "fermat/unipoly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fermat {

double UniPoly::max_coeff_modulus() const {
    double m = 0.0;
    for (const Cplx& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

void UniPoly::trim() {
    double cut = kTrimRel * max_coeff_modulus();
    while (coeffs_.size() > 1 && std::abs(coeffs_.back()) <= cut) coeffs_.pop_back();
}

UniPoly UniPoly::derivative() const {
    if (degree() == 0) return UniPoly();
    std::vector<Cplx> d(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = double(k) * coeffs_[k];
    return UniPoly(std::move(d));
}

UniPoly UniPoly::operator*(const UniPoly& other) const {
    std::vector<Cplx> out(coeffs_.size() + other.coeffs_.size() - 1, Cplx(0.0, 0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < other.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * other.coeffs_[j];
    return UniPoly(std::move(out));
}

UniPoly UniPoly::operator+(const UniPoly& other) const {
    std::vector<Cplx> out(std::max(coeffs_.size(), other.coeffs_.size()), Cplx(0.0, 0.0));
    for (size_t i = 0; i < out.size(); ++i) out[i] = coeff(int(i)) + other.coeff(int(i));
    return UniPoly(std::move(out));
}

Cplx poly_eval(const UniPoly& p, Cplx z) {
    const auto& c = p.coeffs();
    Cplx acc = c.back();
    for (size_t k = c.size() - 1; k-- > 0;) acc = acc * z + c[k];
    return acc;
}

double eval_scale(const UniPoly& p, Cplx z) {
    double az = std::abs(z), pw = 1.0, acc = 0.0;
    for (const Cplx& c : p.coeffs()) {
        acc += std::abs(c) * pw;
        pw *= az;
    }
    return std::max(acc, 1e-300);
}

namespace {

// Fujiwara bound: 2 * max_k |a_{n-k}/a_n|^{1/k}.
double root_bound(const UniPoly& p) {
    int n = p.degree();
    double an = std::abs(p.lead());
    double b = 0.0;
    for (int k = 1; k <= n; ++k) {
        double a = std::abs(p.coeff(n - k));
        if (a > 0.0) b = std::max(b, std::pow(a / an, 1.0 / k));
    }
    return 2.0 * std::max(b, 1e-30);
}

}  // namespace

std::vector<Cplx> poly_roots(const UniPoly& p, double tol) {
    int n = p.degree();
    if (n < 1) throw std::invalid_argument("poly_roots: degree must be >= 1");
    if (n == 1) return {-p.coeff(0) / p.coeff(1)};

    UniPoly dp = p.derivative();
    double radius = root_bound(p);
    std::mt19937_64 rng(0x5eedf00dULL);  // fixed seed: reproducible runs
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    std::vector<Cplx> z(n);
    auto init_at = [&](int k) {
        double theta = 2.0 * M_PI * (k + 0.25) / n + 0.3 * unif(rng);
        double r = radius * (1.0 + 0.05 * unif(rng));
        z[k] = Cplx(r * std::cos(theta), r * std::sin(theta));
    };
    for (int k = 0; k < n; ++k) init_at(k);

    std::vector<bool> done(n, false);
    const int max_iter = 400;
    int since_progress = 0;
    for (int iter = 0; iter < max_iter; ++iter) {
        double worst = 0.0;
        int ndone = 0;
        for (int k = 0; k < n; ++k) {
            Cplx pv = poly_eval(p, z[k]);
            double rel = std::abs(pv) / eval_scale(p, z[k]);
            worst = std::max(worst, rel);
            if (rel < tol) {
                done[k] = true;
                ++ndone;
                continue;
            }
            done[k] = false;
            Cplx dv = poly_eval(dp, z[k]);
            Cplx newton;
            if (std::abs(dv) < 1e-280) {
                z[k] += Cplx(1e-8 * radius * unif(rng), 1e-8 * radius * unif(rng));
                continue;
            }
            newton = pv / dv;
            Cplx sum(0.0, 0.0);
            bool clash = false;
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                Cplx d = z[k] - z[j];
                if (std::abs(d) < 1e-290) {
                    clash = true;
                    break;
                }
                sum += 1.0 / d;
            }
            if (clash) {
                z[k] += Cplx(1e-6 * radius * unif(rng), 1e-6 * radius * unif(rng));
                continue;
            }
            Cplx denom = 1.0 - newton * sum;
            Cplx step = (std::abs(denom) < 1e-290) ? newton : newton / denom;
            z[k] -= step;
        }
        if (ndone == n) return z;
        // Stagnation restart: re-perturb whatever has not converged.
        if (++since_progress > 80) {
            since_progress = 0;
            for (int k = 0; k < n; ++k)
                if (!done[k]) z[k] += Cplx(0.05 * radius * unif(rng), 0.05 * radius * unif(rng));
        }
    }
    std::ostringstream msg;
    msg << "poly_roots: no convergence after " << max_iter << " iterations; residuals:";
    for (int k = 0; k < n; ++k)
        if (!done[k]) msg << " " << std::abs(poly_eval(p, z[k])) / eval_scale(p, z[k]);
    throw NonConvergence(msg.str());
}

Cplx newton_refine(const UniPoly& p, Cplx z0, double tol, double deriv_floor) {
    UniPoly dp = p.derivative();
    Cplx z = z0;
    for (int it = 0; it < 60; ++it) {
        Cplx pv = poly_eval(p, z);
        if (std::abs(pv) < tol * eval_scale(p, z)) return z;
        Cplx dv = poly_eval(dp, z);
        double dscale = eval_scale(dp, z);
        if (std::abs(dv) < deriv_floor * dscale)
            throw DerivativeVanishes("newton_refine: |p'| collapsed near z = (" +
                                     std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")");
        z -= pv / dv;
    }
    Cplx pv = poly_eval(p, z);
    if (std::abs(pv) < 1e3 * tol * eval_scale(p, z)) return z;
    throw NonConvergence("newton_refine: stalled, residual " + std::to_string(std::abs(pv)));
}

Cplx resultant(const UniPoly& p, const UniPoly& q) {
    if (p.is_zero() || q.is_zero()) throw std::invalid_argument("resultant: zero polynomial");
    int m = p.degree(), n = q.degree();
    if (m == 0) return std::pow(p.coeff(0), n);
    if (n == 0) return std::pow(q.coeff(0), m);
    int N = m + n;
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(N, N);
    // Row i (0..n-1): coefficients of p, descending, shifted by i.
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= m; ++k) S(i, i + k) = p.coeff(m - k);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k <= n; ++k) S(n + i, i + k) = q.coeff(n - k);
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(S).determinant();
}

Cplx discriminant(const UniPoly& p) {
    int n = p.degree();
    if (n < 2) throw std::invalid_argument("discriminant: degree must be >= 2");
    Cplx r = resultant(p, p.derivative());
    double sign = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    return sign * r / p.lead();
}

UniPoly interpolate(const std::vector<std::pair<Cplx, Cplx>>& samples, int degree_bound) {
    int d = degree_bound;
    int m = static_cast<int>(samples.size());
    if (m < d + 1) throw std::invalid_argument("interpolate: need >= degree_bound + 1 samples");
    // Degenerate node set: coincident nodes can never determine d+1 coefficients.
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (std::abs(samples[i].first - samples[j].first) < 1e-14)
                throw IllConditioned("interpolate: coincident nodes");

    Eigen::MatrixXcd V(m, d + 1);
    Eigen::VectorXcd w(m);
    for (int i = 0; i < m; ++i) {
        Cplx pw(1.0, 0.0);
        for (int k = 0; k <= d; ++k) {
            V(i, k) = pw;
            pw *= samples[i].first;
        }
        w(i) = samples[i].second;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(V);
    if (qr.rank() < d + 1) throw IllConditioned("interpolate: rank-deficient node set");
    Eigen::VectorXcd c = qr.solve(w);

    double wscale = 0.0;
    for (int i = 0; i < m; ++i) wscale = std::max(wscale, std::abs(w(i)));
    if (wscale == 0.0) wscale = 1.0;
    std::vector<Cplx> coeffs(c.data(), c.data() + d + 1);
    UniPoly fit(std::move(coeffs));
    for (int i = 0; i < m; ++i)
        if (std::abs(poly_eval(fit, samples[i].first) - w(i)) > 1e-8 * wscale)
            throw ResidualTooLarge("interpolate: residual exceeds 1e-8 relative");
    return fit;
}

}  // namespace fermat
