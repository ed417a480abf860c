#include "whtrim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace whtrim {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_of(double magnitude, double carrier) {
    return carrier >= 0.0 ? std::fabs(magnitude) : -std::fabs(magnitude);
}

// Diagonal similarity scaling with powers of two so row and column norms
// balance out; improves the conditioning of the QR iteration and changes
// no eigenvalue.
void balance(Matrix& h) {
    const std::size_t n = h.rows;
    const double radix = 2.0, sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::fabs(h(j, i));
                r += std::fabs(h(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0, s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) h(i, j) *= g;
                for (std::size_t j = 0; j < n; ++j) h(j, i) *= f;
            }
        }
    }
}

// Householder reduction to upper Hessenberg form (similarity transform).
void hessenberg(Matrix& h) {
    const std::size_t n = h.rows;
    if (n < 3) return;
    std::vector<double> v(n);
    for (std::size_t col = 0; col + 2 < n; ++col) {
        // Work with the column scaled by its largest entry: the reflector is
        // invariant under scaling of the source vector, and this keeps every
        // intermediate O(1) even when the column holds only underflow-level
        // residue (rank-deficient products leave exactly that behind).
        double colmax = 0.0;
        for (std::size_t i = col + 1; i < n; ++i)
            colmax = std::max(colmax, std::fabs(h(i, col)));
        if (colmax == 0.0) continue;
        double norm2 = 0.0;
        for (std::size_t i = col + 1; i < n; ++i) {
            v[i] = h(i, col) / colmax;
            norm2 += v[i] * v[i];
        }
        const double norm = std::sqrt(norm2);
        double x0 = v[col + 1];
        const double alpha = -sign_of(norm, x0);
        // v = x - alpha e1, beta = 2 / v'v
        double vnorm2 = norm2 - 2.0 * alpha * x0 + alpha * alpha;
        if (vnorm2 <= 0.0) continue;
        v[col + 1] -= alpha;
        const double beta = 2.0 / vnorm2;
        // left update: H -= beta v (v' H) on rows col+1..n-1
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = col + 1; i < n; ++i) dot += v[i] * h(i, j);
            dot *= beta;
            for (std::size_t i = col + 1; i < n; ++i) h(i, j) -= dot * v[i];
        }
        // right update: H -= beta (H v) v' on cols col+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) dot += h(i, j) * v[j];
            dot *= beta;
            for (std::size_t j = col + 1; j < n; ++j) h(i, j) -= dot * v[j];
        }
        h(col + 1, col) = alpha * colmax;
        for (std::size_t i = col + 2; i < n; ++i) h(i, col) = 0.0;
    }
}

// Implicitly shifted double-step QR iteration on an upper Hessenberg
// matrix; fills `out` with the eigenvalues. Classic Francis iteration with
// deflation checks and an ad-hoc shift every tenth sweep per block.
void hessenberg_qr(Matrix& hm, std::vector<std::complex<double>>& out) {
    const int n = static_cast<int>(hm.rows);
    auto h = [&hm](int i, int j) -> double& {
        return hm(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };
    out.assign(static_cast<std::size_t>(n), {});

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::fabs(h(i, j));
    if (anorm == 0.0) return;  // zero matrix: all eigenvalues zero

    const long sweep_cap = 30l * n;
    long sweeps = 0;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::fabs(h(l - 1, l - 1)) + std::fabs(h(l, l));
                if (s == 0.0) s = anorm;
                // Deflate when the subdiagonal is negligible next to its
                // neighbors, or next to the whole matrix: nilpotent inputs
                // leave blocks of pure roundoff whose neighbor scale decays
                // without bound, and only the norm-wise test ends those.
                if (std::fabs(h(l, l - 1)) <= kEps * s ||
                    std::fabs(h(l, l - 1)) <= kEps * anorm) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = h(nn, nn);
            if (l == nn) {
                out[static_cast<std::size_t>(nn)] = {x + t, 0.0};
                --nn;
            } else {
                double y = h(nn - 1, nn - 1);
                double w = h(nn, nn - 1) * h(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::fabs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        out[static_cast<std::size_t>(nn - 1)] = {x + z, 0.0};
                        out[static_cast<std::size_t>(nn)] = {x + z, 0.0};
                        if (z != 0.0) out[static_cast<std::size_t>(nn)] = {x - w / z, 0.0};
                    } else {
                        out[static_cast<std::size_t>(nn - 1)] = {x + p, z};
                        out[static_cast<std::size_t>(nn)] = {x + p, -z};
                    }
                    nn -= 2;
                } else {
                    if (++sweeps > sweep_cap)
                        throw NoConvergence("eigenvalue iteration exceeded " +
                                            std::to_string(sweep_cap) + " sweeps");
                    ++its;
                    if (its % 10 == 0) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) h(i, i) -= x;
                        double s = std::fabs(h(nn, nn - 1)) + std::fabs(h(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    int m;
                    double p = 0.0, q = 0.0, r = 0.0;
                    for (m = nn - 2; m >= l; --m) {
                        double z = h(m, m);
                        double rr = x - z;
                        double ss = y - z;
                        p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
                        q = h(m + 1, m + 1) - z - rr - ss;
                        r = h(m + 2, m + 1);
                        double scale = std::fabs(p) + std::fabs(q) + std::fabs(r);
                        p /= scale;
                        q /= scale;
                        r /= scale;
                        if (m == l) break;
                        double u = std::fabs(h(m, m - 1)) * (std::fabs(q) + std::fabs(r));
                        double v = std::fabs(p) * (std::fabs(h(m - 1, m - 1)) + std::fabs(z) +
                                                   std::fabs(h(m + 1, m + 1)));
                        if (u <= kEps * v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        h(i + 2, i) = 0.0;
                        if (i != m) h(i + 2, i - 1) = 0.0;
                    }
                    for (int k = m; k < nn; ++k) {
                        if (k != m) {
                            p = h(k, k - 1);
                            q = h(k + 1, k - 1);
                            r = (k + 1 != nn) ? h(k + 2, k - 1) : 0.0;
                            x = std::fabs(p) + std::fabs(q) + std::fabs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) h(k, k - 1) = -h(k, k - 1);
                        } else {
                            h(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        double z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            double pp = h(k, j) + q * h(k + 1, j);
                            if (k + 1 != nn) {
                                pp += r * h(k + 2, j);
                                h(k + 2, j) -= pp * z;
                            }
                            h(k + 1, j) -= pp * y;
                            h(k, j) -= pp * x;
                        }
                        int mmin = nn < k + 3 ? nn : k + 3;
                        for (int i = l; i <= mmin; ++i) {
                            double pp = x * h(i, k) + y * h(i, k + 1);
                            if (k + 1 != nn) {
                                pp += z * h(i, k + 2);
                                h(i, k + 2) -= pp * r;
                            }
                            h(i, k + 1) -= pp * q;
                            h(i, k) -= pp;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix multiply(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw InvalidArgument("matrix product shape mismatch");
    Matrix out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t t = 0; t < x.cols; ++t) {
            const double xv = x(i, t);
            if (xv == 0.0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += xv * y(t, j);
        }
    }
    return out;
}

Matrix transpose(const Matrix& x) {
    Matrix out(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
    return out;
}

Matrix scale(const Matrix& x, double s) {
    Matrix out = x;
    for (auto& v : out.a) v *= s;
    return out;
}

Matrix SparseMatrix::densify() const {
    Matrix out(dim, dim);
    for (auto [i, j] : entries) out(i, j) = 1.0;
    return out;
}

std::vector<double> SparseMatrix::apply(const std::vector<double>& x) const {
    std::vector<double> y(dim, 0.0);
    for (auto [i, j] : entries) y[i] += x[j];
    return y;
}

std::vector<double> SparseMatrix::apply_transpose(const std::vector<double>& x) const {
    std::vector<double> y(dim, 0.0);
    for (auto [i, j] : entries) y[j] += x[i];
    return y;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
    if (m.rows != m.cols) throw InvalidArgument("eigenvalues wants a square matrix");
    if (m.rows > 2000) throw InvalidArgument("eigenvalues supports dim <= 2000");
    if (m.rows == 0) return {};
    Matrix h = m;
    balance(h);
    hessenberg(h);
    std::vector<std::complex<double>> out;
    hessenberg_qr(h, out);
    return out;
}

double spectral_radius(const Matrix& m) {
    double r = 0.0;
    for (const auto& ev : eigenvalues(m)) r = std::max(r, std::abs(ev));
    return r;
}

double spectral_radius(const SparseMatrix& s) {
    if (s.dim == 0) return 0.0;
    if (s.entries.empty()) return 0.0;
    const double tol = 1e-12;
    const long cap = 1'000'000;
    std::vector<double> x(s.dim, 1.0 / static_cast<double>(s.dim));
    double prev = -1.0;
    int stable = 0;
    for (long it = 0; it < cap; ++it) {
        std::vector<double> y = s.apply(x);
        double norm = 0.0;
        for (double v : y) norm += v;  // x stays non-negative for a 0/1 matrix
        if (norm == 0.0) return 0.0;
        for (double& v : y) v /= norm;
        x.swap(y);
        if (prev >= 0.0 && std::fabs(norm - prev) <= tol * std::max(norm, 1e-300)) {
            if (++stable >= 5) return norm;
        } else {
            stable = 0;
        }
        prev = norm;
    }
    if (s.dim <= 2000) return spectral_radius(s.densify());
    throw NoConvergence("sparse spectral radius did not settle");
}

namespace {

// Shared power iteration for the largest singular value: x <- A'A x.
// `applyA` / `applyAt` implement the two matrix-vector products.
template <typename ApplyA, typename ApplyAt>
double singular_power_iteration(std::size_t cols, ApplyA applyA, ApplyAt applyAt,
                                double tol, long cap, bool* converged) {
    std::vector<double> x(cols);
    for (std::size_t i = 0; i < cols; ++i)
        x[i] = 1.0 + 1e-3 * static_cast<double>(i % 97);  // deterministic, not axis-aligned
    double nx = 0.0;
    for (double v : x) nx += v * v;
    nx = std::sqrt(nx);
    for (double& v : x) v /= nx;

    double prev = -1.0;
    int stable = 0;
    *converged = false;
    for (long it = 0; it < cap; ++it) {
        std::vector<double> w = applyA(x);
        double lambda = 0.0;
        for (double v : w) lambda += v * v;  // Rayleigh value x'A'Ax = |Ax|^2
        if (lambda == 0.0) {
            *converged = true;
            return 0.0;
        }
        std::vector<double> z = applyAt(w);
        double nz = 0.0;
        for (double v : z) nz += v * v;
        nz = std::sqrt(nz);
        if (nz == 0.0) {
            *converged = true;
            return std::sqrt(lambda);
        }
        for (std::size_t i = 0; i < cols; ++i) x[i] = z[i] / nz;
        if (prev >= 0.0 && std::fabs(lambda - prev) <= tol * std::max(lambda, 1e-300)) {
            if (++stable >= 3) {
                *converged = true;
                return std::sqrt(lambda);
            }
        } else {
            stable = 0;
        }
        prev = lambda;
    }
    return prev > 0.0 ? std::sqrt(prev) : 0.0;
}

}  // namespace

double operator_norm2(const Matrix& m) {
    if (m.rows == 0 || m.cols == 0) return 0.0;
    bool ok = false;
    double sigma = singular_power_iteration(
        m.cols,
        [&m](const std::vector<double>& x) {
            std::vector<double> y(m.rows, 0.0);
            for (std::size_t i = 0; i < m.rows; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m.cols; ++j) acc += m(i, j) * x[j];
                y[i] = acc;
            }
            return y;
        },
        [&m](const std::vector<double>& x) {
            std::vector<double> y(m.cols, 0.0);
            for (std::size_t i = 0; i < m.rows; ++i) {
                const double xi = x[i];
                if (xi == 0.0) continue;
                for (std::size_t j = 0; j < m.cols; ++j) y[j] += m(i, j) * xi;
            }
            return y;
        },
        1e-10, 10'000, &ok);
    if (!ok) throw NoConvergence("operator 2-norm power iteration stalled");
    return sigma;
}

double operator_norm2(const SparseMatrix& s) {
    if (s.dim == 0 || s.entries.empty()) return 0.0;
    bool ok = false;
    double sigma = singular_power_iteration(
        s.dim, [&s](const std::vector<double>& x) { return s.apply(x); },
        [&s](const std::vector<double>& x) { return s.apply_transpose(x); }, 1e-14,
        1'000'000, &ok);
    if (ok) return sigma;
    if (s.dim <= 2000) {
        // gap-free fallback: all eigenvalues of the (symmetric) Gram matrix
        Matrix d = s.densify();
        double top = spectral_radius(multiply(transpose(d), d));
        return std::sqrt(top);
    }
    throw NoConvergence("sparse operator 2-norm power iteration stalled");
}

Matrix kronecker(const Matrix& x, const Matrix& y) {
    if (x.rows * y.rows > 20000 || x.cols * y.cols > 20000)
        throw SizeBudgetExceeded("kronecker product dimension would exceed 20000");
    Matrix out(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            const double v = x(i, j);
            if (v == 0.0) continue;
            for (std::size_t p = 0; p < y.rows; ++p)
                for (std::size_t q = 0; q < y.cols; ++q)
                    out(i * y.rows + p, j * y.cols + q) = v * y(p, q);
        }
    return out;
}

Matrix kronecker(const SparseMatrix& x, const Matrix& y) {
    if (x.dim * y.rows > 20000 || x.dim * y.cols > 20000)
        throw SizeBudgetExceeded("kronecker product dimension would exceed 20000");
    Matrix out(x.dim * y.rows, x.dim * y.cols);
    for (auto [i, j] : x.entries)
        for (std::size_t p = 0; p < y.rows; ++p)
            for (std::size_t q = 0; q < y.cols; ++q)
                out(i * y.rows + p, j * y.cols + q) = y(p, q);
    return out;
}

PerronPair perron_pair(const SparseMatrix& s) {
    if (s.dim == 0) throw InvalidArgument("perron_pair wants a non-empty matrix");
    const double tol = 1e-12;
    const long cap = 1'000'000;

    auto iterate = [&](bool transposed) {
        std::vector<double> v(s.dim, 1.0 / static_cast<double>(s.dim));
        double lambda = 0.0;
        for (long it = 0; it < cap; ++it) {
            std::vector<double> w = transposed ? s.apply_transpose(v) : s.apply(v);
            double norm = 0.0;
            for (double u : w) norm += u;
            if (norm == 0.0)
                throw InvalidArgument("perron_pair wants a primitive matrix");
            double resid = 0.0;
            for (std::size_t i = 0; i < s.dim; ++i) resid += std::fabs(w[i] - norm * v[i]);
            for (double& u : w) u /= norm;
            v.swap(w);
            lambda = norm;
            if (resid <= tol * norm) return std::pair{lambda, v};
        }
        throw NoConvergence("dominant-eigenpair power iteration stalled");
    };

    auto [ly, y] = iterate(false);
    auto [lx, x] = iterate(true);
    PerronPair out;
    out.lambda = ly;
    out.y = std::move(y);
    out.x = std::move(x);
    if (std::fabs(lx - ly) > 1e-8 * std::max(1.0, ly))
        throw NoConvergence("dominant eigenvalue disagrees between the two orientations");
    return out;
}

}  // namespace whtrim
