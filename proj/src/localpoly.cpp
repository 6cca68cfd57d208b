#include "agghoo/localpoly.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace agghoo {

namespace {

// Multi-indices of total degree <= max_degree over dim variables, graded
// lexicographic, constant term first.
std::vector<std::vector<int>> monomials(int dim, int max_degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> current(dim, 0);
    auto fill = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == dim - 1) {
            current[pos] = remaining;
            out.push_back(current);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            current[pos] = e;
            self(self, pos + 1, remaining - e);
        }
    };
    for (int total = 0; total <= max_degree; ++total) fill(fill, 0, total);
    return out;
}

// Cyclic Jacobi eigendecomposition for small symmetric matrices. a is
// row-major m x m and is destroyed; eigenvalues land in eig, eigenvectors
// in the columns of v.
void symmetric_eigen(std::vector<double>& a, int m, std::vector<double>& eig,
                     std::vector<double>& v) {
    v.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i) * m + i] = 1.0;
    auto at = [&](std::vector<double>& mat, int r, int c) -> double& {
        return mat[static_cast<std::size_t>(r) * m + c];
    };
    for (int sweep = 0; sweep < 128; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += std::abs(at(a, p, q));
        if (off == 0.0) break;
        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double apq = at(a, p, q);
                if (apq == 0.0) continue;
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < m; ++k) {
                    const double akp = at(a, k, p), akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    const double apk = at(a, p, k), aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < m; ++k) {
                    const double vkp = at(v, k, p), vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    eig.resize(m);
    for (int i = 0; i < m; ++i) eig[i] = a[static_cast<std::size_t>(i) * m + i];
}

// Standard Gaussian density kernel on R^dim.
double gauss_kernel(std::span<const double> u) {
    double sq = 0.0;
    for (const double c : u) sq += c * c;
    const double norm = std::pow(6.283185307179586476925286766559, -0.5 * static_cast<double>(u.size()));
    return norm * std::exp(-0.5 * sq);
}

}  // namespace

double localpoly_eta(int degree, double h, const Dataset& data, std::span<const double> x) {
    if (degree < 0) throw std::invalid_argument("localpoly_eta: degree must be >= 0");
    if (h <= 0.0) throw std::invalid_argument("localpoly_eta: bandwidth must be positive");
    if (data.class_count() != 2) throw std::invalid_argument("localpoly_eta: binary labels only");

    const int n = data.size();
    const int d = data.dim();
    const auto monos = monomials(d, degree);
    const int m = static_cast<int>(monos.size());

    // Gram matrix and right-hand side in the scaled variable u = (X_i - x)/h.
    // The constant coefficient of the minimizer is unchanged by the scaling.
    std::vector<double> gram(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> rhs(m, 0.0);
    std::vector<double> u(d);
    std::vector<double> powers(static_cast<std::size_t>(d) * (2 * degree + 1));
    std::vector<double> mono_val(m);
    for (int i = 0; i < n; ++i) {
        const auto row = data.row(i);
        for (int c = 0; c < d; ++c) u[c] = (row[c] - x[c]) / h;
        const double w = gauss_kernel(u);
        for (int c = 0; c < d; ++c) {
            powers[static_cast<std::size_t>(c) * (2 * degree + 1)] = 1.0;
            for (int e = 1; e <= 2 * degree; ++e)
                powers[static_cast<std::size_t>(c) * (2 * degree + 1) + e] =
                    powers[static_cast<std::size_t>(c) * (2 * degree + 1) + e - 1] * u[c];
        }
        for (int a = 0; a < m; ++a) {
            double p = 1.0;
            for (int c = 0; c < d; ++c)
                p *= powers[static_cast<std::size_t>(c) * (2 * degree + 1) + monos[a][c]];
            mono_val[a] = p;
        }
        for (int a = 0; a < m; ++a) {
            rhs[a] += mono_val[a] * w * data.label(i);
            for (int b = a; b < m; ++b) gram[static_cast<std::size_t>(a) * m + b] += mono_val[a] * mono_val[b] * w;
        }
    }
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < a; ++b)
            gram[static_cast<std::size_t>(a) * m + b] = gram[static_cast<std::size_t>(b) * m + a];

    // The guard matrix is the Gram matrix divided by n h^d.
    const double scale = static_cast<double>(n) * std::pow(h, d);
    std::vector<double> design(gram);
    for (double& e : design) e /= scale;

    std::vector<double> eig, vecs;
    symmetric_eigen(design, m, eig, vecs);
    double lambda_min = std::abs(eig[0]);
    for (int i = 1; i < m; ++i) lambda_min = std::min(lambda_min, std::abs(eig[i]));
    if (n < 2 || lambda_min < 1.0 / std::log(static_cast<double>(n))) return 0.0;

    // Solve via the eigendecomposition of the scaled matrix.
    std::vector<double> scaled_rhs(m);
    for (int a = 0; a < m; ++a) scaled_rhs[a] = rhs[a] / scale;
    double eta = 0.0;
    for (int k = 0; k < m; ++k) {
        double proj = 0.0;
        for (int a = 0; a < m; ++a) proj += vecs[static_cast<std::size_t>(a) * m + k] * scaled_rhs[a];
        eta += vecs[0 * static_cast<std::size_t>(m) + k] * proj / eig[k];
    }
    return eta;
}

namespace {

class LocalPolyClassifier : public Classifier {
public:
    LocalPolyClassifier(int degree, double h, DataPtr data)
        : degree_(degree), h_(h), data_(std::move(data)) {}

    Label predict(std::span<const double> x) const override {
        return localpoly_eta(degree_, h_, *data_, x) >= 0.5 ? 1 : 0;
    }

private:
    int degree_;
    double h_;
    DataPtr data_;
};

}  // namespace

ClassifierPtr localpoly_train(int degree, double h, const DataPtr& data) {
    if (!data) throw std::invalid_argument("localpoly_train: null dataset");
    if (data->class_count() != 2) throw std::invalid_argument("localpoly_train: binary labels only");
    if (degree > data->size()) throw std::invalid_argument("localpoly_train: degree exceeds sample size");
    return std::make_shared<LocalPolyClassifier>(degree, h, data);
}

LearningRule localpoly_rule(int degree, double h) {
    char id[48];
    std::snprintf(id, sizeof id, "lp-l=%d-h=%.6e", degree, h);
    return LearningRule{id, [degree, h](const DataPtr& data) {
                            return localpoly_train(degree, h, data);
                        }};
}

std::vector<LearningRule> lp_collection(int max_degree, int max_k) {
    if (max_degree < 1 || max_k < 1) throw std::invalid_argument("lp_collection: empty grid");
    std::vector<LearningRule> family;
    family.reserve(static_cast<std::size_t>(max_degree) * max_k);
    for (int degree = 1; degree <= max_degree; ++degree) {
        for (int k = 1; k <= max_k; ++k) {
            char id[48];
            std::snprintf(id, sizeof id, "lp-l=%d-k=%02d", degree, k);
            const double h = 1.0 / k;
            family.push_back(LearningRule{id, [degree, h](const DataPtr& data) {
                                              return localpoly_train(degree, h, data);
                                          }});
        }
    }
    return family;
}

}  // namespace agghoo
