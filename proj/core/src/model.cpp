#include "fronttrack/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fronttrack {

namespace {

constexpr double kCoincide = 1e-12;

Matrix oriented(const SystemModel& model, Matrix r) {
    for (int i = 0; i < r.cols(); ++i) {
        const int c = model.orientation_component(i);
        if (r(c, i) < 0.0) r.col(i) = -r.col(i);
    }
    return r;
}

// Grid of sample states over the box, samples_per_dim points per axis (corners included).
std::vector<State> box_samples(const Box& box, int per_dim) {
    const int n = static_cast<int>(box.lo.size());
    std::vector<State> out;
    int total = 1;
    for (int d = 0; d < n; ++d) total *= per_dim;
    out.reserve(static_cast<std::size_t>(total));
    for (int k = 0; k < total; ++k) {
        State u(n);
        int rem = k;
        for (int d = 0; d < n; ++d) {
            const int j = rem % per_dim;
            rem /= per_dim;
            const double f = per_dim == 1 ? 0.5 : static_cast<double>(j) / (per_dim - 1);
            u(d) = box.lo(d) + f * (box.hi(d) - box.lo(d));
        }
        out.push_back(u);
    }
    return out;
}

std::string fmt_state(const State& u) {
    std::ostringstream os;
    os << "(";
    for (int k = 0; k < u.size(); ++k) os << (k ? ", " : "") << u(k);
    os << ")";
    return os.str();
}

} // namespace

bool Box::contains(const State& u, double tol) const {
    if (u.size() != lo.size()) return false;
    for (int k = 0; k < u.size(); ++k) {
        if (!(u(k) >= lo(k) - tol && u(k) <= hi(k) + tol)) return false;
    }
    return true;
}

const std::array<double, 7>& gauss_nodes() {
    static const std::array<double, 7> nodes = [] {
        const std::array<double, 7> x{-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
                                      0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
        std::array<double, 7> t{};
        for (std::size_t k = 0; k < 7; ++k) t[k] = 0.5 * (1.0 + x[k]);
        return t;
    }();
    return nodes;
}

const std::array<double, 7>& gauss_weights() {
    static const std::array<double, 7> weights = [] {
        const std::array<double, 7> w{0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
                                      0.3818300505051189, 0.2797053914892766, 0.1294849661688697};
        std::array<double, 7> h{};
        for (std::size_t k = 0; k < 7; ++k) h[k] = 0.5 * w[k];
        return h;
    }();
    return weights;
}

SystemModel::SystemModel(int n, std::vector<FieldKind> kinds, Box box)
    : n_(n), kinds_(std::move(kinds)), box_(std::move(box)) {
    if (n_ < 1 || n_ > kMaxEqs) throw Error(ErrorCode::InvalidArgument, "system size must be in 1..3");
    if (static_cast<int>(kinds_.size()) != n_) throw Error(ErrorCode::InvalidArgument, "one field kind per family");
    if (box_.lo.size() != n_ || box_.hi.size() != n_)
        throw Error(ErrorCode::InvalidArgument, "domain box dimension mismatch");
    for (int d = 0; d < n_; ++d) {
        if (!(box_.lo(d) < box_.hi(d))) throw Error(ErrorCode::InvalidArgument, "empty domain box");
    }
    orient_.assign(static_cast<std::size_t>(n_), 0);
    gn_k_.assign(static_cast<std::size_t>(n_), 0.0);
}

Matrix SystemModel::jacobian_derivative(const State& u, const State& dir) const {
    const double h = 1e-6;
    return (jacobian(u + h * dir) - jacobian(u - h * dir)) / (2.0 * h);
}

void SystemModel::finalize(const std::vector<double>& gn_override) {
    State lam;
    Matrix r;
    spectral_decomposition(jacobian(box_.center()), lam, r);
    for (int i = 0; i < n_; ++i) {
        int best = 0;
        for (int c = 1; c < n_; ++c) {
            if (std::abs(r(c, i)) > std::abs(r(best, i)) + 1e-14) best = c;
        }
        orient_[static_cast<std::size_t>(i)] = best;
    }

    const auto grid = box_samples(box_, n_ == 1 ? 17 : 9);
    double top = -std::numeric_limits<double>::infinity();
    double amax = 0.0;
    for (const auto& u : grid) {
        spectral_decomposition(jacobian(u), lam, r);
        top = std::max(top, lam(n_ - 1));
        amax = std::max(amax, lam.cwiseAbs().maxCoeff());
    }
    np_speed_ = top + 1.0;
    max_abs_speed_ = amax;

    for (int i = 0; i < n_; ++i) {
        if (!genuinely_nonlinear(i)) continue;
        if (static_cast<int>(gn_override.size()) > i && gn_override[static_cast<std::size_t>(i)] > 0.0) {
            gn_k_[static_cast<std::size_t>(i)] = gn_override[static_cast<std::size_t>(i)];
            continue;
        }
        double kmin = std::numeric_limits<double>::infinity();
        for (const auto& u : box_samples(box_, 5)) {
            spectral_decomposition(jacobian(u), lam, r);
            const Matrix l = r.inverse();
            const double d = l.row(i).dot(jacobian_derivative(u, r.col(i)) * r.col(i));
            kmin = std::min(kmin, std::abs(d));
        }
        gn_k_[static_cast<std::size_t>(i)] = kmin;
    }
}

void spectral_decomposition(const Matrix& a, State& lambda, Matrix& right) {
    const int n = static_cast<int>(a.rows());
    lambda.resize(n);
    right.resize(n, n);
    if (n == 1) {
        lambda(0) = a(0, 0);
        right(0, 0) = 1.0;
        return;
    }
    if (n == 2) {
        const double p = a(0, 0), b = a(0, 1), c = a(1, 0), d = a(1, 1);
        const double half = 0.5 * (p - d);
        const double disc = half * half + b * c;
        if (!(disc > 0.0)) throw Error(ErrorCode::NonHyperbolic, "complex or repeated eigenvalues");
        const double root = std::sqrt(disc);
        const double mid = 0.5 * (p + d);
        lambda(0) = mid - root;
        lambda(1) = mid + root;
        if (lambda(1) - lambda(0) < kCoincide) throw Error(ErrorCode::NonHyperbolic, "eigenvalues coincide");
        for (int k = 0; k < 2; ++k) {
            const double l = lambda(k);
            Eigen::Vector2d v1(b, l - p);
            Eigen::Vector2d v2(l - d, c);
            Eigen::Vector2d v = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
            v.normalize();
            right(0, k) = v(0);
            right(1, k) = v(1);
        }
        return;
    }
    Eigen::Matrix3d m = a;
    Eigen::EigenSolver<Eigen::Matrix3d> es(m);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NonHyperbolic, "eigen solver failed");
    const auto ev = es.eigenvalues();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    std::array<int, 3> idx{0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        if (std::abs(ev(k).imag()) > 1e-12 * scale) throw Error(ErrorCode::NonHyperbolic, "complex eigenvalues");
    }
    std::sort(idx.begin(), idx.end(), [&](int x, int y) { return ev(x).real() < ev(y).real(); });
    const auto vecs = es.eigenvectors();
    for (int k = 0; k < 3; ++k) {
        lambda(k) = ev(idx[static_cast<std::size_t>(k)]).real();
        Eigen::Vector3d v = vecs.col(idx[static_cast<std::size_t>(k)]).real();
        v.normalize();
        right.col(k) = v;
    }
    for (int k = 1; k < 3; ++k) {
        if (lambda(k) - lambda(k - 1) < kCoincide) throw Error(ErrorCode::NonHyperbolic, "eigenvalues coincide");
    }
}

EigenStructure eigen_at(const SystemModel& model, const State& u) {
    if (!model.domain().contains(u)) throw Error(ErrorCode::OutOfDomain, "state " + fmt_state(u) + " outside box");
    EigenStructure es;
    Matrix r;
    spectral_decomposition(model.jacobian(u), es.lambda, r);
    const int n = model.n_eqs();
    const Matrix l = r.inverse();
    for (int i = 0; i < n; ++i) {
        if (model.genuinely_nonlinear(i)) {
            const double d = l.row(i).dot(model.jacobian_derivative(u, r.col(i)) * r.col(i));
            if (std::abs(d) < 1e-14)
                throw Error(ErrorCode::NonHyperbolic, "genuine nonlinearity fails at " + fmt_state(u));
            r.col(i) /= d;
        } else {
            const int c = model.orientation_component(i);
            if (r(c, i) < 0.0) r.col(i) = -r.col(i);
        }
    }
    es.right = r;
    es.left = r.inverse();
    return es;
}

State eigenvalues_at(const SystemModel& model, const State& u) {
    if (!model.domain().contains(u)) throw Error(ErrorCode::OutOfDomain, "state " + fmt_state(u) + " outside box");
    State lam;
    Matrix r;
    spectral_decomposition(model.jacobian(u), lam, r);
    return lam;
}

double eigenvalue_at(const SystemModel& model, const State& u, int i) { return eigenvalues_at(model, u)(i); }

double eigenvalue_derivative(const SystemModel& model, const State& u, int i, const State& dir) {
    State lam;
    Matrix r;
    spectral_decomposition(model.jacobian(u), lam, r);
    const Matrix l = r.inverse();
    return l.row(i).dot(model.jacobian_derivative(u, dir) * r.col(i));
}

State rarefaction_point(const SystemModel& model, const State& u0, int i, double s) {
    if (s == 0.0) return u0;
    const int steps = std::max(8, static_cast<int>(std::ceil(std::abs(s) / 1e-3)));
    const double h = s / steps;
    auto field = [&](const State& y) -> State {
        if (!model.domain().contains(y)) throw Error(ErrorCode::LeftDomain, "wave curve left the domain box");
        return eigen_at(model, y).right.col(i);
    };
    State y = u0;
    for (int k = 0; k < steps; ++k) {
        const State k1 = field(y);
        const State k2 = field(y + 0.5 * h * k1);
        const State k3 = field(y + 0.5 * h * k2);
        const State k4 = field(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!model.domain().contains(y)) throw Error(ErrorCode::LeftDomain, "wave curve left the domain box");
    return y;
}

Matrix averaged_matrix(const SystemModel& model, const State& ul, const State& ur) {
    if (!model.domain().contains(ul) || !model.domain().contains(ur))
        throw Error(ErrorCode::OutOfDomain, "averaged matrix endpoints outside box");
    const auto& th = gauss_nodes();
    const auto& w = gauss_weights();
    const int n = model.n_eqs();
    Matrix acc = Matrix::Zero(n, n);
    const State du = ur - ul;
    for (std::size_t k = 0; k < 7; ++k) acc += w[k] * model.jacobian(ul + th[k] * du);
    return acc;
}

double averaged_speed(const SystemModel& model, const State& ul, const State& ur, int i) {
    State lam;
    Matrix r;
    spectral_decomposition(averaged_matrix(model, ul, ur), lam, r);
    return lam(i);
}

double rh_residual(const SystemModel& model, const State& ul, const State& ur, double speed) {
    return (model.flux(ur) - model.flux(ul) - speed * (ur - ul)).cwiseAbs().maxCoeff();
}

State shock_left_vector(const SystemModel& model, const State& ul, const State& ur, int i) {
    State lam;
    Matrix r;
    spectral_decomposition(averaged_matrix(model, ul, ur), lam, r);
    r = oriented(model, r);
    const Matrix l = r.inverse();
    State li = l.row(i).transpose();
    const State du = ur - ul;
    const double proj = li.dot(du);
    if (std::abs(proj) < 1e-300) return li;
    const double dl = eigenvalue_at(model, ur, i) - eigenvalue_at(model, ul, i);
    return li * (dl / proj);
}

State averaged_left_vector(const SystemModel& model, const State& ul, const State& ur, int i) {
    const auto& th = gauss_nodes();
    const auto& w = gauss_weights();
    State acc = State::Zero(model.n_eqs());
    const State du = ur - ul;
    for (std::size_t k = 0; k < 7; ++k) acc += w[k] * eigen_at(model, ul + th[k] * du).left.row(i).transpose();
    return acc;
}

HugoniotResult hugoniot_point(const SystemModel& model, const State& u0, int i, double s) {
    const int n = model.n_eqs();
    HugoniotResult res;
    const double lam0 = eigenvalue_at(model, u0, i);
    if (s == 0.0) {
        res.u = u0;
        res.speed = lam0;
        return res;
    }

    auto residual = [&](const State& u) -> State {
        State f(n);
        f(0) = eigenvalue_at(model, u, i) - lam0 - s;
        if (n > 1) {
            State lam;
            Matrix r;
            spectral_decomposition(averaged_matrix(model, u0, u), lam, r);
            r = oriented(model, r);
            const Matrix l = r.inverse();
            const State du = u - u0;
            int row = 1;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                f(row++) = l.row(j).dot(du);
            }
        }
        return f;
    };

    State u = rarefaction_point(model, u0, i, s);
    State f = residual(u);
    double norm = f.cwiseAbs().maxCoeff();
    int it = 0;
    for (; it < 50 && norm > 1e-14; ++it) {
        Matrix jac(n, n);
        for (int c = 0; c < n; ++c) {
            const double h = 1e-7 * std::max(1.0, std::abs(u(c)));
            State up = u;
            up(c) += h;
            State um = u;
            um(c) -= h;
            jac.col(c) = (residual(up) - residual(um)) / (2.0 * h);
        }
        const State step = jac.partialPivLu().solve(-f);
        double alpha = 1.0;
        State trial;
        State ftrial;
        double tnorm = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 12; ++k) {
            trial = u + alpha * step;
            if (model.domain().contains(trial)) {
                ftrial = residual(trial);
                tnorm = ftrial.cwiseAbs().maxCoeff();
                if (tnorm < norm) break;
            }
            alpha *= 0.5;
        }
        if (!(tnorm < norm)) break;
        u = trial;
        f = ftrial;
        norm = tnorm;
    }
    if (!(norm <= 1e-12)) {
        std::ostringstream os;
        os << "Hugoniot Newton residual " << norm << " after " << it << " iterations";
        throw Error(ErrorCode::NoConvergence, os.str());
    }
    res.u = u;
    res.iterations = it;
    res.speed = averaged_speed(model, u0, u, i);
    res.rh_residual = rh_residual(model, u0, u, res.speed);
    return res;
}

ModelValidation validate_model(const SystemModel& model, int samples_per_dim) {
    ModelValidation v;
    const int n = model.n_eqs();
    for (const auto& u : box_samples(model.domain(), samples_per_dim)) {
        State lam;
        Matrix r;
        try {
            spectral_decomposition(model.jacobian(u), lam, r);
        } catch (const Error& e) {
            v.ok = false;
            v.problems.push_back(std::string(e.what()) + " at " + fmt_state(u));
            continue;
        }
        const Matrix l = r.inverse();
        for (int i = 0; i < n; ++i) {
            if (!model.genuinely_nonlinear(i)) continue;
            const double d = std::abs(l.row(i).dot(model.jacobian_derivative(u, r.col(i)) * r.col(i)));
            if (d < model.gn_constant(i) * (1.0 - 1e-9) || d <= 0.0) {
                v.ok = false;
                v.problems.push_back("genuine nonlinearity below k for family " + std::to_string(i + 1) + " at " +
                                     fmt_state(u));
            }
        }
        const Matrix jac = model.jacobian(u);
        for (int c = 0; c < n; ++c) {
            const double h = 1e-6 * std::max(1.0, std::abs(u(c)));
            State up = u;
            up(c) += h;
            State um = u;
            um(c) -= h;
            const State col = (model.flux(up) - model.flux(um)) / (2.0 * h);
            for (int m = 0; m < n; ++m) {
                if (std::abs(col(m) - jac(m, c)) > 1e-6 * std::max(1.0, std::abs(jac(m, c)))) {
                    v.ok = false;
                    v.problems.push_back("jacobian mismatch at " + fmt_state(u));
                }
            }
        }
    }
    return v;
}

} // namespace fronttrack
