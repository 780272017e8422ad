#include "fronttrack/model.hpp"

#include <cmath>
#include <sstream>

namespace fronttrack {

namespace {

Box make_box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
    Box b;
    b.lo.resize(static_cast<int>(lo.size()));
    b.hi.resize(static_cast<int>(hi.size()));
    int k = 0;
    for (double v : lo) b.lo(k++) = v;
    k = 0;
    for (double v : hi) b.hi(k++) = v;
    return b;
}

class Burgers final : public SystemModel {
public:
    Burgers(double lo, double hi) : SystemModel(1, {FieldKind::GenuinelyNonlinear}, make_box({lo}, {hi})) {
        finalize({1.0});
    }
    std::string name() const override { return "burgers"; }
    State flux(const State& u) const override {
        State f(1);
        f(0) = 0.5 * u(0) * u(0);
        return f;
    }
    Matrix jacobian(const State& u) const override {
        Matrix a(1, 1);
        a(0, 0) = u(0);
        return a;
    }
    Matrix jacobian_derivative(const State&, const State& dir) const override {
        Matrix a(1, 1);
        a(0, 0) = dir(0);
        return a;
    }
};

class PSystem final : public SystemModel {
public:
    PSystem(double gamma, const Box& box)
        : SystemModel(2, {FieldKind::GenuinelyNonlinear, FieldKind::GenuinelyNonlinear}, box), gamma_(gamma) {
        if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "p-system needs gamma > 0");
        if (!(box.lo(0) > 0.0)) throw Error(ErrorCode::InvalidArgument, "p-system box must have v > 0");
        finalize();
    }
    std::string name() const override {
        std::ostringstream os;
        os << "p_system(gamma=" << gamma_ << ")";
        return os.str();
    }
    double p(double v) const { return std::pow(v, -gamma_); }
    double dp(double v) const { return -gamma_ * std::pow(v, -gamma_ - 1.0); }
    double ddp(double v) const { return gamma_ * (gamma_ + 1.0) * std::pow(v, -gamma_ - 2.0); }

    State flux(const State& u) const override {
        State f(2);
        f(0) = -u(1);
        f(1) = p(u(0));
        return f;
    }
    Matrix jacobian(const State& u) const override {
        Matrix a(2, 2);
        a << 0.0, -1.0, dp(u(0)), 0.0;
        return a;
    }
    Matrix jacobian_derivative(const State& u, const State& dir) const override {
        Matrix a(2, 2);
        a << 0.0, 0.0, ddp(u(0)) * dir(0), 0.0;
        return a;
    }

private:
    double gamma_;
};

class PolynomialSystem final : public SystemModel {
public:
    explicit PolynomialSystem(const PolynomialFluxSpec& spec)
        : SystemModel(spec.n, spec.kinds, spec.box), terms_(spec.flux) {
        if (static_cast<int>(terms_.size()) != spec.n)
            throw Error(ErrorCode::InvalidArgument, "polynomial flux needs one component per equation");
        for (const auto& comp : terms_) {
            for (const auto& m : comp) {
                for (int d = 0; d < kMaxEqs; ++d) {
                    if (m.exps[static_cast<std::size_t>(d)] < 0)
                        throw Error(ErrorCode::InvalidArgument, "negative exponent in polynomial flux");
                    if (d >= spec.n && m.exps[static_cast<std::size_t>(d)] != 0)
                        throw Error(ErrorCode::InvalidArgument, "exponent on a missing variable");
                }
            }
        }
        finalize(spec.gn_constants);
    }
    std::string name() const override { return "polynomial"; }

    State flux(const State& u) const override {
        State f = State::Zero(n_eqs());
        for (int m = 0; m < n_eqs(); ++m) {
            for (const auto& t : terms_[static_cast<std::size_t>(m)]) f(m) += t.coef * monomial(u, t.exps);
        }
        return f;
    }
    Matrix jacobian(const State& u) const override {
        const int n = n_eqs();
        Matrix a = Matrix::Zero(n, n);
        for (int m = 0; m < n; ++m) {
            for (const auto& t : terms_[static_cast<std::size_t>(m)]) {
                for (int c = 0; c < n; ++c) {
                    const int e = t.exps[static_cast<std::size_t>(c)];
                    if (e == 0) continue;
                    auto ex = t.exps;
                    ex[static_cast<std::size_t>(c)] -= 1;
                    a(m, c) += t.coef * e * monomial(u, ex);
                }
            }
        }
        return a;
    }
    Matrix jacobian_derivative(const State& u, const State& dir) const override {
        const int n = n_eqs();
        Matrix a = Matrix::Zero(n, n);
        for (int m = 0; m < n; ++m) {
            for (const auto& t : terms_[static_cast<std::size_t>(m)]) {
                for (int c = 0; c < n; ++c) {
                    const int e = t.exps[static_cast<std::size_t>(c)];
                    if (e == 0) continue;
                    auto ex = t.exps;
                    ex[static_cast<std::size_t>(c)] -= 1;
                    for (int d = 0; d < n; ++d) {
                        const int e2 = ex[static_cast<std::size_t>(d)];
                        if (e2 == 0) continue;
                        auto ex2 = ex;
                        ex2[static_cast<std::size_t>(d)] -= 1;
                        a(m, c) += t.coef * e * e2 * monomial(u, ex2) * dir(d);
                    }
                }
            }
        }
        return a;
    }

private:
    double monomial(const State& u, const std::array<int, kMaxEqs>& ex) const {
        double v = 1.0;
        for (int d = 0; d < n_eqs(); ++d) {
            for (int k = 0; k < ex[static_cast<std::size_t>(d)]; ++k) v *= u(d);
        }
        return v;
    }

    std::vector<std::vector<Monomial>> terms_;
};

} // namespace

ModelPtr make_burgers(double lo, double hi) { return std::make_shared<Burgers>(lo, hi); }

ModelPtr make_p_system(double gamma, const Box& box) { return std::make_shared<PSystem>(gamma, box); }

ModelPtr make_p_system(double gamma) { return make_p_system(gamma, make_box({0.5, -1.0}, {2.0, 1.0})); }

ModelPtr make_polynomial(const PolynomialFluxSpec& spec) { return std::make_shared<PolynomialSystem>(spec); }

} // namespace fronttrack
