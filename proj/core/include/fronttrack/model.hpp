#pragma once

#include "fronttrack/types.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace fronttrack {

enum class FieldKind { GenuinelyNonlinear, LinearlyDegenerate };

struct Box {
    State lo;
    State hi;

    bool contains(const State& u, double tol = 1e-12) const;
    State center() const { return 0.5 * (lo + hi); }
};

// A strictly hyperbolic system u_t + f(u)_x = 0. Families are 0-based.
class SystemModel {
public:
    virtual ~SystemModel() = default;

    int n_eqs() const { return n_; }
    virtual std::string name() const = 0;
    virtual State flux(const State& u) const = 0;
    virtual Matrix jacobian(const State& u) const = 0;
    // Directional derivative of the Jacobian, D A(u)[dir]. Central differences unless overridden.
    virtual Matrix jacobian_derivative(const State& u, const State& dir) const;

    FieldKind field_kind(int i) const { return kinds_[static_cast<std::size_t>(i)]; }
    bool genuinely_nonlinear(int i) const { return field_kind(i) == FieldKind::GenuinelyNonlinear; }
    // Lower bound of |D lambda_i . r_i| over the box for GN fields (unit r_i); 0 for LD fields.
    double gn_constant(int i) const { return gn_k_[static_cast<std::size_t>(i)]; }
    const Box& domain() const { return box_; }
    // Speed assigned to non-physical fronts: sup of the fastest eigenvalue over the box, plus one.
    double np_speed() const { return np_speed_; }
    double max_abs_speed() const { return max_abs_speed_; }
    // Component used to orient r_i for linearly degenerate fields.
    int orientation_component(int i) const { return orient_[static_cast<std::size_t>(i)]; }

protected:
    SystemModel(int n, std::vector<FieldKind> kinds, Box box);
    // Must be called by concrete constructors once flux/jacobian are usable.
    void finalize(const std::vector<double>& gn_override = {});

private:
    int n_;
    std::vector<FieldKind> kinds_;
    Box box_;
    std::vector<double> gn_k_;
    std::vector<int> orient_;
    double np_speed_ = 0.0;
    double max_abs_speed_ = 0.0;
};

using ModelPtr = std::shared_ptr<const SystemModel>;

ModelPtr make_burgers(double lo = -2.0, double hi = 2.0);
// v_t - w_x = 0, w_t + p(v)_x = 0 with p(v) = v^-gamma; state (v, w).
ModelPtr make_p_system(double gamma, const Box& box);
ModelPtr make_p_system(double gamma = 2.0);

struct Monomial {
    double coef = 0.0;
    std::array<int, kMaxEqs> exps{0, 0, 0};
};

struct PolynomialFluxSpec {
    int n = 1;
    std::vector<std::vector<Monomial>> flux; // flux[m] = sum of monomials
    std::vector<FieldKind> kinds;
    Box box;
    std::vector<double> gn_constants; // optional override
};

ModelPtr make_polynomial(const PolynomialFluxSpec& spec);

struct EigenStructure {
    State lambda;  // ascending
    Matrix right;  // columns r~_i
    Matrix left;   // rows l~_i, left * right = I
};

// Eigenvalues (ascending) and unit right eigenvectors of a real matrix with real, distinct spectrum.
void spectral_decomposition(const Matrix& a, State& lambda, Matrix& right);

EigenStructure eigen_at(const SystemModel& model, const State& u);
State eigenvalues_at(const SystemModel& model, const State& u);
double eigenvalue_at(const SystemModel& model, const State& u, int i);

// D lambda_i(u) . dir, via first-order perturbation of the spectrum.
double eigenvalue_derivative(const SystemModel& model, const State& u, int i, const State& dir);

State rarefaction_point(const SystemModel& model, const State& u0, int i, double s);

struct HugoniotResult {
    State u;
    double speed = 0.0;
    double rh_residual = 0.0;
    int iterations = 0;
};

HugoniotResult hugoniot_point(const SystemModel& model, const State& u0, int i, double s);

Matrix averaged_matrix(const SystemModel& model, const State& ul, const State& ur);
// i-th eigenvalue of the averaged matrix, i.e. the mean (Rankine-Hugoniot for shocks) speed.
double averaged_speed(const SystemModel& model, const State& ul, const State& ur, int i);

// l~_i(u+, u-) by the shock rule: left eigenvector of the averaged matrix normalized so that
// l~_i . (ur - ul) = lambda_i(ur) - lambda_i(ul).
State shock_left_vector(const SystemModel& model, const State& ul, const State& ur, int i);
// l~_i(u+, u-) by the averaging rule: mean of the pointwise l~_i along the segment.
State averaged_left_vector(const SystemModel& model, const State& ul, const State& ur, int i);

double rh_residual(const SystemModel& model, const State& ul, const State& ur, double speed);

struct ModelValidation {
    bool ok = true;
    std::vector<std::string> problems;
};

// Sampled checks of strict hyperbolicity, genuine nonlinearity and the Jacobian.
ModelValidation validate_model(const SystemModel& model, int samples_per_dim = 5);

// Seven-point Gauss-Legendre rule on [0,1].
const std::array<double, 7>& gauss_nodes();
const std::array<double, 7>& gauss_weights();

} // namespace fronttrack
