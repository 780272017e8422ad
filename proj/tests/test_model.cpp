#include "support.hpp"

#include <fronttrack/model.hpp>

#include <cmath>

using namespace fttest;

TEST_CASE("burgers eigenstructure", "[model]") {
    auto m = make_burgers();
    auto e = eigen_at(*m, st({0.3}));
    CHECK(e.lambda(0) == Approx(0.3).margin(1e-14));
    CHECK(std::abs(e.right(0, 0)) == Approx(1.0));
    CHECK(e.left(0, 0) * e.right(0, 0) == Approx(1.0));
    CHECK(m->genuinely_nonlinear(0));
    CHECK(m->gn_constant(0) == Approx(1.0));
}

TEST_CASE("p-system eigenvalues match the sound speed", "[model]") {
    const double gamma = 2.0;
    auto m = make_p_system(gamma);
    forall(50, 11, [](std::mt19937_64& r) { return st({uniform(r, 0.8, 1.2), uniform(r, -0.2, 0.2)}); },
           [&](const State& u) {
               // c = sqrt(-p'(v)) with p(v) = v^-gamma
               const double c = std::sqrt(gamma * std::pow(u(0), -gamma - 1.0));
               auto lam = eigenvalues_at(*m, u);
               CHECK(lam(0) == Approx(-c).epsilon(1e-12));
               CHECK(lam(1) == Approx(c).epsilon(1e-12));
           });
    auto lam = eigenvalues_at(*m, st({1.0, 0.0}));
    CHECK(lam(0) == Approx(-std::sqrt(2.0)));
    CHECK(lam(1) == Approx(std::sqrt(2.0)));
}

TEST_CASE("left and right eigenvectors are biorthogonal", "[model][property]") {
    auto m = make_p_system(1.4);
    forall(100, 12, [](std::mt19937_64& r) { return st({uniform(r, 0.7, 1.3), uniform(r, -0.3, 0.3)}); },
           [&](const State& u) {
               auto e = eigen_at(*m, u);
               Matrix prod = e.left * e.right;
               CHECK((prod - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
               for (int i = 0; i < 2; ++i) {
                   Matrix a = m->jacobian(u);
                   CHECK((a * e.right.col(i) - e.lambda(i) * e.right.col(i)).norm() < 1e-10);
               }
           });
}

TEST_CASE("jacobian agrees with finite differences", "[model][property]") {
    auto m = make_p_system(2.0);
    forall(50, 13, [](std::mt19937_64& r) { return st({uniform(r, 0.7, 1.3), uniform(r, -0.3, 0.3)}); },
           [&](const State& u) {
               Matrix a = m->jacobian(u);
               const double h = 1e-6;
               for (int j = 0; j < 2; ++j) {
                   State up = u, dn = u;
                   up(j) += h;
                   dn(j) -= h;
                   State col = (m->flux(up) - m->flux(dn)) / (2 * h);
                   CHECK((col - a.col(j)).norm() < 1e-7);
               }
           });
}

TEST_CASE("rarefaction curves are parametrised by the eigenvalue", "[model]") {
    auto b = make_burgers();
    CHECK(rarefaction_point(*b, st({0.0}), 0, 0.5)(0) == Approx(0.5));
    CHECK(rarefaction_point(*b, st({0.2}), 0, 0.0)(0) == 0.2);

    auto p = make_p_system(2.0);
    const State u0 = st({1.0, 0.0});
    for (int i = 0; i < 2; ++i) {
        State u = rarefaction_point(*p, u0, i, 0.1);
        CHECK(eigenvalue_at(*p, u, i) - eigenvalue_at(*p, u0, i) == Approx(0.1).margin(1e-8));
    }
}

TEST_CASE("hugoniot locus for burgers", "[model]") {
    auto b = make_burgers();
    auto h = hugoniot_point(*b, st({1.0}), 0, -1.0);
    CHECK(h.u(0) == Approx(0.0).margin(1e-14));
    CHECK(h.speed == Approx(0.5));
    auto h2 = hugoniot_point(*b, st({1.0}), 0, -0.4);
    CHECK(h2.u(0) == Approx(0.6));
    CHECK(h2.speed == Approx(0.8));
}

TEST_CASE("p-system shocks satisfy Rankine-Hugoniot and Lax", "[model][property]") {
    auto p = make_p_system(2.0);
    forall(60, 14,
           [](std::mt19937_64& r) {
               return std::make_pair(static_cast<int>(r() % 2), uniform(r, -0.1, -1e-4));
           },
           [&](const std::pair<int, double>& in) {
               const State u0 = st({1.0, 0.0});
               auto h = hugoniot_point(*p, u0, in.first, in.second);
               CHECK(h.rh_residual <= 1e-10);
               CHECK(rh_residual(*p, u0, h.u, h.speed) <= 1e-10);
               CHECK(eigenvalue_at(*p, h.u, in.first) - eigenvalue_at(*p, u0, in.first) ==
                     Approx(in.second).margin(1e-9));
               CHECK(eigenvalue_at(*p, u0, in.first) >= h.speed - 1e-12);
               CHECK(h.speed >= eigenvalue_at(*p, h.u, in.first) - 1e-12);
           });
}

TEST_CASE("averaged matrix", "[model]") {
    auto b = make_burgers();
    CHECK(averaged_matrix(*b, st({0.0}), st({1.0}))(0, 0) == Approx(0.5));
    CHECK(averaged_speed(*b, st({0.4}), st({0.2}), 0) == Approx(0.3));

    auto p = make_p_system(2.0);
    const State u = st({1.1, 0.05});
    CHECK((averaged_matrix(*p, u, u) - p->jacobian(u)).cwiseAbs().maxCoeff() < 1e-12);

    forall(40, 15, [](std::mt19937_64& r) {
               return std::make_pair(st({uniform(r, 0.8, 1.2), uniform(r, -0.2, 0.2)}),
                                     st({uniform(r, 0.8, 1.2), uniform(r, -0.2, 0.2)}));
           },
           [&](const std::pair<State, State>& pr) {
               Matrix a = averaged_matrix(*p, pr.first, pr.second);
               Matrix a2 = averaged_matrix(*p, pr.second, pr.first);
               CHECK((a - a2).cwiseAbs().maxCoeff() < 1e-12);
               // f(ur) - f(ul) = A(ul, ur)(ur - ul) up to quadrature error
               State lhs = p->flux(pr.second) - p->flux(pr.first);
               CHECK((lhs - a * (pr.second - pr.first)).norm() < 1e-9);
           });
}

TEST_CASE("shock left vector normalization", "[model]") {
    auto p = make_p_system(2.0);
    const State ul = st({1.0, 0.0});
    auto h = hugoniot_point(*p, ul, 0, -0.05);
    State l = shock_left_vector(*p, ul, h.u, 0);
    CHECK(l.dot(h.u - ul) == Approx(-0.05).margin(1e-10));
}

TEST_CASE("model errors", "[model]") {
    auto b = make_burgers();
    CHECK_THROWS_AS(rarefaction_point(*b, st({1.9}), 0, 0.5), Error);
    try {
        rarefaction_point(*b, st({1.9}), 0, 0.5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LeftDomain);
    }

    PolynomialFluxSpec spec;
    spec.n = 2;
    Monomial u1;
    u1.coef = 1.0;
    u1.exps = {1, 0, 0};
    Monomial u2;
    u2.coef = 1.0;
    u2.exps = {0, 1, 0};
    spec.flux = {{u1}, {u2}};
    spec.kinds = {FieldKind::LinearlyDegenerate, FieldKind::LinearlyDegenerate};
    spec.box = Box{st({-1.0, -1.0}), st({1.0, 1.0})};
    try {
        make_polynomial(spec);
        FAIL("expected NonHyperbolic");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonHyperbolic);
    }
}

TEST_CASE("validate_model accepts the built-in systems", "[model]") {
    CHECK(validate_model(*make_burgers()).ok);
    CHECK(validate_model(*make_p_system(2.0)).ok);
    CHECK(validate_model(*make_p_system(1.4)).ok);
}

TEST_CASE("gauss rule integrates degree 13 exactly", "[model]") {
    double s = 0.0;
    for (std::size_t k = 0; k < 7; ++k) s += gauss_weights()[k] * std::pow(gauss_nodes()[k], 13);
    CHECK(s == Approx(1.0 / 14.0).epsilon(1e-13));
}

TEST_CASE("states outside the box are rejected", "[model]") {
    auto b = make_burgers();
    try {
        eigen_at(*b, st({5.0}));
        FAIL("expected OutOfDomain");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfDomain);
    }
}
