#include "fronttrack/riemann.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fronttrack {

const char* to_string(WaveKind kind) {
    switch (kind) {
    case WaveKind::Shock: return "shock";
    case WaveKind::RarefactionFan: return "rarefaction";
    case WaveKind::Contact: return "contact";
    case WaveKind::NonPhysical: return "non_physical";
    }
    return "unknown";
}

State wave_curve_point(const SystemModel& model, const State& u0, int i, double s) {
    if (s < 0.0 && model.genuinely_nonlinear(i)) return hugoniot_point(model, u0, i, s).u;
    return rarefaction_point(model, u0, i, s);
}

std::vector<State> lax_map(const SystemModel& model, const State& ul, const State& sigma) {
    const int n = model.n_eqs();
    std::vector<State> omega;
    omega.reserve(static_cast<std::size_t>(n + 1));
    omega.push_back(ul);
    for (int i = 0; i < n; ++i) omega.push_back(wave_curve_point(model, omega.back(), i, sigma(i)));
    return omega;
}

Wave make_wave(const SystemModel& model, const State& ul, int i, double s) {
    Wave w;
    w.family = i;
    w.strength = s;
    w.left_state = ul;
    if (model.genuinely_nonlinear(i) && s < 0.0) {
        const auto h = hugoniot_point(model, ul, i, s);
        w.kind = WaveKind::Shock;
        w.right_state = h.u;
        w.speed = h.speed;
        return w;
    }
    w.kind = model.genuinely_nonlinear(i) ? WaveKind::RarefactionFan : WaveKind::Contact;
    w.right_state = rarefaction_point(model, ul, i, s);
    w.speed = averaged_speed(model, ul, w.right_state, i);
    return w;
}

namespace {

// Rebuilds a wave whose endpoints are already known (the right state may have been pinned).
Wave wave_between(const SystemModel& model, const State& ul, const State& ur, int i, double s) {
    Wave w;
    w.family = i;
    w.strength = s;
    w.left_state = ul;
    w.right_state = ur;
    if (model.genuinely_nonlinear(i))
        w.kind = s < 0.0 ? WaveKind::Shock : WaveKind::RarefactionFan;
    else
        w.kind = WaveKind::Contact;
    w.speed = averaged_speed(model, ul, ur, i);
    return w;
}

} // namespace

WaveFan solve_riemann(const SystemModel& model, const State& ul, const State& ur) {
    const int n = model.n_eqs();
    if (!model.domain().contains(ul) || !model.domain().contains(ur))
        throw Error(ErrorCode::OutOfDomain, "Riemann data outside the domain box");

    const Matrix r0 = eigen_at(model, ul).right;
    const auto j0 = r0.partialPivLu();
    State sigma = j0.solve(ur - ul);

    auto residual_of = [&](const State& s, std::vector<State>& omega) -> State {
        omega = lax_map(model, ul, s);
        return omega.back() - ur;
    };

    std::vector<State> omega;
    State f;
    bool ok = false;
    double norm = std::numeric_limits<double>::infinity();
    for (int halvings = 0; halvings < 8 && !ok; ++halvings) {
        try {
            f = residual_of(sigma, omega);
            norm = f.cwiseAbs().maxCoeff();
            ok = true;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::LeftDomain && e.code() != ErrorCode::OutOfDomain) throw;
            sigma *= 0.5;
        }
    }
    if (!ok) throw Error(ErrorCode::NoConvergence, "initial strengths leave the domain");

    bool use_chord = true;
    Matrix jac = r0;
    int it = 0;
    for (; it < 60 && norm > 1e-14; ++it) {
        if (!use_chord) {
            for (int c = 0; c < n; ++c) {
                const double h = 1e-7;
                State sp = sigma;
                sp(c) += h;
                std::vector<State> tmp;
                jac.col(c) = (residual_of(sp, tmp) - f) / h;
            }
        }
        const State step = (use_chord ? j0.solve(-f) : State(jac.partialPivLu().solve(-f)));
        double alpha = 1.0;
        bool improved = false;
        for (int k = 0; k < 20; ++k) {
            const State trial = sigma + alpha * step;
            std::vector<State> tomega;
            try {
                const State tf = residual_of(trial, tomega);
                const double tnorm = tf.cwiseAbs().maxCoeff();
                if (tnorm < norm) {
                    // Chord steps contract by O(|sigma|); fall back to a fresh Jacobian if they stall.
                    if (use_chord && tnorm > 0.5 * norm) use_chord = false;
                    sigma = trial;
                    f = tf;
                    omega = std::move(tomega);
                    norm = tnorm;
                    improved = true;
                    break;
                }
            } catch (const Error& e) {
                if (e.code() != ErrorCode::LeftDomain && e.code() != ErrorCode::OutOfDomain &&
                    e.code() != ErrorCode::NoConvergence)
                    throw;
            }
            alpha *= 0.5;
        }
        if (!improved) {
            if (use_chord) {
                use_chord = false;
                continue;
            }
            break;
        }
    }
    if (!(norm <= 1e-9)) {
        std::ostringstream os;
        os << "Riemann Newton residual " << norm;
        throw Error(ErrorCode::NoConvergence, os.str());
    }

    WaveFan fan;
    fan.iterations = it;
    fan.residual = norm;
    fan.strengths = sigma;
    omega.back() = ur;
    fan.states = omega;
    for (int i = 0; i < n; ++i) {
        const auto si = static_cast<std::size_t>(i);
        if (std::abs(sigma(i)) < 1e-14) continue;
        fan.waves.push_back(wave_between(model, omega[si], omega[si + 1], i, sigma(i)));
    }
    return fan;
}

std::vector<SubJump> discretize_rarefaction(const SystemModel& model, const Wave& wave, double nu) {
    if (wave.kind != WaveKind::RarefactionFan) throw Error(ErrorCode::InvalidArgument, "not a rarefaction fan");
    if (!(nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "nu must be positive");
    const double ratio = wave.strength / nu;
    const int count = std::max(1, static_cast<int>(std::ceil(ratio * (1.0 - 1e-12))));
    const double piece = wave.strength / count;
    std::vector<SubJump> out;
    out.reserve(static_cast<std::size_t>(count));
    State left = wave.left_state;
    for (int k = 0; k < count; ++k) {
        SubJump j;
        j.left = left;
        j.right = k + 1 == count ? wave.right_state : rarefaction_point(model, left, wave.family, piece);
        j.strength = piece;
        j.speed = averaged_speed(model, j.left, j.right, wave.family);
        left = j.right;
        out.push_back(std::move(j));
    }
    return out;
}

WaveFan solve_simplified(const SystemModel& model, const State& ul, const State& ur,
                         const std::vector<IncomingWave>& incoming) {
    const int n = model.n_eqs();
    std::vector<IncomingWave> phys;
    for (const auto& w : incoming) {
        if (!w.non_physical) phys.push_back(w);
    }
    std::vector<std::pair<int, double>> out;  // (family, strength), ordered by family
    if (phys.size() == 1) {
        out.emplace_back(phys[0].family, phys[0].strength);
    } else if (phys.size() == 2) {
        if (phys[0].family == phys[1].family) {
            out.emplace_back(phys[0].family, phys[0].strength + phys[1].strength);
        } else if (phys[0].family > phys[1].family) {
            out.emplace_back(phys[1].family, phys[1].strength);
            out.emplace_back(phys[0].family, phys[0].strength);
        } else {
            out.emplace_back(phys[0].family, phys[0].strength);
            out.emplace_back(phys[1].family, phys[1].strength);
        }
    } else if (phys.size() > 2) {
        throw Error(ErrorCode::InvalidArgument, "simplified solver takes at most two physical waves");
    }

    WaveFan fan;
    fan.strengths = State::Zero(n);
    fan.states.push_back(ul);
    State cur = ul;
    for (const auto& [fam, s] : out) {
        fan.strengths(fam) += s;
        if (std::abs(s) < 1e-14) continue;
        Wave w = make_wave(model, cur, fam, s);
        cur = w.right_state;
        fan.waves.push_back(std::move(w));
    }
    fan.states.push_back(cur);
    Wave np;
    np.family = -1;
    np.kind = WaveKind::NonPhysical;
    np.left_state = cur;
    np.right_state = ur;
    np.strength = (ur - cur).norm();
    np.speed = model.np_speed();
    fan.residual = np.strength;
    fan.waves.push_back(std::move(np));
    fan.states.push_back(ur);
    return fan;
}

LaxReport lax_check(const SystemModel& model, const Wave& wave) {
    if (wave.kind != WaveKind::Shock && wave.kind != WaveKind::Contact)
        throw Error(ErrorCode::InvalidArgument, "Lax check applies to shocks and contacts");
    LaxReport r;
    r.left_margin = eigenvalue_at(model, wave.left_state, wave.family) - wave.speed;
    r.right_margin = wave.speed - eigenvalue_at(model, wave.right_state, wave.family);
    return r;
}

} // namespace fronttrack
