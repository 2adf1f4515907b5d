#pragma once

// Reference power flow for small networks: fixed-point iteration on the
// nodal admittance equations, V_n = Y_nn^-1 (conj(S_n / V_n) - Y_ns V_s).
// Shares nothing with the sweep except the case data.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mgd/netmodel.hpp"

namespace oracle {

using Complex = std::complex<double>;

inline std::vector<Complex> nodal_fixed_point(const mgd::MicrogridCase& mg, const std::vector<Complex>& injection,
                                              double tolerance = 1e-14, int max_iterations = 10000)
{
    const auto n = static_cast<Eigen::Index>(mg.buses.size());
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
    const double z_base = mg.base.voltage * mg.base.voltage * 1000.0 / mg.base.power;
    auto index = [&](const std::string& id) {
        for (Eigen::Index i = 0; i < n; ++i)
            if (mg.buses[static_cast<std::size_t>(i)].id == id)
                return i;
        return Eigen::Index{-1};
    };
    for (const auto& br : mg.branches) {
        const Complex adm = 1.0 / (Complex{br.resistance, br.reactance} / z_base);
        const auto a = index(br.from_bus);
        const auto b = index(br.to_bus);
        y(a, a) += adm;
        y(b, b) += adm;
        y(a, b) -= adm;
        y(b, a) -= adm;
    }
    Eigen::Index slack = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (mg.buses[static_cast<std::size_t>(i)].kind == mgd::BusKind::Slack)
            slack = i;

    std::vector<Eigen::Index> rest;
    for (Eigen::Index i = 0; i < n; ++i)
        if (i != slack)
            rest.push_back(i);
    const auto m = static_cast<Eigen::Index>(rest.size());
    Eigen::MatrixXcd y_nn(m, m);
    Eigen::VectorXcd y_ns(m);
    for (Eigen::Index a = 0; a < m; ++a) {
        y_ns[a] = y(rest[a], slack);
        for (Eigen::Index b = 0; b < m; ++b)
            y_nn(a, b) = y(rest[a], rest[b]);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(y_nn);

    std::vector<Complex> v(static_cast<std::size_t>(n), Complex{1.0, 0.0});
    for (int it = 0; it < max_iterations && m > 0; ++it) {
        Eigen::VectorXcd rhs(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            const auto i = static_cast<std::size_t>(rest[a]);
            rhs[a] = std::conj(injection[i] / v[i]) - y_ns[a] * v[static_cast<std::size_t>(slack)];
        }
        const Eigen::VectorXcd next = lu.solve(rhs);
        double change = 0.0;
        for (Eigen::Index a = 0; a < m; ++a) {
            const auto i = static_cast<std::size_t>(rest[a]);
            change = std::max(change, std::abs(next[a] - v[i]));
            v[i] = next[a];
        }
        if (change < tolerance)
            break;
    }
    return v;
}

} // namespace oracle
