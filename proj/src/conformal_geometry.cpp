#include "qmink/conformal_geometry.hpp"

namespace qmink {

PartialsField central_partials(ScalarField f, double h)
{
    return [f = std::move(f), h](const CVec4c& w) {
        FieldPartials out;
        const cplx i(0, 1);
        for (int mu = 0; mu < 4; ++mu) {
            CVec4c e = CVec4c::Zero();
            e(mu) = 1.0;
            const cplx fx = (f(w + h * e) - f(w - h * e)) / (2 * h);
            const cplx fy = (f(w + i * h * e) - f(w - i * h * e)) / (2 * h);
            out.d_w(mu) = 0.5 * (fx - i * fy);
            out.d_wbar(mu) = 0.5 * (fx + i * fy);
        }
        return out;
    };
}

cplx poisson_bracket(const PartialsField& f, const PartialsField& g, const CVec4c& w, double lambda)
{
    const CVec4c d = w - w.conjugate();
    const cplx d2 = minkowski(d, d);
    Eigen::Matrix4cd T;
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            T(mu, nu) = (mu == nu ? d2 * metric(mu) : cplx(0)) - 2.0 * d(mu) * d(nu);
    const FieldPartials pf = f(w);
    const FieldPartials pg = g(w);
    const cplx fg = (pf.d_w.transpose() * T * pg.d_wbar).value();
    const cplx gf = (pg.d_w.transpose() * T * pf.d_wbar).value();
    return cplx(0, 1) / (2 * lambda) * (fg - gf);
}

ScalarField momentum_component(const Mat4c& X, double lambda)
{
    return [X, lambda](const CVec4c& w) {
        const Mat4c J = momentum_J_lambda<double>(matrix_of(w), lambda);
        return cplx(0.5 * (J * X).trace().real(), 0.0);
    };
}

}  // namespace qmink
