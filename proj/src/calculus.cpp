#include "rsreg/calculus.hpp"

#include <string>

namespace rsreg {

namespace {

void check_eval(const ProblemInstance& instance, const Evaluation& eval) {
    if (eval.x.size() != instance.d() || eval.u.size() != instance.n() ||
        eval.v.size() != instance.n() || eval.c.size() != instance.n())
        throw DimensionMismatch("evaluation does not match instance shape");
}

}  // namespace

Vector gradient(const ProblemInstance& instance, const Evaluation& eval) {
    check_eval(instance, eval);
    const double bc = instance.b.dot(eval.c);
    const Vector kernel =
        (eval.c.array() * eval.v.array()).matrix() - bc * eval.v;
    const Vector ridge = (instance.w.array().square() * eval.ax.array()).matrix();
    return instance.A.transpose() * (kernel + ridge);
}

HessianView hessian_blocks(const ProblemInstance& instance,
                           const Evaluation& eval) {
    check_eval(instance, eval);
    const Index n = instance.n();
    if (n > kDenseBlockLimit)
        throw PreconditionViolated(
            "dense kernel blocks are limited to n <= " +
            std::to_string(kDenseBlockLimit));

    const Vector& u = eval.u;
    const Vector& v = eval.v;
    const Vector& c = eval.c;
    const Vector& b = instance.b;
    const Vector vb = (v.array() * b.array()).matrix();
    const double cb = c.dot(b);
    const double q = q_offset(instance.kind);

    HessianView view;
    view.b11 = (v.array().square().matrix()).asDiagonal();
    view.b12 = -vb * v.transpose();
    view.b13 = -v * vb.transpose();
    view.b14 = b.squaredNorm() * (v * v.transpose());
    view.b21 = ((c.array() * u.array()).matrix()).asDiagonal();
    view.b22 = (-cb * u).asDiagonal();
    view.b_full = view.b11 + view.b12 + view.b13 + view.b14 + view.b21 + view.b22;

    view.diag_surrogate =
        ((u.array() + c.array()) * u.array() + q - cb * u.array() +
         instance.w.array().square())
            .matrix();

    Matrix kernel = view.b_full;
    kernel.diagonal() += instance.w.array().square().matrix();
    view.h_full = instance.A.transpose() * kernel * instance.A;
    return view;
}

Matrix hessian(const ProblemInstance& instance, const Evaluation& eval) {
    check_eval(instance, eval);
    const Vector& u = eval.u;
    const Vector& v = eval.v;
    const Vector& c = eval.c;
    const Vector& b = instance.b;
    const double cb = c.dot(b);

    // diagonal part of B + W^2, then the three rank-one corrections
    const Vector diag = (v.array().square() + c.array() * u.array() -
                         cb * u.array() + instance.w.array().square())
                            .matrix();
    const Vector s = instance.A.transpose() * v;                          // A^T v
    const Vector p = instance.A.transpose() * (v.array() * b.array()).matrix();

    Matrix h = instance.A.transpose() * diag.asDiagonal() * instance.A;
    h.noalias() -= p * s.transpose();
    h.noalias() -= s * p.transpose();
    h.noalias() += b.squaredNorm() * (s * s.transpose());
    return h;
}

Vector hessian_diag_surrogate(const ProblemInstance& instance,
                              const Evaluation& eval) {
    check_eval(instance, eval);
    const double cb = eval.c.dot(instance.b);
    const double q = q_offset(instance.kind);
    return ((eval.u.array() + eval.c.array()) * eval.u.array() + q -
            cb * eval.u.array() + instance.w.array().square())
        .matrix();
}

Vector fd_gradient(const ProblemInstance& instance, const Vector& x,
                   double step) {
    if (step <= 0.0) throw PreconditionViolated("fd step must be positive");
    Vector g(x.size());
    Vector probe = x;
    for (Index i = 0; i < x.size(); ++i) {
        probe(i) = x(i) + step;
        const double above = evaluate(instance, probe).loss;
        probe(i) = x(i) - step;
        const double below = evaluate(instance, probe).loss;
        probe(i) = x(i);
        g(i) = (above - below) / (2.0 * step);
    }
    return g;
}

Matrix fd_hessian(const ProblemInstance& instance, const Vector& x,
                  double step) {
    if (step <= 0.0) throw PreconditionViolated("fd step must be positive");
    Matrix h(x.size(), x.size());
    Vector probe = x;
    for (Index j = 0; j < x.size(); ++j) {
        probe(j) = x(j) + step;
        const Vector above = gradient(instance, evaluate(instance, probe));
        probe(j) = x(j) - step;
        const Vector below = gradient(instance, evaluate(instance, probe));
        probe(j) = x(j);
        h.col(j) = (above - below) / (2.0 * step);
    }
    return h;
}

}  // namespace rsreg
