#include "nlror/errors.hpp"
#include "nlror/regress.hpp"

namespace nlror {

LinearModel lr_fit(const Matrix& inputs, const Vector& targets) {
    if (inputs.rows() < 1 || inputs.cols() < 1) {
        throw InvalidArgument("lr_fit: empty data");
    }
    if (inputs.rows() != targets.size()) {
        throw InvalidArgument("lr_fit: inputs and targets differ in length");
    }
    Matrix design(inputs.rows(), inputs.cols() + 1);
    design << inputs, Matrix::Ones(inputs.rows(), 1);
    const Matrix solution = pinv_solve(design, targets);

    LinearModel model;
    model.coefficients = solution.col(0).head(inputs.cols());
    model.intercept = solution(inputs.cols(), 0);
    return model;
}

Vector lr_predict(const LinearModel& model, const Matrix& inputs) {
    if (inputs.cols() != model.coefficients.size()) {
        throw InvalidArgument("lr_predict: dimension mismatch");
    }
    Vector out = inputs * model.coefficients;
    out.array() += model.intercept;
    return out;
}

} // namespace nlror
