#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "verdict/encoder.hpp"

namespace testutil {

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::string worst_tensor;
    std::size_t params_checked = 0;
};

// Mean cross-entropy computed through the inference path only; the finite
// difference oracle never touches loss_and_grad.
inline double batch_loss(const verdict::ClassifierModel& model,
                         const std::vector<std::pair<verdict::TokenSequence, int>>& batch) {
    double loss = 0.0;
    for (const auto& [seq, label] : batch) {
        verdict::Prediction p = verdict::predict(model, seq);
        loss += -std::log(p.probabilities[static_cast<std::size_t>(label)]);
    }
    return loss / static_cast<double>(batch.size());
}

// Central finite differences over every parameter, step h, dropout assumed
// disabled in the model config. Relative error uses max(|analytic|, |fd|)
// with differences below 1e-10 treated as exact (the fd noise floor).
inline GradCheckResult gradient_check(verdict::ClassifierModel& model,
                                      const std::vector<std::pair<verdict::TokenSequence, int>>& batch,
                                      double h = 1e-5) {
    using namespace verdict;
    ParamSet grads;
    loss_and_grad(model, batch, &grads);

    std::vector<Matrix*> params = tensor_list(model.params);
    const ParamSet& grads_view = grads;
    std::vector<const Matrix*> analytic = tensor_list(grads_view);
    std::vector<std::string> names = tensor_names(model.config);

    GradCheckResult result;
    for (std::size_t t = 0; t < params.size(); ++t) {
        for (std::size_t i = 0; i < params[t]->size(); ++i) {
            double saved = params[t]->data[i];
            params[t]->data[i] = saved + h;
            double up = batch_loss(model, batch);
            params[t]->data[i] = saved - h;
            double down = batch_loss(model, batch);
            params[t]->data[i] = saved;

            double fd = (up - down) / (2.0 * h);
            double ga = analytic[t]->data[i];
            double err = std::abs(fd - ga);
            double rel = err <= 1e-10 ? 0.0 : err / std::max(std::abs(ga), std::abs(fd));
            if (rel > result.max_rel_err) {
                result.max_rel_err = rel;
                result.worst_tensor = names[t];
            }
            ++result.params_checked;
        }
    }
    return result;
}

}  // namespace testutil
