#include "softglcm/error.hpp"
#include "softglcm/losses.hpp"

#include <cmath>
#include <string>

namespace softglcm {

std::vector<double> SsimConfig::gaussian_window() const {
    if (window < 1 || window % 2 == 0) throw ContractError("SsimConfig: window side must be odd");
    if (!(sigma > 0.0)) throw ContractError("SsimConfig: sigma must be positive");
    const int half = window / 2;
    std::vector<double> g(window);
    double sum = 0.0;
    for (int i = 0; i < window; ++i) {
        const double x = i - half;
        g[i] = std::exp(-x * x / (2.0 * sigma * sigma));
        sum += g[i];
    }
    for (double& v : g) v /= sum;
    std::vector<double> w(static_cast<std::size_t>(window) * window);
    for (int r = 0; r < window; ++r) {
        for (int c = 0; c < window; ++c) w[static_cast<std::size_t>(r) * window + c] = g[r] * g[c];
    }
    return w;
}

SsimResult ssim_loss(const PixelView& predicted, const PixelView& target,
                     const SsimConfig& config) {
    if (predicted.height != target.height || predicted.width != target.width ||
        predicted.size() != target.size()) {
        throw ContractError("ssim_loss: shape mismatch (" + std::to_string(predicted.height) +
                            "x" + std::to_string(predicted.width) + " vs " +
                            std::to_string(target.height) + "x" + std::to_string(target.width) +
                            ")");
    }
    const int h = predicted.height;
    const int w = predicted.width;

    int wh = 0, ww = 0;
    std::vector<double> weights;
    if (h >= config.window && w >= config.window) {
        wh = ww = config.window;
        weights = config.gaussian_window();
    } else {
        wh = h;
        ww = w;
        weights.assign(static_cast<std::size_t>(h) * w, 1.0 / (static_cast<double>(h) * w));
    }
    const double c1 = config.c1();
    const double c2 = config.c2();
    const int pos_rows = h - wh + 1;
    const int pos_cols = w - ww + 1;
    const double inv_positions = 1.0 / (static_cast<double>(pos_rows) * pos_cols);

    SsimResult out;
    out.gradient.assign(static_cast<std::size_t>(h) * w, 0.0);
    double total = 0.0;
    for (int pr = 0; pr < pos_rows; ++pr) {
        for (int pc = 0; pc < pos_cols; ++pc) {
            double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
            for (int r = 0; r < wh; ++r) {
                for (int c = 0; c < ww; ++c) {
                    const double k = weights[static_cast<std::size_t>(r) * ww + c];
                    const double x = predicted.at(pr + r, pc + c);
                    const double y = target.at(pr + r, pc + c);
                    mx += k * x;
                    my += k * y;
                    sxx += k * x * x;
                    syy += k * y * y;
                    sxy += k * x * y;
                }
            }
            const double vx = sxx - mx * mx;
            const double vy = syy - my * my;
            const double cxy = sxy - mx * my;
            const double a1 = 2.0 * mx * my + c1;
            const double a2 = 2.0 * cxy + c2;
            const double b1 = mx * mx + my * my + c1;
            const double b2 = vx + vy + c2;
            const double s = (a1 * a2) / (b1 * b2);
            total += s;

            // dS/dx_i = k_i [alpha + beta y_i + gamma x_i]
            const double beta = 2.0 * s / a2;
            const double gamma = -2.0 * s / b2;
            const double alpha =
                s * (2.0 * my / a1 - 2.0 * mx / b1) - beta * my - gamma * mx;
            for (int r = 0; r < wh; ++r) {
                for (int c = 0; c < ww; ++c) {
                    const double k = weights[static_cast<std::size_t>(r) * ww + c];
                    const double x = predicted.at(pr + r, pc + c);
                    const double y = target.at(pr + r, pc + c);
                    // loss = 1 - mean S, hence the sign flip.
                    out.gradient[static_cast<std::size_t>(pr + r) * w + (pc + c)] -=
                        inv_positions * k * (alpha + beta * y + gamma * x);
                }
            }
        }
    }
    out.ssim = total * inv_positions;
    out.loss = 1.0 - out.ssim;
    return out;
}

}  // namespace softglcm
