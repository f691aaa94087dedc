#include "quasireg/datasets.hpp"

namespace quasireg::datasets {

Eclipse eclipse(double third_probable_error) {
    return {{1.98, 1.61, 0.93}, {0.12, 0.30, third_probable_error}};
}

Diabetes diabetes() {
    Diabetes d;
    d.x1 = {-0.061, -0.051, 0.059, -0.271, 0.109, 0.099, -0.101, 0.149, 0.089, -0.021};
    d.x2 = {-0.055, -0.055, 0.065, -0.255, 0.085, 0.095, -0.085, 0.155, 0.065, -0.015};
    d.epsilon = {0.3132, 0.9672, 1.5252, -0.7748, -1.0008, -1.6578, -0.4138, 1.6742, -0.3428, -0.2898};
    d.y = {-0.0918, 0.9622, 1.4802, -2.1798, 0.2142, -1.2128, -1.3088, 1.8992, 0.8122, -0.5748};
    d.beta_true = {40.0, -37.0};
    return d;
}

}  // namespace quasireg::datasets
