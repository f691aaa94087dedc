#pragma once

#include "quasireg/matrix.hpp"

namespace quasireg::datasets {

/// Three measurements of starlight deflection (arc seconds) at the 1919
/// eclipse with their probable errors. The third probable error was not
/// reported by the observers; 0.6 is the assumed value.
struct Eclipse {
    Vector value;
    Vector probable_error;
};

Eclipse eclipse(double third_probable_error = 0.6);

/// Ten centred observations of a two-regressor model with known truth
/// β = (40, −37): glucose increment X1, insulin increment X2, response Y and
/// the error realisation ε that produced Y.
struct Diabetes {
    Vector x1;
    Vector x2;
    Vector y;
    Vector epsilon;
    Vector beta_true;
};

Diabetes diabetes();

}  // namespace quasireg::datasets
