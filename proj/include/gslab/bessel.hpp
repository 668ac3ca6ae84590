#pragma once

namespace gslab::bessel {

/// e^x K_ν(x), switching to the large-argument expansion before K underflows.
double k_scaled(double nu, double x);

/// e^{-x} I_ν(x), same idea for the growing solution.
double i_scaled(double nu, double x);

}  // namespace gslab::bessel
