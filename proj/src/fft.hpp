// SPDX-License-Identifier: Apache-2.0
//
// Unitary DFT between dual midpoint grids, backed by FFTW.
#pragma once

#include <complex>
#include <span>

#include "tfqkd/chronocyclic.hpp"

namespace tfqkd::detail {

enum class FourierSign { Negative = -1, Positive = +1 };

/// out(y_m) = (dx / sqrt(2pi)) sum_k in(x_k) exp(sign * i x_k y_m), in place.
/// `from` and `to` must be dual (n * dx * dy = 2 pi).
void grid_dft(std::span<cplx> data, const UniformGrid& from, const UniformGrid& to, FourierSign sign);

/// The same transform applied along both axes of a square matrix whose rows
/// and columns share the grid `from`.
void grid_dft_2d(ComplexMatrix& data, const UniformGrid& from, const UniformGrid& to, FourierSign sign);

}  // namespace tfqkd::detail
