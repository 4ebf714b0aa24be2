#pragma once

#include "sigverify/sigdata.hpp"

namespace sigverify {

/// Drops samples whose pressure is exactly zero (stylus input only).
/// Throws InvalidArgument for finger input or when fewer than two samples remain.
Signature remove_zero_pressure(const Signature& sig);

/// Min-max scales x, y and pressure to [0, 1] and then subtracts the mean of the
/// scaled channel. A constant channel becomes all zeros.
Signature normalize_sigstat(const Signature& sig);

/// Maps x and y onto [-1, 1] and pressure onto [0, 1]. Constant spatial channels
/// map to 0; constant pressure and finger input map to all ones.
Signature normalize_mad(const Signature& sig);

}  // namespace sigverify
