#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gapower {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two periodic quantities were combined across different sampling grids.
struct GridMismatch : Error {
  using Error::Error;
};

/// A harmonic order at or beyond the Nyquist bin of the target grid.
struct AliasingOrder : Error {
  int order;
  AliasingOrder(int h, const std::string& what) : Error(what), order(h) {}
};

/// A vector inversion or division met samples with a vanishing norm.
struct NearZeroVector : Error {
  std::vector<std::size_t> samples;
  NearZeroVector(std::vector<std::size_t> s, const std::string& what)
      : Error(what), samples(std::move(s)) {}
};

/// Current carries out-of-band energy while a linear layout was requested.
struct OutOfBandInLinearMode : Error {
  double ratio;  // out-of-band RMS relative to the total current RMS
  OutOfBandInLinearMode(double r, const std::string& what) : Error(what), ratio(r) {}
};

/// Every sample of an impedance computation fell below the current threshold.
struct AllSingular : Error {
  using Error::Error;
};

/// A dc voltage term was applied to a series circuit with a capacitor.
struct DcWithCapacitor : Error {
  using Error::Error;
};

/// Malformed input file (waveform CSV or scenario config).
struct ParseError : Error {
  using Error::Error;
};

/// Filesystem-level failure.
struct IoError : Error {
  using Error::Error;
};

/// Unknown demo, scenario or column name.
struct UnknownName : Error {
  using Error::Error;
};

}  // namespace gapower
