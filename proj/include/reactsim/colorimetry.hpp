#pragma once

#include "reactsim/chemdb.hpp"

#include <array>
#include <filesystem>
#include <utility>
#include <vector>

namespace reactsim {

/// Sampled spectrum: (wavelength nm, relative power). Wavelengths strictly
/// increase and must span at least 380-780 nm.
class SpectralPowerDistribution {
 public:
  explicit SpectralPowerDistribution(std::vector<std::pair<double, double>> samples);

  const std::vector<std::pair<double, double>>& samples() const { return samples_; }

  /// Linear interpolation between samples; 0 outside the sampled range.
  double power_at(double wavelength_nm) const;

  SpectralPowerDistribution scaled(double factor) const;

 private:
  std::vector<std::pair<double, double>> samples_;
};

/// CIE 1931 2-degree colour-matching functions on a regular grid.
class CmfTable {
 public:
  struct Row {
    double wavelength_nm;
    double x, y, z;
  };

  explicit CmfTable(std::vector<Row> rows);
  static CmfTable load(const std::filesystem::path& csv);

  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<Row> rows_;
};

struct XYZ {
  double x = 0, y = 0, z = 0;
};

enum class RgbEncoding {
  linear,      // default; matches the reference (255,2,0) for a 1000 K blackbody
  srgb_gamma,  // IEC 61966-2-1 transfer curve applied after normalisation
};

/// Trapezoidal integration of the spectrum against the CMFs over the table range.
XYZ spectrum_to_xyz(const SpectralPowerDistribution& spd, const CmfTable& cmf);

/// XYZ -> sRGB primaries (D65 white), clip negatives, scale so the largest
/// channel is 1, encode, and quantise to 0-255.
RGB spectrum_to_rgb(const SpectralPowerDistribution& spd, const CmfTable& cmf,
                    RgbEncoding encoding = RgbEncoding::linear);

/// Planck radiance sampled every 5 nm over 380-780 nm, peak-normalised to 1.
SpectralPowerDistribution blackbody_spd(double temperature_k);

}  // namespace reactsim
