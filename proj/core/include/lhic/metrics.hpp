#pragma once

#include <string>

#include "lhic/image.hpp"

namespace lhic {

// 10*log10(255^2 / MSE) over all pixels and channels; +inf when equal.
double psnr(const ImageU8& a, const ImageU8& b);

// 5-scale MS-SSIM, 11x11 Gaussian window sigma 1.5, Wang et al. weights
// {0.0448, 0.2856, 0.3001, 0.2363, 0.1333}, computed per channel and
// averaged. Images smaller than 176x176 use fewer scales (renormalized
// weights) and set *reduced_scales when provided.
double ms_ssim(const ImageU8& a, const ImageU8& b, bool* reduced_scales = nullptr);

struct QualityReport {
  double psnr_db = 0;   // +inf reported as "inf"
  double ms_ssim = 0;
  double bpp = 0;       // bits/pixel/channel; 0 when no bitstream given

  std::string to_json() const;
  std::string to_csv_row() const;  // psnr,ms_ssim,bpp
};

}  // namespace lhic
