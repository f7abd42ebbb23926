#include "lhic/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace lhic {

double psnr(const ImageU8& a, const ImageU8& b) {
  if (a.width != b.width || a.height != b.height)
    throw Error(ErrorKind::Shape, "psnr: image dims differ");
  double se = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - b.data[i];
    se += d * d;
  }
  if (se == 0) return std::numeric_limits<double>::infinity();
  const double mse = se / static_cast<double>(a.data.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace {

using Plane = std::vector<double>;  // h*w row-major

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kC2 = (0.03 * 255) * (0.03 * 255);

std::vector<double> gaussian_kernel() {
  std::vector<double> k(kWin);
  double sum = 0;
  for (int i = 0; i < kWin; ++i) {
    const double d = i - (kWin - 1) / 2.0;
    k[static_cast<size_t>(i)] = std::exp(-d * d / (2 * kSigma * kSigma));
    sum += k[static_cast<size_t>(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable valid-region Gaussian filter; output is (h-10) x (w-10).
Plane gauss_valid(const Plane& in, int w, int h, int* ow, int* oh) {
  static const std::vector<double> k = gaussian_kernel();
  const int tw = w - kWin + 1, th = h;
  Plane tmp(static_cast<size_t>(tw) * th);
  for (int y = 0; y < th; ++y)
    for (int x = 0; x < tw; ++x) {
      double acc = 0;
      for (int i = 0; i < kWin; ++i)
        acc += k[static_cast<size_t>(i)] * in[static_cast<size_t>(y) * w + x + i];
      tmp[static_cast<size_t>(y) * tw + x] = acc;
    }
  *ow = tw;
  *oh = h - kWin + 1;
  Plane out(static_cast<size_t>(tw) * (*oh));
  for (int y = 0; y < *oh; ++y)
    for (int x = 0; x < tw; ++x) {
      double acc = 0;
      for (int i = 0; i < kWin; ++i)
        acc += k[static_cast<size_t>(i)] * tmp[static_cast<size_t>(y + i) * tw + x];
      out[static_cast<size_t>(y) * tw + x] = acc;
    }
  return out;
}

Plane downsample2(const Plane& in, int w, int h, int* ow, int* oh) {
  *ow = w / 2;
  *oh = h / 2;
  Plane out(static_cast<size_t>(*ow) * (*oh));
  for (int y = 0; y < *oh; ++y)
    for (int x = 0; x < *ow; ++x)
      out[static_cast<size_t>(y) * (*ow) + x] =
          0.25 * (in[static_cast<size_t>(2 * y) * w + 2 * x] +
                  in[static_cast<size_t>(2 * y) * w + 2 * x + 1] +
                  in[static_cast<size_t>(2 * y + 1) * w + 2 * x] +
                  in[static_cast<size_t>(2 * y + 1) * w + 2 * x + 1]);
  return out;
}

// Mean luminance and contrast-structure terms at one scale.
void ssim_terms(const Plane& a, const Plane& b, int w, int h, double* l_mean,
                double* cs_mean) {
  int ow = 0, oh = 0;
  Plane mu_a = gauss_valid(a, w, h, &ow, &oh);
  Plane mu_b = gauss_valid(b, w, h, &ow, &oh);
  Plane aa(a.size()), bb(a.size()), ab(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  Plane s_aa = gauss_valid(aa, w, h, &ow, &oh);
  Plane s_bb = gauss_valid(bb, w, h, &ow, &oh);
  Plane s_ab = gauss_valid(ab, w, h, &ow, &oh);
  double l_acc = 0, cs_acc = 0;
  for (size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double va = s_aa[i] - ma * ma;
    const double vb = s_bb[i] - mb * mb;
    const double cov = s_ab[i] - ma * mb;
    l_acc += (2 * ma * mb + kC1) / (ma * ma + mb * mb + kC1);
    cs_acc += (2 * cov + kC2) / (va + vb + kC2);
  }
  *l_mean = l_acc / static_cast<double>(mu_a.size());
  *cs_mean = cs_acc / static_cast<double>(mu_a.size());
}

Plane channel_plane(const ImageU8& img, int c) {
  Plane p(static_cast<size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      p[static_cast<size_t>(y) * img.width + x] = img.at(x, y, c);
  return p;
}

}  // namespace

double ms_ssim(const ImageU8& a, const ImageU8& b, bool* reduced_scales) {
  if (a.width != b.width || a.height != b.height)
    throw Error(ErrorKind::Shape, "ms_ssim: image dims differ");
  // Largest scale count supported by the image: the smallest dyadic
  // level must still fit an 11x11 window.
  int scales = 0;
  int m = std::min(a.width, a.height);
  while (scales < 5 && m >= kWin) {
    ++scales;
    m /= 2;
  }
  if (scales == 0)
    throw Error(ErrorKind::Shape, "ms_ssim: image smaller than the 11x11 window");
  if (reduced_scales) *reduced_scales = scales < 5;

  double wsum = 0;
  for (int j = 0; j < scales; ++j) wsum += kWeights[j];

  double result_acc = 0;
  for (int c = 0; c < 3; ++c) {
    Plane pa = channel_plane(a, c);
    Plane pb = channel_plane(b, c);
    int w = a.width, h = a.height;
    double score = 1.0;
    for (int j = 0; j < scales; ++j) {
      double l = 0, cs = 0;
      ssim_terms(pa, pb, w, h, &l, &cs);
      const double weight = kWeights[j] / wsum;
      if (j == scales - 1) {
        const double ssim = std::max(l * cs, 0.0);
        score *= std::pow(ssim, weight);
      } else {
        score *= std::pow(std::max(cs, 0.0), weight);
        int nw = 0, nh = 0;
        pa = downsample2(pa, w, h, &nw, &nh);
        pb = downsample2(pb, w, h, &nw, &nh);
        w = nw;
        h = nh;
      }
    }
    result_acc += score;
  }
  return result_acc / 3.0;
}

std::string QualityReport::to_json() const {
  std::ostringstream os;
  os.precision(10);
  os << "{\"psnr_db\": ";
  if (std::isinf(psnr_db))
    os << "\"inf\"";
  else
    os << psnr_db;
  os << ", \"ms_ssim\": " << ms_ssim << ", \"bpp\": " << bpp << "}";
  return os.str();
}

std::string QualityReport::to_csv_row() const {
  std::ostringstream os;
  os.precision(10);
  if (std::isinf(psnr_db))
    os << "inf";
  else
    os << psnr_db;
  os << ',' << ms_ssim << ',' << bpp;
  return os.str();
}

}  // namespace lhic
