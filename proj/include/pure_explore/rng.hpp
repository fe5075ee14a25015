#pragma once
#include <cmath>
#include <cstdint>
#include <span>

namespace pure_explore {

// Counter-based generator built on the splitmix64 finalizer. Every stream is a
// pure function of (seed, draw index), so replication streams split from a
// master seed are reproducible regardless of scheduling or thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  // Stream splitting: child seed = mix(master xor golden * (stream + 1)).
  static Rng split(std::uint64_t master, std::uint64_t stream) {
    return Rng(mix(master ^ (0x9E3779B97F4A7C15ULL * (stream + 1))));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via the 128-layer ziggurat; one word per draw on the
  // fast path, rejection only in the wedges and the tail.
  double normal() {
    const auto& z = ziggurat_tables();
    for (;;) {
      const std::uint64_t u = next_u64();
      const int i = static_cast<int>(u & 127);
      const std::int64_t hz = static_cast<std::int64_t>(u) >> 8;  // signed 56-bit
      const double x = static_cast<double>(hz) * z.w[i];
      if (std::abs(hz) < z.k[i]) return x;
      if (i == 0) {  // tail beyond R
        double xx, yy;
        do {
          xx = -std::log(1.0 - uniform()) * kInvR;
          yy = -std::log(1.0 - uniform());
        } while (yy + yy < xx * xx);
        return hz > 0 ? kR + xx : -(kR + xx);
      }
      if (z.f[i] + uniform() * (z.f[i - 1] - z.f[i]) < std::exp(-0.5 * x * x)) return x;
    }
  }

  // Marsaglia-Tsang for shape >= 1 (all Beta posteriors here have integer
  // parameters >= 1).
  double gamma(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  // Index sampled proportionally to nonnegative weights (wsum = their sum).
  int categorical(std::span<const double> w, double wsum) {
    const double u = uniform() * wsum;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      acc += w[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(w.size()) - 1;
  }

 private:
  static constexpr double kR = 3.442619855899;
  static constexpr double kInvR = 1.0 / kR;

  struct Ziggurat {
    std::int64_t k[128];
    double w[128];
    double f[128];
    Ziggurat() {
      const double m = 0x1.0p55;  // |hz| < 2^55
      const double vn = 9.91256303526217e-3;
      double dn = kR, tn = kR;
      const double q = vn / std::exp(-0.5 * dn * dn);
      k[0] = static_cast<std::int64_t>((dn / q) * m);
      k[1] = 0;
      w[0] = q / m;
      w[127] = dn / m;
      f[0] = 1.0;
      f[127] = std::exp(-0.5 * dn * dn);
      for (int i = 126; i >= 1; --i) {
        dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
        k[i + 1] = static_cast<std::int64_t>((dn / tn) * m);
        tn = dn;
        f[i] = std::exp(-0.5 * dn * dn);
        w[i] = dn / m;
      }
    }
  };

  static const Ziggurat& ziggurat_tables() {
    static const Ziggurat z;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace pure_explore
