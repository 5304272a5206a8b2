#include <cmath>
#include <numbers>

#include "holoflow/fft.hpp"

namespace holoflow {

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

namespace {

// In-place iterative Cooley-Tukey in natural (zero-based) frequency order.
// Twiddles come from a direct table so error stays at a few ulp per stage.
void transform(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    std::vector<Complex> twiddle(n / 2);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddle[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi *
                                         static_cast<double>(k) / static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const Complex w = twiddle[j * stride];
                const Complex u = a[i + j];
                const Complex v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (Complex& x : a) x *= inv_n;
    }
}

void require_size(std::size_t n) {
    if (n < 2 || !is_power_of_two(n))
        throw InvalidArgumentError("fft length must be a power of two, at least 2; got " +
                                   std::to_string(n));
}

std::vector<Complex> to_two_sided(const std::vector<Complex>& natural) {
    const std::size_t n = natural.size();
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = natural[(i + n / 2) % n];
    return out;
}

std::vector<Complex> from_two_sided(const std::vector<Complex>& two_sided) {
    const std::size_t n = two_sided.size();
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) out[(i + n / 2) % n] = two_sided[i];
    return out;
}

}  // namespace

std::vector<Complex> fft(const std::vector<Complex>& x) {
    require_size(x.size());
    std::vector<Complex> a = x;
    transform(a, false);
    return to_two_sided(a);
}

std::vector<Complex> ifft(const std::vector<Complex>& x) {
    require_size(x.size());
    std::vector<Complex> a = from_two_sided(x);
    transform(a, true);
    return a;
}

}  // namespace holoflow
