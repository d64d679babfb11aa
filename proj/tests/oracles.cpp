#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "handclust/rng.hpp"

namespace handclust::oracles {

std::vector<std::int64_t> brute_force_edt_squared(const BinaryImage& bin) {
    const int w = bin.width, h = bin.height;
    std::vector<std::pair<int, int>> zeros;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!bin.at(x, y)) zeros.emplace_back(x, y);
        }
    }
    if (zeros.empty()) throw std::runtime_error("oracle: no background pixel");
    std::vector<std::int64_t> out(static_cast<std::size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!bin.at(x, y)) continue;
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (const auto& [zx, zy] : zeros) {
                const std::int64_t dx = x - zx, dy = y - zy;
                best = std::min(best, dx * dx + dy * dy);
            }
            out[static_cast<std::size_t>(y) * w + x] = best;
        }
    }
    return out;
}

std::vector<int> flood_fill_areas(const BinaryImage& bin, int connectivity) {
    const int w = bin.width, h = bin.height;
    std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<int> areas;
    std::vector<std::pair<int, int>> stack;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!bin.at(sx, sy) || seen[static_cast<std::size_t>(sy) * w + sx]) continue;
            int area = 0;
            stack.emplace_back(sx, sy);
            seen[static_cast<std::size_t>(sy) * w + sx] = 1;
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                ++area;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (connectivity == 1 && dx != 0 && dy != 0) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
                        if (!bin.bits[idx] || seen[idx]) continue;
                        seen[idx] = 1;
                        stack.emplace_back(nx, ny);
                    }
                }
            }
            areas.push_back(area);
        }
    }
    return areas;
}

int otsu_threshold_sweep(const std::vector<std::uint8_t>& pixels) {
    double best = -1.0;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        std::int64_t n0 = 0, n1 = 0;
        double s0 = 0.0, s1 = 0.0;
        for (const auto p : pixels) {
            if (p <= t) {
                ++n0;
                s0 += p;
            } else {
                ++n1;
                s1 += p;
            }
        }
        if (n0 == 0 || n1 == 0) continue;
        const double mu0 = s0 / n0, mu1 = s1 / n1;
        const double between = double(n0) * double(n1) * (mu0 - mu1) * (mu0 - mu1);
        if (between > best) {
            best = between;
            best_t = t;
        }
    }
    return best_t;
}

void jacobi_eigen(std::vector<std::vector<double>> a,
                  std::vector<double>& eigenvalues,
                  std::vector<std::vector<double>>& eigenvectors) {
    const std::size_t n = a.size();
    eigenvectors.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) eigenvectors[i][i] = 1.0;

    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        }
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = eigenvectors[k][p], vkq = eigenvectors[k][q];
                    eigenvectors[k][p] = c * vkp - s * vkq;
                    eigenvectors[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i][i];

    // sort descending, carrying eigenvector columns along
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return eigenvalues[x] > eigenvalues[y]; });
    std::vector<double> ev(n);
    std::vector<std::vector<double>> vecs(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        ev[j] = eigenvalues[order[j]];
        for (std::size_t i = 0; i < n; ++i) vecs[i][j] = eigenvectors[i][order[j]];
    }
    eigenvalues = std::move(ev);
    eigenvectors = std::move(vecs);
}

double log_response_at(const GrayImage& img, int cx, int cy, double sigma) {
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    double acc = 0.0;
    const double s2 = sigma * sigma;
    const double norm = 1.0 / (2.0 * 3.141592653589793 * s2);
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const int x = cx + dx, y = cy + dy;
            if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
            const double g = norm * std::exp(-0.5 * (dx * dx + dy * dy) / s2);
            const double lap = g * ((dx * dx + dy * dy - 2.0 * s2) / (s2 * s2));
            acc += (img.at(x, y) / 255.0) * lap;
        }
    }
    return -s2 * acc; // positive at the center of a bright blob
}

double log_sigma_sweep(const GrayImage& img, int cx, int cy, double min_sigma,
                       double max_sigma, int steps) {
    double best_sigma = min_sigma;
    double best = -1e300;
    for (int i = 0; i < steps; ++i) {
        const double sigma =
            min_sigma * std::pow(max_sigma / min_sigma,
                                 static_cast<double>(i) / (steps - 1));
        const double r = log_response_at(img, cx, cy, sigma);
        if (r > best) {
            best = r;
            best_sigma = sigma;
        }
    }
    return best_sigma;
}

BinaryImage random_mask(int w, int h, double density, std::uint64_t seed) {
    BinaryImage out(w, h);
    RngStream rng(seed);
    for (auto& b : out.bits) b = rng.uniform() < density ? 1 : 0;
    return out;
}

} // namespace handclust::oracles
