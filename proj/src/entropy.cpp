#include "airseg/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace airseg::entropy {

void average_image_rows(const GrayImage& f, std::size_t row_begin, std::size_t row_end, AverageImage& out) {
    const std::size_t rows = f.rows();
    const std::size_t cols = f.cols();
    for (std::size_t y = row_begin; y < row_end; ++y) {
        const std::size_t up = y == 0 ? 0 : y - 1;
        const std::size_t down = y + 1 == rows ? y : y + 1;
        const auto r0 = f.row(up);
        const auto r1 = f.row(y);
        const auto r2 = f.row(down);
        auto dst = out.row(y);
        for (std::size_t x = 0; x < cols; ++x) {
            const std::size_t left = x == 0 ? 0 : x - 1;
            const std::size_t right = x + 1 == cols ? x : x + 1;
            const unsigned sum = r0[left] + r0[x] + r0[right] + r1[left] + r1[x] + r1[right] + r2[left] +
                                 r2[x] + r2[right];
            dst[x] = static_cast<std::uint8_t>(sum / 9);
        }
    }
}

AverageImage average_image(const GrayImage& f) {
    AverageImage out(f.rows(), f.cols());
    average_image_rows(f, 0, f.rows(), out);
    return out;
}

Histogram2D::Histogram2D(std::size_t levels) : levels_(levels), counts_(levels * levels, 0) {}

Histogram2D::Histogram2D(std::size_t levels, std::vector<std::uint64_t> counts)
    : levels_(levels), counts_(std::move(counts)) {
    if (counts_.size() != levels_ * levels_) {
        throw Error(ErrorCode::InvalidArgument, "histogram needs " + std::to_string(levels_ * levels_) +
                                                    " cells, got " + std::to_string(counts_.size()));
    }
    for (const auto c : counts_) {
        total_ += c;
    }
}

double Histogram2D::probability(std::size_t i, std::size_t j) const {
    return total_ == 0 ? 0.0 : static_cast<double>(count(i, j)) / static_cast<double>(total_);
}

void Histogram2D::add(std::size_t i, std::size_t j, std::uint64_t n) {
    counts_[i * levels_ + j] += n;
    total_ += n;
}

Histogram2D& Histogram2D::operator+=(const Histogram2D& other) {
    if (other.levels_ != levels_) {
        throw Error(ErrorCode::ShapeMismatch, "cannot merge histograms with " + std::to_string(levels_) + " and " +
                                                  std::to_string(other.levels_) + " levels");
    }
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        counts_[k] += other.counts_[k];
    }
    total_ += other.total_;
    return *this;
}

void accumulate_rows(const GrayImage& f, const AverageImage& g, std::size_t row_begin, std::size_t row_end,
                     Histogram2D& h) {
    const std::size_t levels = h.levels();
    for (std::size_t y = row_begin; y < row_end; ++y) {
        const auto fr = f.row(y);
        const auto gr = g.row(y);
        for (std::size_t x = 0; x < fr.size(); ++x) {
            if (fr[x] >= levels || gr[x] >= levels) {
                throw Error(ErrorCode::LevelOverflow, "pixel (" + std::to_string(y) + ", " + std::to_string(x) +
                                                          ") exceeds " + std::to_string(levels) + " levels");
            }
            h.add(fr[x], gr[x]);
        }
    }
}

Histogram2D histogram2d(const GrayImage& f, const AverageImage& g, std::size_t levels) {
    if (!f.same_shape(g)) {
        throw Error(ErrorCode::ShapeMismatch, "image and average image differ in shape");
    }
    Histogram2D h(levels);
    accumulate_rows(f, g, 0, f.rows(), h);
    return h;
}

void EntropyParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must be a positive finite number");
    }
    if (levels < 2) {
        throw Error(ErrorCode::InvalidArgument, "at least two levels are required");
    }
}

ClassMasses class_masses(const Histogram2D& h, std::size_t t, std::size_t s) {
    ClassMasses m;
    const std::size_t L = h.levels();
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) {
            if (i <= t && j <= s) {
                m.background += h.probability(i, j);
            } else if (i > t && j > s) {
                m.object += h.probability(i, j);
            }
        }
    }
    return m;
}

namespace {

// Entropy of one quadrant from its raw counts.
double class_entropy(const Histogram2D& h, std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1,
                     double mass, double alpha) {
    double acc = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
        for (std::size_t j = j0; j < j1; ++j) {
            const auto c = h.count(i, j);
            if (c == 0) {
                continue;
            }
            const double q = static_cast<double>(c) / mass;
            acc += alpha == 1.0 ? -q * std::log(q) : std::pow(q, alpha);
        }
    }
    return alpha == 1.0 ? acc : (1.0 - acc) / (alpha - 1.0);
}

double combine(double h1, double h2, double alpha) {
    return h1 + h2 + (1.0 - alpha) * h1 * h2;
}

} // namespace

std::optional<double> tsallis_objective(const Histogram2D& h, std::size_t t, std::size_t s,
                                        const EntropyParams& params) {
    params.validate();
    const std::size_t L = h.levels();
    std::uint64_t c1 = 0;
    std::uint64_t c2 = 0;
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t j = 0; j < L; ++j) {
            if (i <= t && j <= s) {
                c1 += h.count(i, j);
            } else if (i > t && j > s) {
                c2 += h.count(i, j);
            }
        }
    }
    if (c1 == 0 || c2 == 0) {
        return std::nullopt;
    }
    const double a = params.alpha;
    const double h1 = class_entropy(h, 0, t + 1, 0, s + 1, static_cast<double>(c1), a);
    const double h2 = class_entropy(h, t + 1, L, s + 1, L, static_cast<double>(c2), a);
    return combine(h1, h2, a);
}

ObjectiveTable::ObjectiveTable(const Histogram2D& h, const EntropyParams& params)
    : levels_(h.levels()),
      side_(h.levels() >= 2 ? h.levels() - 1 : 0),
      alpha_(params.alpha),
      shannon_(params.alpha == 1.0) {
    params.validate();
    if (levels_ < 2) {
        throw Error(ErrorCode::InvalidArgument, "histogram needs at least two levels");
    }
    const std::size_t L = levels_;
    low_count_.assign(L * L, 0);
    high_count_.assign(L * L, 0);
    low_weight_.assign(L * L, 0.0);
    high_weight_.assign(L * L, 0.0);

    auto weight = [this](std::uint64_t c) {
        if (c == 0) {
            return 0.0;
        }
        const double d = static_cast<double>(c);
        return shannon_ ? d * std::log(d) : std::pow(d, alpha_);
    };
    std::vector<double> cell_weight(L * L);
    for (std::size_t k = 0; k < L * L; ++k) {
        cell_weight[k] = weight(h.counts()[k]);
    }

    // Row running sums first, then down the rows: an empty row or column
    // reproduces its neighbour's entries bit for bit, so candidates that
    // share a quadrant content tie exactly.
    for (std::size_t i = 0; i < L; ++i) {
        std::uint64_t run_c = 0;
        double run_w = 0.0;
        for (std::size_t j = 0; j < L; ++j) {
            run_c += h.count(i, j);
            run_w += cell_weight[i * L + j];
            low_count_[i * L + j] = (i ? low_count_[(i - 1) * L + j] : 0) + run_c;
            low_weight_[i * L + j] = (i ? low_weight_[(i - 1) * L + j] : 0.0) + run_w;
        }
    }
    for (std::size_t i = L; i-- > 0;) {
        std::uint64_t run_c = 0;
        double run_w = 0.0;
        for (std::size_t j = L; j-- > 0;) {
            run_c += h.count(i, j);
            run_w += cell_weight[i * L + j];
            high_count_[i * L + j] = (i + 1 < L ? high_count_[(i + 1) * L + j] : 0) + run_c;
            high_weight_[i * L + j] = (i + 1 < L ? high_weight_[(i + 1) * L + j] : 0.0) + run_w;
        }
    }
}

std::optional<double> ObjectiveTable::evaluate(std::size_t t, std::size_t s) const {
    const std::size_t L = levels_;
    const std::uint64_t c1 = low_count_[t * L + s];
    const std::uint64_t c2 = high_count_[(t + 1) * L + s + 1];
    if (c1 == 0 || c2 == 0) {
        return std::nullopt;
    }
    const double m1 = static_cast<double>(c1);
    const double m2 = static_cast<double>(c2);
    const double w1 = low_weight_[t * L + s];
    const double w2 = high_weight_[(t + 1) * L + s + 1];
    if (shannon_) {
        // -sum (c/C) ln(c/C) = ln C - (1/C) sum c ln c
        return (std::log(m1) - w1 / m1) + (std::log(m2) - w2 / m2);
    }
    // sum (c/C)^a = (sum c^a) / C^a
    const double h1 = (1.0 - w1 / std::pow(m1, alpha_)) / (alpha_ - 1.0);
    const double h2 = (1.0 - w2 / std::pow(m2, alpha_)) / (alpha_ - 1.0);
    return combine(h1, h2, alpha_);
}

void ObjectiveTable::evaluate_range(std::size_t first, std::span<double> out) const {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto [t, s] = candidate(first + k);
        out[k] = evaluate(t, s).value_or(nan);
    }
}

bool ties_or_beats(double value, double best) {
    return value >= best - kTieTolerance * std::max(1.0, std::abs(best));
}

ThresholdResult find_threshold(const Histogram2D& h, const EntropyParams& params) {
    const ObjectiveTable table(h, params);
    std::vector<double> phi(table.candidate_count());
    table.evaluate_range(0, phi);

    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const double v : phi) {
        if (!std::isnan(v)) {
            any = true;
            best = std::max(best, v);
        }
    }
    if (!any) {
        throw Error(ErrorCode::NoValidSplit, "no valid split: every (t, s) leaves a class empty");
    }
    for (std::size_t k = 0; k < phi.size(); ++k) {
        if (!std::isnan(phi[k]) && ties_or_beats(phi[k], best)) {
            const auto [t, s] = table.candidate(k);
            return ThresholdResult{t, s, phi[k], params.alpha};
        }
    }
    throw Error(ErrorCode::NoValidSplit, "no valid split");
}

} // namespace airseg::entropy
