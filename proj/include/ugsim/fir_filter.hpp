#pragma once

#include <cstddef>
#include <vector>

namespace ugsim {

// Lowpass FIR filter used on the raw sensor channels: an N-tap moving
// average (unit DC gain). During warm-up only the samples received so far
// enter the average, so the first output equals the first sample.
class FirFilter {
public:
    explicit FirFilter(std::size_t taps = 5);

    // Pushes one raw sample and returns the filtered value.
    double push(double sample);

    double value() const { return value_; }
    bool warmed_up() const { return count_ >= buf_.size(); }
    void reset();

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    double value_ = 0.0;
};

} // namespace ugsim
