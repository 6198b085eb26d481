#include "ugsim/fir_filter.hpp"

#include <stdexcept>

namespace ugsim {

FirFilter::FirFilter(std::size_t taps) : buf_(taps, 0.0) {
    if (taps == 0) throw std::invalid_argument("FirFilter: need at least one tap");
}

double FirFilter::push(double sample) {
    buf_[head_] = sample;
    head_ = (head_ + 1) % buf_.size();
    if (count_ < buf_.size()) ++count_;
    double sum = 0.0;
    for (std::size_t i = 0; i < count_; ++i) {
        // Newest-first walk over the ring; only the filled slots count.
        const std::size_t idx = (head_ + buf_.size() - 1 - i) % buf_.size();
        sum += buf_[idx];
    }
    value_ = sum / static_cast<double>(count_);
    return value_;
}

void FirFilter::reset() {
    head_ = 0;
    count_ = 0;
    value_ = 0.0;
    for (auto& v : buf_) v = 0.0;
}

} // namespace ugsim
