#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpusqual/corpus_io.hpp"
#include "corpusqual/filters.hpp"
#include "corpusqual/perplexity.hpp"

namespace corpusqual {

/// The 14 calibrated filter weights plus calibration provenance.
struct FilterWeights {
    std::array<double, kFilterCount> weights{};
    double ppl_all = 0.0;
    std::array<double, kFilterCount> ppl_per_filter{};
    std::string corpus_profile;
    std::string created_at;  // ISO-8601 UTC

    double weight_sum() const;
    /// Throws on any invariant violation, naming the offending field.
    void validate() const;
};

/// No filter reduced perplexity; all weights clamped to zero.
struct DegenerateCalibration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationOptions {
    std::string corpus_id;
    FilterConfig filter_config;
    /// Empty-subset filters get weight 0 and a warning through this sink.
    std::vector<std::string>* warnings = nullptr;
};

/// w_i = max(0, (PPL_all - PPL_i) / PPL_all) over the per-filter line subsets.
FilterWeights calibrate(const std::vector<Line>& lines,
                        const std::vector<IndicatorVector>& indicators,
                        const PerplexityBackend& backend,
                        const CalibrationOptions& options = {});

void save_weights(const FilterWeights& w, const std::string& path);
FilterWeights load_weights(const std::string& path);

}  // namespace corpusqual
