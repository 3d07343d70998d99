#ifndef FUZZYTS_METRICS_HPP
#define FUZZYTS_METRICS_HPP

#include <span>
#include <vector>

#include "fuzzyts/data.hpp"
#include "fuzzyts/network.hpp"

namespace fuzzyts {

double rmse(std::span<const double> pred, std::span<const double> actual);

// Mean absolute percentage error, 100 * mean(|e| / |actual|). Actuals with
// magnitude below epsilon_floor raise std::runtime_error pointing at the
// --mpe-epsilon flag; pass a positive floor to clamp them instead.
double mpe(std::span<const double> pred, std::span<const double> actual,
           double epsilon_floor = 0.0);

// Multi-step inference drivers. x_raw is one physical-scale input window of
// the dataset layout (calendar columns first); predictions come back on the
// physical scale.
//   MO: models = {one K-output net}
//   PM: models = {K single-output nets}, one per lead
//   SW: models = {one single-output net}, iterated with the window shifted
//       by the uniform lag stride and the prediction appended
std::vector<double> predict_multistep(const std::vector<NetworkParams>& models,
                                      Scheme scheme,
                                      std::span<const double> x_raw,
                                      const WindowedDataset& ds);

}  // namespace fuzzyts

#endif
